#include "haarfisher/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "haarfisher/error.hpp"

namespace haarfisher {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json info_matrix_json(const RealMatrix& a, const std::string& kind, Json metadata) {
  if (a.rows() != a.cols()) throw DimensionError("info matrix must be square");
  if (kind != "qfim" && kind != "cfim" && kind != "variance") {
    throw DomainError("info matrix kind must be qfim, cfim or variance");
  }
  Json entries = Json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) entries.push_back(a(i, j));
  }
  return {{"m", a.rows()}, {"entries", std::move(entries)}, {"kind", kind},
          {"metadata", std::move(metadata)}};
}

RealMatrix info_matrix_from_json(const Json& j) {
  const auto m = j.at("m").get<Index>();
  const auto& entries = j.at("entries");
  if (static_cast<Index>(entries.size()) != m * m) {
    throw DimensionError("info matrix: entry count does not match m*m");
  }
  RealMatrix a(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index k = 0; k < m; ++k) a(i, k) = entries.at(static_cast<std::size_t>(i * m + k)).get<double>();
  }
  return a;
}

Json ansatz_json(const ProductExponentialAnsatz& ansatz) {
  if (!ansatz.seed()) {
    throw DomainError("ansatz_json: only seeded product-exp families are serializable");
  }
  return {{"type", "product-exp"},
          {"n", ansatz.dim()},
          {"m", ansatz.num_params()},
          {"seed", *ansatz.seed()}};
}

ProductExponentialAnsatz ansatz_from_json(const Json& j) {
  if (j.at("type").get<std::string>() != "product-exp") {
    throw DomainError("ansatz_from_json: unsupported ansatz type");
  }
  return build_ansatz(j.at("n").get<Index>(), j.at("m").get<Index>(),
                      j.at("seed").get<std::uint64_t>());
}

Json vector_json(const RealVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

RealVector vector_from_json(const Json& j) {
  if (!j.is_array()) throw DomainError("expected a JSON array of numbers");
  RealVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = j[i].get<double>();
  return v;
}

RealVector read_theta_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open theta file " + path.string());
  return vector_from_json(Json::parse(in));
}

Json report_json(const EstimationReport& r) {
  Json meta = {{"n", r.n}, {"k_samples", r.k_samples}, {"master_seed", r.master_seed}};
  return {
      {"n", r.n},
      {"m", r.m},
      {"k_samples", r.k_samples},
      {"master_seed", r.master_seed},
      {"theta", vector_json(r.theta)},
      {"qfim", info_matrix_json(r.qfim, "qfim", meta)},
      {"mean_cfim", info_matrix_json(r.mean_cfim, "cfim", meta)},
      {"empirical_variance", info_matrix_json(r.empirical_variance, "variance", meta)},
      {"predicted_variance", info_matrix_json(r.predicted_variance, "variance", meta)},
      {"rel_err_max", r.rel_err_max},
      {"rel_err_frob", r.rel_err_frob},
      {"per_sample_rel_frob", r.per_sample_rel_frob},
      {"sandwich_rank", r.sandwich_rank},
      {"sandwich_epsilon", r.sandwich_epsilon},
      {"min_prob", r.min_prob},
      {"skipped_outcomes", r.skipped_outcomes},
  };
}

Json tailfit_json(const TailFit& f) {
  return {{"n", f.n},
          {"m", f.m},
          {"num_samples", f.num_samples},
          {"c_regression", f.c_regression},
          {"c_adjusted", f.c_adjusted},
          {"intercept", f.intercept},
          {"r_squared", f.r_squared},
          {"percentile_cutoff", f.percentile_cutoff},
          {"cutoff_t", f.cutoff_t},
          {"regression_band", {f.band_lo, f.band_hi}},
          {"regression_range", {f.t_lo, f.t_hi}},
          {"regression_points", f.regression_points}};
}

namespace {

Json bound_check_json(const BoundCheck& c) {
  Json violations = Json::array();
  for (const auto& v : c.violations) {
    violations.push_back({{"t", v.t}, {"threshold", v.threshold},
                          {"empirical", v.empirical}, {"bound", v.bound}});
  }
  return {{"grid_points", c.grid_points},
          {"nonvacuous_points", c.nonvacuous_points},
          {"informative_points", c.informative_points},
          {"violations", std::move(violations)},
          {"max_ratio", c.max_ratio},
          {"vacuous", c.vacuous},
          {"note", c.note}};
}

}  // namespace

Json bound_report_json(const BoundViolationReport& r) {
  return {{"n", r.n},
          {"m", r.m},
          {"num_samples", r.num_samples},
          {"max_norm", bound_check_json(r.max_norm)},
          {"frobenius", bound_check_json(r.frobenius)},
          {"violations_total", r.max_norm.violations.size() + r.frobenius.violations.size()}};
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw DimensionError("csv: row width mismatch");
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::ostringstream out;
  auto join = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  for (const auto& c : comments_) out << "# " << c << '\n';
  join(header_);
  for (const auto& r : rows_) join(r);
  return out.str();
}

void CsvTable::write(const std::filesystem::path& path) const { write_text(path, str()); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

}  // namespace haarfisher
