#include "haarfisher/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "haarfisher/ansatz.hpp"
#include "haarfisher/error.hpp"
#include "haarfisher/fisher.hpp"
#include "haarfisher/haar.hpp"
#include "haarfisher/io.hpp"
#include "haarfisher/montecarlo.hpp"
#include "haarfisher/parallel.hpp"
#include "haarfisher/realrep.hpp"
#include "haarfisher/tails.hpp"

namespace haarfisher::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string command;
  Index n = 0;
  Index m = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<Index> dims;
  std::uint64_t trials = 0;
  std::size_t bins = 0;
  std::optional<double> eps;
  double prob_floor = kDefaultProbFloor;
  std::string theta_file;
  std::string out_dir = ".";
  std::string format = "csv";
  unsigned workers = 0;
  bool out_given = false;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

std::string join_dims(const std::vector<Index>& dims) {
  std::string s;
  for (std::size_t i = 0; i < dims.size(); ++i) s += (i ? "," : "") + std::to_string(dims[i]);
  return s;
}

ThetaPolicy theta_policy(const RunConfig& cfg) {
  if (cfg.theta_file.empty()) return SeededUniformTheta{};
  return read_theta_file(cfg.theta_file);
}

// Flags that determine the numbers in the output, in canonical order. The
// output directory and worker count are deliberately absent.
std::string canonical_command_line(const RunConfig& cfg) {
  std::ostringstream s;
  s << cfg.command;
  const std::string& c = cfg.command;
  const bool single_dim = c == "validate" || c == "estimate";
  const bool multi_dim = c == "sweep" || c == "hist" || c == "tail" || c == "bounds";
  if (single_dim) s << " -N " << cfg.n;
  if (multi_dim) s << " --Ns " << join_dims(cfg.dims);
  s << " -m " << cfg.m;
  if (c == "validate" || c == "estimate" || c == "hist" || c == "tail") s << " -K " << cfg.samples;
  if (c == "sweep") s << " --trials " << cfg.trials;
  if (c == "hist") s << " --bins " << cfg.bins;
  if (c != "bounds") {
    s << " --seed " << cfg.seed << " --prob-floor " << format_double(cfg.prob_floor);
  }
  if (cfg.eps) s << " --eps " << format_double(*cfg.eps);
  if (!cfg.theta_file.empty()) s << " --theta-file " << cfg.theta_file;
  s << " --format " << cfg.format;
  return s.str();
}

Json config_json(const RunConfig& cfg) {
  Json j = {{"command", cfg.command},
            {"n", cfg.n},
            {"m", cfg.m},
            {"samples", cfg.samples},
            {"seed", cfg.seed},
            {"dims", cfg.dims},
            {"trials", cfg.trials},
            {"bins", cfg.bins},
            {"prob_floor", cfg.prob_floor},
            {"cfim_form", to_string(CfimForm::kProjection)},
            {"theta_policy", cfg.theta_file.empty() ? "seeded-uniform" : "explicit"},
            {"format", cfg.format},
            {"command_line", canonical_command_line(cfg)}};
  j["eps"] = cfg.eps ? Json(*cfg.eps) : Json(nullptr);
  if (!cfg.theta_file.empty()) j["theta"] = vector_json(read_theta_file(cfg.theta_file));
  return j;
}

Json runtime_json(const RunConfig& cfg, const Context& ctx) {
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.start).count();
  return {{"wall_seconds", secs},
          {"workers", resolve_workers(cfg.workers)},
          {"out_dir", cfg.out_dir}};
}

SampleOptions sample_options(const RunConfig& cfg) {
  SampleOptions o;
  o.workers = cfg.workers;
  o.prob_floor = cfg.prob_floor;
  return o;
}

// Writes a JSON document with the schema/config header and runtime block.
void write_json(const RunConfig& cfg, const Context& ctx, const std::string& name, Json body) {
  body["schema_version"] = kSchemaVersion;
  body["config"] = config_json(cfg);
  body["runtime"] = runtime_json(cfg, ctx);
  const fs::path path = fs::path(cfg.out_dir) / name;
  write_text(path, body.dump(2) + "\n");
  ctx.out << "wrote " << path.string() << "\n";
}

void write_csv(const RunConfig& cfg, const Context& ctx, const std::string& name, CsvTable table) {
  Json header = {{"schema_version", kSchemaVersion}, {"config", config_json(cfg)}};
  table.add_comment("haarfisher " + header.dump());
  table.add_comment("runtime " + runtime_json(cfg, ctx).dump());
  const fs::path path = fs::path(cfg.out_dir) / name;
  table.write(path);
  ctx.out << "wrote " << path.string() << "\n";
}

// ---------------------------------------------------------------- validate

struct CheckLine {
  std::string name;
  bool passed;
  std::string detail;
};

std::string sci(double x) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << x;
  return s.str();
}

int cmd_validate(const RunConfig& cfg, Context& ctx) {
  const Index n = cfg.n;
  const Index m = cfg.m;
  const auto ansatz = build_ansatz(n, m, cfg.seed);
  std::vector<CheckLine> lines;

  // Deterministic family of parameter points.
  std::vector<RealVector> thetas;
  for (std::uint64_t r = 0; r < 5; ++r) thetas.push_back(seeded_uniform_theta(m, cfg.seed + r));

  double jac_err = 0.0;
  double qfim_err = 0.0;
  double imag_err = 0.0;
  double cfim_err = 0.0;
  double loewner_min = std::numeric_limits<double>::infinity();
  const RealMatrix jmat = symplectic_j(n);
  for (std::size_t r = 0; r < thetas.size(); ++r) {
    const auto swj = ansatz.evaluate(thetas[r]);
    jac_err = std::max(jac_err, max_norm(ComplexMatrix(swj.jacobian - jacobian_fd(ansatz, thetas[r], 1e-5))));
    const Qgt q = qgt(swj);
    qfim_err = std::max(qfim_err, max_norm(RealMatrix(q.real_part - qfim_realrep(swj))));
    const RealVector z = phi_vector(swj.state);
    const RealVector span[] = {z, apply_j(z)};
    const RealMatrix a = (RealMatrix::Identity(2 * n, 2 * n) - project_onto_span(span)) *
                         phi_columns(swj.jacobian);
    // Conjugate-linear first slot gives Im<a,b> = -Phi(a)^T J Phi(b).
    imag_err = std::max(imag_err, max_norm(RealMatrix(q.imag_part + a.transpose() * jmat * a)));
    for (std::uint64_t s = 0; s < 4; ++s) {
      const auto u = sample_haar_unitary(n, substream(cfg.seed, 4 * r + s));
      const Cfim def = cfim_definition(swj, u, cfg.prob_floor);
      const Cfim proj = cfim_projection(swj, u, cfg.prob_floor);
      cfim_err = std::max(cfim_err, max_norm(RealMatrix(def.matrix - proj.matrix)));
      Eigen::SelfAdjointEigenSolver<RealMatrix> es(symmetrized(q.real_part - proj.matrix),
                                                   Eigen::EigenvaluesOnly);
      loewner_min = std::min(loewner_min, es.eigenvalues().minCoeff());
    }
  }
  lines.push_back({"jacobian_fd", jac_err <= 1e-6, "max err " + sci(jac_err) + " (tol 1e-6)"});
  lines.push_back({"qfim_forms", qfim_err <= 1e-10, "max err " + sci(qfim_err) + " (tol 1e-10)"});
  lines.push_back({"qgt_imag_identity", imag_err <= 1e-10, "max err " + sci(imag_err) + " (tol 1e-10)"});
  lines.push_back({"cfim_forms", cfim_err <= 1e-9, "max err " + sci(cfim_err) + " (tol 1e-9)"});
  lines.push_back({"cfim_below_qfim", loewner_min >= -1e-8,
                   "min eig(Q - F) " + sci(loewner_min) + " (tol -1e-8)"});

  const std::uint64_t k = cfg.samples;
  constexpr double kSe = 4.0;
  const auto moments = haar_moments(n, k, cfg.seed, PhaseFix::kApply, cfg.workers);
  auto moment_line = [&](const char* name, const MomentCheck& mc) {
    lines.push_back({name, mc.within(kSe),
                     "estimate " + sci(mc.estimate) + " expected " + sci(mc.expected) +
                         " z " + sci(mc.z_score()) + " (tol 4 SE)"});
  };
  moment_line("haar_abs2", moments.abs2);
  moment_line("haar_abs4", moments.abs4);
  moment_line("haar_phase_re", moments.re_u11);
  moment_line("haar_phase_im", moments.im_u11);

  ComplexVector e1 = ComplexVector::Zero(n);
  e1(0) = 1.0;
  const RealMatrix avg = projection_sum_check(e1, k, cfg.seed, cfg.workers);
  const double proj_err = max_norm(RealMatrix(avg - projection_sum_limit(e1)));
  const double proj_tol = 5.0 / std::sqrt(static_cast<double>(k));
  const double trace_err = std::abs(avg.trace() - static_cast<double>(n));
  lines.push_back({"projection_sum", proj_err <= proj_tol && trace_err <= 0.05,
                   "max err " + sci(proj_err) + " (tol " + sci(proj_tol) + "), trace err " +
                       sci(trace_err)});

  const auto report = estimate_qfim(ansatz, thetas.front(), k, cfg.seed, sample_options(cfg));
  double worst = 0.0;
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      const double tol = 5.0 * std::sqrt(report.predicted_variance(i, j) / static_cast<double>(k));
      const double dev = std::abs(report.mean_cfim(i, j) - 0.5 * report.qfim(i, j));
      worst = std::max(worst, tol > 0.0 ? dev / tol : (dev > 0.0 ? INFINITY : 0.0));
    }
  }
  lines.push_back({"mean_identity", worst <= 1.0,
                   "max |mean - Q/2| / (5 sqrt(V/K)) = " + sci(worst)});

  bool all = true;
  Json results = Json::array();
  for (const auto& l : lines) {
    ctx.out << (l.passed ? "PASS " : "FAIL ") << l.name << "  " << l.detail << "\n";
    all = all && l.passed;
    results.push_back({{"name", l.name}, {"passed", l.passed}, {"detail", l.detail}});
  }
  if (cfg.out_given) write_json(cfg, ctx, "validate.json", {{"checks", results}, {"passed", all}});
  return all ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------- estimate

int cmd_estimate(const RunConfig& cfg, Context& ctx) {
  const auto ansatz = build_ansatz(cfg.n, cfg.m, cfg.seed);
  const RealVector theta = resolve_theta(theta_policy(cfg), cfg.m, cfg.seed);
  const auto report = estimate_qfim(ansatz, theta, cfg.samples, cfg.seed, sample_options(cfg));
  Json body = report_json(report);
  body["ansatz"] = ansatz_json(ansatz);
  if (cfg.eps) {
    std::uint64_t passing = 0;
    for (std::size_t i = 0; i < report.per_sample_min_ratio.size(); ++i) {
      const double lo = report.per_sample_min_ratio[i];
      const double hi = report.per_sample_max_ratio[i];
      if (lo >= 1.0 - 2.0 * *cfg.eps && hi <= 1.0 + 2.0 * *cfg.eps) ++passing;
    }
    body["sandwich"] = {{"epsilon", *cfg.eps},
                        {"passing_samples", passing},
                        {"fraction", static_cast<double>(passing) / static_cast<double>(cfg.samples)}};
  }
  write_json(cfg, ctx, "estimate.json", std::move(body));
  if (cfg.format == "csv") {
    CsvTable table({"rel_frob"});
    for (double e : report.per_sample_rel_frob) table.add_row({format_double(e)});
    write_csv(cfg, ctx, "estimate_samples.csv", std::move(table));
  }
  ctx.out << "rel_err_frob " << format_double(report.rel_err_frob) << "  rel_err_max "
          << format_double(report.rel_err_max) << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------- sweep

int cmd_sweep(const RunConfig& cfg, Context& ctx) {
  const auto rows =
      sweep_scaled_error(cfg.dims, cfg.m, cfg.trials, cfg.seed, sample_options(cfg), theta_policy(cfg));
  if (cfg.format == "json") {
    Json arr = Json::array();
    for (const auto& r : rows) {
      arr.push_back({{"N", r.n}, {"mean_rel", r.mean_rel}, {"scaled", r.scaled},
                     {"std_rel", r.std_rel}, {"trials", r.trials}, {"seed", r.seed}});
    }
    write_json(cfg, ctx, "sweep.json", {{"rows", arr}});
  } else {
    CsvTable table({"N", "mean_rel", "scaled", "std_rel", "trials", "seed"});
    for (const auto& r : rows) {
      table.add_row({std::to_string(r.n), format_double(r.mean_rel), format_double(r.scaled),
                     format_double(r.std_rel), std::to_string(r.trials), std::to_string(r.seed)});
    }
    write_csv(cfg, ctx, "sweep.csv", std::move(table));
  }
  for (const auto& r : rows) {
    ctx.out << "N " << r.n << "  mean_rel " << format_double(r.mean_rel) << "  scaled "
            << format_double(r.scaled) << "\n";
  }
  return kExitOk;
}

// -------------------------------------------------------------------- hist

int cmd_hist(const RunConfig& cfg, Context& ctx) {
  CsvTable table({"N", "bin_left", "bin_right", "count"});
  Json arr = Json::array();
  for (Index n : cfg.dims) {
    const auto errors =
        sample_rel_errors(n, cfg.m, theta_policy(cfg), cfg.samples, cfg.seed, sample_options(cfg));
    for (const auto& b : histogram(errors, cfg.bins)) {
      table.add_row({std::to_string(n), format_double(b.left), format_double(b.right),
                     std::to_string(b.count)});
      arr.push_back({{"N", n}, {"bin_left", b.left}, {"bin_right", b.right}, {"count", b.count}});
    }
  }
  if (cfg.format == "json") {
    write_json(cfg, ctx, "hist.json", {{"bins", arr}});
  } else {
    write_csv(cfg, ctx, "hist.csv", std::move(table));
  }
  return kExitOk;
}

// -------------------------------------------------------------------- tail

int cmd_tail(const RunConfig& cfg, Context& ctx) {
  CsvTable ccdf_table({"N", "t", "ccdf"});
  Json ccdf_json = Json::array();
  Json fits = Json::array();
  Json bounds = Json::array();
  bool bounds_ok = true;
  for (Index n : cfg.dims) {
    const auto ansatz = build_ansatz(n, cfg.m, cfg.seed);
    const RealVector theta = resolve_theta(theta_policy(cfg), cfg.m, cfg.seed);
    const auto errors = sample_errors(ansatz, theta, cfg.samples, cfg.seed, sample_options(cfg));
    for (const auto& p : empirical_ccdf(errors.rel_frob)) {
      ccdf_table.add_row({std::to_string(n), format_double(p.t), format_double(p.ccdf)});
      ccdf_json.push_back({{"N", n}, {"t", p.t}, {"ccdf", p.ccdf}});
    }
    const TailFit fit = fit_tail_constant(errors.rel_frob, n, cfg.m);
    Json fj = tailfit_json(fit);
    fj["seed"] = cfg.seed;
    fj["envelope_holds"] = tail_envelope_holds(fit, errors.rel_frob);
    fits.push_back(std::move(fj));
    const auto report = bound_violation_report(errors, n, cfg.m);
    bounds_ok = bounds_ok && report.ok();
    bounds.push_back(bound_report_json(report));
    ctx.out << "N " << n << "  c_regression " << format_double(fit.c_regression)
            << "  c_adjusted " << format_double(fit.c_adjusted) << "  r2 "
            << format_double(fit.r_squared) << "\n";
  }
  if (cfg.format == "json") {
    write_json(cfg, ctx, "ccdf.json", {{"points", ccdf_json}});
  } else {
    write_csv(cfg, ctx, "ccdf.csv", std::move(ccdf_table));
  }
  write_json(cfg, ctx, "tailfit.json", {{"fits", fits}, {"bounds", bounds}, {"seed", cfg.seed}});
  if (!bounds_ok) {
    ctx.err << "empirical tail exceeded a concentration bound\n";
    return kExitFailure;
  }
  return kExitOk;
}

// ------------------------------------------------------------------ bounds

int cmd_bounds(const RunConfig& cfg, Context& ctx) {
  CsvTable table({"kind", "N", "m", "x", "threshold", "probability", "precondition_met"});
  Json arr = Json::array();
  auto add = [&](const char* kind, Index n, double x, double threshold, double prob,
                 std::optional<bool> pre) {
    table.add_row({kind, std::to_string(n), std::to_string(cfg.m), format_double(x),
                   format_double(threshold), format_double(prob),
                   pre ? (*pre ? "1" : "0") : ""});
    Json row = {{"kind", kind}, {"N", n}, {"m", cfg.m}, {"x", x}, {"threshold", threshold},
                {"probability", prob}};
    row["precondition_met"] = pre ? Json(*pre) : Json(nullptr);
    arr.push_back(std::move(row));
  };
  std::vector<double> eps_grid;
  if (cfg.eps) {
    eps_grid.push_back(*cfg.eps);
  } else {
    for (int i = 1; i <= 9; ++i) eps_grid.push_back(0.05 * i);
  }
  constexpr int kGrid = 50;
  const double md = static_cast<double>(cfg.m);
  for (Index n : cfg.dims) {
    const double t_top =
        std::sqrt(120.0 * (std::log(2.0 * md * md) + 10.0) / (static_cast<double>(n) - 1.0));
    for (int k = 1; k <= kGrid; ++k) {
      const double t = t_top * k / kGrid;
      add("max_norm", n, t, t, max_norm_tail_bound(t, n, cfg.m), std::nullopt);
      const auto f = frobenius_tail_bound(t, n, cfg.m);
      add("frobenius", n, t, f.threshold, f.probability, std::nullopt);
    }
    for (double e : eps_grid) {
      const auto b = sandwich_bound(e, n, cfg.m);
      add("eigenvalue", n, e, b.failure_exponent, b.probability, b.precondition_met);
    }
  }
  if (cfg.format == "json") {
    write_json(cfg, ctx, "bounds.json", {{"rows", arr}});
  } else {
    write_csv(cfg, ctx, "bounds.csv", std::move(table));
  }
  return kExitOk;
}

// ------------------------------------------------------------------ parser

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

void finalize(RunConfig& cfg) {
  const std::string& c = cfg.command;
  require(cfg.m >= 1, "-m/--params must be >= 1");
  require(cfg.format == "csv" || cfg.format == "json", "--format must be csv or json");
  require(cfg.prob_floor > 0.0 && cfg.prob_floor < 1.0, "--prob-floor must lie in (0, 1)");
  if (cfg.eps) require(*cfg.eps > 0.0 && *cfg.eps < 0.5, "--eps must lie in (0, 1/2)");
  if (c == "validate" || c == "estimate") {
    require(cfg.n >= 2, "-N/--dim must be >= 2");
    require(cfg.samples >= 2, "-K/--samples must be >= 2");
  }
  if (c == "sweep" || c == "hist" || c == "tail" || c == "bounds") {
    require(!cfg.dims.empty(), "--Ns must list at least one dimension");
    for (Index n : cfg.dims) require(n >= 2, "--Ns entries must be >= 2");
  }
  if (c == "sweep") require(cfg.trials >= 2, "--trials must be >= 2");
  if (c == "hist") {
    require(cfg.samples >= 1, "-K/--samples must be >= 1");
    require(cfg.bins >= 1, "--bins must be >= 1");
  }
  if (c == "tail") require(cfg.samples >= 1000, "tail fitting needs -K >= 1000");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum and classical Fisher information under Haar-random measurement bases"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  RunConfig cfg;
  std::vector<Index> dims_default{20, 40, 80, 160};

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Master seed");
    sub->add_option("--prob-floor", cfg.prob_floor, "Skip outcomes with probability at or below this");
    sub->add_option("--out", cfg.out_dir, "Output directory");
    sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--workers", cfg.workers, "Worker threads (0: all cores)");
  };
  auto add_dim = [&](CLI::App* sub) { sub->add_option("-N,--dim", cfg.n, "Hilbert-space dimension"); };
  auto add_dims = [&](CLI::App* sub) {
    sub->add_option("--Ns", cfg.dims, "Comma-separated dimensions")->delimiter(',');
  };
  auto add_params = [&](CLI::App* sub) { sub->add_option("-m,--params", cfg.m, "Number of parameters"); };
  auto add_samples = [&](CLI::App* sub) { sub->add_option("-K,--samples", cfg.samples, "Haar samples"); };
  auto add_theta = [&](CLI::App* sub) {
    sub->add_option("--theta-file", cfg.theta_file, "JSON array with theta")->check(CLI::ExistingFile);
  };
  auto add_eps = [&](CLI::App* sub, const char* what) { sub->add_option("--eps", cfg.eps, what); };

  auto* validate = app.add_subcommand("validate", "Run the cross-form, Jacobian, Haar and projection checks");
  add_dim(validate), add_params(validate), add_samples(validate), add_common(validate);
  auto* estimate = app.add_subcommand("estimate", "Average random-basis CFIMs and compare with Q/2");
  add_dim(estimate), add_params(estimate), add_samples(estimate), add_theta(estimate), add_common(estimate);
  add_eps(estimate, "Report the fraction of samples inside the (1 +- 2 eps) sandwich");
  auto* sweep = app.add_subcommand("sweep", "sqrt(N)-scaled mean relative error over a list of N");
  add_dims(sweep), add_params(sweep), add_theta(sweep), add_common(sweep);
  sweep->add_option("--trials", cfg.trials, "Samples per N");
  auto* hist = app.add_subcommand("hist", "Histograms of the relative error per N");
  add_dims(hist), add_params(hist), add_samples(hist), add_theta(hist), add_common(hist);
  hist->add_option("--bins", cfg.bins, "Number of equal-width bins");
  auto* tail = app.add_subcommand("tail", "Empirical CCDFs, exp(-cNt^2) fits and bound checks");
  add_dims(tail), add_params(tail), add_samples(tail), add_theta(tail), add_common(tail);
  auto* bounds = app.add_subcommand("bounds", "Evaluate the concentration bound formulas on a grid");
  add_dims(bounds), add_params(bounds), add_eps(bounds, "Single epsilon (default: 0.05..0.45)");
  bounds->add_option("--out", cfg.out_dir, "Output directory");
  bounds->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();
  // Per-command defaults for anything the user did not set.
  auto unset = [&](const char* flag) { return chosen->count(flag) == 0; };
  const std::string& c = cfg.command;
  if (c == "validate") {
    if (unset("--dim")) cfg.n = 16;
    if (unset("--params")) cfg.m = 4;
    if (unset("--samples")) cfg.samples = 20000;
    if (unset("--seed")) cfg.seed = 1;
  } else if (c == "estimate") {
    if (unset("--dim")) cfg.n = 32;
    if (unset("--params")) cfg.m = 5;
    if (unset("--samples")) cfg.samples = 20000;
    if (unset("--format")) cfg.format = "json";
  } else {
    if (unset("--params")) cfg.m = 10;
    if (unset("--Ns")) cfg.dims = dims_default;
    if (c == "sweep" && unset("--trials")) cfg.trials = 100;
    if (c == "hist" && unset("--samples")) cfg.samples = 1000;
    if (c == "hist" && unset("--bins")) cfg.bins = 30;
    if (c == "tail" && unset("--samples")) cfg.samples = 10000;
  }

  cfg.out_given = !unset("--out");

  Context ctx{out, err};
  try {
    finalize(cfg);
    if (c == "validate") return cmd_validate(cfg, ctx);
    if (c == "estimate") return cmd_estimate(cfg, ctx);
    if (c == "sweep") return cmd_sweep(cfg, ctx);
    if (c == "hist") return cmd_hist(cfg, ctx);
    if (c == "tail") return cmd_tail(cfg, ctx);
    return cmd_bounds(cfg, ctx);
  } catch (...) {
    return report_error(std::current_exception(), err);
  }
}

int report_error(std::exception_ptr error, std::ostream& err) {
  try {
    std::rethrow_exception(error);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DegenerateFamilyError& e) {
    err << e.what() << "\n";
    return kExitFailure;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (...) {
    err << "error: unknown failure\n";
    return kExitFailure;
  }
}

}  // namespace haarfisher::cli
