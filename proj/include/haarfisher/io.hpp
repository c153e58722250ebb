#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "haarfisher/ansatz.hpp"
#include "haarfisher/montecarlo.hpp"
#include "haarfisher/tails.hpp"

namespace haarfisher {

using Json = nlohmann::json;

/// Version tag carried by every file the CLI writes.
inline constexpr int kSchemaVersion = 1;

/// "%.17g"
std::string format_double(double x);

/// {m, entries (row-major), kind, metadata}; kind is "qfim", "cfim" or "variance".
Json info_matrix_json(const RealMatrix& a, const std::string& kind, Json metadata = Json::object());
RealMatrix info_matrix_from_json(const Json& j);

/// {type: "product-exp", n, m, seed}. Throws for custom-generator families.
Json ansatz_json(const ProductExponentialAnsatz& ansatz);
ProductExponentialAnsatz ansatz_from_json(const Json& j);

Json vector_json(const RealVector& v);
RealVector vector_from_json(const Json& j);
RealVector read_theta_file(const std::filesystem::path& path);

Json report_json(const EstimationReport& report);
Json tailfit_json(const TailFit& fit);
Json bound_report_json(const BoundViolationReport& report);

/// Minimal CSV writer: optional leading "# ..." comment lines, a header, and
/// rows of pre-formatted cells.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add_comment(std::string line) { comments_.push_back(std::move(line)); }
  void add_row(std::vector<std::string> cells);
  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> comments_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace haarfisher
