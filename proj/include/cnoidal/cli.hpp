#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cnoidal/elliptic.hpp"
#include "cnoidal/soliton_tau.hpp"

namespace cnoidal::cli {

const char* tool_version();

/// Malformed or inconsistent configuration; exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolitonEntry {
  bool from_b = true;
  double b = 0;
  double beta = 0;
  SpectralKind kind = SpectralKind::hot;
  double x_shift = 0;
};

struct RunConfig {
  double e1 = 0, e2 = 0, e3 = 0;
  std::vector<SolitonEntry> solitons;
  double x0 = 0;
  Grid grid;
  int radius = 6;
  std::uint64_t seed = 1;
  double tol = -1;  // < 0: command default
  nlohmann::json raw;
};

RunConfig parse_config(const nlohmann::json& j);
/// Config as resolved after defaults and overrides, echoed in output headers.
nlohmann::json resolved_json(const RunConfig& cfg);

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> footer;
  std::vector<std::string> notes;
};

std::string format_double(double v);
void write_csv(std::ostream& os, const Table& t, const std::string& command,
               const nlohmann::json& config);
void write_json(std::ostream& os, const Table& t, const std::string& command,
                const nlohmann::json& config);

/// Spectrum and context in the zero-trace frame; b values are shifted by -v/3.
struct Built {
  CurveParams curve;
  double galilean_v = 0;
  SolitonSpectrum spectrum;
};
Built build(const RunConfig& cfg);

struct Outcome {
  Table table;
  bool passed = true;
};

Outcome cmd_eval(const RunConfig& cfg);
Outcome cmd_verify(const RunConfig& cfg, const std::string& which);
Outcome cmd_dynamics(const RunConfig& cfg, const std::string& mode);
Outcome cmd_gas(const RunConfig& cfg, bool double_nodes);

/// Full command line; returns the process exit code (0 ok, 2 config, 3 numeric, 4 check failed).
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace cnoidal::cli
