#pragma once

// JSON run configuration.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ribfront/meshio.hpp"
#include "ribfront/ribaucour.hpp"

namespace ribfront {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ClosedFormSpec {
  std::string name;  // catenoid | trinoid | expression
  nlohmann::json params = nlohmann::json::object();
};

/// Initial value and polyline for the numeric solver. Alongside a closed form, h0 defaults to h(z0)
/// and the solution is compared with the closed form.
struct NumericSpec {
  Cplx z0;
  std::optional<Cplx> h0;
  std::vector<Cplx> path;  // polyline vertices after z0
};

struct RiccatiSpec {
  std::optional<double> k;  // required in numeric mode; checked against the closed form otherwise
  bool numeric_mode = false;
  std::optional<ClosedFormSpec> closed_form;
  std::optional<NumericSpec> numeric;
};

/// Explicit hyperbolic Gauss maps for the flat front (instead of deriving them from the pair).
struct FrontSpec {
  std::string gp;
  std::string gm;
  Cplx zb{1.0, 0.0};
  std::optional<Cplx> c0;
  std::optional<Cplx> c1;
  std::vector<Cplx> punctures;
};

struct OutputSpec {
  std::string mesh_r3 = "minimal.obj";
  std::string mesh_r3_transformed = "transformed.obj";
  std::string mesh_h3_ball = "front_ball.obj";
  std::string report = "report.json";
  std::string traces = "riccati_trace.csv";
};

struct RunConfig {
  std::string name;
  std::string f;
  std::string g;
  std::vector<Cplx> punctures;
  bool puncture_at_infinity = false;
  Cplx base_point{1.0, 0.0};
  RiccatiSpec riccati;
  DomainSpec domain;
  std::optional<FrontSpec> front;
  OutputSpec outputs;
  std::vector<LoopSpec> loops;
  std::uint64_t seed = 0x5EED;
  nlohmann::json source;  // the parsed document, for hashing

  WeierstrassData weierstrass() const;
  bool numeric_mode() const { return riccati.numeric_mode; }
  /// h and k from the closed-form section (throws ConfigError in numeric mode).
  ClosedForm closed_form() const;
  /// Path of the numeric section (ConfigError when absent).
  PathSpec numeric_path() const;
  /// h0 of the numeric section, or the closed form at z0.
  Cplx numeric_h0() const;
};

/// Complex values are a number or [re, im].
Cplx parse_cplx(const nlohmann::json& j, const std::string& where);
std::vector<LoopSpec> parse_loops(const nlohmann::json& j);

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::json read_json_file(const std::string& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t v);

}  // namespace ribfront
