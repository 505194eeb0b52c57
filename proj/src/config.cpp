#include "ribfront/config.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

namespace ribfront {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  return j.at(key);
}

double real_of(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

int int_of(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return j.get<int>();
}

std::string string_of(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + ": expected a string");
  return j.get<std::string>();
}

std::vector<Cplx> cplx_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array");
  std::vector<Cplx> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_cplx(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

// Checks that an expression string parses, so grammar errors surface as config errors.
std::string expression(const json& j, const std::string& where) {
  const std::string s = string_of(j, where);
  try {
    mexpr::parse(s);
  } catch (const mexpr::ParseError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return s;
}

DomainSpec parse_domain(const json& j) {
  only_keys(j, "domain", {"kind", "center", "r_in", "r_out", "z_min", "z_max", "exclusion_radius", "nu", "nv"});
  DomainSpec d;
  const std::string kind = j.contains("kind") ? string_of(j["kind"], "domain.kind") : "annulus";
  if (kind == "annulus") d.kind = DomainKind::Annulus;
  else if (kind == "disk") d.kind = DomainKind::Disk;
  else if (kind == "rect") d.kind = DomainKind::Rect;
  else throw ConfigError("domain.kind: expected annulus, disk or rect");
  if (j.contains("center")) d.center = parse_cplx(j["center"], "domain.center");
  if (j.contains("r_in")) d.r_in = real_of(j["r_in"], "domain.r_in");
  if (j.contains("r_out")) d.r_out = real_of(j["r_out"], "domain.r_out");
  if (j.contains("z_min")) d.z_min = parse_cplx(j["z_min"], "domain.z_min");
  if (j.contains("z_max")) d.z_max = parse_cplx(j["z_max"], "domain.z_max");
  if (j.contains("nu")) d.nu = int_of(j["nu"], "domain.nu");
  if (j.contains("nv")) d.nv = int_of(j["nv"], "domain.nv");
  // Default exclusion radius: 5% of the domain scale.
  const double scale = d.kind == DomainKind::Rect
                           ? std::max(d.z_max.real() - d.z_min.real(), d.z_max.imag() - d.z_min.imag())
                           : d.r_out;
  d.exclusion_radius = j.contains("exclusion_radius") ? real_of(j["exclusion_radius"], "domain.exclusion_radius")
                                                      : 0.05 * scale;
  try {
    d.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  }
  return d;
}

RiccatiSpec parse_riccati(const json& j) {
  only_keys(j, "riccati", {"k", "mode", "closed_form", "numeric"});
  RiccatiSpec r;
  if (j.contains("k")) {
    r.k = real_of(j["k"], "riccati.k");
    if (*r.k == 0.0) throw ConfigError("riccati.k must be nonzero");
  }
  const std::string mode = string_of(need(j, "mode", "riccati"), "riccati.mode");
  if (mode != "closed_form" && mode != "numeric") throw ConfigError("riccati.mode: expected closed_form or numeric");
  r.numeric_mode = mode == "numeric";
  if (!r.numeric_mode) {
    const json& c = need(j, "closed_form", "riccati");
    only_keys(c, "riccati.closed_form", {"name", "params"});
    ClosedFormSpec spec;
    spec.name = string_of(need(c, "name", "riccati.closed_form"), "riccati.closed_form.name");
    if (c.contains("params")) spec.params = c["params"];
    if (spec.name != "catenoid" && spec.name != "trinoid" && spec.name != "expression")
      throw ConfigError("riccati.closed_form.name: unknown closed form '" + spec.name +
                        "' (expected catenoid, trinoid or expression)");
    r.closed_form = spec;
  } else if (j.contains("closed_form")) {
    throw ConfigError("riccati: closed_form given in numeric mode");
  }
  if (j.contains("numeric")) {
    const json& n = j["numeric"];
    only_keys(n, "riccati.numeric", {"z0", "h0", "path"});
    NumericSpec spec;
    spec.z0 = parse_cplx(need(n, "z0", "riccati.numeric"), "riccati.numeric.z0");
    if (n.contains("h0")) spec.h0 = parse_cplx(n["h0"], "riccati.numeric.h0");
    spec.path = cplx_list(need(n, "path", "riccati.numeric"), "riccati.numeric.path");
    if (spec.path.empty()) throw ConfigError("riccati.numeric.path: needs at least one vertex");
    r.numeric = spec;
  }
  if (r.numeric_mode) {
    if (!r.numeric) throw ConfigError("riccati: numeric mode needs a numeric section");
    if (!r.numeric->h0) throw ConfigError("riccati.numeric.h0 is required in numeric mode");
    if (!r.k) throw ConfigError("riccati.k is required in numeric mode");
  }
  return r;
}

FrontSpec parse_front(const json& j) {
  only_keys(j, "front", {"gp", "gm", "zb", "c0", "c1", "punctures"});
  FrontSpec f;
  f.gp = expression(need(j, "gp", "front"), "front.gp");
  f.gm = expression(need(j, "gm", "front"), "front.gm");
  if (j.contains("zb")) f.zb = parse_cplx(j["zb"], "front.zb");
  if (j.contains("c0")) f.c0 = parse_cplx(j["c0"], "front.c0");
  if (j.contains("c1")) f.c1 = parse_cplx(j["c1"], "front.c1");
  if (j.contains("punctures")) f.punctures = cplx_list(j["punctures"], "front.punctures");
  return f;
}

OutputSpec parse_outputs(const json& j) {
  only_keys(j, "outputs", {"mesh_r3", "mesh_r3_transformed", "mesh_h3_ball", "report", "traces"});
  OutputSpec o;
  if (j.contains("mesh_r3")) o.mesh_r3 = string_of(j["mesh_r3"], "outputs.mesh_r3");
  if (j.contains("mesh_r3_transformed"))
    o.mesh_r3_transformed = string_of(j["mesh_r3_transformed"], "outputs.mesh_r3_transformed");
  if (j.contains("mesh_h3_ball")) o.mesh_h3_ball = string_of(j["mesh_h3_ball"], "outputs.mesh_h3_ball");
  if (j.contains("report")) o.report = string_of(j["report"], "outputs.report");
  if (j.contains("traces")) o.traces = string_of(j["traces"], "outputs.traces");
  return o;
}

}  // namespace

Cplx parse_cplx(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError(where + ": expected a number or [re, im]");
}

std::vector<LoopSpec> parse_loops(const json& j) {
  if (!j.is_array()) throw ConfigError("loops: expected an array");
  std::vector<LoopSpec> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = "loops[" + std::to_string(i) + "]";
    only_keys(j[i], where, {"center", "radius", "orientation"});
    LoopSpec l;
    l.center = parse_cplx(need(j[i], "center", where), where + ".center");
    if (j[i].contains("radius")) l.radius = real_of(j[i]["radius"], where + ".radius");
    if (j[i].contains("orientation")) l.orientation = int_of(j[i]["orientation"], where + ".orientation");
    if (!(l.radius > 0.0)) throw ConfigError(where + ".radius must be positive");
    if (l.orientation != 1 && l.orientation != -1) throw ConfigError(where + ".orientation must be 1 or -1");
    out.push_back(l);
  }
  return out;
}

RunConfig parse_config(const json& j) {
  only_keys(j, "config", {"name", "weierstrass", "riccati", "domain", "front", "outputs", "loops", "seed"});
  RunConfig c;
  c.source = j;
  if (j.contains("name")) c.name = string_of(j["name"], "name");
  const json& w = need(j, "weierstrass", "config");
  only_keys(w, "weierstrass", {"f", "g", "punctures", "puncture_at_infinity", "base_point"});
  c.f = expression(need(w, "f", "weierstrass"), "weierstrass.f");
  c.g = expression(need(w, "g", "weierstrass"), "weierstrass.g");
  if (w.contains("punctures")) c.punctures = cplx_list(w["punctures"], "weierstrass.punctures");
  if (w.contains("puncture_at_infinity")) {
    if (!w["puncture_at_infinity"].is_boolean()) throw ConfigError("weierstrass.puncture_at_infinity: expected a boolean");
    c.puncture_at_infinity = w["puncture_at_infinity"].get<bool>();
  }
  if (w.contains("base_point")) c.base_point = parse_cplx(w["base_point"], "weierstrass.base_point");
  c.riccati = parse_riccati(need(j, "riccati", "config"));
  if (j.contains("domain")) c.domain = parse_domain(j["domain"]);
  if (j.contains("front")) c.front = parse_front(j["front"]);
  if (j.contains("outputs")) c.outputs = parse_outputs(j["outputs"]);
  if (j.contains("loops")) c.loops = parse_loops(j["loops"]);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (c.riccati.closed_form) c.closed_form();  // surfaces bad parameters and k mismatches now
  return c;
}

WeierstrassData RunConfig::weierstrass() const {
  WeierstrassData w;
  w.f = mexpr::parse(f);
  w.g = mexpr::parse(g);
  w.punctures = punctures;
  w.puncture_at_infinity = puncture_at_infinity;
  w.base_point = base_point;
  for (const Cplx z : mexpr::find_poles(w.g, 0.0, 5.0)) mexpr::add_unique(w.avoid, z);
  return w;
}

ClosedForm RunConfig::closed_form() const {
  if (!riccati.closed_form) throw ConfigError("this command needs riccati.mode = closed_form");
  const ClosedFormSpec& s = *riccati.closed_form;
  const json& p = s.params;
  ClosedForm cf;
  try {
    if (s.name == "catenoid") {
      only_keys(p, "riccati.closed_form.params", {"m", "C"});
      cf = catenoid_closed_form(real_of(need(p, "m", "riccati.closed_form.params"), "params.m"),
                                parse_cplx(need(p, "C", "riccati.closed_form.params"), "params.C"));
    } else if (s.name == "trinoid") {
      only_keys(p, "riccati.closed_form.params", {});
      cf = trinoid_closed_form();
    } else {
      only_keys(p, "riccati.closed_form.params", {"h"});
      if (!riccati.k) throw ConfigError("riccati.k is required for an expression closed form");
      cf = {mexpr::parse(expression(need(p, "h", "riccati.closed_form.params"), "params.h")), *riccati.k};
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("riccati.closed_form: ") + e.what());
  }
  if (riccati.k && std::abs(*riccati.k - cf.k) > 1e-12 * std::max(1.0, std::abs(cf.k))) {
    throw ConfigError("riccati.k = " + std::to_string(*riccati.k) + " does not match the closed form's k = " +
                      std::to_string(cf.k));
  }
  return cf;
}

Cplx RunConfig::numeric_h0() const {
  if (!riccati.numeric) throw ConfigError("no riccati.numeric section");
  if (riccati.numeric->h0) return *riccati.numeric->h0;
  return mexpr::evaluate(closed_form().h, riccati.numeric->z0);
}

PathSpec RunConfig::numeric_path() const {
  if (!riccati.numeric) throw ConfigError("no riccati.numeric section");
  const NumericSpec& n = *riccati.numeric;
  PathSpec p = PathSpec::line(n.z0, n.path.front());
  for (std::size_t i = 1; i < n.path.size(); ++i) p.line_to(n.path[i]);
  return p;
}

json read_json_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open " + path + ": " + std::strerror(errno));
  std::stringstream ss;
  ss << is.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }
}

RunConfig load_config(const std::string& path) { return parse_config(read_json_file(path)); }

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace ribfront
