#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "ribfront/cli.hpp"

using namespace ribfront;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kConfigs = RIBFRONT_CONFIG_DIR;
const fs::path kWork = RIBFRONT_WORK_DIR;

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ribfront");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = kWork / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string write_config(const std::string& name, const json& j) {
  const fs::path p = kWork / "configs" / (name + ".json");
  fs::create_directories(p.parent_path());
  std::ofstream(p) << j.dump(2);
  return p.string();
}

json catenoid_config() { return json::parse(slurp(kConfigs + "/catenoid_m3_C2.json")); }

}  // namespace

TEST_CASE("transform writes both meshes, a report and a manifest") {
  const fs::path out = fresh_dir("transform");
  CHECK(run_cli({"transform", "--config", kConfigs + "/catenoid_m3_C2.json", "--out", out.string()}) == cli::kOk);
  CHECK(fs::exists(out / "catenoid.obj"));
  CHECK(fs::exists(out / "transformed.obj"));
  const json rep = json::parse(slurp(out / "transform_report.json"));
  CHECK(rep["command"] == "transform");
  const json man = json::parse(slurp(out / "transform_manifest.json"));
  CHECK(man["seed"] == 24301);
  CHECK(man["version"] == cli::kVersion);
  const RunConfig cfg = load_config(kConfigs + "/catenoid_m3_C2.json");
  CHECK(man["config_hash_fnv1a64"] == hex64(fnv1a(cfg.source.dump())));
}

TEST_CASE("outputs are byte-identical across runs") {
  const fs::path a = fresh_dir("det_a"), b = fresh_dir("det_b");
  const std::string cfg = kConfigs + "/catenoid_m3_C0.json";
  for (const char* cmd : {"transform", "periods"}) {
    CHECK(run_cli({cmd, "--config", cfg, "--out", a.string()}) == cli::kOk);
    CHECK(run_cli({cmd, "--config", cfg, "--out", b.string()}) == cli::kOk);
  }
  int compared = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
    ++compared;
  }
  CHECK(compared >= 6);
}

TEST_CASE("classify on the trinoid") {
  const fs::path out = fresh_dir("classify");
  CHECK(run_cli({"classify", "--config", kConfigs + "/trinoid_k5.json", "--out", out.string()}) == cli::kOk);
  const json rep = json::parse(slurp(out / "classify_report.json"));
  int catenoid = 0, planar = 0;
  for (const auto& e : rep["ends"]) {
    if (e["type"] == "catenoid_type") ++catenoid;
    if (e["type"] == "planar_nonembedded") {
      ++planar;
      CHECK(std::abs(parse_cplx(e["point"], "point")) < 1e-8);
    }
  }
  CHECK(catenoid == 3);
  CHECK(planar == 1);
}

TEST_CASE("usage and config errors exit 2") {
  const fs::path out = fresh_dir("errors");
  CHECK(run_cli({"transform", "--config", (kWork / "missing.json").string(), "--out", out.string()}) == cli::kUsageError);
  CHECK(run_cli({}) == cli::kUsageError);
  CHECK(run_cli({"transform"}) == cli::kUsageError);
  CHECK(run_cli({"bogus", "--config", "x"}) == cli::kUsageError);

  json j = catenoid_config();
  j["riccati"]["k"] = 0;
  CHECK(run_cli({"transform", "--config", write_config("k0", j), "--out", out.string()}) == cli::kUsageError);

  j = catenoid_config();
  j["colour"] = "blue";
  CHECK(run_cli({"transform", "--config", write_config("unknown_key", j), "--out", out.string()}) == cli::kUsageError);

  j = catenoid_config();
  j["weierstrass"]["f"] = "z+";
  CHECK(run_cli({"transform", "--config", write_config("bad_expr", j), "--out", out.string()}) == cli::kUsageError);

  j = catenoid_config();
  j["riccati"]["closed_form"]["name"] = "enneper";
  CHECK(run_cli({"transform", "--config", write_config("bad_name", j), "--out", out.string()}) == cli::kUsageError);

  std::ofstream(out / "not_json.json") << "{ nope";
  CHECK(run_cli({"transform", "--config", (out / "not_json.json").string(), "--out", out.string()}) ==
        cli::kUsageError);
}

TEST_CASE("seed override and loops file") {
  const fs::path out = fresh_dir("override");
  const fs::path loops = out / "loops.json";
  std::ofstream(loops) << R"({"loops": [{"center": 1.2599210498948732, "radius": 0.2}]})";
  CHECK(run_cli({"periods", "--config", kConfigs + "/catenoid_m3_C2.json", "--out", out.string(), "--seed", "7",
                 "--loops", loops.string()}) == cli::kOk);
  const json man = json::parse(slurp(out / "periods_manifest.json"));
  CHECK(man["seed"] == 7);
  const json rep = json::parse(slurp(out / "periods_report.json"));
  CHECK(rep["loops"].size() == 1);

  cli::Options o;
  o.config = kConfigs + "/catenoid_m3_C2.json";
  o.seed = 99;
  o.loops = loops.string();
  const RunConfig cfg = cli::resolve(o);
  CHECK(cfg.seed == 99);
  REQUIRE(cfg.loops.size() == 1);
  CHECK(cfg.loops[0].radius == 0.2);
}

TEST_CASE("non-integer m fails the period condition but periods still exits 0") {
  const fs::path out = fresh_dir("m2p5");
  CHECK(run_cli({"periods", "--config", kConfigs + "/catenoid_m2p5_C2.json", "--out", out.string()}) == cli::kOk);
  CHECK(fs::exists(out / "periods_report.json"));
}

TEST_CASE("numeric mode") {
  json j = catenoid_config();
  j["riccati"] = {{"mode", "numeric"},
                  {"k", 2},
                  {"numeric", {{"z0", 0.5}, {"h0", 0.9375 / 2.25}, {"path", {1.5, {1.5, 1}}}}}};
  j["loops"] = {{{"center", 1.2599210498948732}, {"radius", 0.1}}};
  const std::string cfg = write_config("numeric", j);
  const fs::path out = fresh_dir("numeric");
  CHECK(run_cli({"verify", "--config", cfg, "--out", out.string()}) == cli::kOk);
  const json rep = json::parse(slurp(out / "verify_report.json"));
  CHECK(rep.dump().find("riccati_numeric") != std::string::npos);
  // closed-form-only commands refuse numeric configs
  CHECK(run_cli({"transform", "--config", cfg, "--out", out.string()}) == cli::kUsageError);

  j["riccati"].erase("k");
  CHECK(run_cli({"verify", "--config", write_config("numeric_nok", j), "--out", out.string()}) == cli::kUsageError);
}

TEST_CASE("complex values in configs") {
  CHECK(parse_cplx(json(3), "x") == Cplx(3, 0));
  CHECK(parse_cplx(json::array({1, -2}), "x") == Cplx(1, -2));
  CHECK_THROWS_AS(parse_cplx(json("1+i"), "x"), ConfigError);
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}
