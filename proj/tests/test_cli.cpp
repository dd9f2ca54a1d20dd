#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "crosswedge/experiment.hpp"

using namespace crosswedge;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "crosswedge_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& command, const json& cfg, const fs::path& out) {
  RunOverrides ov;
  ov.out_dir = out.string();
  std::ostringstream diag;
  const int status = run_experiment(command, cfg, ov, diag);
  INFO(diag.str());
  return status;
}

}  // namespace

TEST_CASE("omega command writes the field CSV with the known center value") {
  const auto out = temp_dir("omega");
  const json cfg = {
      {"command", "omega"},
      {"domain", {{"kind", "disc"}, {"arcs", {{0.0, kPi}}}}},
      {"grid", {{"x0", -1.0}, {"x1", 1.0}, {"y0", -1.0}, {"y1", 1.0}, {"nx", 21}, {"ny", 21}}},
      {"outputs", {{"field", "field.csv"}}},
  };
  REQUIRE(run("omega", cfg, out) == 0);
  const std::string csv = slurp(out / "field.csv");
  CHECK(csv.rfind("x,y,omega,stderr,method\n", 0) == 0);
  // the origin row carries the exact closed-form value 0.5
  CHECK(csv.find("\n0,0,0.5,0,closed-form\n") != std::string::npos);
}

TEST_CASE("reruns are byte-identical") {
  const json cfg = {
      {"command", "omega"},
      {"domain", {{"kind", "disc"}, {"arcs", {{0.5, 2.5}}}}},
      {"grid", {{"x0", -1.0}, {"x1", 1.0}, {"y0", -1.0}, {"y1", 1.0}, {"nx", 9}, {"ny", 9}}},
      {"outputs", {{"field", "field.csv"}}},
  };
  const auto out1 = temp_dir("rerun1");
  const auto out2 = temp_dir("rerun2");
  REQUIRE(run("omega", cfg, out1) == 0);
  REQUIRE(run("omega", cfg, out2) == 0);
  CHECK(slurp(out1 / "field.csv") == slurp(out2 / "field.csv"));
}

TEST_CASE("wos-backed commands are byte-identical across thread counts") {
  const json cfg = {
      {"command", "omega"},
      {"domain", {{"kind", "slit_square"}, {"a", 0.5}, {"arcs", {{8.0, 10.0}}}}},
      {"grid", {{"x0", -1.0}, {"x1", 1.0}, {"y0", -1.0}, {"y1", 1.0}, {"nx", 5}, {"ny", 5}}},
      {"sampler", {{"n", 4000}, {"seed", 17}}},
      {"outputs", {{"field", "field.csv"}}},
  };
  const auto out1 = temp_dir("threads1");
  const auto out2 = temp_dir("threads4");
  RunOverrides ov1;
  ov1.out_dir = out1.string();
  ov1.threads = 1;
  RunOverrides ov4;
  ov4.out_dir = out2.string();
  ov4.threads = 4;
  std::ostringstream diag;
  REQUIRE(run_experiment("omega", cfg, ov1, diag) == 0);
  REQUIRE(run_experiment("omega", cfg, ov4, diag) == 0);
  CHECK(slurp(out1 / "field.csv") == slurp(out2 / "field.csv"));
}

TEST_CASE("malformed arcs are a schema error with exit 2") {
  const auto out = temp_dir("badarcs");
  const json cfg = {
      {"command", "omega"},
      {"domain", {{"kind", "disc"}, {"arcs", {{2.0, 1.0}}}}},
      {"outputs", {{"field", "field.csv"}}},
  };
  std::ostringstream diag;
  RunOverrides ov;
  ov.out_dir = out.string();
  CHECK(run_experiment("omega", cfg, ov, diag) == 2);
  CHECK(diag.str().find("config error") != std::string::npos);
}

TEST_CASE("unknown keys are rejected") {
  const auto out = temp_dir("unknown");
  const json cfg = {
      {"command", "omega"},
      {"domain", {{"kind", "disc"}, {"arcs", {{0.0, 1.0}}}}},
      {"typo_key", 1},
  };
  CHECK(run("omega", cfg, out) == 2);
}

TEST_CASE("command mismatch is rejected") {
  const auto out = temp_dir("mismatch");
  const json cfg = {
      {"command", "omega"},
      {"domain", {{"kind", "disc"}, {"arcs", {{0.0, 1.0}}}}},
  };
  CHECK(run("wedge", cfg, out) == 2);
}

TEST_CASE("wedge command writes a slice CSV") {
  const auto out = temp_dir("wedge");
  const json cfg = {
      {"command", "wedge"},
      {"domain_d", {{"kind", "disc"}, {"arcs", {{0.0, kPi}}}}},
      {"domain_g", {{"kind", "disc"}, {"arcs", {{0.0, kPi}}}}},
      {"w", {0.0, 0.0}},
      {"grid", {{"x0", -1.0}, {"x1", 1.0}, {"y0", -1.0}, {"y1", 1.0}, {"nx", 7}, {"ny", 7}}},
      {"outputs", {{"slice", "slice.csv"}}},
  };
  REQUIRE(run("wedge", cfg, out) == 0);
  const std::string csv = slurp(out / "slice.csv");
  CHECK(csv.rfind("x,y,u,v,omega_sum,verdict\n", 0) == 0);
  CHECK(csv.find("in") != std::string::npos);
}

TEST_CASE("poletsky command writes the result JSON") {
  const auto out = temp_dir("poletsky");
  const json cfg = {
      {"command", "poletsky"},
      {"z", {0.5, 0.0}},
      {"target", {{"balls", {{{"center", {0.0, 0.0}}, {"radius", 0.25}}}}}},
      {"search", {{"degree", 6}, {"budget", 600}, {"profile", false}}},
      {"outputs", {{"result", "res.json"}}},
  };
  REQUIRE(run("poletsky", cfg, out) == 0);
  const json res = json::parse(slurp(out / "res.json"));
  CHECK(res["value"].get<double>() <= 1.0);
  CHECK(res["value"].get<double>() >= 0.0);
  CHECK(res["feasibility"].get<double>() == 0.0);
}

TEST_CASE("extend command writes fit and certification artifacts") {
  const auto out = temp_dir("extend");
  const json cfg = {
      {"command", "extend"},
      {"domain_d", {{"kind", "disc"}, {"arcs", {{0.0, kPi}}}}},
      {"domain_g", {{"kind", "disc"}, {"arcs", {{0.0, kPi}}}}},
      {"function", "exp_sum"},
      {"fit", {{"p", 6}, {"q", 6}, {"counts", {150, 150, 80}}, {"seed", 5}}},
      {"probes", 20},
      {"outputs", {{"fit", "fit.json"}, {"certify", "cert.csv"}, {"samples", "s.jsonl"}}},
  };
  REQUIRE(run("extend", cfg, out) == 0);
  const json fit = json::parse(slurp(out / "fit.json"));
  CHECK(fit["degrees"][0].get<int>() == 6);
  CHECK(fit["eps_w"].get<double>() < 1e-3);
  CHECK(fit["domain_d"]["kind"].get<std::string>() == "disc");
  const std::string cert = slurp(out / "cert.csv");
  CHECK(cert.rfind("x_z,y_z,x_w,y_w,omega_sum,bound,actual_err\n", 0) == 0);
  // 20 probe rows + header
  CHECK(std::count(cert.begin(), cert.end(), '\n') == 21);
  const std::string samples = slurp(out / "s.jsonl");
  CHECK(std::count(samples.begin(), samples.end(), '\n') == 380);

  SUBCASE("fit archive rerun is byte-identical") {
    const auto out2 = temp_dir("extend2");
    REQUIRE(run("extend", cfg, out2) == 0);
    CHECK(slurp(out / "fit.json") == slurp(out2 / "fit.json"));
    CHECK(slurp(out / "cert.csv") == slurp(out2 / "cert.csv"));
  }
}

TEST_CASE("verify command aggregates fast suites") {
  const auto out = temp_dir("verify");
  const json cfg = {
      {"command", "verify"},
      {"suite", {"boundary_limit", "center_bound"}},
      {"boundary_limit", {{"n", 20000}, {"k_max", 10}}},
      {"center_bound", {{"configs", 6}, {"grid_n", 121}}},
      {"outputs", {{"report", "verify.json"}}},
  };
  REQUIRE(run("verify", cfg, out) == 0);
  const json rep = json::parse(slurp(out / "verify.json"));
  CHECK(rep["pass"].get<bool>());
  CHECK(rep["checks"].size() == 2);
}

TEST_CASE("verify returns 1 when a check fails") {
  const auto out = temp_dir("verify_fail");
  // an impossible tolerance forces the boundary-limit check to fail
  const json cfg = {
      {"command", "verify"},
      {"suite", {"boundary_limit"}},
      {"boundary_limit", {{"n", 5000}, {"k_max", 6}, {"tolerance", 1e-12}}},
      {"outputs", {{"report", "verify.json"}}},
  };
  CHECK(run("verify", cfg, out) == 1);
  const json rep = json::parse(slurp(out / "verify.json"));
  CHECK_FALSE(rep["pass"].get<bool>());
}

TEST_CASE("unwritable output paths surface as runtime failures") {
  const json cfg = {
      {"command", "omega"},
      {"domain", {{"kind", "disc"}, {"arcs", {{0.0, 1.0}}}}},
      {"grid", {{"nx", 3}, {"ny", 3}}},
      {"outputs", {{"field", "field.csv"}}},
  };
  RunOverrides ov;
  ov.out_dir = "/proc/no_such_dir/out";
  std::ostringstream diag;
  CHECK(run_experiment("omega", cfg, ov, diag) == 3);
}

TEST_CASE("floating point artifacts use 17 significant digits") {
  CHECK(fmt17(0.1) == "0.10000000000000001");
  CHECK(fmt17(0.5) == "0.5");
  const double v = 0.20483276469913383;
  CHECK(std::stod(fmt17(v)) == v);
}
