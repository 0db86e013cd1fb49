#include "tubespec/io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace tubespec;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = TUBESPEC_SOURCE_DIR "/configs";

int run(const std::string& args, const fs::path& out) {
  fs::remove_all(out);
  const std::string cmd = std::string(TUBESPEC_CLI) + " " + args + " --out " + out.string() + " > " +
                          (out.string() + ".log") + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) { return fs::temp_directory_path() / ("tubespec_cli_" + name); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("analyze: certificate, refutation and bad input") {
  const auto out = scratch("e4");
  REQUIRE(run("analyze --config " + (kConfigs / "analyze_E4.json").string(), out) == 0);
  const json v = read_json_file(out / "verdicts.json");
  CHECK(v["agh"]["mode"] == "ExactCertificate");
  CHECK(v["agh"]["C"] == "1/2");
  CHECK(v["gamma"]["rank"] == 1);
  CHECK(fs::exists(out / "gap_minima.csv"));

  CHECK(run("analyze --config " + (kConfigs / "analyze_liouville.json").string(), scratch("liou")) == 2);

  const auto bad = scratch("bad.json");
  std::ofstream(bad) << "{\"operator\": ";
  CHECK(run("analyze --config " + bad.string(), scratch("bad")) == 1);
  CHECK(slurp(scratch("bad").string() + ".log").find("malformed JSON") != std::string::npos);
}

TEST_CASE("analyze output is byte-for-byte deterministic") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  REQUIRE(run("analyze --config " + (kConfigs / "analyze_E6.json").string(), a) == 0);
  REQUIRE(run("analyze --config " + (kConfigs / "analyze_E6.json").string(), b) == 0);
  CHECK(slurp(a / "verdicts.json") == slurp(b / "verdicts.json"));
  CHECK(slurp(a / "gap_minima.csv") == slurp(b / "gap_minima.csv"));
}

TEST_CASE("solve: smooth datum, incompatible datum, manufactured golden") {
  const auto out = scratch("cosx");
  REQUIRE(run("solve --config " + (kConfigs / "solve_E1_cosx.json").string(), out) == 0);
  const json s = read_json_file(out / "solve.json");
  CHECK(s["classification"]["classification"] == "Smooth");
  CHECK(s["classification"]["finite_support"] == true);
  CHECK(fs::exists(out / "decay.csv"));
  CHECK(fs::exists(out / "residuals.csv"));

  const auto bad = scratch("one");
  CHECK(run("solve --config " + (kConfigs / "solve_E1_one.json").string(), bad) == 4);
  const json viol = read_json_file(bad / "violations.json");
  REQUIRE(viol.size() == 1);
  CHECK(viol[0]["xi"] == json::array({0}));
  CHECK(run("solve --force --config " + (kConfigs / "solve_E1_one.json").string(), bad) == 0);

  const auto man = scratch("manufactured");
  REQUIRE(run("solve --config " + (kConfigs / "solve_E1_manufactured.json").string(), man) == 0);
  const ProductFunction u = product_function_from_json(read_json_file(man / "u.json"));
  const ProductFunction golden =
      product_function_from_json(read_json_file(TUBESPEC_SOURCE_DIR "/tests/golden/manufactured_u.json"));
  CHECK((u - golden).l2_norm() <= 1e-8 * golden.l2_norm());
}

TEST_CASE("case studies") {
  const auto su2 = scratch("su2");
  REQUIRE(run("case-studies --config " + (kConfigs / "case_su2.json").string(), su2) == 0);
  const json r = read_json_file(su2 / "su2.json");
  CHECK(r["min_gamma"] == "1/2");
  CHECK(r["kernel_cumulative"] == 441);

  const auto cfg = scratch("su2_0.json");
  std::ofstream(cfg) << R"({"case":"su2","l_max":"0"})";
  REQUIRE(run("case-studies --config " + cfg.string(), scratch("su2_0")) == 0);
  CHECK(read_json_file(scratch("su2_0") / "su2.json")["kernel_cumulative"] == 1);

  const auto s1 = scratch("s1");
  REQUIRE(run("case-studies --which s1", s1) == 0);
  const json q = read_json_file(s1 / "s1.json");
  CHECK(q["cinfty_cc"]["constraint"] == "f(0)=0");
  CHECK(q["distribution_case"]["decay"]["classification"] == "Distribution");
}

TEST_CASE("propagate") {
  const auto out = scratch("prop");
  REQUIRE(run("propagate --config " + (kConfigs / "propagate_E1.json").string(), out) == 0);
  CHECK(read_json_file(out / "propagation.json")["verdict"] == "SmoothEverywhere");
  CHECK(fs::exists(out / "decay_local.csv"));
  CHECK(fs::exists(out / "decay_global.csv"));
}

TEST_CASE("missing subcommand or config is a usage error") {
  CHECK(run("", scratch("none")) == 1);
  CHECK(run("analyze", scratch("none")) == 1);
}
