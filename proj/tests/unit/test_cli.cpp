#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gsirs/cli.hpp"

namespace fs = std::filesystem;
using gsirs::Json;

namespace {

const std::string kConfigs = GSIRS_CONFIG_DIR;
const std::string kBelow = kConfigs + "/example1_r0_below_one.json";
const std::string kAbove = kConfigs + "/example1_r0_above_one.json";

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "gsirs");
  std::ostringstream out, err;
  const int code = gsirs::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gsirs_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> csv_lines(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("check: passing, failing and malformed configs") {
  const auto ok = run({"check", kBelow});
  CHECK(ok.code == 0);
  CHECK(Json::parse(ok.out)["all_pass"] == true);

  const auto ruan = run({"check", kConfigs + "/ruan.json"});
  CHECK(ruan.code == 2);
  const Json rep = Json::parse(ruan.out);
  CHECK(rep["h3_pass"] == false);
  bool has_h3 = false;
  for (const auto& v : rep["violations"]) has_h3 = has_h3 || v["hypothesis"] == "H3";
  CHECK(has_h3);

  const auto dir = scratch("check");
  const auto no_mu = write_file(dir / "no_mu.json", R"({
    "params": {"Lambda": 10, "gamma1": 0.2, "gamma2": 0.2, "alpha": 0.1, "delta": 0.1},
    "incidence": {"family": "power", "coefficients": {"k": 0.0002, "q": 2}}})");
  const auto missing = run({"check", no_mu.string()});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("params.mu") != std::string::npos);
  CHECK(missing.err.find("no_mu.json") != std::string::npos);

  const auto broken = write_file(dir / "broken.json", "{ not json");
  CHECK(run({"check", broken.string()}).code == 1);
  CHECK(run({"check", (dir / "absent.json").string()}).code == 1);
}

TEST_CASE("analyze below threshold") {
  const auto r = run({"analyze", kBelow});
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(std::abs(j["r0"].get<double>() - 0.7143) < 1e-4);
  CHECK(j["equilibria"]["endemic"].empty());
  CHECK_FALSE(j.contains("certificates"));
  CHECK(j["dfe_certificate"]["didt_bound"]["holds"] == true);
}

TEST_CASE("analyze above threshold, searched and forced k1") {
  const auto r = run({"analyze", kAbove});
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(std::abs(j["r0"].get<double>() - 2.8571) < 1e-4);
  REQUIRE(j["equilibria"]["endemic"].size() == 1);
  const Json e = j["equilibria"]["endemic"][0]["state"];
  CHECK(std::abs(e["S"].get<double>() - 29.5804) < 1e-3);
  CHECK(std::abs(e["I"].get<double>() - 9.4244) < 1e-3);
  CHECK(std::abs(e["R"].get<double>() - 6.2830) < 1e-3);
  CHECK(j["certificates"]["granted"] == true);

  const auto forced = run({"analyze", kAbove, "--k1", "7"});
  CHECK(forced.code == 0);
  const Json f = Json::parse(forced.out);
  CHECK(f["certificates"]["granted"] == true);
  CHECK(f["certificates"]["k1"].get<double>() == 7.0);
  CHECK(f["certificates"]["a2"]["sup_h"].get<double>() < 0.12);

  const auto bad = run({"analyze", kAbove, "--k1", "0"});
  CHECK(bad.code == 2);
  CHECK(Json::parse(bad.out)["certificates"]["granted"] == false);
}

TEST_CASE("analyze at the bilinear threshold finds no endemic state") {
  const auto r = run({"analyze", kConfigs + "/bilinear_threshold.json"});
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["r0"].get<double>() == 1.0);
  CHECK(j["equilibria"]["endemic"].empty());
}

TEST_CASE("analyze stops with exit 2 when hypotheses fail") {
  const auto r = run({"analyze", kConfigs + "/ruan.json"});
  CHECK(r.code == 2);
  CHECK(Json::parse(r.out)["hypotheses"]["h3_pass"] == false);
}

TEST_CASE("analyze embeds solver errors and exits 3") {
  // Non-finite only between hypothesis grid nodes, so the check passes and the
  // equilibrium scan fails.
  auto config = gsirs::example_config(0.0008);
  config.incidence = gsirs::IncidenceFunction::custom(
      "holey", [](double S, double I) { return I > 9.0 && I < 9.5 ? NAN : 0.0008 * S * S * I; },
      [](double S, double I) { return I > 9.0 && I < 9.5 ? NAN : 0.0008 * S * S; });
  const auto r = gsirs::cli::analyze(config);
  CHECK(r.exit_code == 3);
  REQUIRE(r.report["errors"].size() == 1);
  CHECK(r.report["errors"][0]["stage"] == "equilibria");
  CHECK(r.report["errors"][0]["kind"] == "evaluation_error");
}

TEST_CASE("analyze output is byte-identical across runs") {
  CHECK(run({"analyze", kAbove}).out == run({"analyze", kAbove}).out);
  CHECK(run({"check", kBelow}).out == run({"check", kBelow}).out);
}

TEST_CASE("simulate writes the CSV and a summary") {
  const auto dir = scratch("simulate");
  const auto csv = dir / "traj.csv";
  const auto r = run({"simulate", kAbove, "--initial", "30,10,5", "--t-end", "500", "--out",
                      csv.string()});
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["target_kind"] == "endemic");
  CHECK(j["distance"].get<double>() < 1e-2);
  const auto lines = csv_lines(csv);
  REQUIRE(lines.size() > 2);
  CHECK(lines[0] == "t,S,I,R");
  CHECK(lines[1] == "0,30,10,5");
  CHECK(read_file(csv).back() == '\n');

  const auto still = run({"simulate", kAbove, "--initial", "50,0,0", "--t-end", "100", "--out",
                          (dir / "dfe.csv").string()});
  CHECK(still.code == 0);
  const auto dfe_lines = csv_lines(dir / "dfe.csv");
  for (std::size_t k = 1; k < dfe_lines.size(); ++k) {
    std::stringstream ss(dfe_lines[k]);
    std::string t, S, I, R;
    std::getline(ss, t, ',');
    std::getline(ss, S, ',');
    std::getline(ss, I, ',');
    std::getline(ss, R, ',');
    CHECK(std::abs(std::stod(S) - 50.0) < 1e-9);
    CHECK(std::abs(std::stod(I)) < 1e-9);
    CHECK(std::abs(std::stod(R)) < 1e-9);
  }

  const auto outside = run({"simulate", kAbove, "--initial", "60,0,0"});
  CHECK(outside.code == 1);
  CHECK(outside.err.find("S + I + R <= Lambda/mu") != std::string::npos);
  CHECK(run({"simulate", kAbove, "--initial", "1,2"}).code == 1);
  CHECK(run({"simulate", kAbove}).code == 1);
}

TEST_CASE("sweep converges on lattice 2 and fails with a tiny horizon") {
  const auto dir = scratch("sweep");
  const auto low = run({"sweep", kBelow, "--lattice", "2", "--out", (dir / "low").string()});
  CHECK(low.code == 0);
  CHECK(Json::parse(low.out)["converged_fraction"].get<double>() == 1.0);
  CHECK(fs::exists(dir / "low" / "sweep_report.json"));
  CHECK(fs::exists(dir / "low" / "run_0007.csv"));
  CHECK(csv_lines(dir / "low" / "run_0000.csv").front() == "t,S,I,R");

  const auto high = run({"sweep", kAbove, "--lattice", "2"});
  CHECK(high.code == 0);
  CHECK(Json::parse(high.out)["target_kind"] == "endemic");

  const auto quick = run({"sweep", kBelow, "--lattice", "2", "--t-end", "0.001"});
  CHECK(quick.code == 2);
  CHECK(Json::parse(quick.out)["converged_fraction"].get<double>() < 1.0);

  CHECK(run({"sweep", kBelow, "--lattice", "1"}).code == 1);
}

TEST_CASE("reproduce writes every artifact and passes") {
  const auto dir = scratch("reproduce");
  const auto r = run({"reproduce", "--out", dir.string()});
  CHECK(r.code == 0);
  for (const char* name :
       {"summary.json", "config_r0_below_one.json", "config_r0_above_one.json",
        "analysis_r0_below_one.json", "analysis_r0_above_one.json",
        "analysis_r0_above_one_k1_7.json", "h_of_u.csv", "fig2_run0.csv", "fig3_run3.csv"}) {
    CHECK_MESSAGE(fs::exists(dir / name), name);
  }
  const Json summary = Json::parse(read_file(dir / "summary.json"));
  CHECK(summary["all_pass"] == true);
  CHECK(summary["failed"].empty());

  const auto h = csv_lines(dir / "h_of_u.csv");
  REQUIRE(h.size() == 502);
  CHECK(h[0] == "u,h");
  double max_h = 0.0;
  for (std::size_t k = 1; k < h.size(); ++k) {
    max_h = std::max(max_h, std::stod(h[k].substr(h[k].find(',') + 1)));
  }
  CHECK(max_h < 0.12);
  CHECK(max_h == doctest::Approx(0.11178976607321076).epsilon(1e-10));
}

TEST_CASE("argument errors and help") {
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"analyze", kAbove, "--k1", "seven"}).code == 1);
  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("analyze") != std::string::npos);
}

TEST_CASE("the installed executable maps exit codes") {
  const std::string exe = GSIRS_CLI_PATH;
  auto status = [&](const std::string& args) {
    const int raw = std::system((exe + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  CHECK(status("check " + kBelow) == 0);
  CHECK(status("check " + kConfigs + "/ruan.json") == 2);
  CHECK(status("simulate " + kAbove + " --initial 60,0,0") == 1);
}
