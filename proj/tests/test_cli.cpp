// End-to-end checks of the command-line runner: preset catalog, CSV output,
// deterministic reruns, config files and the manifest round trip.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef SLB_CLI_PATH
#error "SLB_CLI_PATH must point at the slb executable"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(SLB_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buf;
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("slb_cli_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// strip comment lines so reruns are compared on data alone
std::string csv_body(const std::string& text) {
  std::stringstream in(text), out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') out << line << "\n";
  }
  return out.str();
}

}  // namespace

TEST_CASE("preset catalog lists defaults") {
  const RunResult r = run_cli("list-presets");
  CHECK(r.code == 0);
  CHECK(r.out.find("uncertainty") != std::string::npos);
  CHECK(r.out.find("5000") != std::string::npos);          // default ensemble size
  CHECK(r.out.find("x_d_bar = 20") != std::string::npos);  // detector location
  CHECK(r.out.find("custom") != std::string::npos);
}

TEST_CASE("dwell preset reproduces the zero-temperature point") {
  const fs::path dir = fresh_dir("dwell");
  const RunResult r = run_cli("run --preset dwell --out " + dir.string() +
                              " --sweep gamma=0.2 --set sweep_kt=0");
  CHECK(r.code == 0);
  const std::string csv = slurp(dir / "dwell_gamma0.2.csv");
  CHECK(csv.find("# seed = 1") != std::string::npos);
  CHECK(csv.find("kt_bar,tau_dwell_bar") != std::string::npos);
  // last line holds the value
  std::stringstream ss(csv_body(csv));
  std::string header, data;
  std::getline(ss, header);
  std::getline(ss, data);
  const double tau = std::stod(data.substr(data.find(',') + 1));
  CHECK(tau == doctest::Approx(0.0022).epsilon(0.05));
}

TEST_CASE("reruns with the same seed are byte-identical") {
  const fs::path a = fresh_dir("rerun_a");
  const fs::path b = fresh_dir("rerun_b");
  const std::string args =
      " --preset brownian-bohmian --n-traj 40 --t-end 5 --dt 0.005 --seed 99 "
      "--sweep kt=0.5";
  CHECK(run_cli("run --out " + a.string() + args).code == 0);
  CHECK(run_cli("run --out " + b.string() + args).code == 0);
  const std::string fa = slurp(a / "brownian-bohmian_msd_classical_kt0.5.csv");
  const std::string fb = slurp(b / "brownian-bohmian_msd_classical_kt0.5.csv");
  CHECK(fa == fb);
  CHECK(csv_body(fa).size() > 100);
}

TEST_CASE("manifest reproduces the run") {
  const fs::path a = fresh_dir("manifest_a");
  const fs::path b = fresh_dir("manifest_b");
  CHECK(run_cli("run --preset uncertainty --out " + a.string() +
                " --t-end 20 --sweep gamma=0.15 --seed 7")
            .code == 0);
  REQUIRE(fs::exists(a / "manifest.txt"));
  CHECK(run_cli("run --config " + (a / "manifest.txt").string() + " --out " + b.string())
            .code == 0);
  const std::string fa = slurp(a / "uncertainty_gamma0.15.csv");
  const std::string fb = slurp(b / "uncertainty_gamma0.15.csv");
  CHECK(csv_body(fa) == csv_body(fb));
}

TEST_CASE("config file sections select per-preset values") {
  const fs::path dir = fresh_dir("config");
  const fs::path cfg_path = dir / "run.cfg";
  {
    std::ofstream cfg(cfg_path);
    cfg << "preset = uncertainty\n";
    cfg << "seed = 5\n";
    cfg << "[uncertainty]\n";
    cfg << "t_end = 10\n";
    cfg << "sweep_gamma = 0.2\n";
    cfg << "[dwell]\n";
    cfg << "sweep_gamma = 0.05\n";
  }
  const RunResult r = run_cli("run --config " + cfg_path.string() + " --out " + dir.string());
  CHECK(r.code == 0);
  const std::string csv = slurp(dir / "uncertainty_gamma0.2.csv");
  CHECK(csv.find("# seed = 5") != std::string::npos);
  // horizon override applied: last axis value equals 10
  std::string last;
  std::stringstream ss(csv_body(csv));
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty()) last = line;
  }
  CHECK(std::stod(last.substr(0, last.find(','))) == doctest::Approx(10.0));
}

TEST_CASE("invalid configurations exit with code 2") {
  const fs::path dir = fresh_dir("invalid");
  CHECK(run_cli("run --preset custom --set sigma0=0 --out " + dir.string()).code == 2);
  CHECK(run_cli("run --preset no-such-preset --out " + dir.string()).code == 2);
  CHECK(run_cli("run --preset custom --set nonsense=1 --out " + dir.string()).code == 2);
}

TEST_CASE("custom preset emits curves and ensemble estimates") {
  const fs::path dir = fresh_dir("custom");
  const RunResult r = run_cli(
      "run --preset custom --out " + dir.string() +
      " --set gamma=0.2 --set kt=0.5 --set kts=0.5 --n-traj 30 --dt 0.005 --t-end 5");
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "custom_center.csv"));
  CHECK(fs::exists(dir / "custom_width.csv"));
  CHECK(fs::exists(dir / "custom_uncertainty.csv"));
  CHECK(fs::exists(dir / "custom_msd_classical.csv"));
  CHECK(fs::exists(dir / "custom_vacf.csv"));
}

TEST_CASE("raw trajectory dump behind its flag") {
  const fs::path dir = fresh_dir("dump");
  const std::string args = "run --preset brownian-bohmian --out " + dir.string() +
                           " --n-traj 5 --t-end 2 --dt 0.01 --sweep kt=0.5";
  CHECK(run_cli(args).code == 0);
  CHECK(!fs::exists(dir / "brownian-bohmian_trajectories_kt0.5.csv"));
  CHECK(run_cli(args + " --dump-trajectories").code == 0);
  const std::string dump = slurp(dir / "brownian-bohmian_trajectories_kt0.5.csv");
  CHECK(dump.find("t,id,x") != std::string::npos);
}
