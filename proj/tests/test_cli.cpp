#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

fs::path work_dir() {
  static fs::path p = [] {
    fs::path dir = fs::temp_directory_path() /
                   ("infoloss_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
  }();
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path write_config(const std::string& name, const std::string& text) {
  fs::path p = work_dir() / name;
  std::ofstream out(p);
  out << text;
  return p;
}

RunResult run_cli(const std::string& args) {
  fs::path out = work_dir() / "stdout.txt";
  fs::path err = work_dir() / "stderr.txt";
  std::string cmd = std::string(INFOLOSS_CLI_PATH) + " " + args + " > " +
                    out.string() + " 2> " + err.string();
  int rc = std::system(cmd.c_str());
  int code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return {code, slurp(out), slurp(err)};
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> lines;
  std::istringstream is(s);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

const char* kMagnitudeNormal = R"({
  "function": {"kind": "catalog", "name": "magnitude"},
  "density": {"kind": "normal", "sigma": 1.0}
})";

}  // namespace

TEST_CASE("loss command on magnitude under normal") {
  fs::path cfg = write_config("loss_mag.json", kMagnitudeNormal);
  fs::path jout = work_dir() / "loss_mag_out.json";
  fs::path cout_path = work_dir() / "loss_mag_out.csv";
  RunResult r = run_cli("loss " + cfg.string() + " --json " + jout.string() +
                        " --csv " + cout_path.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("loss_bits: ") != std::string::npos);

  json payload = json::parse(slurp(jout));
  CHECK(payload.at("command") == "loss");
  CHECK(std::abs(payload.at("report").at("loss_bits").get<double>() - 1.0) < 1e-6);
  CHECK(payload.at("report").at("L").get<int>() == 2);

  auto csv = lines_of(slurp(cout_path));
  REQUIRE(csv.size() == 2);
  CHECK(csv[0] ==
        "loss_bits,method,error_estimate_bits,bound1,bound2,bound3,L,"
        "bijective_mass,status");
  CHECK(csv[1].find(",ok") != std::string::npos);
}

TEST_CASE("loss command can run both routes") {
  fs::path cfg = write_config("loss_both.json", R"({
    "function": {"kind": "catalog", "name": "sqlin"},
    "density": {"kind": "uniform", "halfwidth": 1.0},
    "method": "both"
  })");
  fs::path jout = work_dir() / "loss_both.json.out";
  RunResult r = run_cli("loss " + cfg.string() + " --json " + jout.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("route_gap_bits:") != std::string::npos);
  json payload = json::parse(slurp(jout));
  double x = payload.at("report").at("loss_bits").get<double>();
  double w = payload.at("report_w").at("loss_bits").get<double>();
  CHECK(std::abs(x - 0.92240905308905985) < 1e-6);
  CHECK(std::abs(x - w) < 1e-6);
}

TEST_CASE("sweep writes one csv row per grid point") {
  fs::path cfg = write_config("sweep.json", R"({
    "function": {"kind": "catalog", "name": "sqlin"},
    "density": {"kind": "uniform", "halfwidth": 1.0},
    "sweep": {"param": "density.halfwidth", "grid": [1.0, 2.0, 4.0]}
  })");
  fs::path csv_path = work_dir() / "sweep.csv";
  RunResult r = run_cli("sweep " + cfg.string() + " --csv " + csv_path.string());
  CHECK(r.exit_code == 0);
  auto csv = lines_of(slurp(csv_path));
  REQUIRE(csv.size() == 4);
  CHECK(csv[0] ==
        "param,loss_quadrature,loss_mc,mc_stderr,bound1,bound2,bound3,status");
  const double expect[] = {0.92240905308905985, 0.76913318730106399,
                           0.63366944401963141};
  for (int i = 0; i < 3; ++i) {
    std::istringstream is(csv[i + 1]);
    std::string tok;
    std::getline(is, tok, ',');
    std::getline(is, tok, ',');
    CHECK(std::abs(std::stod(tok) - expect[i]) < 1e-6);
    CHECK(csv[i + 1].find("ok") != std::string::npos);
    // no mc section: the mc columns stay empty
    CHECK(csv[i + 1].find(",,,") != std::string::npos);
  }
}

TEST_CASE("sweep prints csv to stdout when no file is given") {
  fs::path cfg = write_config("sweep_stdout.json", R"({
    "function": {"kind": "catalog", "name": "magnitude"},
    "density": {"kind": "normal", "sigma": 1.0},
    "sweep": {"param": "density.sigma", "from": 1.0, "to": 4.0, "points": 3,
              "scale": "log"}
  })");
  RunResult r = run_cli("sweep " + cfg.string());
  CHECK(r.exit_code == 0);
  auto out = lines_of(r.out);
  REQUIRE(out.size() == 4);
  CHECK(out[0].rfind("param,", 0) == 0);
  CHECK(out[2].rfind("2,", 0) == 0);  // geometric midpoint of [1, 4]
}

TEST_CASE("mc requires a seed") {
  fs::path cfg = write_config("mc_noseed.json", R"({
    "function": {"kind": "catalog", "name": "magnitude"},
    "density": {"kind": "normal", "sigma": 1.0},
    "mc": {"n_samples": 20000}
  })");
  RunResult r = run_cli("mc " + cfg.string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("seed") != std::string::npos);

  RunResult ok = run_cli("mc " + cfg.string() + " --seed 42");
  CHECK(ok.exit_code == 0);
  RunResult ok2 = run_cli("mc " + cfg.string() + " --seed 42");
  CHECK(ok.out == ok2.out);
}

TEST_CASE("cascade reports stages and total") {
  fs::path cfg = write_config("cascade.json", R"({
    "density": {"kind": "normal", "sigma": 1.0},
    "cascade": {
      "verify": true,
      "stages": [
        {"kind": "catalog", "name": "magnitude"},
        {"kind": "catalog", "name": "magnitude"}
      ]
    }
  })");
  fs::path jout = work_dir() / "cascade.json.out";
  fs::path csvout = work_dir() / "cascade.csv";
  RunResult r = run_cli("cascade " + cfg.string() + " --json " + jout.string() +
                        " --csv " + csvout.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("total_bits:") != std::string::npos);
  CHECK(r.out.find("composed_bits:") != std::string::npos);
  json payload = json::parse(slurp(jout));
  CHECK(std::abs(payload.at("report").at("total_bits").get<double>() - 1.0) <
        1e-6);
  CHECK(payload.at("report").at("stages").size() == 2);
  CHECK(payload.at("additivity").at("within_error").get<bool>());
  auto csv = lines_of(slurp(csvout));
  REQUIRE(csv.size() == 3);
}

TEST_CASE("oracle emits one csv row per refinement level") {
  fs::path cfg = write_config("oracle.json", R"({
    "function": {"kind": "catalog", "name": "magnitude"},
    "density": {"kind": "normal", "sigma": 1.0},
    "mc": {"n_samples": 100000, "seed": 9},
    "histogram": {"y_bins": 64, "refinement_levels": 3}
  })");
  fs::path csv_path = work_dir() / "oracle.csv";
  RunResult r = run_cli("oracle " + cfg.string() + " --csv " + csv_path.string());
  CHECK(r.exit_code == 0);
  auto csv = lines_of(slurp(csv_path));
  REQUIRE(csv.size() == 4);
  CHECK(csv[0] == "level,bins,occupied,loss_bits");
  CHECK(csv[1].rfind("1,64,", 0) == 0);
  CHECK(csv[3].rfind("3,256,", 0) == 0);
}

TEST_CASE("build-tight reaches the requested loss") {
  fs::path cfg = write_config("tight.json", R"({
    "density": {"kind": "uniform", "lo": -1.0, "hi": 1.0},
    "tight": {"L": 4, "signs": [1, -1, 1, -1]}
  })");
  fs::path csv_path = work_dir() / "tight.csv";
  fs::path jout = work_dir() / "tight.json.out";
  RunResult r = run_cli("build-tight " + cfg.string() + " --csv " +
                        csv_path.string() + " --json " + jout.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("log2_L_bits: 2") != std::string::npos);
  json payload = json::parse(slurp(jout));
  CHECK(std::abs(payload.at("report").at("loss_bits").get<double>() - 2.0) < 1e-6);
  CHECK(payload.at("tightness").at("bound3_tight").get<bool>());
  auto csv = lines_of(slurp(csv_path));
  CHECK(csv.size() == 1 + 4 * 33);
  CHECK(csv[0] == "branch,x,y");
}

TEST_CASE("config errors exit with code 2") {
  fs::path bad_json = write_config("bad.json", "{ not json");
  CHECK(run_cli("loss " + bad_json.string()).exit_code == 2);

  fs::path unknown = write_config("unknown.json", R"({
    "function": {"kind": "catalog", "name": "no_such_map"},
    "density": {"kind": "normal", "sigma": 1.0}
  })");
  CHECK(run_cli("loss " + unknown.string()).exit_code == 2);

  fs::path missing = work_dir() / "does_not_exist.json";
  CHECK(run_cli("loss " + missing.string()).exit_code == 2);

  CHECK(run_cli("loss").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("validation failures exit with code 3") {
  fs::path cfg = write_config("uncovered.json", R"({
    "function": {"kind": "polynomial", "coeffs": [0, 0, 1], "domain": [0, 1]},
    "density": {"kind": "normal", "sigma": 1.0}
  })");
  RunResult r = run_cli("loss " + cfg.string());
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("validation error") != std::string::npos);
}

TEST_CASE("dump-config resolves defaults deterministically") {
  fs::path cfg = write_config("dump.json", kMagnitudeNormal);
  fs::path dump1 = work_dir() / "resolved1.json";
  RunResult r = run_cli("loss " + cfg.string() + " --tol 1e-9 --dump-config " +
                        dump1.string());
  CHECK(r.exit_code == 0);
  json resolved = json::parse(slurp(dump1));
  CHECK(resolved.at("quadrature").at("abs_tol").get<double>() == 1e-9);
  CHECK(resolved.at("quadrature").contains("max_depth"));

  // running on the dumped config reproduces the result bit for bit
  fs::path dump2 = work_dir() / "resolved2.json";
  RunResult r1 = run_cli("loss " + dump1.string() + " --dump-config " +
                         dump2.string());
  CHECK(r1.exit_code == 0);
  CHECK(slurp(dump1) == slurp(dump2));
  CHECK(r1.out == r.out);
}

TEST_CASE("seed override lands in the resolved config") {
  fs::path cfg = write_config("seed_dump.json", R"({
    "function": {"kind": "catalog", "name": "magnitude"},
    "density": {"kind": "normal", "sigma": 1.0},
    "mc": {"n_samples": 30000}
  })");
  fs::path dump = work_dir() / "seed_resolved.json";
  RunResult r = run_cli("mc " + cfg.string() + " --seed 123 --dump-config " +
                        dump.string());
  CHECK(r.exit_code == 0);
  json resolved = json::parse(slurp(dump));
  CHECK(resolved.at("mc").at("seed").get<std::uint64_t>() == 123);
}
