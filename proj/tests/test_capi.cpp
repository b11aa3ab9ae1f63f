#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gabic/gabic.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const char* kConfigA = R"(
system.omega_atom = -1
system.coupling = 0.1
system.leg_separation = 6
system.phase = 3.14159265358979323846
lattice.total_sites = 401
)";

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("gabic_capi_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct Config {
  gabic_config* cfg = nullptr;
  explicit Config(const char* text) { REQUIRE(gabic_config_parse(text, &cfg) == GABIC_OK); }
  ~Config() { gabic_config_free(cfg); }
};

int run_cli(const std::string& args) {
  const std::string cmd = std::string(GABIC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WEXITSTATUS(rc);
}

fs::path write_config(const std::string& tag, const std::string& text) {
  const fs::path path = fs::temp_directory_path() / ("gabic_cli_" + tag + ".conf");
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("version and argument checking") {
  CHECK(std::string(gabic_version()) == "0.1.0");
  CHECK(gabic_config_parse(nullptr, nullptr) == GABIC_ERR_ARG);
  gabic_config* cfg = nullptr;
  CHECK(gabic_config_load("/nonexistent/path.conf", &cfg) == GABIC_ERR_IO);
  CHECK(gabic_last_error() != nullptr);
}

TEST_CASE("parse, set and validate") {
  Config c(kConfigA);
  CHECK(gabic_config_set(c.cfg, "system.coupling", "1.1") == GABIC_OK);
  CHECK(gabic_config_set(c.cfg, "bogus.key", "1") == GABIC_ERR_VALIDATION);
  CHECK(gabic_config_parse("nonsense", &c.cfg) == GABIC_ERR_VALIDATION);

  char* report = nullptr;
  REQUIRE(gabic_config_validate(c.cfg, nullptr, &report) == GABIC_OK);
  CHECK(std::string(report).empty());
  gabic_string_free(report);

  CHECK(gabic_config_set(c.cfg, "lattice.total_sites", "5") == GABIC_OK);
  REQUIRE(gabic_config_validate(c.cfg, nullptr, &report) == GABIC_OK);
  CHECK_FALSE(std::string(report).empty());
  gabic_string_free(report);
}

TEST_CASE("run writes artifacts and a manifest") {
  Config c(kConfigA);
  const fs::path dir = fresh_dir("run");
  char* manifest = nullptr;
  REQUIRE(gabic_run(c.cfg, "spectrum", dir.c_str(), "csv", 1, 1, &manifest) == GABIC_OK);
  REQUIRE(manifest != nullptr);
  CHECK(std::string(manifest).find("\"status\": \"ok\"") != std::string::npos);
  gabic_string_free(manifest);
  CHECK(fs::exists(dir / "spectrum.csv"));
  CHECK(fs::exists(dir / "manifest.json"));

  CHECK(gabic_run(c.cfg, "render", dir.c_str(), "csv", 1, 1, nullptr) ==
        GABIC_ERR_VALIDATION);
  CHECK(gabic_run(c.cfg, "spectrum", dir.c_str(), "csv", 0, 1, nullptr) == GABIC_ERR_ARG);
}

TEST_CASE("bound-state model") {
  Config weak(kConfigA);
  gabic_model* model = nullptr;
  REQUIRE(gabic_model_create(weak.cfg, &model) == GABIC_OK);

  int holds = 0;
  CHECK(gabic_model_bic_condition(model, &holds) == GABIC_OK);
  CHECK(holds == 1);

  double energies[3];
  CHECK(gabic_model_bound_state_energies(model, energies) == GABIC_OK);
  CHECK(std::isnan(energies[0]));
  CHECK(energies[1] == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(std::isnan(energies[2]));

  double detunings[2];
  CHECK(gabic_model_detunings(model, detunings) == GABIC_ERR_MODEL_UNAVAILABLE);

  std::size_t n_sites = 0;
  REQUIRE(gabic_model_bic_profile(model, 1, nullptr, &n_sites) == GABIC_OK);
  CHECK(n_sites == 9);
  std::vector<double> buf(2 * n_sites);
  REQUIRE(gabic_model_bic_profile(model, 1, buf.data(), &n_sites) == GABIC_OK);
  // margin 1: sites -1..7, so the left leg sits at pair index 1
  CHECK(buf[0] == 0.0);
  CHECK(buf[2] == 0.0);
  CHECK(buf[4] / buf[6] == doctest::Approx(1.0));  // beta_1 = beta_2
  gabic_model_free(model);

  Config strong(kConfigA);
  REQUIRE(gabic_config_set(strong.cfg, "system.coupling", "1.1") == GABIC_OK);
  REQUIRE(gabic_config_set(strong.cfg, "lattice.total_sites", "801") == GABIC_OK);
  REQUIRE(gabic_model_create(strong.cfg, &model) == GABIC_OK);
  REQUIRE(gabic_model_detunings(model, detunings) == GABIC_OK);
  CHECK(detunings[0] == doctest::Approx(1.534).epsilon(1e-3));
  CHECK(detunings[1] == doctest::Approx(3.109).epsilon(1e-3));
  gabic_model_free(model);
}

TEST_CASE("cli exit codes") {
  const fs::path good = write_config("good", kConfigA);
  const fs::path out = fresh_dir("cli");
  CHECK(run_cli("validate -c " + good.string()) == 0);
  CHECK(run_cli("spectrum -c " + good.string() + " -o " + out.string() + " -q") == 0);
  CHECK(fs::exists(out / "spectrum.csv"));

  // geometry violation
  CHECK(run_cli("validate -c " + good.string() + " -s lattice.total_sites=5") == 2);
  // out-of-band atom under the in-band subcommand
  CHECK(run_cli("bic -c " + good.string() + " -s system.omega_atom=-3 -o " + out.string()) ==
        2);
  // missing config file
  CHECK(run_cli("spectrum -c /nonexistent.conf") == 2);
  // json format variant
  CHECK(run_cli("spectrum -c " + good.string() + " -o " + out.string() +
                " -f json -q") == 0);
  CHECK(fs::exists(out / "spectrum.json"));
}
