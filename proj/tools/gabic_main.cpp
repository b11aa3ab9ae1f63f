// Command-line front end. Talks to the shared library through the C API only.
#include <gabic/gabic.h>

#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace {

int map_status(gabic_status st) {
  switch (st) {
    case GABIC_OK:
      return 0;
    case GABIC_ERR_VALIDATION:
    case GABIC_ERR_IO:
    case GABIC_ERR_ARG:
      return 2;
    case GABIC_ERR_MODEL_UNAVAILABLE:
      return 3;
    default:
      return 4;
  }
}

void print_error(const char* context) {
  const char* msg = gabic_last_error();
  std::fprintf(stderr, "gabic: %s: %s\n", context, msg ? msg : "unknown error");
}

struct ConfigGuard {
  gabic_config* cfg = nullptr;
  ~ConfigGuard() { gabic_config_free(cfg); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Giant-atom waveguide simulator"};
  app.require_subcommand(1);
  app.fallthrough();  // allow global flags after the subcommand name

  std::string config_path;
  std::string out_dir;
  std::string format;
  std::vector<std::string> overrides;
  int jobs = 1;
  std::uint64_t seed = 12345;
  bool quiet = false;

  app.add_option("-c,--config", config_path, "configuration file")->required();
  app.add_option("-o,--out", out_dir, "output directory (overrides output.directory)");
  app.add_option("-f,--format", format, "artifact format: csv or json");
  app.add_option("-s,--set", overrides, "override a key, e.g. system.coupling=0.3");
  app.add_option("-j,--jobs", jobs, "parallel sweep workers")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "random seed for selfcheck");
  app.add_flag("-q,--quiet", quiet, "suppress the manifest on stdout");

  for (const char* name : {"spectrum", "bic", "boc", "dynamics", "beats", "sweep",
                           "selfcheck", "validate"})
    app.add_subcommand(name);

  CLI11_PARSE(app, argc, argv);
  const std::string subcommand = app.get_subcommands().front()->get_name();

  ConfigGuard guard;
  gabic_status st = gabic_config_load(config_path.c_str(), &guard.cfg);
  if (st != GABIC_OK) {
    print_error("loading configuration");
    return map_status(st);
  }

  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "gabic: --set expects key=value, got '%s'\n", kv.c_str());
      return 2;
    }
    st = gabic_config_set(guard.cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (st != GABIC_OK) {
      print_error("applying override");
      return map_status(st);
    }
  }

  if (subcommand == "validate") {
    char* report = nullptr;
    st = gabic_config_validate(guard.cfg, nullptr, &report);
    if (st != GABIC_OK) {
      print_error("validating configuration");
      return map_status(st);
    }
    const bool clean = report[0] == '\0';
    std::printf("%s", clean ? "ok\n" : report);
    gabic_string_free(report);
    return clean ? 0 : 2;
  }

  char* manifest = nullptr;
  st = gabic_run(guard.cfg, subcommand.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(),
                 format.empty() ? nullptr : format.c_str(), jobs, seed, &manifest);
  if (st != GABIC_OK) {
    print_error(subcommand.c_str());
    return map_status(st);
  }
  if (!quiet && manifest) std::printf("%s\n", manifest);
  gabic_string_free(manifest);
  return 0;
}
