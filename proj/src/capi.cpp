#include "gabic/gabic.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "bic.hpp"
#include "config.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "hamiltonian.hpp"
#include "runner.hpp"
#include "spectrum.hpp"

namespace {

thread_local std::string g_last_error;

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
gabic_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return GABIC_OK;
  } catch (const gabic::ModelUnavailableError& e) {
    g_last_error = e.what();
    return GABIC_ERR_MODEL_UNAVAILABLE;
  } catch (const gabic::IoError& e) {
    g_last_error = e.what();
    return GABIC_ERR_IO;
  } catch (const gabic::ConfigError& e) {
    g_last_error = e.what();
    return GABIC_ERR_VALIDATION;
  } catch (const gabic::OutOfBandError& e) {
    g_last_error = e.what();
    return GABIC_ERR_VALIDATION;
  } catch (const gabic::DomainError& e) {
    g_last_error = e.what();
    return GABIC_ERR_VALIDATION;
  } catch (const gabic::SingularParameterError& e) {
    g_last_error = e.what();
    return GABIC_ERR_VALIDATION;
  } catch (const gabic::InputError& e) {
    g_last_error = e.what();
    return GABIC_ERR_VALIDATION;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return GABIC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GABIC_ERR_INTERNAL;
  }
}

gabic_status arg_error(const char* message) {
  g_last_error = message;
  return GABIC_ERR_ARG;
}

}  // namespace

struct gabic_config {
  gabic::RunConfig cfg;
};

// Bound-state report for one configuration, built once at creation.
struct gabic_model {
  gabic::RunConfig cfg;
  std::optional<double> e_lower, e_bic, e_upper;
  std::optional<double> delta_lower, delta_upper;
  bool condition_holds = false;
  std::optional<gabic::AnalyticBIC> bic;
  gabic::Lattice lattice;
};

extern "C" {

const char* gabic_version(void) { return "0.1.0"; }

const char* gabic_last_error(void) {
  return g_last_error.empty() ? nullptr : g_last_error.c_str();
}

void gabic_string_free(char* s) { delete[] s; }

gabic_status gabic_config_load(const char* path, gabic_config** out) {
  if (!path || !out) return arg_error("path and out must be non-null");
  return guarded([&] { *out = new gabic_config{gabic::load_config(path)}; });
}

gabic_status gabic_config_parse(const char* text, gabic_config** out) {
  if (!text || !out) return arg_error("text and out must be non-null");
  return guarded([&] { *out = new gabic_config{gabic::parse_config(text)}; });
}

gabic_status gabic_config_set(gabic_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return arg_error("cfg, key and value must be non-null");
  return guarded([&] { gabic::set_key(cfg->cfg, key, value); });
}

void gabic_config_free(gabic_config* cfg) { delete cfg; }

gabic_status gabic_config_validate(const gabic_config* cfg, const char* subcommand,
                                   char** out) {
  if (!cfg || !out) return arg_error("cfg and out must be non-null");
  return guarded([&] {
    const auto violations =
        gabic::validate(cfg->cfg, subcommand ? subcommand : "");
    std::string text;
    for (const auto& v : violations)
      text += "[" + v.module + "] " + v.field + ": " + v.message + "\n";
    *out = copy_string(text);
  });
}

gabic_status gabic_run(const gabic_config* cfg, const char* subcommand,
                       const char* out_dir, const char* format, int jobs,
                       uint64_t seed, char** manifest_out) {
  if (!cfg || !subcommand) return arg_error("cfg and subcommand must be non-null");
  if (jobs < 1) return arg_error("jobs must be >= 1");
  return guarded([&] {
    gabic::RunOptions opts;
    if (out_dir) opts.out_dir = out_dir;
    if (format) opts.format = format;
    opts.jobs = jobs;
    opts.seed = seed;
    const auto manifest = gabic::run(cfg->cfg, subcommand, opts);
    if (manifest_out) *manifest_out = copy_string(manifest.dump(2));
  });
}

gabic_status gabic_model_create(const gabic_config* cfg, gabic_model** out) {
  if (!cfg || !out) return arg_error("cfg and out must be non-null");
  return guarded([&] {
    const gabic::RunConfig& rc = cfg->cfg;
    const auto violations = gabic::validate(rc, "");
    if (!violations.empty()) {
      std::string msg = "configuration invalid:";
      for (const auto& v : violations) msg += " " + v.field + ": " + v.message + ";";
      throw gabic::ConfigError(msg);
    }
    auto model = std::make_unique<gabic_model>();
    model->cfg = rc;
    model->lattice = rc.lattice();
    const auto h = gabic::build_hamiltonian(rc.system, model->lattice);
    const auto d = gabic::diagonalize(h, rc.system, model->lattice);
    const auto set = gabic::classify_states(d);
    if (set.lower_boc) model->e_lower = d.energies(*set.lower_boc);
    if (set.upper_boc) model->e_upper = d.energies(*set.upper_boc);
    if (set.bic) model->e_bic = d.energies(*set.bic);
    if (set.lower_boc && set.upper_boc && set.bic) {
      model->delta_lower = *model->e_bic - *model->e_lower;
      model->delta_upper = *model->e_upper - *model->e_bic;
    }
    try {
      model->condition_holds = gabic::bic_condition(rc.system).holds;
    } catch (const gabic::OutOfBandError&) {
      model->condition_holds = false;
    }
    if (model->condition_holds)
      model->bic = gabic::analytic_bic(rc.system, model->lattice);
    *out = model.release();
  });
}

void gabic_model_free(gabic_model* m) { delete m; }

gabic_status gabic_model_bound_state_energies(const gabic_model* m, double energies[3]) {
  if (!m || !energies) return arg_error("model and energies must be non-null");
  energies[0] = m->e_lower.value_or(NAN);
  energies[1] = m->e_bic.value_or(NAN);
  energies[2] = m->e_upper.value_or(NAN);
  g_last_error.clear();
  return GABIC_OK;
}

gabic_status gabic_model_detunings(const gabic_model* m, double detunings[2]) {
  if (!m || !detunings) return arg_error("model and detunings must be non-null");
  if (!m->delta_lower || !m->delta_upper) {
    g_last_error = "detunings need all three bound states";
    return GABIC_ERR_MODEL_UNAVAILABLE;
  }
  detunings[0] = *m->delta_lower;
  detunings[1] = *m->delta_upper;
  g_last_error.clear();
  return GABIC_OK;
}

gabic_status gabic_model_bic_condition(const gabic_model* m, int* holds) {
  if (!m || !holds) return arg_error("model and holds must be non-null");
  *holds = m->condition_holds ? 1 : 0;
  g_last_error.clear();
  return GABIC_OK;
}

gabic_status gabic_model_bic_profile(const gabic_model* m, int margin, double* out,
                                     size_t* n_sites) {
  if (!m || !n_sites) return arg_error("model and n_sites must be non-null");
  if (margin < 0) return arg_error("margin must be >= 0");
  if (!m->bic) {
    g_last_error = "no bound state in the continuum for this configuration";
    return GABIC_ERR_MODEL_UNAVAILABLE;
  }
  const int leg0 = m->lattice.leg0_index;
  const int legN = m->lattice.legN_index(m->cfg.system);
  const int lo = std::max(0, leg0 - margin);
  const int hi = std::min(m->lattice.total_sites - 1, legN + margin);
  const size_t count = size_t(hi - lo + 1);
  if (!out) {
    *n_sites = count;
    g_last_error.clear();
    return GABIC_OK;
  }
  if (*n_sites < count) return arg_error("output buffer too small");
  for (int j = lo; j <= hi; ++j) {
    out[2 * size_t(j - lo)] = m->bic->beta(j).real();
    out[2 * size_t(j - lo) + 1] = m->bic->beta(j).imag();
  }
  *n_sites = count;
  g_last_error.clear();
  return GABIC_OK;
}

}  // extern "C"
