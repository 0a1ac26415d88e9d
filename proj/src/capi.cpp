#include "paprsim.h"

#include <cctype>
#include <cstdio>
#include <cstring>
#include <iostream>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "json.hpp"
#include "paprsim/harness.hpp"
#include "paprsim/selftest.hpp"
#include "paprsim/serialize.hpp"
#include "paprsim/types.hpp"

using nlohmann::json;

struct paprsim_config {
  paprsim::ExperimentConfig cfg;
};

struct paprsim_result {
  enum class Kind { ccdf, search, single } kind;
  paprsim::CcdfResult ccdf;
  paprsim::SearchCountResult search;
  paprsim::SingleResult single;
};

namespace {

thread_local std::string t_last_error;

template <class Fn>
paprsim_status guarded(Fn&& fn) {
  try {
    fn();
    t_last_error.clear();
    return PAPRSIM_OK;
  } catch (const paprsim::BudgetExceeded& e) {
    t_last_error = e.what();
    return PAPRSIM_ERR_BUDGET_EXCEEDED;
  } catch (const std::domain_error& e) {
    t_last_error = e.what();
    return PAPRSIM_ERR_DEGENERATE_INPUT;
  } catch (const std::invalid_argument& e) {
    t_last_error = e.what();
    return PAPRSIM_ERR_INVALID_ARGUMENT;
  } catch (const std::out_of_range& e) {
    t_last_error = e.what();
    return PAPRSIM_ERR_INVALID_ARGUMENT;
  } catch (const json::exception& e) {
    t_last_error = e.what();
    return PAPRSIM_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return PAPRSIM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return PAPRSIM_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return PAPRSIM_ERR_INTERNAL;
  }
}

paprsim_status fail_invalid(const char* message) {
  t_last_error = message;
  return PAPRSIM_ERR_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      parts.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

paprsim_status apply_json(paprsim_config* cfg, const json& patch) {
  return guarded([&] { cfg->cfg = paprsim::config_from_json(patch, cfg->cfg); });
}

paprsim::ProgressFn wrap_progress(paprsim_progress_fn progress, void* user) {
  if (!progress) return {};
  return [progress, user](int64_t done, int64_t total) { progress(done, total, user); };
}

std::string db2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string summarize(const paprsim_result& res) {
  std::ostringstream out;
  switch (res.kind) {
    case paprsim_result::Kind::ccdf: {
      out << "ccdf over " << res.ccdf.config.n_symbols << " symbols\n";
      for (size_t mi = 0; mi < res.ccdf.curves.size(); ++mi) {
        const paprsim::CcdfCurve& c = res.ccdf.curves[mi];
        out << "  " << paprsim::method_name(c.method) << ":";
        for (double q : {1e-1, 1e-2, 1e-3, 1e-4}) {
          out << " ccdf" << q << "=";
          try {
            out << db2(paprsim::papr_at_ccdf(c, q)) << "dB";
          } catch (const std::exception&) {
            out << "-";
          }
        }
        out << " avg_evals=" << db2(res.ccdf.avg_evaluations[mi]) << "\n";
      }
      break;
    }
    case paprsim_result::Kind::search: {
      out << "search-count over " << res.search.config.n_symbols << " symbols\n";
      for (const paprsim::SearchStats& st : res.search.stats) {
        out << "  T=" << db2(st.threshold_db) << "dB:";
        for (size_t mi = 0; mi < res.search.methods.size(); ++mi)
          out << " " << paprsim::method_name(res.search.methods[mi]) << "="
              << db2(st.avg_evaluations[mi]);
        out << "\n";
      }
      break;
    }
    case paprsim_result::Kind::single: {
      out << "single block, method " << paprsim::method_name(res.single.method)
          << "\n  baseline " << db2(res.single.baseline.db) << " dB -> best "
          << db2(res.single.opt.best_papr.db) << " dB in "
          << res.single.opt.evaluations << " evaluations\n  phase indices:";
      for (int idx : res.single.opt.best_phase_idx) out << " " << idx;
      out << "\n";
      break;
    }
  }
  return out.str();
}

}  // namespace

extern "C" {

const char* paprsim_version(void) { return PAPRSIM_VERSION; }

const char* paprsim_status_name(paprsim_status status) {
  switch (status) {
    case PAPRSIM_OK: return "ok";
    case PAPRSIM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PAPRSIM_ERR_BUDGET_EXCEEDED: return "budget exceeded";
    case PAPRSIM_ERR_DEGENERATE_INPUT: return "degenerate input";
    case PAPRSIM_ERR_IO: return "i/o error";
    case PAPRSIM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* paprsim_last_error(void) { return t_last_error.c_str(); }

paprsim_config* paprsim_config_new(void) {
  return new (std::nothrow) paprsim_config{};
}

void paprsim_config_free(paprsim_config* cfg) { delete cfg; }

paprsim_status paprsim_config_set_int(paprsim_config* cfg, const char* key,
                                      int64_t value) {
  if (!cfg || !key) return fail_invalid("null argument");
  return apply_json(cfg, json{{key, value}});
}

paprsim_status paprsim_config_set_real(paprsim_config* cfg, const char* key,
                                       double value) {
  if (!cfg || !key) return fail_invalid("null argument");
  return apply_json(cfg, json{{key, value}});
}

paprsim_status paprsim_config_set_str(paprsim_config* cfg, const char* key,
                                      const char* value) {
  if (!cfg || !key || !value) return fail_invalid("null argument");
  return guarded([&] {
    json patch;
    const std::string k = key;
    if (k == "methods") {
      patch[k] = split_commas(value);
    } else if (k == "thresholds_db") {
      json arr = json::array();
      for (const std::string& part : split_commas(value)) {
        size_t pos = 0;
        double v = std::stod(part, &pos);
        if (pos != part.size())
          throw std::invalid_argument("thresholds_db: bad number '" + part + "'");
        arr.push_back(v);
      }
      patch[k] = std::move(arr);
    } else {
      patch[k] = std::string(value);
    }
    cfg->cfg = paprsim::config_from_json(patch, cfg->cfg);
  });
}

paprsim_status paprsim_config_load_json(paprsim_config* cfg, const char* json_text) {
  if (!cfg || !json_text) return fail_invalid("null argument");
  return guarded([&] {
    cfg->cfg = paprsim::config_from_json(json::parse(json_text), cfg->cfg);
  });
}

paprsim_status paprsim_config_to_json(const paprsim_config* cfg, char** out_json) {
  if (!cfg || !out_json) return fail_invalid("null argument");
  return guarded([&] { *out_json = copy_string(paprsim::config_to_json(cfg->cfg).dump(2)); });
}

paprsim_status paprsim_config_validate(const paprsim_config* cfg) {
  if (!cfg) return fail_invalid("null argument");
  return guarded([&] { cfg->cfg.validate(); });
}

paprsim_status paprsim_run_ccdf(const paprsim_config* cfg,
                                paprsim_progress_fn progress, void* user,
                                paprsim_result** out) {
  if (!cfg || !out) return fail_invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    auto res = std::make_unique<paprsim_result>();
    res->kind = paprsim_result::Kind::ccdf;
    res->ccdf = paprsim::run_ccdf(cfg->cfg, wrap_progress(progress, user));
    *out = res.release();
  });
}

paprsim_status paprsim_run_search_count(const paprsim_config* cfg,
                                        paprsim_progress_fn progress, void* user,
                                        paprsim_result** out) {
  if (!cfg || !out) return fail_invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    auto res = std::make_unique<paprsim_result>();
    res->kind = paprsim_result::Kind::search;
    res->search = paprsim::run_search_count(cfg->cfg, cfg->cfg.thresholds_db,
                                            wrap_progress(progress, user));
    *out = res.release();
  });
}

paprsim_status paprsim_run_single(const paprsim_config* cfg, const char* method,
                                  paprsim_result** out) {
  if (!cfg || !method || !out) return fail_invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    auto res = std::make_unique<paprsim_result>();
    res->kind = paprsim_result::Kind::single;
    res->single = paprsim::run_single(cfg->cfg, paprsim::method_from_name(method));
    *out = res.release();
  });
}

int paprsim_selftest(int verbose) {
  if (verbose) return paprsim::selftest(std::cout, true);
  std::ostringstream sink;
  return paprsim::selftest(sink, false);
}

void paprsim_result_free(paprsim_result* res) { delete res; }

paprsim_status paprsim_result_to_json(const paprsim_result* res, char** out) {
  if (!res || !out) return fail_invalid("null argument");
  return guarded([&] {
    switch (res->kind) {
      case paprsim_result::Kind::ccdf:
        *out = copy_string(paprsim::to_json(res->ccdf).dump(2));
        break;
      case paprsim_result::Kind::search:
        *out = copy_string(paprsim::to_json(res->search).dump(2));
        break;
      case paprsim_result::Kind::single:
        *out = copy_string(paprsim::to_json(res->single).dump(2));
        break;
    }
  });
}

paprsim_status paprsim_result_to_csv(const paprsim_result* res, char** out) {
  if (!res || !out) return fail_invalid("null argument");
  return guarded([&] {
    switch (res->kind) {
      case paprsim_result::Kind::ccdf:
        *out = copy_string(paprsim::to_csv(res->ccdf));
        break;
      case paprsim_result::Kind::search:
        *out = copy_string(paprsim::to_csv(res->search));
        break;
      case paprsim_result::Kind::single:
        *out = copy_string(paprsim::to_csv(res->single));
        break;
    }
  });
}

paprsim_status paprsim_result_summary(const paprsim_result* res, char** out) {
  if (!res || !out) return fail_invalid("null argument");
  return guarded([&] { *out = copy_string(summarize(*res)); });
}

void paprsim_string_free(char* s) { delete[] s; }

}  // extern "C"
