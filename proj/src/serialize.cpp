#include "paprsim/serialize.hpp"

#include <cstdio>
#include <stdexcept>

namespace paprsim {

using nlohmann::json;

namespace {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

json methods_to_json(const std::vector<Method>& methods) {
  json arr = json::array();
  for (Method m : methods) arr.push_back(method_name(m));
  return arr;
}

template <class T>
T key_as(const json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument("config key '" + key + "': " + e.what());
  }
}

}  // namespace

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["n_subcarriers"] = cfg.n_subcarriers;
  j["m_subblocks"] = cfg.m_subblocks;
  j["w_alphabet"] = cfg.w_alphabet;
  j["oversampling"] = cfg.oversampling;
  j["n_symbols"] = cfg.n_symbols;
  j["methods"] = methods_to_json(cfg.methods);
  j["scheme"] = scheme_name(cfg.scheme);
  j["rho"] = cfg.pmce.rho;
  j["alpha"] = cfg.pmce.alpha;
  j["samples"] = cfg.pmce.samples_j;
  j["max_iterations"] = cfg.pmce.max_iterations;
  j["convergence_eps"] = cfg.pmce.convergence_eps;
  j["master_seed"] = cfg.master_seed;
  j["grid_min_db"] = cfg.grid_min_db;
  j["grid_max_db"] = cfg.grid_max_db;
  j["grid_step_db"] = cfg.grid_step_db;
  j["opts_budget_cap"] = cfg.opts_budget_cap;
  j["thresholds_db"] = cfg.thresholds_db;
  j["search_eval_budget"] = cfg.search_eval_budget;
  j["workers"] = cfg.workers;
  return j;
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig base) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    if (key == "n_subcarriers")
      base.n_subcarriers = key_as<int>(j, key);
    else if (key == "m_subblocks")
      base.m_subblocks = key_as<int>(j, key);
    else if (key == "w_alphabet")
      base.w_alphabet = key_as<int>(j, key);
    else if (key == "oversampling")
      base.oversampling = key_as<int>(j, key);
    else if (key == "n_symbols")
      base.n_symbols = key_as<int64_t>(j, key);
    else if (key == "methods") {
      std::vector<Method> methods;
      for (const std::string& name : key_as<std::vector<std::string>>(j, key))
        methods.push_back(method_from_name(name));
      base.methods = std::move(methods);
    } else if (key == "scheme")
      base.scheme = scheme_from_name(key_as<std::string>(j, key));
    else if (key == "rho")
      base.pmce.rho = key_as<double>(j, key);
    else if (key == "alpha")
      base.pmce.alpha = key_as<double>(j, key);
    else if (key == "samples")
      base.pmce.samples_j = key_as<int>(j, key);
    else if (key == "max_iterations")
      base.pmce.max_iterations = key_as<int>(j, key);
    else if (key == "convergence_eps")
      base.pmce.convergence_eps = key_as<double>(j, key);
    else if (key == "master_seed")
      base.master_seed = key_as<uint64_t>(j, key);
    else if (key == "grid_min_db")
      base.grid_min_db = key_as<double>(j, key);
    else if (key == "grid_max_db")
      base.grid_max_db = key_as<double>(j, key);
    else if (key == "grid_step_db")
      base.grid_step_db = key_as<double>(j, key);
    else if (key == "opts_budget_cap")
      base.opts_budget_cap = key_as<uint64_t>(j, key);
    else if (key == "thresholds_db")
      base.thresholds_db = key_as<std::vector<double>>(j, key);
    else if (key == "search_eval_budget")
      base.search_eval_budget = key_as<uint64_t>(j, key);
    else if (key == "workers")
      base.workers = key_as<int>(j, key);
    else
      throw std::invalid_argument("unknown config key '" + key + "'");
  }
  return base;
}

json to_json(const CcdfResult& res) {
  json j;
  j["experiment"] = "ccdf";
  j["config"] = config_to_json(res.config);
  json curves = json::array();
  for (const CcdfCurve& c : res.curves) {
    json jc;
    jc["method"] = method_name(c.method);
    jc["n_symbols"] = c.n_symbols;
    jc["grid_db"] = c.grid_db;
    jc["exceed"] = c.exceed;
    jc["prob"] = c.prob;
    curves.push_back(std::move(jc));
  }
  j["curves"] = std::move(curves);
  json avg = json::object();
  for (size_t mi = 0; mi < res.curves.size(); ++mi)
    avg[method_name(res.config.methods[mi])] = res.avg_evaluations[mi];
  j["avg_evaluations"] = std::move(avg);
  return j;
}

json to_json(const SearchCountResult& res) {
  json j;
  j["experiment"] = "search-count";
  j["config"] = config_to_json(res.config);
  j["methods"] = methods_to_json(res.methods);
  json stats = json::array();
  for (const SearchStats& st : res.stats) {
    json js;
    js["threshold_db"] = st.threshold_db;
    js["n_symbols"] = st.n_symbols;
    json avg = json::object(), tot = json::object();
    for (size_t mi = 0; mi < res.methods.size(); ++mi) {
      avg[method_name(res.methods[mi])] = st.avg_evaluations[mi];
      tot[method_name(res.methods[mi])] = st.total_evaluations[mi];
    }
    js["avg_evaluations"] = std::move(avg);
    js["total_evaluations"] = std::move(tot);
    stats.push_back(std::move(js));
  }
  j["stats"] = std::move(stats);
  return j;
}

json to_json(const SingleResult& res) {
  json j;
  j["experiment"] = "single";
  j["config"] = config_to_json(res.config);
  j["method"] = method_name(res.method);
  j["partition_assignment"] = res.partition.assignment;
  j["baseline_papr_db"] = res.baseline.db;
  json best;
  best["phase_idx"] = res.opt.best_phase_idx;
  best["papr_db"] = res.opt.best_papr.db;
  best["papr_ratio"] = res.opt.best_papr.ratio;
  best["evaluations"] = res.opt.evaluations;
  best["iterations"] = res.opt.iterations;
  j["best"] = std::move(best);
  j["eval_db"] = res.eval_db;
  return j;
}

std::string to_csv(const CcdfResult& res) {
  std::string out = "papr0_db";
  for (Method m : res.config.methods) {
    out += ',';
    out += method_name(m);
  }
  out += '\n';
  const size_t n_grid = res.curves.empty() ? 0 : res.curves[0].grid_db.size();
  for (size_t i = 0; i < n_grid; ++i) {
    out += fmt_g(res.curves[0].grid_db[i]);
    for (const CcdfCurve& c : res.curves) {
      out += ',';
      out += fmt_g(c.prob[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_csv(const SearchCountResult& res) {
  std::string out = "threshold_db";
  for (Method m : res.methods) {
    out += ',';
    out += method_name(m);
  }
  out += '\n';
  for (const SearchStats& st : res.stats) {
    out += fmt_g(st.threshold_db);
    for (double v : st.avg_evaluations) {
      out += ',';
      out += fmt_g(v);
    }
    out += '\n';
  }
  return out;
}

std::string to_csv(const SingleResult& res) {
  std::string out = "eval_index,papr_db\n";
  for (size_t i = 0; i < res.eval_db.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += fmt_g(res.eval_db[i]);
    out += '\n';
  }
  return out;
}

}  // namespace paprsim
