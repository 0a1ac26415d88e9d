#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "paprsim.h"

namespace {

// Registry mapping CLI flags one-to-one onto config keys; flags that were
// actually supplied are applied over (and thus override) any config file.
struct ConfigFlags {
  std::map<std::string, int64_t> ints;
  std::map<std::string, double> reals;
  std::map<std::string, std::string> strs;
  struct Applier {
    CLI::Option* opt;
    std::function<paprsim_status(paprsim_config*)> apply;
  };
  std::vector<Applier> appliers;

  void add_int(CLI::App& cmd, const std::string& names, const std::string& key,
               const std::string& desc) {
    int64_t& slot = ints[key];
    CLI::Option* opt = cmd.add_option(names, slot, desc);
    appliers.push_back({opt, [&slot, key](paprsim_config* cfg) {
                          return paprsim_config_set_int(cfg, key.c_str(), slot);
                        }});
  }
  void add_real(CLI::App& cmd, const std::string& names, const std::string& key,
                const std::string& desc) {
    double& slot = reals[key];
    CLI::Option* opt = cmd.add_option(names, slot, desc);
    appliers.push_back({opt, [&slot, key](paprsim_config* cfg) {
                          return paprsim_config_set_real(cfg, key.c_str(), slot);
                        }});
  }
  void add_str(CLI::App& cmd, const std::string& names, const std::string& key,
               const std::string& desc) {
    std::string& slot = strs[key];
    CLI::Option* opt = cmd.add_option(names, slot, desc);
    appliers.push_back({opt, [&slot, key](paprsim_config* cfg) {
                          return paprsim_config_set_str(cfg, key.c_str(), slot.c_str());
                        }});
  }

  bool apply(paprsim_config* cfg, std::string& offending_flag) {
    for (const Applier& a : appliers) {
      if (a.opt->count() == 0) continue;
      if (a.apply(cfg) != PAPRSIM_OK) {
        offending_flag = a.opt->get_name();
        return false;
      }
    }
    return true;
  }
};

struct CommonArgs {
  std::string config_path;
  bool print_config = false;
  std::string out_dir;
  std::string format = "both";
  ConfigFlags flags;
};

void register_config_flags(CLI::App& cmd, CommonArgs& args, bool experiment_output) {
  ConfigFlags& f = args.flags;
  f.add_int(cmd, "-n,--n,--n-subcarriers", "n_subcarriers", "Subcarriers per OFDM block");
  f.add_int(cmd, "-m,--m,--m-subblocks", "m_subblocks", "Number of PTS sub-blocks");
  f.add_int(cmd, "-w,--w,--w-alphabet", "w_alphabet", "Phase alphabet size");
  f.add_int(cmd, "-l,--l,--oversampling", "oversampling", "Time-domain oversampling factor");
  f.add_int(cmd, "--n-symbols,--symbols", "n_symbols", "Number of OFDM symbols");
  f.add_str(cmd, "--methods", "methods",
            "Comma-separated methods (none,opts,ipts,ce,pmce)");
  f.add_str(cmd, "--scheme", "scheme", "Partition scheme (random,adjacent,interleaved)");
  f.add_real(cmd, "--rho", "rho", "CE/PMCE rarity parameter, in (0,1)");
  f.add_real(cmd, "--alpha", "alpha", "CE/PMCE smoothing parameter, in (0,1]");
  f.add_int(cmd, "-j,--samples", "samples", "CE/PMCE samples per iteration");
  f.add_int(cmd, "--max-iterations", "max_iterations", "CE/PMCE iteration cap");
  f.add_real(cmd, "--convergence-eps", "convergence_eps",
             "CE/PMCE convergence distance to {0,1}");
  f.add_int(cmd, "--master-seed,--seed", "master_seed", "Master seed");
  f.add_real(cmd, "--grid-min-db", "grid_min_db", "CCDF grid start (dB)");
  f.add_real(cmd, "--grid-max-db", "grid_max_db", "CCDF grid end (dB)");
  f.add_real(cmd, "--grid-step-db", "grid_step_db", "CCDF grid step (dB)");
  f.add_int(cmd, "--opts-budget-cap", "opts_budget_cap",
            "Refuse exhaustive search beyond this many evaluations");
  f.add_str(cmd, "--thresholds-db,--thresholds", "thresholds_db",
            "Comma-separated search-count thresholds (dB)");
  f.add_int(cmd, "--search-eval-budget", "search_eval_budget",
            "Cap per-symbol search evaluations in search-count (0 = free-running)");
  f.add_int(cmd, "--workers", "workers", "Worker threads (0 = hardware parallelism)");

  cmd.add_option("--config", args.config_path,
                 "JSON config file (flags override file values)");
  cmd.add_flag("--print-config", args.print_config, "Print the resolved config");
  if (experiment_output) {
    const char* env = std::getenv("PAPRSIM_OUT_DIR");
    args.out_dir = env ? env : ".";
    cmd.add_option("--out-dir", args.out_dir,
                   "Output directory (default $PAPRSIM_OUT_DIR or .)");
    cmd.add_option("--format", args.format, "Output files to write")
        ->check(CLI::IsMember({"csv", "json", "both"}));
  }
}

int fail(const std::string& message) {
  std::fprintf(stderr, "error: %s\n", message.c_str());
  return 1;
}

// Builds the final config: defaults, then config file, then explicit flags.
paprsim_config* resolve_config(CommonArgs& args, std::string& error) {
  paprsim_config* cfg = paprsim_config_new();
  if (!cfg) {
    error = "out of memory";
    return nullptr;
  }
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path, std::ios::binary);
    if (!in) {
      error = "cannot open config file '" + args.config_path + "'";
      paprsim_config_free(cfg);
      return nullptr;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    if (paprsim_config_load_json(cfg, buf.str().c_str()) != PAPRSIM_OK) {
      error = "config file '" + args.config_path + "': " + paprsim_last_error();
      paprsim_config_free(cfg);
      return nullptr;
    }
  }
  std::string flag;
  if (!args.flags.apply(cfg, flag)) {
    error = flag + ": " + paprsim_last_error();
    paprsim_config_free(cfg);
    return nullptr;
  }
  if (paprsim_config_validate(cfg) != PAPRSIM_OK) {
    error = paprsim_last_error();
    paprsim_config_free(cfg);
    return nullptr;
  }
  return cfg;
}

std::string config_json_text(const paprsim_config* cfg) {
  char* text = nullptr;
  if (paprsim_config_to_json(cfg, &text) != PAPRSIM_OK) return "{}";
  std::string out = text;
  paprsim_string_free(text);
  return out;
}

bool write_file_atomic(const std::string& path, const std::string& content,
                       std::string& error) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) {
      error = "cannot write '" + tmp + "'";
      std::remove(tmp.c_str());
      return false;
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    error = "cannot rename '" + tmp + "' to '" + path + "'";
    std::remove(tmp.c_str());
    return false;
  }
  return true;
}

void progress_cb(int64_t done, int64_t total, void* user) {
  const char* label = static_cast<const char*>(user);
  std::fprintf(stderr, "\r%s: %" PRId64 "/%" PRId64 " symbols", label, done, total);
  if (done == total) std::fprintf(stderr, "\n");
  std::fflush(stderr);
}

int write_and_report(paprsim_result* result, const CommonArgs& args,
                     const std::string& experiment, uint64_t master_seed) {
  std::error_code ec;
  std::filesystem::create_directories(args.out_dir, ec);
  if (ec) return fail("cannot create output directory '" + args.out_dir + "'");
  const std::string base =
      args.out_dir + "/" + experiment + "_" + std::to_string(master_seed);

  std::string error;
  if (args.format == "csv" || args.format == "both") {
    char* csv = nullptr;
    if (paprsim_result_to_csv(result, &csv) != PAPRSIM_OK)
      return fail(paprsim_last_error());
    const bool ok = write_file_atomic(base + ".csv", csv, error);
    paprsim_string_free(csv);
    if (!ok) return fail(error);
    std::printf("wrote %s.csv\n", base.c_str());
  }
  if (args.format == "json" || args.format == "both") {
    char* js = nullptr;
    if (paprsim_result_to_json(result, &js) != PAPRSIM_OK)
      return fail(paprsim_last_error());
    const bool ok = write_file_atomic(base + ".json", std::string(js) + "\n", error);
    paprsim_string_free(js);
    if (!ok) return fail(error);
    std::printf("wrote %s.json\n", base.c_str());
  }

  char* summary = nullptr;
  if (paprsim_result_summary(result, &summary) == PAPRSIM_OK) {
    std::fputs(summary, stdout);
    paprsim_string_free(summary);
  }
  return 0;
}

int run_experiment(CommonArgs& args, const std::string& experiment) {
  std::string error;
  paprsim_config* cfg = resolve_config(args, error);
  if (!cfg) return fail(error);
  const std::string cfg_json = config_json_text(cfg);
  if (args.print_config) std::printf("%s\n", cfg_json.c_str());
  const uint64_t master_seed = nlohmann::json::parse(cfg_json)["master_seed"];

  const bool show_progress = isatty(fileno(stderr)) != 0;
  paprsim_progress_fn progress = show_progress ? progress_cb : nullptr;
  void* user = const_cast<char*>(experiment.c_str());

  paprsim_result* result = nullptr;
  paprsim_status st =
      experiment == "ccdf"
          ? paprsim_run_ccdf(cfg, progress, user, &result)
          : paprsim_run_search_count(cfg, progress, user, &result);
  if (st != PAPRSIM_OK) {
    const int rc = fail(paprsim_last_error());
    paprsim_config_free(cfg);
    return rc;
  }
  const int rc = write_and_report(result, args, experiment, master_seed);
  paprsim_result_free(result);
  paprsim_config_free(cfg);
  return rc;
}

int run_single(CommonArgs& args, const std::string& method) {
  std::string error;
  paprsim_config* cfg = resolve_config(args, error);
  if (!cfg) return fail(error);
  if (args.print_config) std::printf("%s\n", config_json_text(cfg).c_str());

  paprsim_result* result = nullptr;
  if (paprsim_run_single(cfg, method.c_str(), &result) != PAPRSIM_OK) {
    const int rc = fail(paprsim_last_error());
    paprsim_config_free(cfg);
    return rc;
  }

  char* js = nullptr;
  if (paprsim_result_to_json(result, &js) != PAPRSIM_OK) {
    const int rc = fail(paprsim_last_error());
    paprsim_result_free(result);
    paprsim_config_free(cfg);
    return rc;
  }
  const nlohmann::json j = nlohmann::json::parse(js);
  paprsim_string_free(js);

  const int m = j["config"]["m_subblocks"];
  const int w = j["config"]["w_alphabet"];
  std::printf("single block: N=%d M=%d W=%d scheme=%s master_seed=%s\n",
              j["config"]["n_subcarriers"].get<int>(), m, w,
              j["config"]["scheme"].get<std::string>().c_str(),
              j["config"]["master_seed"].dump().c_str());
  std::printf("baseline PAPR: %.4f dB\n", j["baseline_papr_db"].get<double>());

  if (method == "opts") {
    const auto& eval_db = j["eval_db"];
    std::printf("candidates (lexicographic order):\n");
    for (size_t i = 0; i < eval_db.size(); ++i) {
      std::string digits;
      uint64_t rest = i;
      for (int k = 0; k < m; ++k) {
        digits.insert(digits.begin(), static_cast<char>('0' + rest % w));
        rest /= w;
      }
      std::printf("  %s  %8.4f dB\n", digits.c_str(), eval_db[i].get<double>());
    }
  }

  std::string digits;
  for (const auto& idx : j["best"]["phase_idx"]) digits += idx.dump();
  std::printf("best: phase indices %s, PAPR %.4f dB, %llu evaluations\n",
              digits.c_str(), j["best"]["papr_db"].get<double>(),
              static_cast<unsigned long long>(j["best"]["evaluations"].get<uint64_t>()));

  paprsim_result_free(result);
  paprsim_config_free(cfg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"paprsim: OFDM PAPR reduction via PTS phase optimization "
               "(exhaustive, iterative flipping, CE, PMCE)"};
  app.require_subcommand(1);
  app.set_version_flag("--version", paprsim_version());

  CommonArgs ccdf_args, search_args, single_args;
  CLI::App* ccdf = app.add_subcommand("ccdf", "Estimate per-method PAPR CCDF curves");
  register_config_flags(*ccdf, ccdf_args, true);

  CLI::App* search = app.add_subcommand(
      "search-count", "Average evaluations until a threshold PAPR is reached");
  register_config_flags(*search, search_args, true);

  CLI::App* single = app.add_subcommand(
      "single", "Optimize one seeded block and print the result");
  register_config_flags(*single, single_args, false);
  std::string method = "pmce";
  single->add_option("--method", method, "Method to run (none,opts,ipts,ce,pmce)");

  CLI::App* selftest = app.add_subcommand("selftest", "Run the embedded invariant suite");
  bool quiet = false;
  selftest->add_flag("-q,--quiet", quiet, "Only report failures");

  CLI11_PARSE(app, argc, argv);

  if (ccdf->parsed()) return run_experiment(ccdf_args, "ccdf");
  if (search->parsed()) return run_experiment(search_args, "search-count");
  if (single->parsed()) return run_single(single_args, method);
  return paprsim_selftest(quiet ? 0 : 1) == 0 ? 0 : 1;
}
