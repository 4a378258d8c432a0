// cameo: sample distributions of optimal policies with Metropolis chains.
//
//   cameo sample    one chain -> chain.csv, traces.csv, summary.csv, manifest.json
//   cameo sweep     the same over several seeds, one directory per seed
//   cameo diagnose  similarity / visitation CSVs from a stored run
//   cameo reproduce the four-environment reference suite
//   cameo selftest  quick oracle and invariant checks

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cameo/chain_io.hpp"
#include "cameo/config.hpp"
#include "cameo/diagnostics.hpp"
#include "cameo/error.hpp"
#include "cameo/experiments.hpp"
#include "cameo/kernels.hpp"
#include "cameo/sampler.hpp"
#include "selftest.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct RunFlags {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::string config_file;
  std::string out;
};

void add_run_flags(CLI::App* cmd, RunFlags& flags) {
  for (const std::string& key : cameo::setting_keys()) {
    flags.options[key] = cmd->add_option("--" + key, flags.values[key]);
  }
  cmd->add_option("--config", flags.config_file, "flat key=value config file");
  cmd->add_option("--out", flags.out, "output directory");
}

cameo::Settings collect_settings(const RunFlags& flags) {
  cameo::Settings file;
  if (!flags.config_file.empty()) file = cameo::read_settings_file(flags.config_file);
  cameo::Settings cli;
  for (const auto& [key, opt] : flags.options) {
    if (opt->count() > 0) cli[key] = flags.values.at(key);
  }
  return cameo::merge_settings(file, cli);
}

fs::path output_root() {
  const char* env = std::getenv("CAMEO_OUT_DIR");
  return env != nullptr && *env != '\0' ? fs::path(env) : fs::path("runs");
}

fs::path default_run_dir(const cameo::RunConfig& rc) {
  return output_root() / (rc.env + "_" + cameo::to_string(rc.sampler.mode) + "_s" +
                          std::to_string(rc.sampler.seed));
}

void ensure_writable(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path probe = dir / ".write_probe";
  std::ofstream out(probe);
  if (ec || !out) throw cameo::InputError("output directory " + dir.string() + " is not writable");
  out.close();
  fs::remove(probe, ec);
}

json settings_json(const cameo::Settings& s) {
  json j = json::object();
  for (const auto& [k, v] : s) j[k] = v;
  return j;
}

void write_manifest(const fs::path& dir, const cameo::RunConfig& rc, const std::vector<std::string>& artifacts,
                    double seconds, const std::string& command) {
  json m;
  m["command"] = command;
  m["config"] = settings_json(cameo::to_settings(rc));
  m["artifacts"] = artifacts;
  m["wall_clock_seconds"] = seconds;
  m["versions"] = {{"cameo", kVersion},
                   {"kernels", std::string(cameo::kernels::isa_name(cameo::kernels::active().isa))},
                   {"compiler", __VERSION__}};
  std::ofstream out(dir / "manifest.json");
  out << m.dump(2) << '\n';
}

cameo::RunConfig load_manifest_config(const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  std::ifstream in(path);
  if (!in) throw cameo::NotFoundError("no manifest at " + path.string());
  json m;
  try {
    in >> m;
  } catch (const json::exception& e) {
    throw cameo::ParseError("manifest: " + std::string(e.what()), 0);
  }
  cameo::Settings s;
  for (auto& [k, v] : m.at("config").items()) s[k] = v.get<std::string>();
  return cameo::resolve_config(s);
}

struct RunResult {
  cameo::Chain chain;
  cameo::ChainSummary summary;
};

RunResult run_and_persist(const cameo::RunConfig& rc, const fs::path& dir, const std::string& command) {
  ensure_writable(dir);
  const auto start = std::chrono::steady_clock::now();
  const auto env = cameo::make_environment(rc.env, rc.env_options);
  RunResult r;
  r.chain = cameo::run_chain(rc.sampler, *env);
  r.summary = cameo::chain_summary(r.chain);
  cameo::persist_chain(r.chain, dir / "chain.csv");
  cameo::write_traces_csv(r.summary, r.chain, dir / "traces.csv");
  cameo::write_summary_csv({r.summary.acceptance_rate, r.summary.best_mean_return, r.summary.retained_unique,
                            rc.sampler.iterations, rc.sampler.episodes, rc.sampler.seed},
                           dir / "summary.csv");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(dir, rc, {"chain.csv", "traces.csv", "summary.csv"}, secs, command);
  return r;
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

int cmd_sample(const RunFlags& flags, const std::string& command) {
  const cameo::RunConfig rc = cameo::resolve_config(collect_settings(flags));
  const fs::path dir = flags.out.empty() ? default_run_dir(rc) : fs::path(flags.out);
  const RunResult r = run_and_persist(rc, dir, command);
  std::cout << "env=" << rc.env << " mode=" << cameo::to_string(rc.sampler.mode)
            << " K=" << rc.sampler.iterations << " N=" << rc.sampler.episodes << " seed=" << rc.sampler.seed
            << "\nacceptance_rate=" << cameo::format_real(r.summary.acceptance_rate)
            << "\nbest_mean_return=" << cameo::format_real(r.summary.best_mean_return)
            << "\nretained_unique=" << r.summary.retained_unique << "\nout=" << dir.string() << '\n';
  return 0;
}

int cmd_sweep(const RunFlags& flags, int seeds, int jobs, const std::string& command) {
  if (seeds < 1) throw cameo::ConfigError("--seeds must be at least 1");
  const cameo::Settings base = collect_settings(flags);
  const cameo::RunConfig first = cameo::resolve_config(base);
  const fs::path root = flags.out.empty() ? output_root() / (first.env + "_" + cameo::to_string(first.sampler.mode) + "_sweep")
                                          : fs::path(flags.out);
  ensure_writable(root);
  if (jobs < 1) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  std::vector<cameo::RunConfig> configs;
  for (int i = 0; i < seeds; ++i) {
    cameo::Settings s = base;
    s["seed"] = std::to_string(first.sampler.seed + static_cast<std::uint64_t>(i));
    configs.push_back(cameo::resolve_config(s));
  }
  std::vector<cameo::ChainSummary> summaries(configs.size());
  for (std::size_t begin = 0; begin < configs.size(); begin += static_cast<std::size_t>(jobs)) {
    std::vector<std::future<cameo::ChainSummary>> batch;
    for (std::size_t i = begin; i < std::min(configs.size(), begin + static_cast<std::size_t>(jobs)); ++i) {
      batch.push_back(std::async(std::launch::async, [&, i] {
        const fs::path dir = root / ("seed_" + std::to_string(configs[i].sampler.seed));
        return run_and_persist(configs[i], dir, command).summary;
      }));
    }
    for (std::size_t j = 0; j < batch.size(); ++j) summaries[begin + j] = batch[j].get();
  }
  std::ofstream out(root / "sweep.csv");
  out << "seed,acceptance_rate,best_mean_return,retained_unique\n";
  for (std::size_t i = 0; i < configs.size(); ++i) {
    out << configs[i].sampler.seed << ',' << cameo::format_real(summaries[i].acceptance_rate) << ','
        << cameo::format_real(summaries[i].best_mean_return) << ',' << summaries[i].retained_unique << '\n';
    std::cout << "seed=" << configs[i].sampler.seed << " acceptance_rate=" << cameo::format_real(summaries[i].acceptance_rate)
              << " best_mean_return=" << cameo::format_real(summaries[i].best_mean_return) << '\n';
  }
  return 0;
}

struct DiagnoseFlags {
  std::string dir;
  bool similarity = false;
  int visitation = 0;
  int episodes_per_policy = 10;
  int burn_in = -1;
  bool all_states = false;
  std::uint64_t seed = 0;
};

int cmd_diagnose(const DiagnoseFlags& f) {
  const fs::path dir(f.dir);
  const cameo::Chain chain = cameo::load_chain(dir);
  if (chain.empty()) throw cameo::InputError("chain in " + dir.string() + " has no records");
  const cameo::RunConfig rc = load_manifest_config(dir);
  const int burn_in = f.burn_in >= 0 ? f.burn_in : cameo::default_burn_in(chain.size());

  const cameo::ChainSummary summary = cameo::chain_summary(chain);
  cameo::write_traces_csv(summary, chain, dir / "traces.csv");
  std::cout << "acceptance_rate=" << cameo::format_real(summary.acceptance_rate)
            << "\nbest_mean_return=" << cameo::format_real(summary.best_mean_return) << '\n';

  if (f.similarity) {
    const auto m = cameo::similarity_matrix(chain, burn_in, !f.all_states);
    cameo::write_similarity_csv(m, dir / "similarity.csv");
    std::cout << "similarity_n=" << m.n << "\nmean_off_diagonal=" << cameo::format_real(m.mean_off_diagonal()) << '\n';
  }
  if (f.visitation > 0) {
    const auto env = cameo::make_environment(rc.env, rc.env_options);
    std::vector<cameo::ParamVector> retained = cameo::retained_thetas(chain, burn_in, true);
    std::vector<cameo::ParamVector> picked;
    const std::size_t want = std::min(retained.size(), static_cast<std::size_t>(f.visitation));
    // Evenly spaced over the retained sequence, latest last.
    for (std::size_t i = 0; i < want; ++i) {
      picked.push_back(retained[retained.size() - 1 - (i * retained.size()) / want]);
    }
    const auto grid = cameo::aggregate_visitation(picked, *env, f.episodes_per_policy, f.seed, rc.sampler.hidden);
    cameo::write_visitation_csv(grid, dir / "visitation.csv");
    std::cout << "visitation_policies=" << picked.size() << '\n';
  }
  return 0;
}

int cmd_reproduce(const std::string& out, int seeds, const std::vector<std::string>& envs, std::uint64_t seed0) {
  const fs::path root = out.empty() ? output_root() / "reproduce" : fs::path(out);
  ensure_writable(root);
  std::ofstream table(root / "reproduce.csv");
  table << "env,mode,seed,acceptance_rate,best_chain_mean_return,best_fresh_mean_return,best_fresh_goal_rate\n";
  for (const std::string& name : envs) {
    for (int i = 0; i < seeds; ++i) {
      const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(i);
      const cameo::RunConfig rc = cameo::reference_config(name, seed);
      const fs::path dir = root / name / ("seed_" + std::to_string(seed));
      const RunResult r = run_and_persist(rc, dir, "reproduce");
      const auto env = cameo::make_environment(rc.env, rc.env_options);
      const auto best = cameo::best_retained(r.chain, *env, 5, 20, cameo::derive_seed(seed, {0xe7a1}), rc.sampler.hidden);
      table << name << ',' << cameo::to_string(rc.sampler.mode) << ',' << seed << ','
            << cameo::format_real(r.summary.acceptance_rate) << ',' << cameo::format_real(r.summary.best_mean_return)
            << ',' << cameo::format_real(best.evaluation.mean_return) << ','
            << cameo::format_real(best.evaluation.goal_rate) << '\n';
      std::cout << name << " seed=" << seed << " acceptance=" << r.summary.acceptance_rate
                << " best_fresh_mean_return=" << best.evaluation.mean_return << std::endl;
    }
  }
  return 0;
}

void print_error(std::string_view kind, const std::string& message) {
  json rec = {{"error", {{"kind", std::string(kind)}, {"message", message}}}};
  std::cerr << rec.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metropolis sampling of optimal policies (plain and curiosity-augmented)"};
  app.require_subcommand(1);

  RunFlags sample_flags;
  auto* sample = app.add_subcommand("sample", "run one chain");
  add_run_flags(sample, sample_flags);

  RunFlags sweep_flags;
  int sweep_seeds = 5;
  int sweep_jobs = 0;
  auto* sweep = app.add_subcommand("sweep", "run one chain per seed (seed, seed+1, ...)");
  add_run_flags(sweep, sweep_flags);
  sweep->add_option("--seeds", sweep_seeds, "number of seeds");
  sweep->add_option("--jobs", sweep_jobs, "concurrent chains (default: hardware threads)");

  DiagnoseFlags diag;
  auto* diagnose = app.add_subcommand("diagnose", "post-process a stored run");
  diagnose->add_option("dir", diag.dir, "run directory")->required();
  diagnose->add_flag("--similarity", diag.similarity, "write similarity.csv");
  diagnose->add_option("--visitation", diag.visitation, "aggregate visitation over this many retained policies");
  diagnose->add_option("--episodes-per-policy", diag.episodes_per_policy);
  diagnose->add_option("--burn-in", diag.burn_in, "records to skip (default 10% of K)");
  diagnose->add_flag("--all-states", diag.all_states, "keep repeated states in the similarity matrix");
  diagnose->add_option("--seed", diag.seed, "seed for visitation rollouts");

  std::string repro_out;
  int repro_seeds = 5;
  std::uint64_t repro_seed0 = 1;
  std::vector<std::string> repro_envs{"cartpole", "acrobot", "gridworld", "cliff"};
  auto* reproduce = app.add_subcommand("reproduce", "reference suite over all four environments");
  reproduce->add_option("--out", repro_out);
  reproduce->add_option("--seeds", repro_seeds);
  reproduce->add_option("--first-seed", repro_seed0);
  reproduce->add_option("--envs", repro_envs)->delimiter(',');

  auto* selftest = app.add_subcommand("selftest", "oracle and invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  const std::string command = join_args(argc, argv);
  try {
    if (*sample) return cmd_sample(sample_flags, command);
    if (*sweep) return cmd_sweep(sweep_flags, sweep_seeds, sweep_jobs, command);
    if (*diagnose) return cmd_diagnose(diag);
    if (*reproduce) return cmd_reproduce(repro_out, repro_seeds, repro_envs, repro_seed0);
    if (*selftest) return cameo::tools::run_selftest(std::cout) ? 0 : 1;
  } catch (const cameo::ConfigError& e) {
    print_error(e.kind(), e.what());
    return 2;
  } catch (const cameo::Error& e) {
    print_error(e.kind(), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 0;
}
