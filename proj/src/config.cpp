#include "cameo/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "cameo/chain_io.hpp"
#include "cameo/error.hpp"

namespace cameo {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double as_real(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError("invalid numeric value for " + key + ": '" + v + "'");
  }
  return out;
}

long long as_int(const std::string& key, const std::string& v) {
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError("invalid integer value for " + key + ": '" + v + "'");
  }
  return out;
}

std::uint64_t as_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError("invalid seed value for " + key + ": '" + v + "'");
  }
  return out;
}

bool as_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("invalid boolean for " + key + ": '" + v + "'");
}

std::vector<int> as_cells(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ';')) {
    item = trim(item);
    if (!item.empty()) out.push_back(static_cast<int>(as_int(key, item)));
  }
  return out;
}

}  // namespace

const std::vector<std::string>& setting_keys() {
  static const std::vector<std::string> keys{
      "env",          "mode",           "iters",        "episodes",          "sigma-p",
      "init-sd",      "temperature",    "mu",           "gamma",             "seed",
      "bootstrap",    "prior",          "hidden",       "td-form",           "reuse-current",
      "curiosity-lr", "curiosity-hidden", "curiosity-updates", "loss-reduction", "episode-cap",
      "pit-cells",    "pit-terminates"};
  return keys;
}

Settings parse_settings(const std::string& text) {
  Settings out;
  std::stringstream ss(text);
  std::string line;
  long n = 0;
  while (std::getline(ss, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("line " + std::to_string(n) + ": expected key=value", n);
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError("line " + std::to_string(n) + ": empty key", n);
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

Settings read_settings_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_settings(buf.str());
}

Settings merge_settings(const Settings& base, const Settings& overrides) {
  Settings out = base;
  for (const auto& [k, v] : overrides) out[k] = v;
  return out;
}

double default_temperature(const std::string& env) {
  if (env == "cartpole") return 4.0;
  if (env == "acrobot") return 10.0;
  return 1.0;
}

std::string to_string(SamplerMode m) { return m == SamplerMode::plain ? "plain" : "cameo"; }

std::string to_string(BootstrapMode m) {
  switch (m) {
    case BootstrapMode::off: return "off";
    case BootstrapMode::resimulate: return "resimulate";
    case BootstrapMode::importance: return "importance";
  }
  return "off";
}

std::string to_string(PriorKind p) { return p == PriorKind::uniform ? "uniform" : "boundary"; }

RunConfig resolve_config(const Settings& s) {
  const auto& keys = setting_keys();
  for (const auto& [k, v] : s) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw ConfigError("unknown setting '" + k + "'");
  }
  auto get = [&s](const std::string& k) -> const std::string* {
    auto it = s.find(k);
    return it == s.end() ? nullptr : &it->second;
  };

  RunConfig rc;
  if (auto v = get("env")) rc.env = *v;
  if (rc.env != "gridworld" && rc.env != "cliff" && rc.env != "cartpole" && rc.env != "acrobot") {
    throw ConfigError("unknown env '" + rc.env + "' (expected gridworld | cliff | cartpole | acrobot)");
  }
  SamplerConfig& sc = rc.sampler;
  if (auto v = get("mode")) {
    if (*v == "plain") sc.mode = SamplerMode::plain;
    else if (*v == "cameo") sc.mode = SamplerMode::cameo;
    else throw ConfigError("unknown mode '" + *v + "' (expected plain | cameo)");
  }
  const bool cameo = sc.mode == SamplerMode::cameo;

  if (auto v = get("iters")) sc.iterations = static_cast<int>(as_int("iters", *v));
  if (auto v = get("episodes")) sc.episodes = static_cast<int>(as_int("episodes", *v));
  if (auto v = get("sigma-p")) sc.sigma_p = as_real("sigma-p", *v);
  if (auto v = get("init-sd")) sc.init_sd = as_real("init-sd", *v);
  sc.utility.temperature = default_temperature(rc.env);
  if (auto v = get("temperature")) sc.utility.temperature = as_real("temperature", *v);
  sc.utility.mu = cameo ? 0.5 : 1.0;
  if (auto v = get("mu")) sc.utility.mu = as_real("mu", *v);
  if (auto v = get("gamma")) sc.gamma = as_real("gamma", *v);
  if (auto v = get("seed")) sc.seed = as_u64("seed", *v);
  sc.bootstrap = cameo ? BootstrapMode::resimulate : BootstrapMode::off;
  if (auto v = get("bootstrap")) {
    if (*v == "off") sc.bootstrap = BootstrapMode::off;
    else if (*v == "resimulate") sc.bootstrap = BootstrapMode::resimulate;
    else if (*v == "importance") sc.bootstrap = BootstrapMode::importance;
    else throw ConfigError("unknown bootstrap '" + *v + "' (expected resimulate | importance | off)");
  }
  sc.utility.prior = cameo ? PriorKind::boundary_penalty : PriorKind::uniform;
  if (auto v = get("prior")) {
    if (*v == "uniform") sc.utility.prior = PriorKind::uniform;
    else if (*v == "boundary") sc.utility.prior = PriorKind::boundary_penalty;
    else throw ConfigError("unknown prior '" + *v + "' (expected uniform | boundary)");
  }
  if (auto v = get("hidden")) {
    const long long h = as_int("hidden", *v);
    if (h < 1) throw ConfigError("hidden must be positive");
    sc.hidden = static_cast<std::size_t>(h);
  }
  if (auto v = get("td-form")) {
    if (*v == "mixed") sc.td_form = TdForm::mixed;
    else if (*v == "single") sc.td_form = TdForm::single_policy;
    else throw ConfigError("unknown td-form '" + *v + "' (expected mixed | single)");
  }
  if (auto v = get("reuse-current")) sc.reuse_current = as_bool("reuse-current", *v);
  if (auto v = get("curiosity-lr")) sc.curiosity.learning_rate = as_real("curiosity-lr", *v);
  if (auto v = get("curiosity-hidden")) {
    const long long h = as_int("curiosity-hidden", *v);
    if (h < 1) throw ConfigError("curiosity-hidden must be positive");
    sc.curiosity.hidden = static_cast<std::size_t>(h);
  }
  if (auto v = get("curiosity-updates")) sc.curiosity.updates_per_trajectory = static_cast<int>(as_int("curiosity-updates", *v));
  if (auto v = get("loss-reduction")) {
    if (*v == "mean") sc.curiosity.reduction = LossReduction::mean;
    else if (*v == "sum") sc.curiosity.reduction = LossReduction::sum;
    else throw ConfigError("unknown loss-reduction '" + *v + "' (expected mean | sum)");
  }
  if (auto v = get("episode-cap")) rc.env_options.episode_cap = static_cast<int>(as_int("episode-cap", *v));
  if (auto v = get("pit-cells")) rc.env_options.pits = as_cells("pit-cells", *v);
  if (auto v = get("pit-terminates")) rc.env_options.pit_terminates = as_bool("pit-terminates", *v);

  if (sc.curiosity.learning_rate < 0.0) throw ConfigError("curiosity-lr must be non-negative");
  if (sc.curiosity.updates_per_trajectory < 0) throw ConfigError("curiosity-updates must be non-negative");
  sc.validate();
  return rc;
}

Settings to_settings(const RunConfig& rc) {
  const SamplerConfig& sc = rc.sampler;
  Settings s;
  s["env"] = rc.env;
  s["mode"] = to_string(sc.mode);
  s["iters"] = std::to_string(sc.iterations);
  s["episodes"] = std::to_string(sc.episodes);
  s["sigma-p"] = format_real(sc.sigma_p);
  s["init-sd"] = format_real(sc.init_sd.value_or(sc.sigma_p));
  s["temperature"] = format_real(sc.utility.temperature);
  s["mu"] = format_real(sc.utility.mu);
  s["gamma"] = format_real(sc.gamma);
  s["seed"] = std::to_string(sc.seed);
  s["bootstrap"] = to_string(sc.bootstrap);
  s["prior"] = to_string(sc.utility.prior);
  s["hidden"] = std::to_string(sc.hidden);
  s["td-form"] = sc.td_form == TdForm::mixed ? "mixed" : "single";
  s["reuse-current"] = sc.reuse_current ? "true" : "false";
  s["curiosity-lr"] = format_real(sc.curiosity.learning_rate);
  s["curiosity-hidden"] = std::to_string(sc.curiosity.hidden);
  s["curiosity-updates"] = std::to_string(sc.curiosity.updates_per_trajectory);
  s["loss-reduction"] = sc.curiosity.reduction == LossReduction::mean ? "mean" : "sum";
  if (rc.env_options.episode_cap) {
    s["episode-cap"] = std::to_string(*rc.env_options.episode_cap);
  } else {
    s["episode-cap"] = std::to_string(make_environment(rc.env)->spec().episode_cap);
  }
  if (rc.env == "gridworld" || rc.env == "cliff") {
    std::vector<int> pits = rc.env_options.pits.value_or(
        rc.env == "gridworld" ? GridLayout::gridworld().pits : GridLayout::cliff().pits);
    std::string cells;
    for (std::size_t i = 0; i < pits.size(); ++i) cells += (i ? ";" : "") + std::to_string(pits[i]);
    s["pit-cells"] = cells;
    s["pit-terminates"] = rc.env_options.pit_terminates ? "true" : "false";
  }
  return s;
}

}  // namespace cameo
