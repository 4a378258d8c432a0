#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "cameo/config.hpp"
#include "cameo/error.hpp"
#include "cameo/experiments.hpp"

using namespace cameo;

TEST_CASE("parse settings text") {
  const auto s = parse_settings("# comment\nenv = cliff\n\nmode=cameo  # trailing\n  seed=9\n");
  CHECK(s.size() == 3);
  CHECK(s.at("env") == "cliff");
  CHECK(s.at("mode") == "cameo");
  CHECK(s.at("seed") == "9");
  try {
    parse_settings("env=cliff\nthis line is broken\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("defaults depend on mode and environment") {
  const auto plain = resolve_config({{"env", "cartpole"}});
  CHECK(plain.sampler.mode == SamplerMode::plain);
  CHECK(plain.sampler.utility.temperature == 4.0);
  CHECK(plain.sampler.utility.mu == 1.0);
  CHECK(plain.sampler.utility.prior == PriorKind::uniform);
  CHECK(plain.sampler.episodes == 20);
  CHECK(plain.sampler.sigma_p == 0.1);
  CHECK(plain.sampler.gamma == 1.0);
  CHECK(resolve_config({{"env", "acrobot"}}).sampler.utility.temperature == 10.0);

  const auto cameo = resolve_config({{"env", "gridworld"}, {"mode", "cameo"}});
  CHECK(cameo.sampler.utility.prior == PriorKind::boundary_penalty);
  CHECK(cameo.sampler.bootstrap == BootstrapMode::resimulate);
  CHECK(cameo.sampler.utility.mu == 0.5);
  CHECK(cameo.sampler.utility.temperature == 1.0);
}

TEST_CASE("flags override the file, the file overrides defaults") {
  const auto dir = std::filesystem::temp_directory_path() / "cameo_cfg";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "run.cfg") << "env=cliff\nmode=cameo\nmu=0.25\nseed=3\n";
  const auto file = read_settings_file(dir / "run.cfg");
  const auto merged = merge_settings(file, {{"seed", "11"}, {"iters", "50"}});
  const auto rc = resolve_config(merged);
  CHECK(rc.env == "cliff");
  CHECK(rc.sampler.utility.mu == 0.25);  // from the file
  CHECK(rc.sampler.seed == 11);          // flag wins
  CHECK(rc.sampler.iterations == 50);
  CHECK(rc.sampler.sigma_p == 0.1);      // default
  CHECK_THROWS_AS(read_settings_file(dir / "missing.cfg"), NotFoundError);
}

TEST_CASE("effective settings round-trip") {
  const auto rc = resolve_config({{"env", "cliff"}, {"mode", "cameo"}, {"pit-cells", "37;38"},
                                  {"pit-terminates", "false"}, {"init-sd", "0.5"}});
  const auto s = to_settings(rc);
  for (const auto& k : setting_keys()) CHECK(s.count(k) == 1);
  const auto again = resolve_config(s);
  CHECK(to_settings(again) == s);
  CHECK(again.env_options.pits == std::vector<int>{37, 38});
  CHECK_FALSE(again.env_options.pit_terminates);
  CHECK(*again.sampler.init_sd == 0.5);
}

TEST_CASE("bad settings are config errors") {
  CHECK_THROWS_AS(resolve_config({{"colour", "red"}}), ConfigError);
  CHECK_THROWS_AS(resolve_config({{"env", "pong"}}), ConfigError);
  CHECK_THROWS_AS(resolve_config({{"mode", "gibbs"}}), ConfigError);
  CHECK_THROWS_AS(resolve_config({{"iters", "ten"}}), ConfigError);
  CHECK_THROWS_AS(resolve_config({{"iters", "0"}}), ConfigError);
  CHECK_THROWS_AS(resolve_config({{"temperature", "-1"}}), ConfigError);
  CHECK_THROWS_AS(resolve_config({{"mu", "2"}}), ConfigError);
  CHECK_THROWS_AS(resolve_config({{"bootstrap", "maybe"}}), ConfigError);
  CHECK_THROWS_AS(resolve_config({{"seed", "-4"}}), ConfigError);
  CHECK_THROWS_AS(resolve_config({{"reuse-current", "perhaps"}}), ConfigError);
}

TEST_CASE("reference settings") {
  CHECK(reference_config("cartpole", 1).sampler.iterations == 200);
  CHECK(reference_config("acrobot", 1).sampler.iterations == 500);
  const auto g = reference_config("gridworld", 4);
  CHECK(g.sampler.mode == SamplerMode::cameo);
  CHECK(g.sampler.iterations == 2000);
  CHECK(g.sampler.episodes == 20);
  CHECK(g.sampler.seed == 4);
  CHECK(g.sampler.utility.mu == 0.5);
  const auto c = reference_config("cliff", 1);
  CHECK(c.sampler.utility.temperature == 0.01);
  CHECK(c.sampler.utility.mu == 0.005);
  CHECK(c.sampler.curiosity.reduction == LossReduction::sum);
}
