#include <fstream>

#include "doctest.h"
#include "helpers.hpp"
#include "solbench/config.hpp"
#include "solbench/error.hpp"

using namespace solbench;

TEST_CASE("key-value syntax") {
  const auto kv = parse_key_values("# header\n a = 1 \n\nb=\"x # not a comment\" # comment\nc =\n");
  CHECK(kv.at("a") == "1");
  CHECK(kv.at("b") == "x # not a comment");
  CHECK(kv.at("c").empty());
  try {
    parse_key_values("a = 1\njust words\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_key_values(" = 3"), ConfigError);
}

TEST_CASE("shipped config file holds the defaults") {
  const auto loaded = load_pipeline_config(std::filesystem::path(SOLBENCH_FIXTURES) / "../../config/solbench.conf");
  const PipelineConfig d;
  CHECK(loaded.model == d.model);
  CHECK(loaded.max_refinement_iterations == d.max_refinement_iterations);
  CHECK(loaded.transport.max_retries == d.transport.max_retries);
  CHECK(loaded.transport.initial_backoff == d.transport.initial_backoff);
  CHECK(loaded.metrics.weights == d.metrics.weights);
  CHECK(loaded.compile_timeout == d.compile_timeout);
  CHECK(loaded.http.base_url == d.http.base_url);
  CHECK(loaded.compiler_dir == "/opt/solc/bin");
}

TEST_CASE("settings") {
  PipelineConfig c;
  apply_setting(c, "provider", "scripted");
  apply_setting(c, "enable_reinforcement", "off");
  apply_setting(c, "parallelism", "4");
  apply_setting(c, "compile_timeout_s", "30");
  apply_setting(c, "metrics.m5.no_events_penalty", "5");
  CHECK(c.provider == "scripted");
  CHECK_FALSE(c.enable_reinforcement);
  CHECK(c.parallelism == 4);
  CHECK(c.compile_timeout == std::chrono::seconds(30));
  CHECK(c.metrics.m5_no_events_penalty == 5);

  CHECK_THROWS_AS(apply_setting(c, "provider", "carrier-pigeon"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "parallelism", "0"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "temperature", "-1"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "max_refinement_iterations", "two"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "llm_judge", "maybe"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "base_url", "ftp://x"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "colour", "blue"), ConfigError);
}

TEST_CASE("weights must sum to one") {
  CHECK_THROWS_AS(pipeline_config_from_text("metrics.weight.m1 = 0.5\n"), ConfigError);
  const auto ok = pipeline_config_from_text("metrics.weight.m1 = 0.20\nmetrics.weight.m5 = 0.15\n");
  CHECK(ok.metrics.weights[0] == 0.20);
}

TEST_CASE("config file errors name the file") {
  CHECK_THROWS_AS(load_pipeline_config("/nonexistent/solbench.conf"), IoFailure);
  const auto dir = testing::temp_dir("config");
  std::ofstream(dir / "bad.conf") << "model = x\nparallelism = lots\n";
  try {
    load_pipeline_config(dir / "bad.conf");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("bad.conf") != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}
