#include <doctest.h>

#include "zubov/config.hpp"
#include "zubov/errors.hpp"

#include <cmath>
#include <set>
#include <sstream>

using namespace zubov;

TEST_CASE("a minimal vdp config takes the benchmark defaults") {
  const RunConfig cfg = parse_config_text("system = vdp\n");
  CHECK(cfg.train.system == "vdp");
  CHECK(cfg.train.width == 50);
  CHECK(cfg.train.depth == 5);
  CHECK(cfg.train.m_b == 20000);
  CHECK(cfg.train.m_r == 20000);
  CHECK(cfg.train.m_d == 2000);
  CHECK(cfg.train.lambda_r == 1.0);
  CHECK(cfg.train.lambda_d == 10.0);
  CHECK(cfg.train.alpha == 0.5);
  CHECK(cfg.train.learning_rate == 0.001);
  REQUIRE(cfg.train.omega.has_value());
  CHECK(cfg.train.omega->lower[0] == -3.0);
  CHECK(cfg.train.omega->upper[1] == 3.0);
  CHECK(cfg.grid_resolution == 201);
  CHECK(cfg.contour_level == 0.9);
}

TEST_CASE("the 10-d product profile scales the sample counts") {
  const RunConfig cfg = parse_config_text("system = product10\n");
  CHECK(cfg.train.m_b == 50000);
  CHECK(cfg.train.m_r == 50000);
  CHECK(cfg.train.m_d == 30000);
  CHECK(cfg.train.omega->lower.size() == 10);
  CHECK(cfg.train.omega->lower[7] == -1.5);
}

TEST_CASE("parse errors carry line numbers") {
  try {
    parse_config_text("system = vdp\nlambda_d = -1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.line() == 2);
    CHECK(std::string(err.what()).find("lambda_d") != std::string::npos);
  }

  try {
    parse_config_text("# comment\n\nwibble = 3\n");
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.line() == 3);
    CHECK(std::string(err.what()).find("wibble") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_config_text("system = vdp\nalpha = banana\n"), ParseError);
  CHECK_THROWS_AS(parse_config_text("system = unknown9\n"), ParseError);
  CHECK_THROWS_AS(parse_config_text("just some words\n"), ParseError);
  CHECK_THROWS_AS(parse_config_text("contour_level = 1.5\n"), ParseError);
}

TEST_CASE("comments, blanks and value overrides") {
  const RunConfig cfg = parse_config_text(
      "# training setup\n"
      "system = pendulum   # benchmark\n"
      "\n"
      "alpha = 0.25\n"
      "m_d = 123\n"
      "resample = false\n"
      "minibatch = full\n"
      "seed = 99\n");
  CHECK(cfg.train.system == "pendulum");
  CHECK(cfg.train.alpha == 0.25);
  CHECK(cfg.train.m_d == 123);
  CHECK(cfg.train.resample == false);
  CHECK(cfg.train.minibatch == 0);
  CHECK(cfg.train.seed == 99);
  CHECK(cfg.train.omega->upper[0] == doctest::Approx(M_PI));
}

TEST_CASE("omega overrides must be a valid box around the origin") {
  const RunConfig cfg = parse_config_text(
      "system = vdp\nomega_lower = -2 -2\nomega_upper = 2 2\n");
  CHECK(cfg.train.omega->upper[0] == 2.0);
  CHECK_THROWS_AS(
      parse_config_text("system = vdp\nomega_lower = 1 1\nomega_upper = 2 2\n"),
      ParseError);
  CHECK_THROWS_AS(parse_config_text("system = vdp\nomega_lower = -2 -2\n"
                                    "omega_upper = 2\n"),
                  ParseError);
}

TEST_CASE("run metadata echoes every documented key and parses back") {
  RunConfig cfg = parse_config_text("system = vdp\nm_d = 500\nalpha = 0.4\n");
  cfg.slice_pins = {{2, 0.0}};
  const std::string text = run_metadata_text(cfg);

  std::set<std::string> seen;
  std::istringstream iss(text);
  std::string line;
  while (std::getline(iss, line)) {
    if (line.empty() || line[0] == '#') continue;
    seen.insert(line.substr(0, line.find(' ')));
  }
  for (const std::string& key : config_key_names()) {
    INFO("key: ", key);
    CHECK(seen.count(key) == 1);
  }
  CHECK(seen.size() == config_key_names().size());

  const RunConfig round = parse_config_text(text);
  CHECK(round.train.system == cfg.train.system);
  CHECK(round.train.alpha == cfg.train.alpha);
  CHECK(round.train.m_d == 500);
  CHECK(round.train.m_b == cfg.train.m_b);
  CHECK(round.slice_pins == cfg.slice_pins);
  // the echoed rollout guards are the resolved numbers
  CHECK(round.train.rollout.r_max ==
        cfg.train.rollout.resolved_r_max(*cfg.train.omega));
  CHECK(round.train.rollout.v_cap == 20.0 / 0.4);
}

TEST_CASE("defaults table covers both benchmark families") {
  CHECK(default_config("pendulum").train.m_b == 20000);
  CHECK(default_config("product2").train.m_d == 30000);
  CHECK_THROWS_AS(default_config("bogus"), ArgumentError);
}
