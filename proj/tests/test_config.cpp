// test_config.cpp -- config parsing, validation, hashing.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qprep/config.hpp"
#include "qprep/quadrature.hpp"

#include <cstdio>
#include <fstream>

using namespace qprep;

namespace {

const char* kGood = R"(# two-level probe experiment
schema.version = 1
experiment.kind = prepare
atom.energies = 0, 1
atom.coupling_re = 0, 1; 1, 0
formfactor.kind = exponential
formfactor.c = 1
formfactor.a = 1
schedule.kind = decaying
schedule.lambda0 = 0.1
schedule.gamma = -0.25
experiment.t_end = 20
experiment.n_max = 2
experiment.seed = 7
)";

}  // namespace

TEST_CASE("well-formed config parses with the documented keys") {
  ExperimentConfig cfg = parse_config_text(kGood);
  CHECK(cfg.kind == "prepare");
  CHECK(cfg.atom.levels() == 2);
  CHECK(cfg.atom.energies(1) == 1.0);
  CHECK(cfg.atom.coupling(0, 1) == qprep::cd(1.0, 0.0));
  CHECK(cfg.form_factor.kind == FormFactor::Kind::Exponential);
  CHECK(cfg.schedule.lambda0 == 0.1);
  CHECK(cfg.schedule.gamma == -0.25);
  CHECK(cfg.t_end == 20.0);
  CHECK(cfg.n_max == 2);
  CHECK(cfg.seed == 7);
  CHECK(cfg.initial_level == 1);  // defaults to the highest level
}

TEST_CASE("parse failures carry diagnostics") {
  SUBCASE("unknown key") {
    CHECK_THROWS_WITH_AS(
        parse_config_text("experiment.kind = grid\nexperiment.frobnicate = 1\n"),
        doctest::Contains("unknown key"), ConfigError);
  }
  SUBCASE("missing kind") {
    CHECK_THROWS_WITH_AS(parse_config_text("schema.version = 1\n"),
                         doctest::Contains("experiment.kind"), ConfigError);
  }
  SUBCASE("bad kind") {
    CHECK_THROWS_AS(parse_config_text("experiment.kind = dance\n"),
                    ConfigError);
  }
  SUBCASE("malformed line") {
    CHECK_THROWS_WITH_AS(parse_config_text("experiment.kind = grid\nnonsense\n"),
                         doctest::Contains("key = value"), ConfigError);
  }
  SUBCASE("bad number") {
    CHECK_THROWS_AS(
        parse_config_text("experiment.kind = grid\nexperiment.tau = abc\n"),
        ConfigError);
  }
  SUBCASE("schema version gate") {
    CHECK_THROWS_AS(
        parse_config_text("schema.version = 2\nexperiment.kind = grid\n"),
        ConfigError);
  }
  SUBCASE("invalid physics rejected by validators") {
    // gamma outside (-1/2, 0)
    CHECK_THROWS_AS(parse_config_text(
                        "experiment.kind = grid\nschedule.gamma = -0.8\n"),
                    ConfigError);
    // non-ascending energies
    CHECK_THROWS_AS(
        parse_config_text("experiment.kind = grid\natom.energies = 1, 0\n"
                          "atom.coupling_re = 0, 1; 1, 0\n"),
        ConfigError);
    // non-square coupling
    CHECK_THROWS_AS(
        parse_config_text("experiment.kind = grid\natom.energies = 0, 1\n"
                          "atom.coupling_re = 0, 1\n"),
        ConfigError);
  }
}

TEST_CASE("tabulated profile loading") {
  const char* path = "test_profile_table.txt";
  {
    std::ofstream f(path);
    f << "# r  phi\n0.0 1.0\n1.0 0.5\n2.0 0.25\n5.0 0.0\n";
  }
  FormFactor ff = load_tabulated_profile(path);
  CHECK(ff.kind == FormFactor::Kind::Tabulated);
  CHECK(ff.phi(0.0) == doctest::Approx(1.0));
  CHECK(ff.phi(1.5) == doctest::Approx(0.375));  // linear interpolation

  std::string cfg_text = std::string("experiment.kind = validate\n") +
                         "formfactor.kind = tabulated\nformfactor.table = " +
                         path + "\n";
  ExperimentConfig cfg = parse_config_text(cfg_text);
  CHECK(cfg.form_factor.kind == FormFactor::Kind::Tabulated);

  CHECK_THROWS_AS(load_tabulated_profile("does_not_exist.txt"), ConfigError);
  std::remove(path);
}

TEST_CASE("config hash is stable and content-sensitive") {
  std::string h1 = config_hash(kGood);
  CHECK(h1 == config_hash(kGood));
  CHECK(h1.size() == 16);
  CHECK(h1 != config_hash(std::string(kGood) + "experiment.tau = 9\n"));
}
