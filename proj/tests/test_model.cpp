// test_model.cpp -- correlation functions, form factors, schedules.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qprep/correlation.hpp"
#include "qprep/model.hpp"
#include "qprep/quadrature.hpp"

#include <cmath>

using namespace qprep;

TEST_CASE("exponential correlation function closed form") {
  Correlation c(FormFactor::exponential());
  CHECK(c.f(0.0).real() == doctest::Approx(M_PI).epsilon(1e-12));
  CHECK(c.f(0.0).imag() == doctest::Approx(0.0).epsilon(1e-12));
  // f(1) = 8 pi / (2+i)^3 = 8 pi (2 - 11 i) / 125
  cd f1 = c.f(1.0);
  CHECK(f1.real() == doctest::Approx(16.0 * M_PI / 125.0).epsilon(1e-12));
  CHECK(f1.imag() == doctest::Approx(-88.0 * M_PI / 125.0).epsilon(1e-12));
  // |f(t)| = 8 pi (4 + t^2)^(-3/2)
  for (double t : {0.5, 3.0, 20.0})
    CHECK(c.abs_f(t) ==
          doctest::Approx(8.0 * M_PI * std::pow(4.0 + t * t, -1.5)));
  // conjugate symmetry f(-t) = conj f(t)
  CHECK(c.f(-2.0).real() == doctest::Approx(c.f(2.0).real()));
  CHECK(c.f(-2.0).imag() == doctest::Approx(-c.f(2.0).imag()));
}

TEST_CASE("closed form agrees with direct radial quadrature") {
  Correlation c(FormFactor::exponential(0.7, 1.3));
  for (double t : {0.0, 1.0, 7.5}) {
    cd direct = integrate(
                    [&](double r) {
                      double w = 4.0 * M_PI * r * r * 0.49 * std::exp(-2.6 * r);
                      return w * std::exp(cd(0.0, -t * r));
                    },
                    0.0, 30.0, 1e-12, 1e-12)
                    .value;
    CHECK(std::abs(c.f(t) - direct) < 1e-9);
  }
}

TEST_CASE("L1 norm and first moment") {
  Correlation c(FormFactor::exponential());
  CHECK(c.l1_norm() == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
  CHECK(c.first_moment() == doctest::Approx(4.0 * M_PI).epsilon(1e-12));
  // numeric cross-check of the L1 closed form
  double head = integrate_real([&](double t) { return c.abs_f(t); }, 0.0,
                               5000.0, 1e-10, 1e-10);
  CHECK(head == doctest::Approx(2.0 * M_PI).epsilon(1e-5));
}

TEST_CASE("power-cutoff family decay exponents") {
  // mu = 0 reduces to the exponential family with a = 1/K.
  Correlation c0(FormFactor::power_cutoff(1.0, 0.0, 1.0));
  Correlation ce(FormFactor::exponential(1.0, 1.0));
  CHECK(std::abs(c0.f(2.0) - ce.f(2.0)) < 1e-12);

  DecayFit fit = c0.decay_exponent(10.0, 1000.0);
  CHECK(fit.ok);
  CHECK(fit.exponent == doctest::Approx(3.0).epsilon(0.07));

  Correlation chalf(FormFactor::power_cutoff(1.0, 0.5, 1.0));
  DecayFit fit2 = chalf.decay_exponent(10.0, 1000.0);
  CHECK(fit2.ok);
  CHECK(fit2.exponent == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("tabulated form factor tracks the exponential closed form") {
  std::vector<double> r, p;
  for (int i = 0; i <= 4000; ++i) {
    double x = 30.0 * i / 4000.0;
    r.push_back(x);
    p.push_back(std::exp(-x));
  }
  Correlation ct(FormFactor::tabulated(r, p));
  Correlation ce(FormFactor::exponential());
  for (double t : {0.0, 1.0, 4.0})
    CHECK(std::abs(ct.f(t) - ce.f(t)) < 2e-4);
}

TEST_CASE("half-line transform") {
  Correlation c(FormFactor::exponential());
  // Golden-rule identity: Re H(eps) = pi * 4 pi eps^2 |phi(eps)|^2, eps > 0.
  cd h1 = c.half_line(1.0);
  CHECK(h1.real() ==
        doctest::Approx(4.0 * M_PI * M_PI * std::exp(-2.0)).epsilon(1e-8));
  // Below threshold the real part vanishes.
  CHECK(std::abs(c.half_line(-1.0).real()) < 1e-8);
  // H(0) = int_0^inf 8 pi (2+is)^-3 ds = -i pi exactly.
  cd h0 = c.half_line(0.0);
  CHECK(std::abs(h0 - cd(0.0, -M_PI)) < 1e-10);
  // Cross-route check: tabulated data uses the PV identity instead.
  std::vector<double> r, p;
  for (int i = 0; i <= 6000; ++i) {
    double x = 35.0 * i / 6000.0;
    r.push_back(x);
    p.push_back(std::exp(-x));
  }
  Correlation ct(FormFactor::tabulated(r, p));
  for (double eps : {0.7, 1.0, 2.5, -1.3}) {
    CHECK(std::abs(c.half_line(eps) - ct.half_line(eps)) < 5e-4);
  }
}

TEST_CASE("thermal correlation") {
  FormFactor ff = FormFactor::exponential();
  ThermalCorrelation th(ff, 1.0);
  Correlation vac(ff);
  // Detailed balance of the spectral density.
  for (double eps : {0.5, 1.0, 2.0})
    CHECK(th.spectral_density(eps) / th.spectral_density(-eps) ==
          doctest::Approx(std::exp(eps)).epsilon(1e-10));
  // f_beta(0) = int w (1 + 2 nbar) > f(0).
  CHECK(th.f(0.0).real() > vac.f0());
  CHECK(std::abs(th.f(0.0).imag()) < 1e-9);
  // Zero-temperature limit: beta large recovers the vacuum objects.  The
  // leading thermal correction is ~ 16 pi / beta^3 from soft modes.
  ThermalCorrelation cold(ff, 60.0);
  double soft = 16.0 * M_PI / (60.0 * 60.0 * 60.0);
  CHECK(std::abs(cold.f(1.5) - vac.f(1.5)) < 3.0 * soft);
  for (double eps : {1.0, -1.0, 0.6})
    CHECK(std::abs(cold.half_line(eps) - vac.half_line(eps)) < 5.0 * soft);
  ThermalCorrelation colder(ff, 300.0);
  CHECK(std::abs(colder.f(1.5) - vac.f(1.5)) < 1e-5);
}

TEST_CASE("probe overlaps") {
  FormFactor ff = FormFactor::exponential();
  Correlation c(ff);
  // Self overlap at t = 0 is f(0) = pi.
  CHECK(c.probe_overlap(ff, 0.0).real() == doctest::Approx(M_PI).epsilon(1e-9));
  // Angular-momentum mismatch gives an exactly vanishing overlap.
  CHECK(std::abs(c.probe_overlap(ff, 3.0, 1)) == 0.0);
  // Decay in t, same power law as f.
  double o10 = std::abs(c.probe_overlap(ff, 10.0));
  double o40 = std::abs(c.probe_overlap(ff, 40.0));
  double measured = std::log(o10 / o40) / std::log(4.0);
  CHECK(measured == doctest::Approx(3.0).epsilon(0.1));
}

TEST_CASE("coupling schedule") {
  CouplingSchedule s = CouplingSchedule::decaying(0.1, -0.25);
  CHECK(s.at(0.0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(s.at(100.0) == doctest::Approx(std::pow(10100.0, -0.25)).epsilon(1e-12));
  for (double t : {0.0, 10.0, 1e4}) CHECK(s.at(t) > s.at(t + 1.0));
  CHECK(validate_schedule(s).empty());
  CHECK(!validate_schedule(CouplingSchedule::decaying(0.1, -0.7)).empty());
  CHECK(!validate_schedule(CouplingSchedule::decaying(1.5, -0.25)).empty());
  CouplingSchedule k = CouplingSchedule::constant(0.05);
  CHECK(k.at(123.0) == 0.05);
}

TEST_CASE("atom and form factor validation") {
  AtomModel m;
  m.energies = Eigen::VectorXd(2);
  m.energies << 1.0, 0.0;
  m.coupling = Eigen::MatrixXcd::Zero(2, 2);
  CHECK(!validate_atom(m).empty());
  m.energies << 0.0, 1.0;
  m.coupling << 0.0, 1.0, 0.0, 0.0;  // not Hermitian
  CHECK(!validate_atom(m).empty());
  m.coupling << 0.0, 1.0, 1.0, 0.0;
  CHECK(validate_atom(m).empty());

  FormFactor bad = FormFactor::exponential(-1.0, 1.0);
  CHECK(!validate_form_factor(bad).empty());
  CHECK(validate_form_factor(FormFactor::exponential()).empty());
}

TEST_CASE("decay fit reports a window error at the noise floor") {
  Correlation c(FormFactor::exponential());
  DecayFit fit = c.decay_exponent(1e8, 1e10, 10);
  CHECK(!fit.ok);
}
