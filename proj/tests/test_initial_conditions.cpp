#include "mrbc/errors.hpp"
#include "mrbc/initial_conditions.hpp"
#include "mrbc/paley.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace mrbc;
using paley::sobolev_norm;

TEST_CASE("taylor-green") {
  const Grid g = Grid::make(32);
  IcSpec spec;
  spec.amplitude = 1.5;
  const State s = make_ic(spec, g);
  // ||2A sin x sin y||_2 = 2A * pi = A * L
  CHECK(l2_norm(s.omega_big) == doctest::Approx(1.5 * 2 * M_PI).epsilon(1e-14));
  CHECK(support::max_abs(s.omega_small) == 0.0);
  CHECK(support::max_abs(s.theta) == 0.0);
  CHECK(s.time == 0.0);

  spec.theta_amplitude = 0.1;
  const State t = make_ic(spec, g);
  CHECK(std::abs(t.theta.at(1, 1).real() - 0.025) < 1e-16);
  CHECK(std::abs(t.theta.at(1, -1).real() - 0.025) < 1e-16);
}

TEST_CASE("thermal blob is a positive bump") {
  IcSpec spec;
  spec.name = "thermal-blob";
  spec.amplitude = 2.0;
  for (int n : {64, 128}) {
    const Grid g = Grid::make(n);
    const State s = make_ic(spec, g);
    CHECK(support::max_abs(s.omega_big) == 0.0);
    CHECK(max_outside_dealias(s.theta) == 0.0);
    // Evaluate the truncated series on a grid four times finer.
    const Grid fine = Grid::make(4 * n);
    SpectralField up(fine);
    for (int a = -n / 2 + 1; a < n / 2; ++a)
      for (int b = -n / 2 + 1; b < n / 2; ++b)
        up.at(a, b) = s.theta.at(a, b);
    double lo = 1e9, hi = -1e9;
    for (double v : to_physical(up).values()) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    MESSAGE("n = ", n, ": blob range [", lo, ", ", hi, "]");
    CHECK(lo >= -1e-10);
    CHECK(lo == doctest::Approx(2.0 * std::exp(-16.0)).epsilon(1e-6));
    CHECK(hi == doctest::Approx(2.0).epsilon(1e-9));
  }
}

TEST_CASE("random band") {
  const Grid g = Grid::make(64);
  IcSpec spec;
  spec.name = "random-band";
  spec.seed = 17;
  spec.j0 = 1;
  spec.j1 = 3;
  spec.s = 2.5;
  spec.norm = 0.7;
  const State a = make_ic(spec, g);
  const State b = make_ic(spec, g);
  CHECK(support::max_diff(a.omega_big, b.omega_big) == 0.0);
  CHECK(support::max_diff(a.omega_small, b.omega_small) == 0.0);
  CHECK(support::max_diff(a.theta, b.theta) == 0.0);

  CHECK(sobolev_norm(a.velocity(), 2.5) == doctest::Approx(0.7).epsilon(1e-13));
  CHECK(sobolev_norm(a.omega_small, 2.5) == doctest::Approx(0.7).epsilon(1e-13));
  CHECK(sobolev_norm(a.theta, 2.5) == doctest::Approx(0.7).epsilon(1e-13));

  for (const SpectralField *f : {&a.omega_big, &a.omega_small, &a.theta}) {
    CHECK(std::abs(f->at(0, 0)) == 0.0);
    CHECK(max_outside_dealias(*f) == 0.0);
    CHECK(max_hermitian_asymmetry(*f) < 1e-16);
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double r = std::sqrt(g.k_squared(k));
      if (r < 2.0 || r >= 16.0)
        REQUIRE(std::abs(f->coeffs()[k]) == 0.0);
    }
  }

  spec.seed = 18;
  const State c = make_ic(spec, g);
  CHECK(support::max_diff(a.theta, c.theta) > 0.1 * support::max_abs(a.theta));

  spec.seed.reset();
  CHECK_THROWS_AS(make_ic(spec, g), ConfigError);
}

TEST_CASE("zero and unknown") {
  const Grid g = Grid::make(8);
  IcSpec spec;
  spec.name = "zero";
  const State s = make_ic(spec, g);
  CHECK(support::max_abs(s.omega_big) + support::max_abs(s.omega_small) + support::max_abs(s.theta) == 0.0);
  spec.name = "nope";
  CHECK_THROWS_AS(make_ic(spec, g), ConfigError);
}

TEST_CASE("counter rng") {
  const CounterRng r(5);
  CHECK(r.bits(0, 7) == CounterRng(5).bits(0, 7));
  CHECK(r.bits(0, 7) != r.bits(1, 7));
  CHECK(r.bits(0, 7) != r.bits(0, 8));
  CHECK(r.bits(0, 7) != CounterRng(6).bits(0, 7));
  double sum = 0.0, sq = 0.0;
  const int m = 20000;
  for (int i = 0; i < m; ++i) {
    const double u = r.uniform(3, i);
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    const auto [z1, z2] = r.normal_pair(4, i);
    sum += z1 + z2;
    sq += z1 * z1 + z2 * z2;
  }
  CHECK(std::abs(sum / (2 * m)) < 0.03);
  CHECK(std::abs(sq / (2 * m) - 1.0) < 0.03);
}
