#include "mrbc/errors.hpp"
#include "mrbc/spectral.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace mrbc;
using namespace support;

namespace {

// Direct O(n^4) discrete transform with coeff(0) = mean.
SpectralField naive_dft(const PhysicalField &f) {
  const Grid &g = f.grid();
  const int n = g.n();
  SpectralField out(g);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Complex sum = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          sum += f.at(i, j) * std::polar(1.0, -kTwoPi * (a * i + b * j) / n);
      out.coeffs()[g.index(a, b)] = sum / double(n * n);
    }
  return out;
}

} // namespace

TEST_CASE("grid contract") {
  CHECK_THROWS_AS(Grid::make(7), ContractError);
  CHECK_THROWS_AS(Grid::make(6), ContractError);
  CHECK_THROWS_AS(Grid::make(16, -1.0), ContractError);
  CHECK_THROWS_AS(Grid::make(16, kTwoPi, 9.0), ContractError);
  CHECK_THROWS_AS(Grid::make(16, kTwoPi, 0.0), ContractError);
  const Grid g = Grid::make(12);
  CHECK(g.dealias_radius() == doctest::Approx(4.0));
  CHECK(g.mode(5) == 5);
  CHECK(g.mode(6) == -6);
  CHECK(g.mode(11) == -1);
  CHECK(g.slot(-1) == 11);
}

TEST_CASE("forward transform matches a direct sum") {
  const Grid g = Grid::make(8);
  const PhysicalField f = sample(g, [](double x, double y) {
    return std::exp(std::sin(x) + 0.3 * std::cos(2 * y)) + x * 0.0;
  });
  CHECK(max_diff(to_spectral(f), naive_dft(f)) < 1e-14);

  const Grid g2 = Grid::make(8, 3.0);
  const PhysicalField h = sample(g2, [](double x, double y) { return std::cos(kTwoPi * x / 3.0) * y; });
  CHECK(max_diff(to_spectral(h), naive_dft(h)) < 1e-14);
}

TEST_CASE("transform conventions") {
  const Grid g = Grid::make(16);
  const SpectralField c = to_spectral(sample(g, [](double, double) { return 2.5; }));
  CHECK(std::abs(c.at(0, 0) - 2.5) < 1e-15);
  CHECK(max_abs(c - to_spectral(sample(g, [](double, double) { return 2.5; }))) == 0.0);
  double rest = 0.0;
  for (std::size_t k = 1; k < g.size(); ++k)
    rest = std::max(rest, std::abs(c.coeffs()[k]));
  CHECK(rest < 1e-15);

  SpectralField cos1 = to_spectral(sample(g, [](double x, double) { return std::cos(x); }));
  CHECK(std::abs(cos1.at(1, 0) - 0.5) < 1e-15);
  CHECK(std::abs(cos1.at(-1, 0) - 0.5) < 1e-15);
  cos1.at(1, 0) = 0.0;
  cos1.at(-1, 0) = 0.0;
  CHECK(max_abs(cos1) < 1e-15);

  SpectralField m(g);
  m.at(1, 0) = 0.5;
  m.at(-1, 0) = 0.5;
  CHECK(max_diff(to_physical(m), sample(g, [](double x, double) { return std::cos(x); })) < 1e-15);
  CHECK(max_diff(to_physical(SpectralField(g)), PhysicalField(g)) == 0.0);
}

TEST_CASE("round trip and paired transforms") {
  const Grid g = Grid::make(32);
  const SpectralField a = random_field(g, 1, 10.0, true);
  const SpectralField b = random_field(g, 2, 10.0, true);
  const PhysicalField pa = to_physical(a);
  double scale = 0.0;
  for (double v : pa.values())
    scale = std::max(scale, std::abs(v));
  CHECK(max_diff(to_physical(to_spectral(pa)), pa) < 1e-12 * scale);

  auto [qa, qb] = to_physical_pair(a, b);
  CHECK(max_diff(qa, pa) < 1e-13 * scale);
  CHECK(max_diff(qb, to_physical(b)) < 1e-13 * scale);
  auto [ra, rb] = to_spectral_pair(qa, qb);
  CHECK(max_diff(ra, a) < 1e-13 * max_abs(a));
  CHECK(max_diff(rb, b) < 1e-13 * max_abs(b));
}

TEST_CASE("broken symmetry is rejected") {
  const Grid g = Grid::make(16);
  SpectralField f(g);
  f.at(2, 1) = Complex(1.0, 0.5);
  CHECK(max_hermitian_asymmetry(f) > 0.5);
  CHECK_THROWS_AS(to_physical(f), ContractError);
  try {
    to_physical(f);
  } catch (const ContractError &e) {
    CHECK(std::string(e.what()).find("asymmetry") != std::string::npos);
  }
}

TEST_CASE("derivatives") {
  const Grid g = Grid::make(16);
  const SpectralField c = to_spectral(sample(g, [](double x, double) { return std::cos(x); }));
  CHECK(max_diff(to_physical(derivative(c, 1)), sample(g, [](double x, double) { return -std::sin(x); })) <
        1e-14);
  CHECK(max_abs(derivative(c, 2)) == 0.0);

  const Grid gl = Grid::make(16, 4.0);
  const double k = kTwoPi / 4.0;
  const SpectralField f = to_spectral(sample(gl, [&](double x, double y) { return std::sin(k * (2 * x - 3 * y)); }));
  const PhysicalField expect = sample(gl, [&](double x, double y) { return -13 * k * k * std::sin(k * (2 * x - 3 * y)); });
  CHECK(max_diff(to_physical(laplacian(f)), expect) < 1e-12);
  CHECK(max_diff(derivative(f, 1, 2) + derivative(f, 2, 2), laplacian(f)) < 1e-13);
  CHECK(max_diff(derivative(f, 2, 3), derivative(derivative(f, 2), 2, 2)) < 1e-12);
}

TEST_CASE("inverse laplacian") {
  const Grid g = Grid::make(32);
  const SpectralField f = random_field(g, 3, 12.0);
  CHECK(max_diff(inverse_laplacian(laplacian(f)), f) < 1e-14 * max_abs(f));
  const SpectralField mcos = to_spectral(sample(g, [](double x, double) { return -std::cos(x); }));
  CHECK(max_diff(to_physical(inverse_laplacian(mcos)), sample(g, [](double x, double) { return std::cos(x); })) <
        1e-14);
  SpectralField with_mean = f;
  with_mean.at(0, 0) = 1.0;
  CHECK_THROWS_AS(inverse_laplacian(with_mean), ContractError);
}

TEST_CASE("velocity from vorticity") {
  const Grid g = Grid::make(16);
  const SpectralField w = to_spectral(sample(g, [](double x, double y) { return 2 * std::sin(x) * std::sin(y); }));
  const SpectralVector u = velocity_from_vorticity(w);
  CHECK(max_diff(to_physical(u.x1), sample(g, [](double x, double y) { return std::sin(x) * std::cos(y); })) < 1e-14);
  CHECK(max_diff(to_physical(u.x2), sample(g, [](double x, double y) { return -std::cos(x) * std::sin(y); })) < 1e-14);

  const SpectralVector c = velocity_from_vorticity(SpectralField(g), {0.7, -1.2});
  CHECK(max_diff(to_physical(c.x1), sample(g, [](double, double) { return 0.7; })) < 1e-15);
  CHECK(max_diff(to_physical(c.x2), sample(g, [](double, double) { return -1.2; })) < 1e-15);

  const Grid g2 = Grid::make(32, 5.0);
  const SpectralField r = random_field(g2, 4, 12.0);
  const SpectralVector v = velocity_from_vorticity(r, {0.1, 0.2});
  CHECK(max_modal_divergence(v) < 1e-13 * max_abs(r));
  double scale = 0.0;
  for (double x : to_physical(r).values())
    scale = std::max(scale, std::abs(x));
  CHECK(max_diff(to_physical(curl(v)), to_physical(r)) < 1e-12 * scale);

  SpectralField bad = r;
  bad.at(0, 0) = 0.5;
  CHECK_THROWS_AS(velocity_from_vorticity(bad), ContractError);
}

TEST_CASE("helmholtz projection") {
  const Grid g = Grid::make(32);
  const SpectralField q = random_field(g, 5, 12.0);
  const SpectralVector grad{derivative(q, 1), derivative(q, 2)};
  const SpectralVector pg = helmholtz_project(grad);
  CHECK(std::max(max_abs(pg.x1), max_abs(pg.x2)) < 1e-14 * max_abs(grad.x1));

  const SpectralVector df = velocity_from_vorticity(random_field(g, 6, 12.0), {0.4, 0.0});
  const SpectralVector pdf = helmholtz_project(df);
  CHECK(max_diff(pdf.x1, df.x1) < 1e-14);
  CHECK(max_diff(pdf.x2, df.x2) < 1e-14);

  const SpectralVector v{random_field(g, 7, 12.0, true), random_field(g, 8, 12.0, true)};
  const SpectralVector pv = helmholtz_project(v);
  const SpectralVector ppv = helmholtz_project(pv);
  CHECK(max_diff(ppv.x1, pv.x1) < 1e-14);
  CHECK(max_diff(ppv.x2, pv.x2) < 1e-14);
  CHECK(max_modal_divergence(pv) < 1e-13);
  CHECK(pv.x1.at(0, 0) == v.x1.at(0, 0));

  // Oracle: the projection formula written out mode by mode.
  for (auto [a, b] : {std::pair{3, -2}, std::pair{0, 5}, std::pair{-7, 1}}) {
    const Complex v1 = v.x1.at(a, b), v2 = v.x2.at(a, b);
    const Complex dot = (double(a) * v1 + double(b) * v2) / double(a * a + b * b);
    CHECK(std::abs(pv.x1.at(a, b) - (v1 - double(a) * dot)) < 1e-14);
    CHECK(std::abs(pv.x2.at(a, b) - (v2 - double(b) * dot)) < 1e-14);
  }
}

TEST_CASE("friedrichs cutoff and dealiasing") {
  const Grid g = Grid::make(32);
  const SpectralField f = random_field(g, 9, 20.0, true);
  const SpectralField j = friedrichs_cutoff(f, 5.0);
  CHECK(max_diff(friedrichs_cutoff(j, 5.0), j) == 0.0);
  CHECK(j.at(3, 4) == f.at(3, 4)); // tie |k| = 5 kept
  CHECK(j.at(4, 4) == Complex(0.0));
  CHECK(j.at(5, 0) == f.at(5, 0));
  CHECK(j.at(5, 1) == Complex(0.0));
  CHECK(max_diff(friedrichs_cutoff(f, 16.0 * std::sqrt(2.0)), f) == 0.0);
  CHECK_THROWS_AS(friedrichs_cutoff(f, 0.0), ContractError);

  const double total = inner(f, f);
  const SpectralField rest = f - j;
  CHECK(std::abs(inner(j, j) + inner(rest, rest) - total) < 1e-12 * total);

  const Grid gl = Grid::make(32, 3.0);
  const SpectralField fl = random_field(gl, 10, 20.0);
  const SpectralField jl = friedrichs_cutoff(fl, 5.0 * kTwoPi / 3.0);
  CHECK(jl.at(3, 4) == fl.at(3, 4));
  CHECK(jl.at(4, 4) == Complex(0.0));

  const SpectralVector v{random_field(g, 11, 20.0, true), random_field(g, 12, 20.0, true)};
  const SpectralVector jp = friedrichs_cutoff(helmholtz_project(v), 7.5);
  const SpectralVector pj = helmholtz_project(friedrichs_cutoff(v, 7.5));
  CHECK(max_diff(jp.x1, pj.x1) < 1e-14);
  CHECK(max_diff(jp.x2, pj.x2) < 1e-14);

  const SpectralField d = dealias(f);
  CHECK(max_diff(dealias(d), d) == 0.0);
  CHECK(max_outside_dealias(d) == 0.0);
  CHECK(max_outside_dealias(f) > 0.0);
  const SpectralField low = random_field(g, 13, 10.0);
  CHECK(max_diff(dealias(low), low) == 0.0);

  // cos(9 x1) cos(9 x2) squared lives on |k| in {0, 18, 18 sqrt 2}: only the mean survives.
  const PhysicalField m = sample(g, [](double x, double y) { return std::cos(9 * x) * std::cos(9 * y); });
  PhysicalField sq(g);
  for (std::size_t k = 0; k < g.size(); ++k)
    sq.values()[k] = m.values()[k] * m.values()[k];
  SpectralField ds = dealias(to_spectral(sq));
  CHECK(std::abs(ds.at(0, 0) - 0.25) < 1e-15);
  ds.at(0, 0) = 0.0;
  CHECK(max_abs(ds) < 1e-15);
}

TEST_CASE("parseval and norms") {
  const Grid g = Grid::make(32, 3.0);
  const SpectralField f = random_field(g, 14, 10.0, true);
  const SpectralField h = random_field(g, 15, 10.0, true);
  const PhysicalField pf = to_physical(f), ph = to_physical(h);
  double direct = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k)
    direct += pf.values()[k] * ph.values()[k];
  direct /= double(g.size());
  CHECK(std::abs(grid_average_product(pf, ph) - direct) < 1e-12 * std::abs(direct));
  CHECK(std::abs(inner(f, h) - g.area() * direct) < 1e-12 * std::abs(g.area() * direct));

  const PhysicalField c = sample(g, [](double, double) { return -2.0; });
  CHECK(lp_norm(c, 2.0) == doctest::Approx(2.0 * 3.0).epsilon(1e-14));
  CHECK(lp_norm(c, 1.0) == doctest::Approx(2.0 * 9.0).epsilon(1e-14));
  CHECK(lp_norm(c, std::numeric_limits<double>::infinity()) == 2.0);
  CHECK_THROWS_AS(lp_norm(c, 0.5), ContractError);
  CHECK(l2_norm(f) == doctest::Approx(lp_norm(pf, 2.0)).epsilon(1e-12));

  double grad_direct = 0.0;
  const PhysicalVector gf = gradient(f);
  for (std::size_t k = 0; k < g.size(); ++k)
    grad_direct += gf.x1.values()[k] * gf.x1.values()[k] + gf.x2.values()[k] * gf.x2.values()[k];
  grad_direct *= g.area() / double(g.size());
  CHECK(inner_grad(f, f) == doctest::Approx(grad_direct).epsilon(1e-12));
}
