#include "mrbc/paley.hpp"

#include "mrbc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mrbc::paley {

namespace {

double bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double sequence_norm(const std::vector<double> &terms, double r) {
  if (std::isinf(r)) {
    double m = 0.0;
    for (double t : terms)
      m = std::max(m, t);
    return m;
  }
  double s = 0.0;
  for (double t : terms)
    s += std::pow(t, r);
  return std::pow(s, 1.0 / r);
}

// sqrt(sum |f(k)|^2), the mean-normalised L^2 norm.
double rms(const SpectralField &f) {
  double s = 0.0;
  for (const auto &c : f.coeffs())
    s += std::norm(c);
  return std::sqrt(s);
}

double grad_linf(const SpectralVector &g) {
  const auto d11 = gradient(g.x1);
  const auto d22 = gradient(g.x2);
  double m = 0.0;
  for (std::size_t k = 0; k < d11.x1.values().size(); ++k) {
    const double a = d11.x1.values()[k], b = d11.x2.values()[k];
    const double c = d22.x1.values()[k], d = d22.x2.values()[k];
    m = std::max(m, std::sqrt(a * a + b * b + c * c + d * d));
  }
  return m;
}

// Dealiased g . grad f.
SpectralField transport(const PhysicalVector &g, const SpectralField &f) {
  const auto df = gradient(f);
  PhysicalField prod(f.grid());
  for (std::size_t k = 0; k < prod.values().size(); ++k)
    prod.values()[k] = g.x1.values()[k] * df.x1.values()[k] + g.x2.values()[k] * df.x2.values()[k];
  return dealias(to_spectral(prod));
}

} // namespace

double smooth_step(double t) {
  const double a = bump(t);
  const double b = bump(1.0 - t);
  return a / (a + b);
}

double chi(double r) { return smooth_step((4.0 / 3.0 - r) / (4.0 / 3.0 - 3.0 / 4.0)); }

double phi(double r) { return chi(r / 2.0) - chi(r); }

DyadicPartition DyadicPartition::build(const Grid &grid) {
  const int j_max = static_cast<int>(std::ceil(std::log2(grid.max_modulus()))) + 1;
  std::vector<std::vector<double>> tables(j_max + 2, std::vector<double>(grid.size()));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double r = std::sqrt(grid.k_squared(k));
    tables[0][k] = chi(r);
    for (int j = 0; j <= j_max; ++j)
      tables[j + 1][k] = phi(std::ldexp(r, -j));
  }
  return DyadicPartition(grid, j_max, std::move(tables));
}

double DyadicPartition::multiplier(int j, std::size_t idx) const {
  if (j < -1)
    throw ContractError("dyadic partition: block index must be >= -1");
  if (j > j_max_)
    return 0.0;
  return tables_[j + 1][idx];
}

SpectralField dyadic_block(const SpectralField &f, int j, const DyadicPartition &part) {
  if (j < -1)
    throw ContractError("dyadic_block: j must be >= -1, got " + std::to_string(j));
  if (!(f.grid() == part.grid()))
    throw ContractError("dyadic_block: partition built for a different grid");
  SpectralField out(f.grid());
  if (j > part.j_max())
    return out;
  for (std::size_t k = 0; k < f.coeffs().size(); ++k)
    out.coeffs()[k] = part.multiplier(j, k) * f.coeffs()[k];
  return out;
}

SpectralField low_pass(const SpectralField &f, int j, const DyadicPartition &part) {
  if (j < 0)
    throw ContractError("low_pass: j must be >= 0");
  SpectralField out(f.grid());
  for (int q = -1; q <= std::min(j - 1, part.j_max()); ++q)
    out += dyadic_block(f, q, part);
  return out;
}

double besov_norm(const SpectralField &f, const BesovIndex &idx, const DyadicPartition &part) {
  if (!(idx.p >= 1.0) || !(idx.r >= 1.0))
    throw ContractError("besov_norm: p and r must be >= 1");
  std::vector<double> terms;
  for (int j = -1; j <= part.j_max(); ++j) {
    const double block = lp_norm(to_physical(dyadic_block(f, j, part)), idx.p);
    terms.push_back(std::pow(2.0, j * idx.s) * block);
  }
  return sequence_norm(terms, idx.r);
}

double sobolev_norm(const SpectralField &f, double s) {
  const Grid &g = f.grid();
  double sum = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k)
    sum += std::pow(1.0 + g.k_squared(k), s) * std::norm(f.coeffs()[k]);
  return std::sqrt(sum);
}

double sobolev_norm(const SpectralVector &v, double s) {
  return std::hypot(sobolev_norm(v.x1, s), sobolev_norm(v.x2, s));
}

double sobolev_norm_blocks(const SpectralField &f, double s, const DyadicPartition &part) {
  double high = 0.0;
  for (int q = 0; q <= part.j_max(); ++q)
    high += std::pow(2.0, 2.0 * q * s) * std::pow(rms(dyadic_block(f, q, part)), 2);
  return rms(low_pass(f, 0, part)) + std::sqrt(high);
}

BernsteinReport bernstein_check(const SpectralField &f, int j, double a, double b, int k,
                                const DyadicPartition &part) {
  if (!(a >= 1.0) || !(b >= a))
    throw ContractError("bernstein_check: need 1 <= a <= b");
  if (k < 0 || j < 0)
    throw ContractError("bernstein_check: need k >= 0 and j >= 0");

  const SpectralField low = low_pass(f, j, part);
  const SpectralField block = dyadic_block(f, j, part);
  const double low_a = lp_norm(to_physical(low), a);
  const double block_a = lp_norm(to_physical(block), a);
  if (!(low_a > 0.0) || !(block_a > 0.0))
    throw ContractError("bernstein_check: S_j f or Delta_j f has zero norm");

  // sup over multi-indices alpha = (k - m, m).
  auto sup_derivative = [&](const SpectralField &h, double p) {
    double best = 0.0;
    for (int m = 0; m <= k; ++m) {
      SpectralField d = h;
      if (k - m > 0)
        d = derivative(d, 1, k - m);
      if (m > 0)
        d = derivative(d, 2, m);
      best = std::max(best, lp_norm(to_physical(d), p));
    }
    return best;
  };

  const double inv_a = std::isinf(a) ? 0.0 : 1.0 / a;
  const double inv_b = std::isinf(b) ? 0.0 : 1.0 / b;
  const double low_factor = std::pow(2.0, j * (k + 2.0 * (inv_a - inv_b)));
  const double block_factor = std::pow(2.0, j * k);
  const double d_block = sup_derivative(block, a);

  BernsteinReport report{};
  report.low_pass_ratio = sup_derivative(low, b) / (low_factor * low_a);
  report.block_lower_ratio = block_factor * block_a / d_block;
  report.block_upper_ratio = d_block / (block_factor * block_a);
  return report;
}

SpectralField commutator(int j, const SpectralVector &g, const SpectralField &f,
                         const DyadicPartition &part) {
  auto [g1, g2] = to_physical_pair(g.x1, g.x2);
  const PhysicalVector gp{std::move(g1), std::move(g2)};
  return dyadic_block(transport(gp, f), j, part) - transport(gp, dyadic_block(f, j, part));
}

CommutatorProfile commutator_profile(const SpectralVector &g, const SpectralField &f, double s,
                                     const DyadicPartition &part) {
  const double f_inf = lp_norm(to_physical(f), kInf);
  const double grad_g_hs = std::hypot(
      std::hypot(sobolev_norm(derivative(g.x1, 1), s), sobolev_norm(derivative(g.x1, 2), s)),
      std::hypot(sobolev_norm(derivative(g.x2, 1), s), sobolev_norm(derivative(g.x2, 2), s)));
  const double scale = grad_linf(g) * sobolev_norm(f, s) + grad_g_hs * f_inf;

  CommutatorProfile out{{}, 0.0};
  double sum = 0.0;
  for (int j = -1; j <= part.j_max(); ++j) {
    const double c = std::pow(2.0, j * s) * rms(commutator(j, g, f, part));
    const double ratio = scale > 0.0 ? c / scale : 0.0;
    out.ratios.push_back(ratio);
    sum += ratio * ratio;
  }
  out.l2_norm = std::sqrt(sum);
  return out;
}

} // namespace mrbc::paley
