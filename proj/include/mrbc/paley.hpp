#pragma once

// Littlewood-Paley dyadic decomposition on the torus, Besov and Sobolev
// frequency norms, and measurement helpers for the Bernstein and commutator
// inequalities.
//
// The low-frequency cutoff is the smoothstep
//   chi(r) = h((4/3 - r) / (4/3 - 3/4)),  h(t) = g(t) / (g(t) + g(1 - t)),
//   g(t) = exp(-1/t) for t > 0 and 0 otherwise,
// and the shell multiplier is phi(xi) = chi(xi/2) - chi(xi). Block j >= 0
// applies phi(2^-j |xi|); block -1 applies chi(|xi|). xi is the physical
// wavenumber.

#include "mrbc/spectral.hpp"

#include <limits>
#include <vector>

namespace mrbc::paley {

double smooth_step(double t);
double chi(double r);
double phi(double r);

class DyadicPartition {
public:
  /// j_max = ceil(log2(max wavenumber modulus)) + 1.
  static DyadicPartition build(const Grid &grid);

  const Grid &grid() const { return grid_; }
  int j_max() const { return j_max_; }
  /// Multiplier of block j (j in [-1, j_max]) at coefficient index idx;
  /// zero for j > j_max.
  double multiplier(int j, std::size_t idx) const;

private:
  DyadicPartition(const Grid &grid, int j_max, std::vector<std::vector<double>> tables)
      : grid_(grid), j_max_(j_max), tables_(std::move(tables)) {}

  Grid grid_;
  int j_max_;
  std::vector<std::vector<double>> tables_; // tables_[j + 1]
};

struct BesovIndex {
  double s = 0.0;
  double p = 2.0;
  double r = 2.0;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Delta_j f. Throws ContractError for j < -1.
SpectralField dyadic_block(const SpectralField &f, int j, const DyadicPartition &part);

/// S_j f = sum_{-1 <= q <= j-1} Delta_q f, for j >= 0.
SpectralField low_pass(const SpectralField &f, int j, const DyadicPartition &part);

/// || 2^{js} ||Delta_j f||_{L^p} ||_{l^r} over j = -1 .. j_max.
double besov_norm(const SpectralField &f, const BesovIndex &idx, const DyadicPartition &part);

/// sqrt(sum_k (1 + |xi|^2)^s |f(k)|^2). Uses the mean-normalised coefficients,
/// so a constant c has norm |c|.
double sobolev_norm(const SpectralField &f, double s);
double sobolev_norm(const SpectralVector &v, double s);

/// ||S_0 f|| + (sum_{q >= 0} 2^{2qs} ||Delta_q f||^2)^{1/2} with the same
/// normalisation as sobolev_norm.
double sobolev_norm_blocks(const SpectralField &f, double s, const DyadicPartition &part);

struct BernsteinReport {
  /// sup_|alpha|=k ||d^alpha S_j f||_b / (2^{j(k + 2(1/a - 1/b))} ||S_j f||_a)
  double low_pass_ratio;
  /// 2^{jk} ||Delta_j f||_a / sup_|alpha|=k ||d^alpha Delta_j f||_a
  double block_lower_ratio;
  /// sup_|alpha|=k ||d^alpha Delta_j f||_a / (2^{jk} ||Delta_j f||_a)
  double block_upper_ratio;
};

/// Requires 1 <= a <= b, k >= 0, j >= 0. Throws ContractError when S_j f or
/// Delta_j f vanishes.
BernsteinReport bernstein_check(const SpectralField &f, int j, double a, double b, int k,
                                const DyadicPartition &part);

/// [Delta_j, g] . grad f = Delta_j(g . grad f) - g . grad(Delta_j f), products
/// formed on the grid and dealiased.
SpectralField commutator(int j, const SpectralVector &g, const SpectralField &f,
                         const DyadicPartition &part);

struct CommutatorProfile {
  /// 2^{js} ||[Delta_j, g] . grad f||_{L^2} / (||grad g||_inf ||f||_{H^s}
  ///   + ||grad g||_{H^s} ||f||_inf), for j = -1 .. j_max.
  std::vector<double> ratios;
  double l2_norm;
};

CommutatorProfile commutator_profile(const SpectralVector &g, const SpectralField &f, double s,
                                     const DyadicPartition &part);

} // namespace mrbc::paley
