#pragma once

// Periodic-grid spectral infrastructure on the torus [0, L)^2.
//
// Coefficients are stored for the full n x n set of integer wavenumbers,
// (m1, m2) with m in {-n/2, ..., n/2 - 1}, in FFT order: index i maps to
// m = i for i < n/2 and m = i - n otherwise. Physical values are stored
// row-major with the x1 index outermost: value(x1 = i h, x2 = j h) lives
// at i * n + j. The forward transform is normalised so that coeff(0, 0)
// is the mean of the field.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace mrbc {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

class Grid {
public:
  /// Validates n (even, >= 8), length (> 0) and the dealias radius, given in
  /// integer wavenumber units. The default radius is n/3 (the 2/3 rule).
  static Grid make(int n, double length = kTwoPi,
                   std::optional<double> dealias_radius = std::nullopt);

  int n() const { return n_; }
  double length() const { return length_; }
  double dealias_radius() const { return dealias_radius_; }

  /// Physical wavenumber per integer mode, 2 pi / L.
  double k_scale() const { return kTwoPi / length_; }
  double spacing() const { return length_ / n_; }
  double area() const { return length_ * length_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }

  int mode(int i) const { return i < n_ / 2 ? i : i - n_; }
  int slot(int m) const { return m >= 0 ? m : m + n_; }
  std::size_t index(int i1, int i2) const {
    return static_cast<std::size_t>(i1) * n_ + i2;
  }
  std::pair<int, int> modes_at(std::size_t idx) const {
    return {mode(static_cast<int>(idx / n_)), mode(static_cast<int>(idx % n_))};
  }
  /// Squared physical wavenumber modulus of the coefficient at idx.
  double k_squared(std::size_t idx) const;
  /// Largest physical wavenumber modulus representable on the grid.
  double max_modulus() const;

  friend bool operator==(const Grid &, const Grid &) = default;

private:
  Grid(int n, double length, double radius)
      : n_(n), length_(length), dealias_radius_(radius) {}

  int n_;
  double length_;
  double dealias_radius_;
};

/// Fourier coefficients of a real scalar field.
class SpectralField {
public:
  explicit SpectralField(const Grid &grid);
  SpectralField(const Grid &grid, std::vector<Complex> coeffs);

  const Grid &grid() const { return grid_; }
  std::span<Complex> coeffs() { return coeffs_; }
  std::span<const Complex> coeffs() const { return coeffs_; }

  Complex &at(int m1, int m2) {
    return coeffs_[grid_.index(grid_.slot(m1), grid_.slot(m2))];
  }
  Complex at(int m1, int m2) const {
    return coeffs_[grid_.index(grid_.slot(m1), grid_.slot(m2))];
  }
  Complex mean() const { return coeffs_[0]; }

  SpectralField &operator+=(const SpectralField &o);
  SpectralField &operator-=(const SpectralField &o);
  SpectralField &operator*=(double a);
  /// this += a * o
  SpectralField &axpy(double a, const SpectralField &o);

  friend SpectralField operator+(SpectralField a, const SpectralField &b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField &b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

private:
  Grid grid_;
  std::vector<Complex> coeffs_;
};

/// Real samples on the uniform n x n collocation grid.
class PhysicalField {
public:
  explicit PhysicalField(const Grid &grid);
  PhysicalField(const Grid &grid, std::vector<double> values);

  const Grid &grid() const { return grid_; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  double &at(int i1, int i2) { return values_[grid_.index(i1, i2)]; }
  double at(int i1, int i2) const { return values_[grid_.index(i1, i2)]; }

private:
  Grid grid_;
  std::vector<double> values_;
};

struct SpectralVector {
  SpectralField x1;
  SpectralField x2;
};

struct PhysicalVector {
  PhysicalField x1;
  PhysicalField x2;
};

// --- transforms -----------------------------------------------------------

SpectralField to_spectral(const PhysicalField &f);

/// Inverse transform. Throws ContractError reporting the maximal asymmetry
/// |c(k) - conj(c(-k))| when the imaginary residue exceeds 1e-12 relative.
PhysicalField to_physical(const SpectralField &f);

/// Inverse transform of two Hermitian fields with a single complex FFT.
/// No symmetry check; intended for the solver's inner loops.
std::pair<PhysicalField, PhysicalField> to_physical_pair(const SpectralField &a,
                                                         const SpectralField &b);
/// Forward transform of two real fields with a single complex FFT.
std::pair<SpectralField, SpectralField> to_spectral_pair(const PhysicalField &a,
                                                         const PhysicalField &b);

/// max_k |c(k) - conj(c(-k))|
double max_hermitian_asymmetry(const SpectralField &f);

// --- differential operators -------------------------------------------------

/// Multiplies coeff(k) by (i k_axis)^order. For odd orders the unpaired
/// Nyquist wavenumber along `axis` is zeroed so the result stays real.
SpectralField derivative(const SpectralField &f, int axis, int order = 1);
SpectralField laplacian(const SpectralField &f);

/// Solves Delta g = f for zero-mean f (mean tolerance 1e-12).
SpectralField inverse_laplacian(const SpectralField &f);

/// u = mean_u + grad_perp psi with Delta psi = vorticity, grad_perp = (-d2, d1).
SpectralVector velocity_from_vorticity(const SpectralField &vorticity,
                                       std::pair<double, double> mean_u = {0.0, 0.0});

/// d1 v2 - d2 v1
SpectralField curl(const SpectralVector &v);
SpectralField divergence(const SpectralVector &v);
/// max_k |k . v(k)|
double max_modal_divergence(const SpectralVector &v);

/// Leray projection onto divergence-free fields; the k = 0 mode is untouched.
SpectralVector helmholtz_project(const SpectralVector &v);

// --- truncation --------------------------------------------------------------

/// Sharp ball truncation: zero every coefficient with |xi| > n_cut, where
/// n_cut is a physical wavenumber. Ties |xi| = n_cut are kept.
SpectralField friedrichs_cutoff(const SpectralField &f, double n_cut);
SpectralVector friedrichs_cutoff(const SpectralVector &v, double n_cut);

/// friedrichs_cutoff at the grid's dealias radius.
SpectralField dealias(const SpectralField &f);
void dealias_in_place(SpectralField &f);

/// Largest coefficient magnitude outside the dealias radius.
double max_outside_dealias(const SpectralField &f);
bool inside_dealias_ball(const Grid &grid, std::size_t idx);

// --- integrals and norms --------------------------------------------------

/// L^2 inner product over the torus, area * Re sum f(k) conj(g(k)).
double inner(const SpectralField &f, const SpectralField &g);
double l2_norm(const SpectralField &f);
/// <grad f, grad g> over the torus.
double inner_grad(const SpectralField &f, const SpectralField &g);

/// L^p norm by grid quadrature: (area * mean |f|^p)^(1/p); p = inf gives the
/// grid maximum.
double lp_norm(const PhysicalField &f, double p);
/// Pointwise Euclidean length of a vector field, then L^p.
double lp_norm(const PhysicalVector &v, double p);

/// Grid average of f * g.
double grid_average_product(const PhysicalField &f, const PhysicalField &g);

PhysicalVector gradient(const SpectralField &f);

} // namespace mrbc
