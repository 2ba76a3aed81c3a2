#include "mrbc/spectral.hpp"

#include "mrbc/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace mrbc {

namespace {

// One forward/backward plan pair per grid size. Plans are created under a
// lock (the FFTW planner is not re-entrant) and executed through the
// new-array interface, which is safe to call concurrently.
class PlanPair {
public:
  explicit PlanPair(int n) {
    fftw_complex *buf = fftw_alloc_complex(static_cast<std::size_t>(n) * n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_ = fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, flags);
    backward_ = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, flags);
    fftw_free(buf);
  }
  ~PlanPair() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  PlanPair(const PlanPair &) = delete;
  PlanPair &operator=(const PlanPair &) = delete;

  void forward(std::vector<Complex> &data) const { run(forward_, data); }
  void backward(std::vector<Complex> &data) const { run(backward_, data); }

private:
  static void run(fftw_plan plan, std::vector<Complex> &data) {
    auto *p = reinterpret_cast<fftw_complex *>(data.data());
    fftw_execute_dft(plan, p, p);
  }

  fftw_plan forward_;
  fftw_plan backward_;
};

const PlanPair &plans_for(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<PlanPair>> cache;
  std::lock_guard lock(mutex);
  auto &slot = cache[n];
  if (!slot)
    slot = std::make_unique<PlanPair>(n);
  return *slot;
}

void require_same_grid(const Grid &a, const Grid &b, const char *op) {
  if (!(a == b))
    throw ContractError(std::string(op) + ": fields live on different grids");
}

double max_abs(std::span<const Complex> c) {
  double m = 0.0;
  for (const auto &z : c)
    m = std::max(m, std::abs(z));
  return m;
}

} // namespace

// --- Grid --------------------------------------------------------------------

Grid Grid::make(int n, double length, std::optional<double> dealias_radius) {
  if (n < 8 || n % 2 != 0)
    throw ContractError("grid: n must be even and >= 8, got " + std::to_string(n));
  if (!(length > 0.0) || !std::isfinite(length))
    throw ContractError("grid: length must be positive and finite");
  const double radius = dealias_radius.value_or(n / 3.0);
  if (!(radius > 0.0) || radius > n / 2.0)
    throw ContractError("grid: dealias_radius must lie in (0, n/2]");
  return Grid(n, length, radius);
}

double Grid::k_squared(std::size_t idx) const {
  const auto [m1, m2] = modes_at(idx);
  const double s = k_scale();
  return s * s * (static_cast<double>(m1) * m1 + static_cast<double>(m2) * m2);
}

double Grid::max_modulus() const {
  return k_scale() * (n_ / 2) * std::sqrt(2.0);
}

// --- fields -------------------------------------------------------------

SpectralField::SpectralField(const Grid &grid)
    : grid_(grid), coeffs_(grid.size(), Complex{0.0, 0.0}) {}

SpectralField::SpectralField(const Grid &grid, std::vector<Complex> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size())
    throw ContractError("spectral field: coefficient count does not match grid");
}

SpectralField &SpectralField::operator+=(const SpectralField &o) {
  require_same_grid(grid_, o.grid_, "operator+=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    coeffs_[i] += o.coeffs_[i];
  return *this;
}

SpectralField &SpectralField::operator-=(const SpectralField &o) {
  require_same_grid(grid_, o.grid_, "operator-=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    coeffs_[i] -= o.coeffs_[i];
  return *this;
}

SpectralField &SpectralField::operator*=(double a) {
  for (auto &c : coeffs_)
    c *= a;
  return *this;
}

SpectralField &SpectralField::axpy(double a, const SpectralField &o) {
  require_same_grid(grid_, o.grid_, "axpy");
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    coeffs_[i] += a * o.coeffs_[i];
  return *this;
}

PhysicalField::PhysicalField(const Grid &grid) : grid_(grid), values_(grid.size(), 0.0) {}

PhysicalField::PhysicalField(const Grid &grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw ContractError("physical field: value count does not match grid");
}

// --- transforms -----------------------------------------------------------

SpectralField to_spectral(const PhysicalField &f) {
  const Grid &g = f.grid();
  std::vector<Complex> data(f.values().begin(), f.values().end());
  plans_for(g.n()).forward(data);
  const double scale = 1.0 / static_cast<double>(g.size());
  for (auto &c : data)
    c *= scale;
  return SpectralField(g, std::move(data));
}

PhysicalField to_physical(const SpectralField &f) {
  const Grid &g = f.grid();
  std::vector<Complex> data(f.coeffs().begin(), f.coeffs().end());
  plans_for(g.n()).backward(data);
  double max_re = 0.0;
  double max_im = 0.0;
  for (const auto &z : data) {
    max_re = std::max(max_re, std::abs(z.real()));
    max_im = std::max(max_im, std::abs(z.imag()));
  }
  const double scale = std::max(max_re, max_abs(f.coeffs()));
  if (max_im > 1e-12 * scale && max_im > std::numeric_limits<double>::min()) {
    std::ostringstream msg;
    msg << "to_physical: coefficients are not Hermitian (max asymmetry "
        << max_hermitian_asymmetry(f) << ", imaginary residue " << max_im << ")";
    throw ContractError(msg.str());
  }
  std::vector<double> values(data.size());
  std::transform(data.begin(), data.end(), values.begin(),
                 [](const Complex &z) { return z.real(); });
  return PhysicalField(g, std::move(values));
}

std::pair<PhysicalField, PhysicalField> to_physical_pair(const SpectralField &a,
                                                         const SpectralField &b) {
  require_same_grid(a.grid(), b.grid(), "to_physical_pair");
  const Grid &g = a.grid();
  std::vector<Complex> data(g.size());
  const Complex i{0.0, 1.0};
  for (std::size_t k = 0; k < data.size(); ++k)
    data[k] = a.coeffs()[k] + i * b.coeffs()[k];
  plans_for(g.n()).backward(data);
  std::vector<double> va(data.size()), vb(data.size());
  for (std::size_t k = 0; k < data.size(); ++k) {
    va[k] = data[k].real();
    vb[k] = data[k].imag();
  }
  return {PhysicalField(g, std::move(va)), PhysicalField(g, std::move(vb))};
}

std::pair<SpectralField, SpectralField> to_spectral_pair(const PhysicalField &a,
                                                         const PhysicalField &b) {
  require_same_grid(a.grid(), b.grid(), "to_spectral_pair");
  const Grid &g = a.grid();
  const int n = g.n();
  std::vector<Complex> data(g.size());
  for (std::size_t k = 0; k < data.size(); ++k)
    data[k] = Complex{a.values()[k], b.values()[k]};
  plans_for(n).forward(data);
  const double scale = 1.0 / static_cast<double>(g.size());
  std::vector<Complex> ca(data.size()), cb(data.size());
  for (int i1 = 0; i1 < n; ++i1) {
    const int j1 = (n - i1) % n;
    for (int i2 = 0; i2 < n; ++i2) {
      const int j2 = (n - i2) % n;
      const Complex z = data[g.index(i1, i2)];
      const Complex zc = std::conj(data[g.index(j1, j2)]);
      ca[g.index(i1, i2)] = 0.5 * scale * (z + zc);
      cb[g.index(i1, i2)] = Complex{0.0, -0.5} * scale * (z - zc);
    }
  }
  return {SpectralField(g, std::move(ca)), SpectralField(g, std::move(cb))};
}

double max_hermitian_asymmetry(const SpectralField &f) {
  const Grid &g = f.grid();
  const int n = g.n();
  double worst = 0.0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      const Complex a = f.coeffs()[g.index(i1, i2)];
      const Complex b = f.coeffs()[g.index((n - i1) % n, (n - i2) % n)];
      worst = std::max(worst, std::abs(a - std::conj(b)));
    }
  return worst;
}

// --- differential operators -------------------------------------------------

SpectralField derivative(const SpectralField &f, int axis, int order) {
  if (axis != 1 && axis != 2)
    throw ContractError("derivative: axis must be 1 or 2");
  if (order < 1)
    throw ContractError("derivative: order must be positive");
  const Grid &g = f.grid();
  const int n = g.n();
  SpectralField out(g);
  // (i k)^order per integer mode along the axis.
  std::vector<Complex> factor(n);
  for (int i = 0; i < n; ++i) {
    const int m = g.mode(i);
    if (order % 2 == 1 && m == -n / 2) {
      factor[i] = 0.0;
      continue;
    }
    factor[i] = std::pow(Complex{0.0, g.k_scale() * m}, order);
  }
  auto src = f.coeffs();
  auto dst = out.coeffs();
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      const std::size_t idx = g.index(i1, i2);
      dst[idx] = src[idx] * factor[axis == 1 ? i1 : i2];
    }
  return out;
}

SpectralField laplacian(const SpectralField &f) {
  const Grid &g = f.grid();
  SpectralField out(g);
  for (std::size_t k = 0; k < g.size(); ++k)
    out.coeffs()[k] = -g.k_squared(k) * f.coeffs()[k];
  return out;
}

SpectralField inverse_laplacian(const SpectralField &f) {
  const Grid &g = f.grid();
  const double mean = std::abs(f.mean());
  if (mean > 1e-12 * std::max(1.0, max_abs(f.coeffs()))) {
    std::ostringstream msg;
    msg << "inverse_laplacian: input has nonzero mean " << mean;
    throw ContractError(msg.str());
  }
  SpectralField out(g);
  for (std::size_t k = 1; k < g.size(); ++k)
    out.coeffs()[k] = -f.coeffs()[k] / g.k_squared(k);
  return out;
}

SpectralVector velocity_from_vorticity(const SpectralField &vorticity,
                                       std::pair<double, double> mean_u) {
  const SpectralField psi = inverse_laplacian(vorticity);
  SpectralVector u{-1.0 * derivative(psi, 2), derivative(psi, 1)};
  u.x1.coeffs()[0] = mean_u.first;
  u.x2.coeffs()[0] = mean_u.second;
  return u;
}

SpectralField curl(const SpectralVector &v) {
  return derivative(v.x2, 1) - derivative(v.x1, 2);
}

SpectralField divergence(const SpectralVector &v) {
  return derivative(v.x1, 1) + derivative(v.x2, 2);
}

double max_modal_divergence(const SpectralVector &v) {
  const Grid &g = v.x1.grid();
  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto [m1, m2] = g.modes_at(k);
    const Complex d = g.k_scale() * (static_cast<double>(m1) * v.x1.coeffs()[k] +
                                     static_cast<double>(m2) * v.x2.coeffs()[k]);
    worst = std::max(worst, std::abs(d));
  }
  return worst;
}

SpectralVector helmholtz_project(const SpectralVector &v) {
  const Grid &g = v.x1.grid();
  require_same_grid(g, v.x2.grid(), "helmholtz_project");
  SpectralVector out = v;
  for (std::size_t k = 1; k < g.size(); ++k) {
    const auto [m1, m2] = g.modes_at(k);
    const double k1 = m1, k2 = m2;
    const double kk = k1 * k1 + k2 * k2;
    const Complex dot = (k1 * v.x1.coeffs()[k] + k2 * v.x2.coeffs()[k]) / kk;
    out.x1.coeffs()[k] -= k1 * dot;
    out.x2.coeffs()[k] -= k2 * dot;
  }
  return out;
}

// --- truncation --------------------------------------------------------------

namespace {

// Integer-index form of |xi| <= cut, with a relative slack so that exact ties
// survive the division by the wavenumber scale.
bool inside_ball(const Grid &g, std::size_t idx, double cut_in_modes) {
  const auto [m1, m2] = g.modes_at(idx);
  const double mm = static_cast<double>(m1) * m1 + static_cast<double>(m2) * m2;
  return mm <= cut_in_modes * cut_in_modes * (1.0 + 1e-12);
}

} // namespace

SpectralField friedrichs_cutoff(const SpectralField &f, double n_cut) {
  if (!(n_cut > 0.0))
    throw ContractError("friedrichs_cutoff: n_cut must be positive");
  const Grid &g = f.grid();
  const double cut = n_cut / g.k_scale();
  SpectralField out = f;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (!inside_ball(g, k, cut))
      out.coeffs()[k] = 0.0;
  return out;
}

SpectralVector friedrichs_cutoff(const SpectralVector &v, double n_cut) {
  return {friedrichs_cutoff(v.x1, n_cut), friedrichs_cutoff(v.x2, n_cut)};
}

bool inside_dealias_ball(const Grid &grid, std::size_t idx) {
  return inside_ball(grid, idx, grid.dealias_radius());
}

void dealias_in_place(SpectralField &f) {
  const Grid &g = f.grid();
  for (std::size_t k = 0; k < g.size(); ++k)
    if (!inside_dealias_ball(g, k))
      f.coeffs()[k] = 0.0;
}

SpectralField dealias(const SpectralField &f) {
  SpectralField out = f;
  dealias_in_place(out);
  return out;
}

double max_outside_dealias(const SpectralField &f) {
  const Grid &g = f.grid();
  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (!inside_dealias_ball(g, k))
      worst = std::max(worst, std::abs(f.coeffs()[k]));
  return worst;
}

// --- integrals and norms --------------------------------------------------

double inner(const SpectralField &f, const SpectralField &g) {
  require_same_grid(f.grid(), g.grid(), "inner");
  double s = 0.0;
  for (std::size_t k = 0; k < f.coeffs().size(); ++k)
    s += (f.coeffs()[k] * std::conj(g.coeffs()[k])).real();
  return f.grid().area() * s;
}

double l2_norm(const SpectralField &f) { return std::sqrt(inner(f, f)); }

double inner_grad(const SpectralField &f, const SpectralField &g) {
  require_same_grid(f.grid(), g.grid(), "inner_grad");
  const Grid &grid = f.grid();
  double s = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k)
    s += grid.k_squared(k) * (f.coeffs()[k] * std::conj(g.coeffs()[k])).real();
  return grid.area() * s;
}

double lp_norm(const PhysicalField &f, double p) {
  if (!(p >= 1.0))
    throw ContractError("lp_norm: p must be >= 1");
  const auto v = f.values();
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v)
      m = std::max(m, std::abs(x));
    return m;
  }
  double s = 0.0;
  for (double x : v)
    s += std::pow(std::abs(x), p);
  return std::pow(f.grid().area() * s / static_cast<double>(v.size()), 1.0 / p);
}

double lp_norm(const PhysicalVector &v, double p) {
  const Grid &g = v.x1.grid();
  std::vector<double> mag(g.size());
  for (std::size_t k = 0; k < g.size(); ++k)
    mag[k] = std::hypot(v.x1.values()[k], v.x2.values()[k]);
  return lp_norm(PhysicalField(g, std::move(mag)), p);
}

double grid_average_product(const PhysicalField &f, const PhysicalField &g) {
  double s = 0.0;
  for (std::size_t k = 0; k < f.values().size(); ++k)
    s += f.values()[k] * g.values()[k];
  return s / static_cast<double>(f.values().size());
}

PhysicalVector gradient(const SpectralField &f) {
  auto [d1, d2] = to_physical_pair(derivative(f, 1), derivative(f, 2));
  return {std::move(d1), std::move(d2)};
}

} // namespace mrbc
