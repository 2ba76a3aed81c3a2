#include "mrbc/csv.hpp"

#include "mrbc/errors.hpp"
#include "mrbc/paley.hpp"

#include <cmath>
#include <cstdio>

namespace mrbc {

namespace {

std::string norm_suffix(double p) { return std::isinf(p) ? "Linf" : "Lp" + format_index(p); }

bool has_gn(double p) { return p > 2.0 && !std::isinf(p); }

std::optional<double> bkm_exponent(const DiagnosticsConfig &cfg) {
  for (double p : cfg.p_norms)
    if (p >= 2.0 && !std::isinf(p))
      return p;
  return std::nullopt;
}

double bkm_sobolev(const DiagnosticsConfig &cfg) {
  for (double s : cfg.s_values)
    if (s > 2.0)
      return s;
  return 2.5;
}

} // namespace

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_index(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

DiagnosticsCsv::DiagnosticsCsv(std::ostream &out, const DiagnosticsConfig &cfg, const Params &params)
    : out_(out), cfg_(cfg), params_(params) {
  columns_ = {"time", "step", "E_half", "diss_omega", "diss_theta", "coupling", "residual"};
  for (double p : cfg_.p_norms)
    for (const char *f : {"Omega_", "omega_", "Z_", "gradtheta_", "D2theta_"})
      columns_.push_back(f + norm_suffix(p));
  columns_.push_back("gradu_Linf");
  columns_.push_back("u_Linf");
  for (double s : cfg_.s_values)
    for (const char *f : {"u_Hs", "omega_Hs", "theta_Hs"})
      columns_.push_back(f + format_index(s));
  columns_.push_back("bkm");
  for (double p : cfg_.p_norms)
    if (has_gn(p)) {
      columns_.push_back("gn_p" + format_index(p));
      columns_.push_back("gnlp_p" + format_index(p));
    }
  for (std::size_t i = 0; i < columns_.size(); ++i)
    out_ << (i ? "," : "") << columns_[i];
  out_ << '\n';
}

void DiagnosticsCsv::sample(const State &s, long step, const diag::EnergyLedger *ledger) {
  std::vector<std::optional<double>> cells;
  cells.reserve(columns_.size());
  cells.push_back(s.time);
  cells.push_back(static_cast<double>(step));

  if (cfg_.enabled("energy")) {
    const diag::EnergyTerms e = diag::energy_terms(s, params_);
    cells.insert(cells.end(), {e.half_energy, e.dissipation_omega, e.dissipation_theta, e.coupling(),
                               ledger ? ledger->cumulative_defect() : 0.0});
  } else {
    cells.insert(cells.end(), 5, std::nullopt);
  }

  const bool norms = cfg_.enabled("norms");
  std::optional<SpectralField> z;
  if (norms && !cfg_.p_norms.empty())
    z = compute_Z(s, params_);
  for (double p : cfg_.p_norms) {
    if (!norms) {
      cells.insert(cells.end(), 5, std::nullopt);
      continue;
    }
    cells.push_back(diag::lp(s.omega_big, p));
    cells.push_back(diag::lp(s.omega_small, p));
    cells.push_back(diag::lp(*z, p));
    cells.push_back(diag::grad_lp(s.theta, p));
    cells.push_back(diag::hessian_lp(s.theta, p));
  }
  if (norms) {
    cells.push_back(diag::grad_velocity_linf(s));
    cells.push_back(diag::velocity_linf(s));
  } else {
    cells.insert(cells.end(), 2, std::nullopt);
  }

  const bool hs = cfg_.enabled("hs");
  for (double sv : cfg_.s_values) {
    if (!hs) {
      cells.insert(cells.end(), 3, std::nullopt);
      continue;
    }
    cells.push_back(paley::sobolev_norm(s.velocity(), sv));
    cells.push_back(paley::sobolev_norm(s.omega_small, sv));
    cells.push_back(paley::sobolev_norm(s.theta, sv));
  }

  const auto bkm_p = bkm_exponent(cfg_);
  if (cfg_.enabled("bkm") && bkm_p)
    cells.push_back(diag::bkm_ratio(s, bkm_sobolev(cfg_), *bkm_p));
  else
    cells.push_back(std::nullopt);

  const bool gn = cfg_.enabled("gn");
  std::optional<SpectralVector> u_fluct;
  if (gn) {
    u_fluct = s.velocity();
    u_fluct->x1.coeffs()[0] = 0.0;
    u_fluct->x2.coeffs()[0] = 0.0;
  }
  for (double p : cfg_.p_norms) {
    if (!has_gn(p))
      continue;
    std::optional<double> l2_form, lp_form;
    if (gn) {
      for (const SpectralField *c : {&u_fluct->x1, &u_fluct->x2}) {
        try {
          const diag::GnRatios r = diag::gn_ratio(*c, p);
          l2_form = std::max(l2_form.value_or(0.0), r.l2_form);
          lp_form = std::max(lp_form.value_or(0.0), r.lp_form);
        } catch (const ContractError &) {
          // constant component: ratio undefined
        }
      }
    }
    cells.push_back(l2_form);
    cells.push_back(lp_form);
  }

  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i)
      out_ << ',';
    if (i == 1)
      out_ << step;
    else if (cells[i])
      out_ << format_number(*cells[i]);
  }
  out_ << '\n';
}

} // namespace mrbc
