// Copyright 2026 The upp-kit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "upp/tuning.hpp"

#include <algorithm>
#include <cmath>

#include "upp/mixing.hpp"

namespace upp {

namespace {
constexpr double kSlack = 1.01;  // "just inside" factor for open inequalities

struct McDerived {
  double eps1, eps2, eps3, eps4, xi1, xi2;
};

McDerived mc_derived(double m_bar, double theta, double rho, double lam1d,
                     double kap_d, double kap_g, double ebar) {
  McDerived d{};
  d.eps1 = rho * lam1d * (1 - ebar) / (kap_d * kap_g) -
           ((4 + 4 * theta + theta * theta) / (4 * kap_g) +
            (0.5 + 1 / theta) * m_bar * m_bar);
  double rl = rho * lam1d;
  d.eps2 = rl * rl * (2 + 1.5 * ebar + 11 * ebar * ebar / 8) +
           (2 + 2.5 * ebar + 7 * ebar * ebar / 8 + ebar * rl + 0.5 * rl * rl) *
               m_bar * m_bar;
  d.eps3 = theta / (4 * kap_g);
  d.eps4 = 0.5 + (3.5 + ebar) * theta * theta + 0.5 * rl;
  d.xi1 = m_bar / 2 + m_bar * m_bar / (theta * theta) * (1.5 / ebar + 7.0 / 8.0);
  d.xi2 = kap_g * m_bar * m_bar / (theta * theta) *
          ((0.25 + 1 / ebar) * (0.25 + 1 / ebar) / theta + 0.5);
  return d;
}

}  // namespace

void check_upp_mc_params(const UPPMCParams& p) {
  auto fail = [](const char* what) {
    throw InvariantError(std::string("infeasible-spectrum: ") + what);
  };
  if (!(p.eps_bar > 0 && p.eps_bar < 1)) fail("eps_bar outside (0,1)");
  if (!(p.theta > std::max(2 * p.m_bar * std::sqrt(p.kappa_g),
                           2 * std::pow(0.25 + 1 / p.eps_bar, 2))))
    fail("theta below its bound");
  double rho_min = ((4 + 4 * p.theta + p.theta * p.theta) / (4 * p.kappa_g) +
                    (0.5 + 1 / p.theta) * p.m_bar * p.m_bar) *
                   p.kappa_d * p.kappa_g / (p.lambda1_d * (1 - p.eps_bar));
  if (!(p.rho > rho_min)) fail("rho below its bound");
  if (!(p.eps1 > 0)) fail("eps1 <= 0");
  if (!(p.xi2 < 0.25)) fail("xi2 >= 1/4");
  double cap = std::min(std::min(p.eps1 / p.eps2, p.eps3 / p.eps4),
                        std::min((0.25 - p.xi2) / p.xi1,
                                 1.0 / (p.eps_bar * p.theta * p.rho * p.lambda1_d)));
  if (!(p.lambda2_G > 0 && p.lambda2_G < cap)) fail("lambda2_G outside its caps");
  double zeta_cap = 1.0 / (4 * p.eps5);
  if (p.kappa_p > 1 + 1e-12)
    zeta_cap = std::min(zeta_cap, p.kappa_p * p.lambda2_G / (p.kappa_p - 1));
  if (!(p.zeta >= p.lambda2_G && p.zeta < zeta_cap)) fail("zeta outside its range");
  if (!(p.zeta * (0.25 - p.eps5 * p.zeta) > 0)) fail("zeta*(1/4-eps5*zeta) <= 0");
  double inv_hi = p.theta * p.lambda2_G / (4 * p.kappa_g) + 1 / p.eps_bar;
  if (!(1 / p.eps_under > 1 / p.eps_bar && 1 / p.eps_under <= inv_hi &&
        inv_hi < 0.25 + 1 / p.eps_bar))
    fail("eps_under outside its range");
  if (!(p.sandwich_coeff >= p.eps_under && p.sandwich_coeff <= p.eps_bar))
    fail("Dtilde sandwich coefficient outside [eps_under, eps_bar]");
}

UPPMCParams select_upp_mc(double m_bar, const SpectralData& spec_d,
                          const SpectralData& spec_gpoly, double kappa_p,
                          bool positive_eta, double eps_bar) {
  if (m_bar <= 0) throw InvariantError("m_bar must be positive");
  UPPMCParams p;
  p.eps_bar = eps_bar;
  p.m_bar = m_bar;
  p.lambda1_d = spec_d.lambda_1;
  p.kappa_d = spec_d.kappa;
  p.kappa_p = kappa_p;
  // With eta = 0 the metric is a multiple of the identity and kappa_G = 1.
  // With eta > 0 the selection uses the conservative bound kappa_G <= kappa_p
  // (every inequality is monotone in kappa_G in the safe direction).
  p.kappa_g = positive_eta ? std::max(1.0, kappa_p) : 1.0;

  p.theta = kSlack * std::max(2 * m_bar * std::sqrt(p.kappa_g),
                              2 * std::pow(0.25 + 1 / eps_bar, 2));
  double rho_min = ((4 + 4 * p.theta + p.theta * p.theta) / (4 * p.kappa_g) +
                    (0.5 + 1 / p.theta) * m_bar * m_bar) *
                   p.kappa_d * p.kappa_g / (p.lambda1_d * (1 - eps_bar));
  p.rho = kSlack * rho_min;

  McDerived d = mc_derived(m_bar, p.theta, p.rho, p.lambda1_d, p.kappa_d,
                           p.kappa_g, eps_bar);
  p.eps1 = d.eps1;
  p.eps2 = d.eps2;
  p.eps3 = d.eps3;
  p.eps4 = d.eps4;
  p.xi1 = d.xi1;
  p.xi2 = d.xi2;
  if (!(p.eps1 > 0 && p.xi2 < 0.25))
    throw InvariantError("infeasible-spectrum: derived constants violate well-posedness");

  double cap = std::min(std::min(p.eps1 / p.eps2, p.eps3 / p.eps4),
                        std::min((0.25 - p.xi2) / p.xi1,
                                 1.0 / (eps_bar * p.theta * p.rho * p.lambda1_d)));
  p.lambda2_G = 0.99 * cap;
  p.eps5 = p.xi1 + p.xi2 / p.lambda2_G;

  double zeta_cap = 1.0 / (4 * p.eps5);
  if (kappa_p > 1 + 1e-12)
    zeta_cap = std::min(zeta_cap, kappa_p * p.lambda2_G / (kappa_p - 1));
  if (positive_eta) {
    p.zeta = 0.5 * (p.lambda2_G + zeta_cap);
    p.eta = (p.zeta - p.lambda2_G) / spec_gpoly.lambda_nm1;
    // actual metric condition number after the choice
    double lam_n_g = p.zeta - p.eta * spec_gpoly.lambda_1;
    if (lam_n_g <= 0)
      throw InvariantError("infeasible-spectrum: metric lost definiteness");
    p.kappa_g = p.lambda2_G / lam_n_g;
  } else {
    p.zeta = p.lambda2_G;
    p.eta = 0.0;
    p.kappa_g = 1.0;
  }
  // Re-derive at the actual kappa_G for reporting and descent constants.
  d = mc_derived(m_bar, p.theta, p.rho, p.lambda1_d, p.kappa_d, p.kappa_g, eps_bar);
  p.eps1 = d.eps1;
  p.eps2 = d.eps2;
  p.eps3 = d.eps3;
  p.eps4 = d.eps4;
  p.xi1 = d.xi1;
  p.xi2 = d.xi2;
  p.eps5 = p.xi1 + p.xi2 / p.lambda2_G;

  double inv_mid = 1 / eps_bar + p.theta * p.lambda2_G / (8 * p.kappa_g);
  p.eps_under = 1.0 / inv_mid;
  p.sandwich_coeff = 0.5 * (p.eps_under + eps_bar);
  check_upp_mc_params(p);
  return p;
}

UPPSCParams select_upp_sc(double m_bar, const SpectralData& spec_l,
                          double kappa_b_target) {
  if (kappa_b_target < 1) throw InvariantError("infeasible-kappa_B: needs kappa_B >= 1");
  UPPSCParams p;
  p.m_bar = m_bar;
  p.kappa_b = kappa_b_target;
  p.lambda_nm1_l = spec_l.lambda_nm1;
  const double kb = kappa_b_target;
  double xi5 = 4 * kb * kb / 3 + (2 * kb - 1) / 2;
  double xi6 = 2 * kb * kb / 3;
  double c_cap = (-xi5 + std::sqrt(xi5 * xi5 + xi6)) / (2 * xi6);
  p.c_tilde = 0.5 * c_cap;
  p.d1 = 0.25 - xi5 * p.c_tilde - xi6 * p.c_tilde * p.c_tilde;
  if (!(p.d1 > 0)) throw InvariantError("infeasible-kappa_B: d1 <= 0");
  p.d2 = (0.5 + 2 * p.c_tilde) * m_bar;
  p.d3 = (2 + p.c_tilde) * p.c_tilde * m_bar * m_bar / 6;
  p.lambda_n_b = (p.d2 + std::sqrt(p.d2 * p.d2 + 4 * p.d1 * p.d3)) / (2 * p.d1);
  p.lambda_1_b = kb * p.lambda_n_b;
  p.rho = 9 * kb * p.lambda_n_b / (p.c_tilde * spec_l.lambda_nm1);
  p.kappa_tilde = p.lambda_1_b / (p.rho * spec_l.lambda_nm1);
  p.tau = 1;
  return p;
}

UPPSCParams select_upp_sc_opt(double m_bar, const SpectralData& spec_l_effective,
                              const SpectralData& spec_p) {
  UPPSCParams p;
  p.m_bar = m_bar;
  p.lambda_nm1_l = spec_l_effective.lambda_nm1;
  p.c_tilde = 0.25;
  p.d4 = 0.25 - p.c_tilde / 2;  // = 1/8
  p.d2 = (0.5 + 2 * p.c_tilde) * m_bar;
  p.d3 = (2 + p.c_tilde) * p.c_tilde * m_bar * m_bar / 6;
  p.lambda_n_b = (p.d2 + std::sqrt(p.d2 * p.d2 + 4 * p.d4 * p.d3)) / (2 * p.d4);
  double kl = spec_l_effective.kappa;
  double bound = (9 * p.lambda_n_b / p.c_tilde) *
                 ((2 * kl - 1) + std::sqrt((2 * kl - 1) * (2 * kl - 1) - 1));
  p.lambda_1_b = kSlack * bound;
  p.mu = 1.0 / p.lambda_1_b;
  p.kappa_b = p.lambda_1_b / p.lambda_n_b;
  p.rho = 9 * p.kappa_b * p.lambda_n_b / (p.c_tilde * spec_l_effective.lambda_nm1);
  p.kappa_tilde = p.lambda_1_b / (p.rho * spec_l_effective.lambda_nm1);
  p.tau = chebyshev_depth_from_kappa(spec_p.kappa);
  return p;
}

UPPSCParams select_upp_sc_opt_stabilized(double m_bar,
                                         const SpectralData& spec_l_effective,
                                         const SpectralData& spec_p) {
  UPPSCParams p;
  p.stabilized = true;
  p.m_bar = m_bar;
  p.lambda_nm1_l = spec_l_effective.lambda_nm1;
  p.c_tilde = 0.25;
  p.d4 = 0.25 - p.c_tilde / 2;
  p.d2 = (0.5 + 2 * p.c_tilde) * m_bar;
  p.d3 = (2 + p.c_tilde) * p.c_tilde * m_bar * m_bar / 6;
  p.lambda_n_b = (p.d2 + std::sqrt(p.d2 * p.d2 + 4 * p.d4 * p.d3)) / (2 * p.d4);
  p.rho = p.lambda_n_b / (p.c_tilde * spec_l_effective.lambda_nm1);
  // B = (1/mu) I - rho L has minimum eigenvalue exactly lambda_n_b.
  p.lambda_1_b = p.lambda_n_b + p.rho * spec_l_effective.lambda_1;
  p.mu = 1.0 / p.lambda_1_b;
  p.kappa_b = p.lambda_1_b / p.lambda_n_b;
  p.kappa_tilde = p.lambda_1_b / (p.rho * spec_l_effective.lambda_nm1);
  p.tau = chebyshev_depth_from_kappa(spec_p.kappa);
  return p;
}

TheoryConstants theory_constants_mc(const UPPMCParams& p, double v_hat0, double nu,
                                    int n_nodes) {
  TheoryConstants c;
  double ib = 1.0 / p.eps_bar;
  c.xi3 = 0.5 * ((ib - 1) + std::sqrt((ib - 1) * (ib - 1) + 4));
  c.xi4 = 0.5 * ((1 - ib) + std::sqrt((1 - ib) * (1 - ib) + 4));
  c.delta1 = std::max((1 + c.xi3) / 2, 1.0);
  c.delta2 = (1 - c.xi4) / 2;
  if (!(c.xi4 > 0 && c.xi4 < 1))
    throw InvariantError("xi4 outside (0,1)");
  double t1 = p.lambda2_G * (p.eps1 - p.eps2 * p.lambda2_G);
  double t2 = p.lambda2_G * (p.eps3 - p.eps4 * p.lambda2_G);
  double t3 = p.zeta * (0.25 - p.eps5 * p.zeta);
  double t4 = p.zeta / 4;
  c.delta3 = std::min(std::min(t1, t2), std::min(t3, t4));
  c.v_hat0 = v_hat0;
  c.c1 = c.delta1 * v_hat0 / c.delta3;
  if (nu > 0) {
    c.delta4 = std::min(std::min(t1, t2), nu * n_nodes * p.zeta / 2);
    c.delta = c.delta4 / c.delta1;
    if (!(c.delta > 0 && c.delta < 1)) throw InvariantError("delta outside (0,1)");
    c.c2 = c.delta1 * v_hat0 / c.delta2;
  }
  return c;
}

void theory_constants_sc(const UPPSCParams& p, double ftilde_x0, double f_star,
                         double grad0_sqnorm, TheoryConstants* out) {
  double c1 = ftilde_x0 - f_star +
              (6 * p.c_tilde + 7) / (8 * p.m_bar) * grad0_sqnorm;
  double dd = p.d4 > 0 ? p.d4 : p.d1;
  double c2 = 4 * p.lambda_1_b +
              4.0 / (3 * (1 - p.c_tilde)) * (1 + 18 * dd / (p.c_tilde * (p.c_tilde + 2))) +
              8 * (6 * dd / (p.c_tilde * (p.c_tilde + 2)) + 1);
  if (p.d4 > 0) {
    out->c1_hat = c1;
    out->c2_hat = c2;
  } else {
    out->c1_tilde = c1;
    out->c2_tilde = c2;
  }
}

}  // namespace upp
