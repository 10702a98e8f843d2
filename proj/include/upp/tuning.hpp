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

#ifndef UPP_TUNING_HPP_
#define UPP_TUNING_HPP_

#include "upp/problems.hpp"
#include "upp/topology.hpp"

namespace upp {

// Multi-inner-loop realization parameters, selected just inside the feasible
// region of the descent analysis (1% slack on the open inequalities).
struct UPPMCParams {
  double eps_bar = 0.5;  // in (0,1)
  double theta = 0.0;
  double rho = 0.0;
  double lambda2_G = 0.0;
  double zeta = 0.0;
  double eta = 0.0;
  double eps_under = 0.0;
  // derived per-iteration constants
  double eps1 = 0, eps2 = 0, eps3 = 0, eps4 = 0, eps5 = 0;
  double xi1 = 0, xi2 = 0;
  // inputs echoed for reporting
  double m_bar = 0, kappa_d = 0, kappa_g = 0, kappa_p = 0, lambda1_d = 0;
  // Dtilde = sandwich_coeff * D * G, with coeff in [eps_under, eps_bar]
  double sandwich_coeff = 0.0;
};

// Checks every inequality of the selection chain; throws on violation.
void check_upp_mc_params(const UPPMCParams& p);

// spec_d: spectrum of the D polynomial applied to P.
// spec_gpoly: spectrum of the metric polynomial P_tau(H); kappa_p = its
// condition number. positive_eta selects the midpoint zeta (eta > 0) instead
// of the zeta = lambda2_G endpoint (eta = 0).
UPPMCParams select_upp_mc(double m_bar, const SpectralData& spec_d,
                          const SpectralData& spec_gpoly, double kappa_p,
                          bool positive_eta = false, double eps_bar = 0.5);

// Single-inner-loop realization parameters.
struct UPPSCParams {
  double c_tilde = 0.0;
  double d1 = 0, d2 = 0, d3 = 0, d4 = 0;
  double lambda_n_b = 0.0;  // min eigenvalue bound of the proximal matrix B
  double lambda_1_b = 0.0;  // max eigenvalue bound; for the scalar metric, 1/mu
  double rho = 0.0;
  double mu = 0.0;
  int tau = 1;
  double kappa_b = 1.0;
  double kappa_tilde = 0.0;  // lambda_1_b / (rho * lambda_{N-1}^L)
  double m_bar = 0.0;
  double lambda_nm1_l = 0.0;
  bool stabilized = false;
};

// General path (time-varying B bound by a target condition number).
UPPSCParams select_upp_sc(double m_bar, const SpectralData& spec_l,
                          double kappa_b_target);

// Scalar-metric Chebyshev-accelerated path, published constants verbatim:
// c = 1/4, d4 = 1/8, lambda_N^B at its bound, lambda_1^B = 1/mu at 1.01x its
// bound, rho at its bound. These constants force
// mu * rho * lambda_{N-1}^L = 9 / c > 2, which makes the paired primal-dual
// update expansive on every non-consensus mode; the selection is kept
// faithful for the descent audit and is expected to diverge.
UPPSCParams select_upp_sc_opt(double m_bar, const SpectralData& spec_l_effective,
                              const SpectralData& spec_p);

// Repaired selection: keeps the d4 margin for lambda_N^B, restores B > 0 by
// taking mu = 1 / (lambda_N^B + rho * lambda_1^L) with
// rho = lambda_N^B / (c * lambda_{N-1}^L), i.e. the published rho with the
// kappa_B factor (the quantity that breaks B > 0) removed.
UPPSCParams select_upp_sc_opt_stabilized(double m_bar,
                                         const SpectralData& spec_l_effective,
                                         const SpectralData& spec_p);

struct TheoryConstants {
  double xi3 = 0, xi4 = 0;
  double delta1 = 0, delta2 = 0, delta3 = 0, delta4 = 0;
  double v_hat0 = 0;
  double c1 = 0;          // sublinear: (1/T) sum What <= c1 / T
  double c2 = 0;          // P-L linear: error <= c2 (1-delta)^k
  double delta = 0;       // in (0,1)
  double c1_tilde = 0, c2_tilde = 0;  // single-loop sublinear pair
  double c1_hat = 0, c2_hat = 0;      // scalar-metric pair
};

// Constants of the convergence statements, evaluated from tuned parameters
// and the run's initial state. v_hat0 = ||x0||_K^2 + ||s0||_K^2 + f(xbar0)-f*.
// nu may be 0 when the P-L constant is unavailable (then delta4/delta/c2
// are not meaningful).
TheoryConstants theory_constants_mc(const UPPMCParams& p, double v_hat0, double nu,
                                    int n_nodes);

// C-tilde / C-hat pair for a single-loop run started at x0 (Theorem-style
// initialization from zero): c1 = ftilde(x0) - f* + (6c+7)/(8M) ||grad(0)||^2.
void theory_constants_sc(const UPPSCParams& p, double ftilde_x0, double f_star,
                         double grad0_sqnorm, TheoryConstants* out);

}  // namespace upp

#endif  // UPP_TUNING_HPP_
