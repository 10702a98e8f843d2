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

#ifndef UPP_VARIANTS_HPP_
#define UPP_VARIANTS_HPP_

#include <map>
#include <string>

#include "upp/engine.hpp"
#include "upp/tuning.hpp"

namespace upp {

enum class Variant { UPP_MC, UPP_MC_CA, UPP_SC, UPP_SC_OPT, UPP_SC_SO };
enum class Specialization { EXTRA, DIGing, L_ADMM, ProxGPDA, SUDA, ID_FBBS, DQM, SoPro };

Variant variant_from_string(const std::string& s);
Specialization specialization_from_string(const std::string& s);
bool is_variant_name(const std::string& s);
bool is_specialization_name(const std::string& s);
std::string to_string(Variant v);
std::string to_string(Specialization s);

// Scalar parameters keyed by name plus the realization they configure.
using VariantParams = std::map<std::string, double>;

// UPP_MC:      polynomial metric (zeta, eta) with D = H, Dtilde in the
//              analysis sandwich.
// UPP_MC_CA:   D = Dtilde = H, metric Chebyshev polynomial at tau.
// UPP_SC:      theta = 1, D = Dtilde = L, per-node metric blocks.
// UPP_SC_OPT:  scalar metric mu I, L = normalized Chebyshev polynomial.
// UPP_SC_SO:   per-iteration blocks (2 rho |N_i| I + hess f_i(x_i))^{-1}.
UPPConfig make_variant(Variant v, const UPPMCParams* mc, const UPPSCParams* sc,
                       const MixingMatrix& mix, const ProblemInstance& prob,
                       std::uint64_t init_seed = 1);

// Exact UPP images of the published updates. Parameters:
//   EXTRA:    alpha, c  (W = I - 2cP, Wtilde = (I + W)/2)
//   DIGing:   alpha, c  (W = I - cP, constant)
//   L_ADMM:   alpha, beta, gamma  (D = Dtilde-source L = H)
//   ProxGPDA: beta  (A'A = H, B'B = I)
//   SUDA:     alpha  (A = I - P/2, B^2 = P/2, C = I)
//   ID_FBBS:  alpha, c  (Wtilde = I - cP positive definite)
//   DQM:      c  (mixing must be the unweighted Laplacian)
//   SoPro:    rho, d_reg (blocks (hess f_i + d_reg I)^{-1}, L = P)
UPPConfig make_specialization(Specialization s, const VariantParams& params,
                              const MixingMatrix& mix, const ProblemInstance& prob,
                              std::uint64_t init_seed = 1);

// Default parameter sets that keep 100-iteration quadratic runs well inside
// the stable region (used by equivalence tests and the harness defaults).
VariantParams default_specialization_params(Specialization s,
                                            const MixingMatrix& mix,
                                            const ProblemInstance& prob);

}  // namespace upp

#endif  // UPP_VARIANTS_HPP_
