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

#ifndef UPP_MIXING_HPP_
#define UPP_MIXING_HPP_

#include <vector>

#include "upp/topology.hpp"

namespace upp {

// Sum_{t=1..degree} coeffs[t-1] H^t; no constant term, so P(0) = 0.
struct PolynomialSpec {
  int degree = 1;
  std::vector<double> coeffs{1.0};
};

enum class ChebMode { Paper, Standard };

// Three-term Chebyshev recurrence depth tau with constants c1, c2 derived
// from the mixing spectrum. Standard mode maps the nonzero spectrum onto
// [-1, 1] exactly; paper mode keeps c2 = 1 / ((1+gamma) lambda_1).
struct ChebyshevSpec {
  int tau = 1;
  double c1 = 0.0;
  double c2 = 0.0;
  ChebMode mode = ChebMode::Standard;
  bool degenerate = false;  // gamma_inv == 1: c1 undefined, fall back to c2*H*y
};

ChebyshevSpec make_chebyshev_spec(const SpectralData& s, int tau,
                                  ChebMode mode = ChebMode::Standard);

// A polynomial of H applied through the communication oracles, with an
// optional local post-scale (used for L = P_tau(H) / lambda_1^{P_tau(H)}).
struct MixingOp {
  enum class Kind { Poly, Cheb } kind = Kind::Poly;
  PolynomialSpec poly;
  ChebyshevSpec cheb;
  double scale = 1.0;

  static MixingOp identity() { return MixingOp{}; }
  static MixingOp polynomial(PolynomialSpec s, double scale = 1.0);
  static MixingOp chebyshev(ChebyshevSpec s, double scale = 1.0);
  int rounds() const;  // communication rounds one application costs
};

// Neighbor-sparse view of a MixingMatrix: node i sees only its own row
// restricted to N_i and itself. One exchange() is one communication round.
class SyncNetwork {
 public:
  explicit SyncNetwork(const MixingMatrix& m);

  int n() const { return n_; }
  long rounds() const { return rounds_; }
  void reset_rounds() { rounds_ = 0; }
  void charge_rounds(long r) { rounds_ += r; }

  // One synchronous round: every node sends its current row to all neighbors
  // and then forms sum_{j in N_i + {i}} p_ij x_j. Rows may be updated in
  // parallel; each node reads only the previous round's values.
  NodeMatrix exchange(const NodeMatrix& x);

 private:
  struct Link {
    int peer;
    double weight;
  };
  int n_;
  std::vector<double> self_weight_;
  std::vector<std::vector<Link>> links_;
  long rounds_ = 0;
};

// Oracle A: tau rounds of neighbor exchanges followed by the weighted sum.
NodeMatrix macc(const NodeMatrix& x, SyncNetwork& net, const PolynomialSpec& spec);

// Oracle A': Chebyshev acceleration, tau rounds.
NodeMatrix cacc(const NodeMatrix& y, SyncNetwork& net, const ChebyshevSpec& spec);

// Dispatches on op kind and applies op.scale; charges op.rounds().
NodeMatrix apply_mixing_op(const NodeMatrix& x, SyncNetwork& net, const MixingOp& op);

// Reference oracle: the identical polynomial with explicit matrix powers
// (Chebyshev replayed as a dense matrix recurrence). No communication.
NodeMatrix dense_poly_apply(const MixingMatrix& m, const MixingOp& op,
                            const NodeMatrix& x);

// The N x N matrix of the operator (dense reference form).
MatrixXd mixing_op_matrix(const MixingMatrix& m, const MixingOp& op);

// Scalar map of the operator on one eigenvalue of P.
double mixing_op_eigenvalue(const MixingOp& op, double lambda);

// Spectrum of L = P_tau(H) / lambda_1^{P_tau(H)} with P_tau from Chebyshev
// acceleration at depth tau.
SpectralData chebyshev_effective_spectrum(const MixingMatrix& m, int tau,
                                          ChebMode mode = ChebMode::Standard);

// tau = ceil(sqrt(kappa)) with a snap tolerance for kappa == 1 graphs.
int chebyshev_depth_from_kappa(double kappa);
int chebyshev_depth(const SpectralData& s);

}  // namespace upp

#endif  // UPP_MIXING_HPP_
