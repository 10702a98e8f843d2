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

#ifndef UPP_ENGINE_HPP_
#define UPP_ENGINE_HPP_

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "upp/mixing.hpp"
#include "upp/problems.hpp"

namespace upp {

// Per-node d x d proximal-metric block G_i^k, possibly refreshed from local
// state each iteration (second-order variants).
using BlockFactory =
    std::function<MatrixXd(int node, const VectorXd& x_i, long iter)>;

enum class EngineKind { Reference, Distributed };

struct GOperator {
  enum class Kind { Polynomial, BlockDiagonal, Scalar } kind = Kind::Scalar;
  // polynomial: G z = zeta z - eta * spec(H) z
  double zeta = 0.0;
  double eta = 0.0;
  MixingOp spec;
  // block diagonal
  BlockFactory block;
  bool block_constant = true;
  // scalar: G = mu I
  double mu = 0.0;

  static GOperator scalar(double mu);
  static GOperator polynomial(double zeta, double eta, MixingOp spec);
  static GOperator block_diagonal(BlockFactory f, bool constant);
};

enum class InitRule { McInit, ScInit, Explicit };

struct UPPConfig {
  double rho = 1.0;
  double theta = 1.0;
  MixingOp d_op;       // D^k
  MixingOp dtilde_op;  // Dtilde^k
  GOperator g_op;
  InitRule init = InitRule::McInit;
  std::uint64_t init_seed = 1;
  double init_scale = 1.0;
  NodeMatrix x0, q0;  // explicit init
  std::string variant_name = "UPP";

  // D == Dtilde and constant: the dual-update mixing output doubles as the
  // next primal D-apply, so that apply costs no extra communication.
  bool share_dual_primal_mixing = false;

  // When set, D and Dtilde are these dense matrices instead of the mixing
  // ops (rational functions of P; reference engine only).
  bool dense_d = false;
  MatrixXd d_dense, dtilde_dense;

  // Enforce 0 <= eta < zeta / lambda_1^{P_tau(H)} during validation
  // (polynomial-metric realizations); specializations only need G > 0.
  bool require_polynomial_metric_bounds = false;
};

struct GlobalState {
  NodeMatrix x;  // N x d primal
  NodeMatrix q;  // N x d dual
  NodeMatrix y;  // cached D-apply output (valid when cache_valid)
  bool cache_valid = false;
  long iter = 0;
  long rounds_used = 0;
};

class EngineError : public std::runtime_error {
 public:
  EngineError(long iter, const std::string& what)
      : std::runtime_error("iteration " + std::to_string(iter) + ": " + what),
        iteration(iter) {}
  long iteration;
};

// Everything a run needs, bound once: dense operator matrices for the
// reference path, the network simulator for the distributed path, and the
// validated config.
class BoundRun {
 public:
  BoundRun(const UPPConfig& cfg, const ProblemInstance& prob, const MixingMatrix& mix);

  GlobalState init_state(EngineKind kind = EngineKind::Distributed) const;
  // Dense-matrix step; does not count rounds.
  void step_reference(GlobalState& s) const;
  // Node-local step via the communication oracles; counts rounds.
  void step_distributed(GlobalState& s) const;

  long rounds_per_iteration() const;  // merged-broadcast convention
  long rounds_per_iteration_unmerged() const;
  long init_rounds() const;

  const UPPConfig& config() const { return cfg_; }
  const MixingMatrix& mixing() const { return mix_; }
  const ProblemInstance& problem() const { return prob_; }
  const MatrixXd& d_matrix() const { return d_mat_; }
  const MatrixXd& dtilde_matrix() const { return dt_mat_; }

  NodeMatrix apply_g_dense(const NodeMatrix& z, const NodeMatrix& x, long iter) const;

 private:
  void validate() const;
  NodeMatrix apply_g_distributed(const NodeMatrix& z, const NodeMatrix& x,
                                 long iter, SyncNetwork& net) const;

  UPPConfig cfg_;
  const ProblemInstance& prob_;
  const MixingMatrix& mix_;
  MatrixXd d_mat_, dt_mat_, g_poly_mat_;
  mutable SyncNetwork net_;
};

using StepObserver = std::function<void(const GlobalState&)>;

// Executes `iters` steps, invoking the observer on the initial state and
// after every step. Deterministic given the config seed.
std::vector<GlobalState> run(const BoundRun& bound, long iters, EngineKind kind,
                             const StepObserver& observer = nullptr);

}  // namespace upp

#endif  // UPP_ENGINE_HPP_
