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

#include "upp/engine.hpp"

#include <cmath>

namespace upp {

GOperator GOperator::scalar(double mu) {
  if (mu <= 0) throw InvariantError("scalar metric needs mu > 0");
  GOperator g;
  g.kind = Kind::Scalar;
  g.mu = mu;
  return g;
}

GOperator GOperator::polynomial(double zeta, double eta, MixingOp spec) {
  if (zeta <= 0) throw InvariantError("polynomial metric needs zeta > 0");
  GOperator g;
  g.kind = Kind::Polynomial;
  g.zeta = zeta;
  g.eta = eta;
  g.spec = std::move(spec);
  return g;
}

GOperator GOperator::block_diagonal(BlockFactory f, bool constant) {
  GOperator g;
  g.kind = Kind::BlockDiagonal;
  g.block = std::move(f);
  g.block_constant = constant;
  return g;
}

BoundRun::BoundRun(const UPPConfig& cfg, const ProblemInstance& prob,
                   const MixingMatrix& mix)
    : cfg_(cfg), prob_(prob), mix_(mix), net_(mix) {
  if (prob_.n_nodes != mix_.n())
    throw InvariantError("instance and mixing matrix disagree on N");
  if (cfg_.dense_d) {
    d_mat_ = cfg_.d_dense;
    dt_mat_ = cfg_.dtilde_dense;
  } else {
    d_mat_ = mixing_op_matrix(mix_, cfg_.d_op);
    dt_mat_ = mixing_op_matrix(mix_, cfg_.dtilde_op);
  }
  if (cfg_.g_op.kind == GOperator::Kind::Polynomial)
    g_poly_mat_ = mixing_op_matrix(mix_, cfg_.g_op.spec);
  validate();
}

void BoundRun::validate() const {
  if (cfg_.rho <= 0 || cfg_.theta <= 0)
    throw InvariantError("rho and theta must be positive");
  const int n = mix_.n();
  const double psd_tol = 1e-10;
  auto check_d = [&](const MatrixXd& d, const char* name) {
    if ((d - d.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1 + d.cwiseAbs().maxCoeff()))
      throw InvariantError(std::string(name) + " is not symmetric");
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(d, Eigen::EigenvaluesOnly);
    VectorXd w = es.eigenvalues();
    double l1 = w(n - 1);
    if (l1 <= 0) throw InvariantError(std::string(name) + " has no positive eigenvalue");
    if (w(0) < -psd_tol * l1)
      throw InvariantError(std::string(name) + " is not positive semidefinite");
    // Null must be exactly the consensus direction
    VectorXd ones = VectorXd::Ones(n);
    if ((d * ones).cwiseAbs().maxCoeff() > 1e-9 * l1)
      throw InvariantError(std::string(name) + " does not annihilate consensus");
    int zeros = 0;
    for (int i = 0; i < n; ++i)
      if (w(i) <= 1e-12 * l1) ++zeros;
    if (zeros != 1)
      throw InvariantError(std::string(name) + ": Null larger than span(1)");
  };
  check_d(d_mat_, "D");
  check_d(dt_mat_, "Dtilde");

  const GOperator& g = cfg_.g_op;
  switch (g.kind) {
    case GOperator::Kind::Scalar:
      if (g.mu <= 0) throw InvariantError("scalar metric must be positive");
      break;
    case GOperator::Kind::Polynomial: {
      VectorXd w = mixing_eigenvalues(mix_);
      double pmax = 0.0;
      for (int i = 0; i < n; ++i) {
        double p = mixing_op_eigenvalue(g.spec, w(i));
        if (p < -1e-10) throw InvariantError("metric polynomial not PSD");
        pmax = std::max(pmax, p);
        if (g.zeta - g.eta * p <= 0)
          throw InvariantError("assumption-violation: metric not positive definite");
      }
      if (cfg_.require_polynomial_metric_bounds &&
          (g.eta < 0 || (pmax > 0 && g.eta >= g.zeta / pmax)))
        throw InvariantError("assumption-violation: eta outside [0, zeta/lambda_1)");
      break;
    }
    case GOperator::Kind::BlockDiagonal: {
      if (!g.block) throw InvariantError("missing block factory");
      VectorXd zero = VectorXd::Zero(prob_.dim);
      for (int i = 0; i < n; ++i) {
        MatrixXd b = g.block(i, zero, 0);
        if ((b - b.transpose()).cwiseAbs().maxCoeff() > 1e-10)
          throw InvariantError("metric block not symmetric");
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(b, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() <= 0)
          throw InvariantError("metric block not positive definite");
      }
      break;
    }
  }
  if (cfg_.init == InitRule::Explicit) {
    if (cfg_.x0.rows() != n || cfg_.q0.rows() != n)
      throw InvariantError("explicit init has wrong shape");
    double qsum = cfg_.q0.colwise().sum().cwiseAbs().maxCoeff();
    if (qsum > 1e-10 * (1.0 + cfg_.q0.norm()))
      throw InvariantError("q0-not-in-S-perp");
  }
  if (cfg_.share_dual_primal_mixing && cfg_.dense_d)
    throw InvariantError("dense D operators cannot share the dual mixing cache");
}

NodeMatrix BoundRun::apply_g_dense(const NodeMatrix& z, const NodeMatrix& x,
                                   long iter) const {
  const GOperator& g = cfg_.g_op;
  switch (g.kind) {
    case GOperator::Kind::Scalar:
      return g.mu * z;
    case GOperator::Kind::Polynomial:
      return g.zeta * z - g.eta * (g_poly_mat_ * z);
    case GOperator::Kind::BlockDiagonal: {
      NodeMatrix out(z.rows(), z.cols());
      for (int i = 0; i < z.rows(); ++i) {
        MatrixXd gi = g.block(i, x.row(i).transpose(), iter);
        out.row(i) = (gi * z.row(i).transpose()).transpose();
      }
      return out;
    }
  }
  throw InvariantError("unreachable");
}

NodeMatrix BoundRun::apply_g_distributed(const NodeMatrix& z, const NodeMatrix& x,
                                         long iter, SyncNetwork& net) const {
  const GOperator& g = cfg_.g_op;
  switch (g.kind) {
    case GOperator::Kind::Scalar:
      return g.mu * z;
    case GOperator::Kind::Polynomial:
      if (g.eta == 0.0) return g.zeta * z;
      return g.zeta * z - g.eta * apply_mixing_op(z, net, g.spec);
    case GOperator::Kind::BlockDiagonal: {
      NodeMatrix out(z.rows(), z.cols());
#pragma omp parallel for schedule(static)
      for (int i = 0; i < z.rows(); ++i) {
        MatrixXd gi = g.block(i, x.row(i).transpose(), iter);
        out.row(i) = (gi * z.row(i).transpose()).transpose();
      }
      return out;
    }
  }
  throw InvariantError("unreachable");
}

GlobalState BoundRun::init_state(EngineKind kind) const {
  const int n = prob_.n_nodes, d = prob_.dim;
  GlobalState s;
  s.iter = 0;
  s.rounds_used = 0;
  switch (cfg_.init) {
    case InitRule::McInit: {
      Rng rng(cfg_.init_seed ^ 0x696e6974ULL);
      s.x = cfg_.init_scale * rng.normal_matrix(n, d);
      s.q = NodeMatrix::Zero(n, d);
      break;
    }
    case InitRule::ScInit: {
      NodeMatrix g0 = prob_.grad_stacked(NodeMatrix::Zero(n, d));
      s.x = -apply_g_dense(g0, NodeMatrix::Zero(n, d), 0);
      break;
    }
    case InitRule::Explicit:
      s.x = cfg_.x0;
      s.q = cfg_.q0;
      break;
  }
  if (cfg_.share_dual_primal_mixing) {
    // Algorithm line-2 broadcast: prime the D-apply cache.
    if (kind == EngineKind::Distributed) {
      net_.reset_rounds();
      s.y = apply_mixing_op(s.x, net_, cfg_.d_op);
      s.rounds_used += net_.rounds();
    } else {
      s.y = d_mat_ * s.x;
    }
    s.cache_valid = true;
    if (cfg_.init == InitRule::ScInit) s.q = cfg_.rho * s.y;
  } else if (cfg_.init == InitRule::ScInit) {
    throw InvariantError("sc_init requires the shared dual/primal mixing cache");
  }
  return s;
}

void BoundRun::step_reference(GlobalState& s) const {
  NodeMatrix grad = prob_.grad_stacked(s.x);
  if (!grad.allFinite()) throw EngineError(s.iter, "non-finite-gradient");
  NodeMatrix dx = cfg_.share_dual_primal_mixing && s.cache_valid ? s.y
                                                                 : NodeMatrix(d_mat_ * s.x);
  NodeMatrix z = grad + cfg_.theta * s.q + cfg_.rho * dx;
  NodeMatrix x_next = s.x - apply_g_dense(z, s.x, s.iter);
  NodeMatrix dtx = dt_mat_ * x_next;
  s.q += cfg_.rho * dtx;
  s.x = std::move(x_next);
  if (cfg_.share_dual_primal_mixing) {
    s.y = std::move(dtx);
    s.cache_valid = true;
  }
  ++s.iter;
}

void BoundRun::step_distributed(GlobalState& s) const {
  if (cfg_.dense_d)
    throw EngineError(s.iter, "dense D operators have no distributed oracle");
  NodeMatrix grad = prob_.grad_stacked(s.x);
  if (!grad.allFinite()) throw EngineError(s.iter, "non-finite-gradient");
  net_.reset_rounds();
  NodeMatrix dx;
  if (cfg_.share_dual_primal_mixing && s.cache_valid) {
    dx = s.y;  // reuse the dual update's transmission from last iteration
  } else {
    dx = apply_mixing_op(s.x, net_, cfg_.d_op);
  }
  NodeMatrix z = grad + cfg_.theta * s.q + cfg_.rho * dx;
  NodeMatrix x_next = s.x - apply_g_distributed(z, s.x, s.iter, net_);
  NodeMatrix dtx = apply_mixing_op(x_next, net_, cfg_.dtilde_op);
  s.q += cfg_.rho * dtx;
  s.x = std::move(x_next);
  if (cfg_.share_dual_primal_mixing) {
    s.y = std::move(dtx);
    s.cache_valid = true;
  }
  s.rounds_used += net_.rounds();
  ++s.iter;
}

long BoundRun::rounds_per_iteration() const {
  long r = 0;
  if (!(cfg_.share_dual_primal_mixing))
    r += cfg_.d_op.rounds();
  if (cfg_.g_op.kind == GOperator::Kind::Polynomial && cfg_.g_op.eta != 0.0)
    r += cfg_.g_op.spec.rounds();
  r += cfg_.dtilde_op.rounds();
  return r;
}

long BoundRun::rounds_per_iteration_unmerged() const {
  // Counting the z- and x-decision broadcasts separately from the oracle
  // loops that re-transmit the same vectors.
  long extra = cfg_.g_op.kind == GOperator::Kind::Polynomial ? 2 : 1;
  return rounds_per_iteration() + extra;
}

long BoundRun::init_rounds() const {
  return cfg_.share_dual_primal_mixing ? cfg_.d_op.rounds() : 0;
}

std::vector<GlobalState> run(const BoundRun& bound, long iters, EngineKind kind,
                             const StepObserver& observer) {
  if (iters < 1) throw UsageError("iters must be >= 1");
  std::vector<GlobalState> trace;
  trace.reserve(iters + 1);
  GlobalState s = bound.init_state(kind);
  if (observer) observer(s);
  trace.push_back(s);
  for (long k = 0; k < iters; ++k) {
    if (kind == EngineKind::Reference)
      bound.step_reference(s);
    else
      bound.step_distributed(s);
    if (observer) observer(s);
    trace.push_back(s);
  }
  return trace;
}

}  // namespace upp
