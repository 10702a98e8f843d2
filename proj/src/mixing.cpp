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

#include "upp/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace upp {

ChebyshevSpec make_chebyshev_spec(const SpectralData& s, int tau, ChebMode mode) {
  if (tau < 1) throw InvariantError("chebyshev depth must be >= 1");
  ChebyshevSpec c;
  c.tau = tau;
  c.mode = mode;
  double g = s.gamma_inv;
  if (g >= 1.0 - 1e-12) {
    // all nonzero eigenvalues coincide; the recurrence constants blow up
    c.degenerate = true;
    c.c1 = 0.0;
    c.c2 = (mode == ChebMode::Standard ? 2.0 : 1.0) / (2.0 * s.lambda_1);
    return c;
  }
  c.c1 = (1.0 + g) / (1.0 - g);
  c.c2 = (mode == ChebMode::Standard ? 2.0 : 1.0) / ((1.0 + g) * s.lambda_1);
  return c;
}

MixingOp MixingOp::polynomial(PolynomialSpec s, double scale) {
  if (s.degree < 1 || static_cast<int>(s.coeffs.size()) != s.degree)
    throw InvariantError("polynomial spec: coeffs length must equal degree");
  MixingOp op;
  op.kind = Kind::Poly;
  op.poly = std::move(s);
  op.scale = scale;
  return op;
}

MixingOp MixingOp::chebyshev(ChebyshevSpec s, double scale) {
  MixingOp op;
  op.kind = Kind::Cheb;
  op.cheb = s;
  op.scale = scale;
  return op;
}

int MixingOp::rounds() const {
  if (kind == Kind::Poly) return poly.degree;
  return cheb.degenerate ? 1 : cheb.tau;
}

SyncNetwork::SyncNetwork(const MixingMatrix& m) : n_(m.n()) {
  if (m.graph == nullptr) throw InvariantError("mixing matrix lost its graph");
  const Graph& g = *m.graph;
  self_weight_.resize(n_);
  links_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    self_weight_[i] = m.p(i, i);
    for (int j : g.adjacency()[i]) links_[i].push_back({j, m.p(i, j)});
  }
  // p_ij must vanish off the graph; anything else would be nonlocal access.
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      if (i == j || m.p(i, j) == 0.0) continue;
      const auto& a = g.adjacency()[i];
      if (!std::binary_search(a.begin(), a.end(), j))
        throw InvariantError("node-attempted-nonlocal-access: p_ij nonzero off graph");
    }
}

NodeMatrix SyncNetwork::exchange(const NodeMatrix& x) {
  if (x.rows() != n_) throw InvariantError("dimension-mismatch in exchange");
  NodeMatrix out(n_, x.cols());
  ++rounds_;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n_; ++i) {
    Eigen::RowVectorXd acc = self_weight_[i] * x.row(i);
    for (const Link& l : links_[i]) acc += l.weight * x.row(l.peer);
    out.row(i) = acc;
  }
  return out;
}

NodeMatrix macc(const NodeMatrix& x, SyncNetwork& net, const PolynomialSpec& spec) {
  if (spec.degree < 1 || static_cast<int>(spec.coeffs.size()) != spec.degree)
    throw InvariantError("polynomial spec: coeffs length must equal degree");
  NodeMatrix cur = x;
  NodeMatrix acc = NodeMatrix::Zero(x.rows(), x.cols());
  for (int t = 1; t <= spec.degree; ++t) {
    cur = net.exchange(cur);
    acc += spec.coeffs[t - 1] * cur;
  }
  return acc;
}

NodeMatrix cacc(const NodeMatrix& y, SyncNetwork& net, const ChebyshevSpec& spec) {
  if (spec.degenerate) return spec.c2 * net.exchange(y);
  const double c1 = spec.c1, c2 = spec.c2;
  double b_prev = 1.0, b_cur = c1;
  NodeMatrix y0 = y;
  NodeMatrix y_prev = y;
  NodeMatrix y_cur = c1 * (y - c2 * net.exchange(y));
  for (int t = 1; t < spec.tau; ++t) {
    double b_next = 2.0 * c1 * b_cur - b_prev;
    NodeMatrix y_next = 2.0 * c1 * (y_cur - c2 * net.exchange(y_cur)) - y_prev;
    b_prev = b_cur;
    b_cur = b_next;
    y_prev = std::move(y_cur);
    y_cur = std::move(y_next);
  }
  return y0 - y_cur / b_cur;
}

NodeMatrix apply_mixing_op(const NodeMatrix& x, SyncNetwork& net, const MixingOp& op) {
  NodeMatrix r = op.kind == MixingOp::Kind::Poly ? macc(x, net, op.poly)
                                                 : cacc(x, net, op.cheb);
  if (op.scale != 1.0) r *= op.scale;
  return r;
}

NodeMatrix dense_poly_apply(const MixingMatrix& m, const MixingOp& op,
                            const NodeMatrix& x) {
  if (x.rows() != m.n()) throw InvariantError("dimension-mismatch in dense_poly_apply");
  if (op.kind == MixingOp::Kind::Poly) {
    NodeMatrix cur = x;
    NodeMatrix acc = NodeMatrix::Zero(x.rows(), x.cols());
    for (int t = 1; t <= op.poly.degree; ++t) {
      cur = m.p * cur;
      acc += op.poly.coeffs[t - 1] * cur;
    }
    return op.scale * acc;
  }
  const ChebyshevSpec& s = op.cheb;
  if (s.degenerate) return op.scale * (s.c2 * (m.p * x));
  double b_prev = 1.0, b_cur = s.c1;
  NodeMatrix y_prev = x;
  NodeMatrix y_cur = s.c1 * (x - s.c2 * (m.p * x));
  for (int t = 1; t < s.tau; ++t) {
    double b_next = 2.0 * s.c1 * b_cur - b_prev;
    NodeMatrix y_next = 2.0 * s.c1 * (y_cur - s.c2 * (m.p * y_cur)) - y_prev;
    b_prev = b_cur;
    b_cur = b_next;
    y_prev = std::move(y_cur);
    y_cur = std::move(y_next);
  }
  return op.scale * (x - y_cur / b_cur);
}

MatrixXd mixing_op_matrix(const MixingMatrix& m, const MixingOp& op) {
  const int n = m.n();
  return dense_poly_apply(m, op, MatrixXd::Identity(n, n));
}

double mixing_op_eigenvalue(const MixingOp& op, double lambda) {
  if (op.kind == MixingOp::Kind::Poly) {
    double acc = 0.0, cur = 1.0;
    for (int t = 1; t <= op.poly.degree; ++t) {
      cur *= lambda;
      acc += op.poly.coeffs[t - 1] * cur;
    }
    return op.scale * acc;
  }
  const ChebyshevSpec& s = op.cheb;
  if (s.degenerate) return op.scale * s.c2 * lambda;
  double b_prev = 1.0, b_cur = s.c1;
  double y_prev = 1.0;
  double y_cur = s.c1 * (1.0 - s.c2 * lambda);
  for (int t = 1; t < s.tau; ++t) {
    double b_next = 2.0 * s.c1 * b_cur - b_prev;
    double y_next = 2.0 * s.c1 * (1.0 - s.c2 * lambda) * y_cur - y_prev;
    b_prev = b_cur;
    b_cur = b_next;
    y_prev = y_cur;
    y_cur = y_next;
  }
  return op.scale * (1.0 - y_cur / b_cur);
}

SpectralData chebyshev_effective_spectrum(const MixingMatrix& m, int tau, ChebMode mode) {
  SpectralData base = spectral_data(m);
  ChebyshevSpec spec = make_chebyshev_spec(base, tau, mode);
  MixingOp op = MixingOp::chebyshev(spec);
  VectorXd w = mixing_eigenvalues(m);
  double zero_tol = 1e-9 * base.lambda_1;
  double vmax = 0.0, vmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < w.size(); ++i) {
    if (w(i) <= zero_tol) continue;
    double v = mixing_op_eigenvalue(op, w(i));
    vmax = std::max(vmax, v);
    vmin = std::min(vmin, v);
  }
  if (!(vmin > 0))
    throw InvariantError("chebyshev polynomial not positive on the nonzero spectrum");
  SpectralData eff;  // spectrum of L = P_tau(H) / lambda_1^{P_tau(H)}
  eff.lambda_1 = 1.0;
  eff.lambda_nm1 = vmin / vmax;
  eff.kappa = vmax / vmin;
  eff.gamma_inv = vmin / vmax;
  return eff;
}

int chebyshev_depth_from_kappa(double kappa) {
  return std::max(1, static_cast<int>(std::ceil(std::sqrt(kappa) - 1e-9)));
}

int chebyshev_depth(const SpectralData& s) {
  return chebyshev_depth_from_kappa(s.kappa);
}

}  // namespace upp
