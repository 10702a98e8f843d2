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

#include "upp/problems.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>

namespace upp {

namespace {

// log(1 + exp(u)) without overflow
double softplus(double u) {
  if (u > 0) return u + std::log1p(std::exp(-u));
  return std::log1p(std::exp(u));
}

// sigmoid(u) = 1 / (1 + exp(-u)), safe at both tails
double sigmoid(double u) {
  if (u >= 0) return 1.0 / (1.0 + std::exp(-u));
  double e = std::exp(u);
  return e / (1.0 + e);
}

}  // namespace

double value_local(const LocalObjective& obj, const VectorXd& x) {
  if (obj.kind == LocalObjective::Kind::Quadratic) {
    VectorXd r = obj.a * x - obj.b;
    return 0.5 * r.squaredNorm();
  }
  const int m = static_cast<int>(obj.features.rows());
  VectorXd w = obj.features * x;
  double s = 0.0;
  for (int i = 0; i < m; ++i) s += softplus(-obj.labels(i) * w(i));
  s /= m;
  for (int t = 0; t < obj.dim; ++t) {
    double xt = x(t);
    s += obj.lambda * obj.mu * xt * xt / (1.0 + obj.mu * xt * xt);
  }
  return s;
}

VectorXd grad_local(const LocalObjective& obj, const VectorXd& x) {
  if (static_cast<int>(x.size()) != obj.dim)
    throw InvariantError("dimension-mismatch in grad_local");
  if (obj.kind == LocalObjective::Kind::Quadratic)
    return obj.a.transpose() * (obj.a * x - obj.b);
  const int m = static_cast<int>(obj.features.rows());
  VectorXd w = obj.features * x;
  VectorXd coeff(m);
  for (int i = 0; i < m; ++i)
    coeff(i) = -obj.labels(i) * sigmoid(-obj.labels(i) * w(i));
  VectorXd g = obj.features.transpose() * coeff / m;
  for (int t = 0; t < obj.dim; ++t) {
    double xt = x(t);
    double den = 1.0 + obj.mu * xt * xt;
    g(t) += 2.0 * obj.lambda * obj.mu * xt / (den * den);
  }
  return g;
}

MatrixXd hess_local(const LocalObjective& obj, const VectorXd& x) {
  if (obj.kind == LocalObjective::Kind::Quadratic)
    return obj.a.transpose() * obj.a;
  const int m = static_cast<int>(obj.features.rows());
  VectorXd w = obj.features * x;
  VectorXd coeff(m);
  for (int i = 0; i < m; ++i) {
    double s = sigmoid(obj.labels(i) * w(i));
    coeff(i) = s * (1.0 - s);
  }
  MatrixXd h = obj.features.transpose() * coeff.asDiagonal() * obj.features / m;
  for (int t = 0; t < obj.dim; ++t) {
    double xt = x(t);
    double den = 1.0 + obj.mu * xt * xt;
    h(t, t) += 2.0 * obj.lambda * obj.mu * (1.0 - 3.0 * obj.mu * xt * xt) / (den * den * den);
  }
  return h;
}

double smoothness_local(const LocalObjective& obj) {
  if (obj.kind == LocalObjective::Kind::Quadratic) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(obj.a.transpose() * obj.a,
                                               Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
  }
  const int m = static_cast<int>(obj.features.rows());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(
      obj.features.transpose() * obj.features, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff() / (4.0 * m) + 2.0 * obj.lambda * obj.mu;
}

double ProblemInstance::f_at(const VectorXd& x) const {
  double s = 0.0;
  for (const auto& o : locals) s += value_local(o, x);
  return s;
}

VectorXd ProblemInstance::grad_at(const VectorXd& x) const {
  VectorXd g = VectorXd::Zero(dim);
  for (const auto& o : locals) g += grad_local(o, x);
  return g;
}

double ProblemInstance::ftilde(const NodeMatrix& x) const {
  double s = 0.0;
  for (int i = 0; i < n_nodes; ++i) s += value_local(locals[i], x.row(i).transpose());
  return s;
}

NodeMatrix ProblemInstance::grad_stacked(const NodeMatrix& x) const {
  if (x.rows() != n_nodes || x.cols() != dim)
    throw InvariantError("dimension-mismatch in grad_stacked");
  NodeMatrix g(n_nodes, dim);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n_nodes; ++i)
    g.row(i) = grad_local(locals[i], x.row(i).transpose()).transpose();
  return g;
}

double ProblemInstance::sum_block_smoothness() const {
  double s = 0.0;
  for (const auto& o : locals) s += smoothness_local(o);
  return s;
}

ProblemInstance make_logistic_instance(int n, int d, int m, double lambda,
                                       double mu, std::uint64_t seed) {
  Rng rng(seed ^ 0x6c6f6769ULL);
  ProblemInstance inst;
  inst.n_nodes = n;
  inst.dim = d;
  inst.locals.resize(n);
  double mbar = 0.0;
  for (int i = 0; i < n; ++i) {
    LocalObjective& o = inst.locals[i];
    o.kind = LocalObjective::Kind::LogisticNonconvex;
    o.dim = d;
    o.lambda = lambda;
    o.mu = mu;
    o.features = rng.normal_matrix(m, d);
    o.labels.resize(m);
    for (int s = 0; s < m; ++s) o.labels(s) = rng.below(2) ? 1.0 : -1.0;
    mbar = std::max(mbar, smoothness_local(o));
  }
  inst.smoothness = mbar;
  return inst;
}

ProblemInstance make_pl_quadratic_instance(int n, int d, std::uint64_t seed) {
  Rng rng(seed ^ 0x706c7164ULL);
  for (int attempt = 0; attempt < 100; ++attempt) {
    ProblemInstance inst;
    inst.n_nodes = n;
    inst.dim = d;
    inst.locals.resize(n);
    MatrixXd s_total = MatrixXd::Zero(d, d);
    VectorXd rhs = VectorXd::Zero(d);
    double mbar = 0.0;
    for (int i = 0; i < n; ++i) {
      LocalObjective& o = inst.locals[i];
      o.kind = LocalObjective::Kind::Quadratic;
      o.dim = d;
      o.a = rng.normal_matrix(d, d);
      o.b = rng.normal_matrix(d, 1);
      s_total += o.a.transpose() * o.a;
      rhs += o.a.transpose() * o.b;
      mbar = std::max(mbar, smoothness_local(o));
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(s_total, Eigen::EigenvaluesOnly);
    double nu = es.eigenvalues().minCoeff();
    if (nu <= 1e-8) continue;  // degenerate draw, resample
    inst.smoothness = mbar;
    inst.pl_constant = nu;
    VectorXd x_star = s_total.ldlt().solve(rhs);
    inst.x_star = x_star;
    inst.f_star = inst.f_at(x_star);
    return inst;
  }
  throw InvariantError("could not draw a positive definite quadratic instance");
}

SolveResult centralized_solve(const ProblemInstance& inst, double tol, long max_iters) {
  SolveResult r;
  VectorXd x = VectorXd::Zero(inst.dim);
  const double step = 1.0 / inst.sum_block_smoothness();
  double best_f = inst.f_at(x);
  VectorXd best_x = x;
  for (long k = 0; k < max_iters; ++k) {
    VectorXd g = inst.grad_at(x);
    if (!g.allFinite()) throw InvariantError("non-finite gradient in centralized_solve");
    if (g.norm() <= tol) {
      r.converged = true;
      r.iters = k;
      r.x_star = x;
      r.f_star = inst.f_at(x);
      return r;
    }
    x -= step * g;
    double f = inst.f_at(x);
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
  }
  r.converged = false;  // max-iters-exceeded: best-so-far with a warning flag
  r.iters = max_iters;
  r.x_star = best_x;
  r.f_star = best_f;
  return r;
}

void save_instance(const ProblemInstance& inst, std::ostream& os) {
  os << std::setprecision(17);
  os << "upp-instance v1\n";
  const bool logi = inst.locals.at(0).kind == LocalObjective::Kind::LogisticNonconvex;
  if (logi) {
    const auto& o0 = inst.locals[0];
    os << "logistic " << inst.n_nodes << " " << inst.dim << " "
       << o0.features.rows() << " " << o0.lambda << " " << o0.mu << "\n";
    for (const auto& o : inst.locals) {
      for (int s = 0; s < o.features.rows(); ++s) {
        for (int t = 0; t < inst.dim; ++t) os << o.features(s, t) << " ";
        os << "\n";
      }
      for (int s = 0; s < o.labels.size(); ++s) os << o.labels(s) << " ";
      os << "\n";
    }
  } else {
    os << "quadratic " << inst.n_nodes << " " << inst.dim << " "
       << inst.locals[0].a.rows() << "\n";
    for (const auto& o : inst.locals) {
      for (int s = 0; s < o.a.rows(); ++s) {
        for (int t = 0; t < inst.dim; ++t) os << o.a(s, t) << " ";
        os << "\n";
      }
      for (int s = 0; s < o.b.size(); ++s) os << o.b(s) << " ";
      os << "\n";
    }
  }
}

ProblemInstance load_instance(std::istream& is) {
  std::string tag, ver, kind;
  is >> tag >> ver >> kind;
  if (tag != "upp-instance") throw UsageError("not an instance file");
  ProblemInstance inst;
  if (kind == "logistic") {
    int n, d, m;
    double lambda, mu;
    if (!(is >> n >> d >> m >> lambda >> mu)) throw UsageError("bad logistic header");
    inst.n_nodes = n;
    inst.dim = d;
    inst.locals.resize(n);
    double mbar = 0.0;
    for (auto& o : inst.locals) {
      o.kind = LocalObjective::Kind::LogisticNonconvex;
      o.dim = d;
      o.lambda = lambda;
      o.mu = mu;
      o.features.resize(m, d);
      o.labels.resize(m);
      for (int s = 0; s < m; ++s)
        for (int t = 0; t < d; ++t) is >> o.features(s, t);
      for (int s = 0; s < m; ++s) is >> o.labels(s);
      mbar = std::max(mbar, smoothness_local(o));
    }
    if (!is) throw UsageError("truncated instance file");
    inst.smoothness = mbar;
  } else if (kind == "quadratic") {
    int n, d, rows;
    if (!(is >> n >> d >> rows)) throw UsageError("bad quadratic header");
    inst.n_nodes = n;
    inst.dim = d;
    inst.locals.resize(n);
    double mbar = 0.0;
    for (auto& o : inst.locals) {
      o.kind = LocalObjective::Kind::Quadratic;
      o.dim = d;
      o.a.resize(rows, d);
      o.b.resize(rows);
      for (int s = 0; s < rows; ++s)
        for (int t = 0; t < d; ++t) is >> o.a(s, t);
      for (int s = 0; s < rows; ++s) is >> o.b(s);
      mbar = std::max(mbar, smoothness_local(o));
    }
    if (!is) throw UsageError("truncated instance file");
    inst.smoothness = mbar;
  } else {
    throw UsageError("unknown instance kind: " + kind);
  }
  return inst;
}

}  // namespace upp
