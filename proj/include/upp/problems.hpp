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

#ifndef UPP_PROBLEMS_HPP_
#define UPP_PROBLEMS_HPP_

#include <iosfwd>
#include <optional>
#include <vector>

#include "upp/common.hpp"

namespace upp {

// Binary classification with a smooth nonconvex regularizer:
//   f_i(x) = (1/m) sum_s log(1 + exp(-y_s x'z_s)) + sum_t lam*mu*x_t^2/(1+mu*x_t^2)
// or a least-squares block f_i(x) = 0.5 ||A_i x - b_i||^2.
struct LocalObjective {
  enum class Kind { LogisticNonconvex, Quadratic } kind = Kind::Quadratic;
  int dim = 0;
  // logistic
  MatrixXd features;  // m x d
  VectorXd labels;    // in {-1, +1}
  double lambda = 0.0;
  double mu = 0.0;
  // quadratic
  MatrixXd a;  // rows x d
  VectorXd b;
};

double value_local(const LocalObjective& obj, const VectorXd& x);
VectorXd grad_local(const LocalObjective& obj, const VectorXd& x);
MatrixXd hess_local(const LocalObjective& obj, const VectorXd& x);
// Largest-curvature bound for one block.
double smoothness_local(const LocalObjective& obj);

struct ProblemInstance {
  int n_nodes = 0;
  int dim = 0;
  std::vector<LocalObjective> locals;
  double smoothness = 0.0;              // Mbar of the stacked objective (max block)
  std::optional<double> f_star;         // optimal (or stationary-reference) value
  std::optional<double> pl_constant;    // nu, when the P-L flag applies
  std::optional<VectorXd> x_star;

  double f_at(const VectorXd& x) const;        // f(x) = sum_i f_i(x)
  VectorXd grad_at(const VectorXd& x) const;   // sum_i grad f_i(x)
  double ftilde(const NodeMatrix& x) const;    // sum_i f_i(x_i)
  NodeMatrix grad_stacked(const NodeMatrix& x) const;
  double sum_block_smoothness() const;
};

ProblemInstance make_logistic_instance(int n = 50, int d = 10, int m = 200,
                                       double lambda = 1e-3, double mu = 1.0,
                                       std::uint64_t seed = 7);

ProblemInstance make_pl_quadratic_instance(int n, int d, std::uint64_t seed);

struct SolveResult {
  double f_star = 0.0;
  VectorXd x_star;
  bool converged = false;
  long iters = 0;
};

// Fixed-step gradient descent on f(x) = sum_i f_i(x) until ||grad f|| <= tol.
// The step is 1 / (sum of block smoothness bounds); the per-block bound alone
// is not a valid upper bound for the summed objective.
SolveResult centralized_solve(const ProblemInstance& inst, double tol = 1e-10,
                              long max_iters = 200000);

void save_instance(const ProblemInstance& inst, std::ostream& os);
ProblemInstance load_instance(std::istream& is);

}  // namespace upp

#endif  // UPP_PROBLEMS_HPP_
