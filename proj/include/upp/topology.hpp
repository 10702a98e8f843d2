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

#ifndef UPP_TOPOLOGY_HPP_
#define UPP_TOPOLOGY_HPP_

#include <iosfwd>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "upp/common.hpp"

namespace upp {

enum class TopologyKind { Ring, Grid, RandomGeometric, RandomRegular, Complete };

std::string to_string(TopologyKind k);
TopologyKind topology_kind_from_string(const std::string& s);

struct TopologyParams {
  TopologyKind kind = TopologyKind::Ring;
  int n = 2;
  std::uint64_t seed = 0;
  int rows = 0, cols = 0;   // grid
  double radius = 0.5;      // random geometric
  int degree = 0;           // random regular
};

// Connected undirected graph, no self loops, node ids 0..n-1.
class Graph {
 public:
  Graph(int n, std::vector<std::pair<int, int>> edges, TopologyKind kind);

  int n_nodes() const { return n_; }
  int n_edges() const { return static_cast<int>(edges_.size()); }
  TopologyKind kind() const { return kind_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<std::vector<int>>& adjacency() const { return adj_; }
  int degree(int i) const { return static_cast<int>(adj_[i].size()); }
  bool connected() const;

  void save_edge_list(std::ostream& os) const;
  static Graph load_edge_list(std::istream& is);

 private:
  int n_;
  std::vector<std::pair<int, int>> edges_;  // sorted, i < j
  std::vector<std::vector<int>> adj_;       // sorted neighbor lists
  TopologyKind kind_;
};

Graph build_topology(const TopologyParams& params);

enum class MixingScheme { MetropolisLaplacian, UniformLaplacian };

std::string to_string(MixingScheme s);
MixingScheme mixing_scheme_from_string(const std::string& s);

// Symmetric PSD weight matrix P with Null(P) = span(1) and nonzeros only on
// edges and the diagonal. Laplacian sign convention: negative off-diagonals.
struct MixingMatrix {
  MatrixXd p;
  MixingScheme scheme = MixingScheme::UniformLaplacian;
  bool normalized = true;  // unit spectral radius
  const Graph* graph = nullptr;

  int n() const { return static_cast<int>(p.rows()); }
};

struct SpectralData {
  double lambda_1 = 0.0;    // largest eigenvalue
  double lambda_nm1 = 0.0;  // smallest nonzero eigenvalue
  double kappa = 1.0;       // lambda_1 / lambda_nm1  (>= 1)
  double gamma_inv = 1.0;   // lambda_nm1 / lambda_1  (in (0, 1])
};

MixingMatrix build_mixing_matrix(const Graph& g, MixingScheme scheme,
                                 bool normalize = true);

// Full symmetric eigendecomposition; lambda_nm1 is the smallest eigenvalue
// above tol * lambda_1. Errors if the near-kernel has dimension > 1.
SpectralData spectral_data(const MatrixXd& p, double tol = 1e-9);
SpectralData spectral_data(const MixingMatrix& m, double tol = 1e-9);

// Eigenvalues of P, ascending.
VectorXd mixing_eigenvalues(const MixingMatrix& m);

}  // namespace upp

#endif  // UPP_TOPOLOGY_HPP_
