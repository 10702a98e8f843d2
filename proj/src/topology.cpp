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

#include "upp/topology.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <queue>

namespace upp {

std::string to_string(TopologyKind k) {
  switch (k) {
    case TopologyKind::Ring: return "ring";
    case TopologyKind::Grid: return "grid";
    case TopologyKind::RandomGeometric: return "random_geometric";
    case TopologyKind::RandomRegular: return "random_regular";
    case TopologyKind::Complete: return "complete";
  }
  return "?";
}

TopologyKind topology_kind_from_string(const std::string& s) {
  if (s == "ring") return TopologyKind::Ring;
  if (s == "grid") return TopologyKind::Grid;
  if (s == "random_geometric" || s == "geometric") return TopologyKind::RandomGeometric;
  if (s == "random_regular" || s == "regular") return TopologyKind::RandomRegular;
  if (s == "complete") return TopologyKind::Complete;
  throw UsageError("unknown topology kind: " + s);
}

std::string to_string(MixingScheme s) {
  return s == MixingScheme::MetropolisLaplacian ? "metropolis_laplacian"
                                                : "uniform_laplacian";
}

MixingScheme mixing_scheme_from_string(const std::string& s) {
  if (s == "metropolis_laplacian" || s == "metropolis") return MixingScheme::MetropolisLaplacian;
  if (s == "uniform_laplacian" || s == "laplacian") return MixingScheme::UniformLaplacian;
  throw UsageError("unknown mixing scheme: " + s);
}

Graph::Graph(int n, std::vector<std::pair<int, int>> edges, TopologyKind kind)
    : n_(n), kind_(kind) {
  if (n < 2) throw InvariantError("graph needs at least 2 nodes");
  std::set<std::pair<int, int>> uniq;
  for (auto [i, j] : edges) {
    if (i == j) throw InvariantError("self loop in edge list");
    if (i < 0 || j < 0 || i >= n || j >= n)
      throw InvariantError("edge endpoint out of range");
    uniq.insert({std::min(i, j), std::max(i, j)});
  }
  edges_.assign(uniq.begin(), uniq.end());
  adj_.assign(n, {});
  for (auto [i, j] : edges_) {
    adj_[i].push_back(j);
    adj_[j].push_back(i);
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
}

bool Graph::connected() const {
  std::vector<char> seen(n_, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int cnt = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj_[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++cnt;
        q.push(v);
      }
  }
  return cnt == n_;
}

void Graph::save_edge_list(std::ostream& os) const {
  os << n_ << " " << edges_.size() << "\n";
  for (auto [i, j] : edges_) os << i << " " << j << "\n";
}

Graph Graph::load_edge_list(std::istream& is) {
  int n = 0;
  std::size_t m = 0;
  if (!(is >> n >> m)) throw UsageError("bad edge-list header");
  std::vector<std::pair<int, int>> edges(m);
  for (auto& e : edges)
    if (!(is >> e.first >> e.second)) throw UsageError("truncated edge list");
  Graph g(n, std::move(edges), TopologyKind::Ring);
  if (!g.connected()) throw InvariantError("loaded graph is disconnected");
  return g;
}

namespace {

std::vector<std::pair<int, int>> ring_edges(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
  return e;
}

std::vector<std::pair<int, int>> grid_edges(int rows, int cols) {
  std::vector<std::pair<int, int>> e;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      int u = r * cols + c;
      if (c + 1 < cols) e.push_back({u, u + 1});
      if (r + 1 < rows) e.push_back({u, u + cols});
    }
  return e;
}

std::vector<std::pair<int, int>> complete_edges(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.push_back({i, j});
  return e;
}

Graph geometric_graph(int n, double radius, std::uint64_t seed) {
  if (radius <= 0) throw UsageError("geometric radius must be positive");
  Rng rng(seed ^ 0x67656f6dULL);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = rng.uniform();
      y[i] = rng.uniform();
    }
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double dx = x[i] - x[j], dy = y[i] - y[j];
        if (std::sqrt(dx * dx + dy * dy) < radius) e.push_back({i, j});
      }
    Graph g(n, std::move(e), TopologyKind::RandomGeometric);
    if (g.connected()) return g;
  }
  throw InvariantError("geometric layout stayed disconnected after 1000 attempts");
}

// Regular circulant start, then randomizing double-edge swaps. Keeps the
// degree sequence exact and resamples until the result is connected.
Graph regular_graph(int n, int degree, std::uint64_t seed) {
  if (degree < 2 || degree >= n) throw UsageError("regular degree out of range");
  if ((static_cast<long long>(n) * degree) % 2 != 0)
    throw InvariantError("unrealizable-regular-degree: n*degree is odd");
  Rng rng(seed ^ 0x72656775ULL);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::set<std::pair<int, int>> es;
    auto add = [&](int a, int b) { es.insert({std::min(a, b), std::max(a, b)}); };
    for (int i = 0; i < n; ++i)
      for (int k = 1; k <= degree / 2; ++k) add(i, (i + k) % n);
    if (degree % 2 == 1)
      for (int i = 0; i < n / 2; ++i) add(i, i + n / 2);

    std::vector<std::pair<int, int>> ev(es.begin(), es.end());
    long swaps = 20LL * static_cast<long>(ev.size());
    for (long s = 0; s < swaps; ++s) {
      std::size_t a = rng.below(ev.size());
      std::size_t b = rng.below(ev.size());
      if (a == b) continue;
      auto [u1, v1] = ev[a];
      auto [u2, v2] = ev[b];
      if (rng.below(2)) std::swap(u2, v2);
      // rewire (u1,v1),(u2,v2) -> (u1,u2),(v1,v2)
      if (u1 == u2 || u1 == v2 || v1 == u2 || v1 == v2) continue;
      auto ne1 = std::make_pair(std::min(u1, u2), std::max(u1, u2));
      auto ne2 = std::make_pair(std::min(v1, v2), std::max(v1, v2));
      if (es.count(ne1) || es.count(ne2)) continue;
      es.erase(std::make_pair(std::min(u1, v1), std::max(u1, v1)));
      es.erase(std::make_pair(std::min(u2, v2), std::max(u2, v2)));
      es.insert(ne1);
      es.insert(ne2);
      ev[a] = ne1;
      ev[b] = ne2;
    }
    Graph g(n, std::vector<std::pair<int, int>>(es.begin(), es.end()),
            TopologyKind::RandomRegular);
    bool ok = g.connected();
    for (int i = 0; ok && i < n; ++i) ok = g.degree(i) == degree;
    if (ok) return g;
  }
  throw InvariantError("regular graph stayed disconnected after 1000 attempts");
}

}  // namespace

Graph build_topology(const TopologyParams& p) {
  if (p.n < 2) throw UsageError("need n >= 2");
  switch (p.kind) {
    case TopologyKind::Ring:
      return Graph(p.n, ring_edges(p.n), TopologyKind::Ring);
    case TopologyKind::Grid: {
      int rows = p.rows, cols = p.cols;
      if (rows <= 0 || cols <= 0) throw UsageError("grid needs rows and cols");
      if (rows * cols != p.n)
        throw InvariantError("grid-dimension-mismatch: rows*cols != n");
      return Graph(p.n, grid_edges(rows, cols), TopologyKind::Grid);
    }
    case TopologyKind::RandomGeometric:
      return geometric_graph(p.n, p.radius, p.seed);
    case TopologyKind::RandomRegular:
      return regular_graph(p.n, p.degree, p.seed);
    case TopologyKind::Complete:
      return Graph(p.n, complete_edges(p.n), TopologyKind::Complete);
  }
  throw UsageError("unhandled topology kind");
}

MixingMatrix build_mixing_matrix(const Graph& g, MixingScheme scheme, bool normalize) {
  if (!g.connected()) throw InvariantError("disconnected-graph");
  const int n = g.n_nodes();
  MatrixXd p = MatrixXd::Zero(n, n);
  if (scheme == MixingScheme::UniformLaplacian) {
    for (auto [i, j] : g.edges()) {
      p(i, j) -= 1.0;
      p(j, i) -= 1.0;
      p(i, i) += 1.0;
      p(j, j) += 1.0;
    }
  } else {
    // P = I - W with Metropolis weights.
    for (auto [i, j] : g.edges()) {
      double w = 1.0 / (1.0 + std::max(g.degree(i), g.degree(j)));
      p(i, j) -= w;
      p(j, i) -= w;
      p(i, i) += w;
      p(j, j) += w;
    }
  }
  MixingMatrix m;
  m.scheme = scheme;
  m.graph = &g;
  m.normalized = normalize;
  if (normalize) {
    double l1 = spectral_data(p).lambda_1;
    p /= l1;
  }
  m.p = std::move(p);
  return m;
}

SpectralData spectral_data(const MatrixXd& p, double tol) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(p, Eigen::EigenvaluesOnly);
  const VectorXd& w = es.eigenvalues();  // ascending
  const int n = static_cast<int>(w.size());
  SpectralData s;
  s.lambda_1 = w(n - 1);
  if (s.lambda_1 <= 0) throw InvariantError("mixing matrix has no positive eigenvalue");
  int zeros = 0;
  double lam_nm1 = s.lambda_1;
  for (int i = 0; i < n; ++i) {
    if (w(i) <= tol * s.lambda_1) {
      ++zeros;
    } else {
      lam_nm1 = std::min(lam_nm1, w(i));
    }
  }
  if (zeros != 1)
    throw InvariantError("more-than-one-near-zero-eigenvalue (disconnected graph?)");
  s.lambda_nm1 = lam_nm1;
  s.kappa = s.lambda_1 / s.lambda_nm1;
  s.gamma_inv = s.lambda_nm1 / s.lambda_1;
  return s;
}

SpectralData spectral_data(const MixingMatrix& m, double tol) {
  return spectral_data(m.p, tol);
}

VectorXd mixing_eigenvalues(const MixingMatrix& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m.p, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace upp
