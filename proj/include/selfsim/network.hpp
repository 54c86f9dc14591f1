#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "selfsim/error.hpp"

namespace selfsim {

using Vertex = std::size_t;

struct NetEdge {
  Vertex u = 0;
  Vertex v = 0;
  double resistance = 1.0;

  double conductance() const { return 1.0 / resistance; }
  bool is_loop() const { return u == v; }
};

/// A finite, connected electrical network. Parallel edges and loops are allowed.
class Network {
 public:
  Network() = default;

  Network(std::size_t vertices, std::vector<NetEdge> edges, std::vector<Vertex> boundary = {},
          std::vector<std::string> labels = {})
      : n_(vertices), edges_(std::move(edges)), labels_(std::move(labels)) {
    if (n_ == 0) throw NetworkError("network without vertices");
    if (!labels_.empty() && labels_.size() != n_) throw NetworkError("label count differs from vertex count");
    for (const auto& e : edges_) {
      if (e.u >= n_ || e.v >= n_) throw NetworkError("edge endpoint out of range");
      if (!(e.resistance > 0.0) || !std::isfinite(e.resistance))
        throw NetworkError("edge resistance must be positive");
    }
    boundary_mask_.assign(n_, 0);
    for (Vertex b : boundary) {
      if (b >= n_) throw NetworkError("boundary vertex out of range");
      boundary_mask_[b] = 1;
    }
    if (component_count() != 1) throw NetworkError("network is not connected");
  }

  std::size_t size() const noexcept { return n_; }
  const std::vector<NetEdge>& edges() const noexcept { return edges_; }

  std::vector<Vertex> boundary() const {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < n_; ++v)
      if (boundary_mask_[v]) out.push_back(v);
    return out;
  }
  bool is_boundary(Vertex v) const { return boundary_mask_.at(v) != 0; }

  bool has_labels() const noexcept { return !labels_.empty(); }
  std::string label(Vertex v) const { return labels_.empty() ? std::to_string(v) : labels_.at(v); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::optional<Vertex> find(const std::string& label) const {
    for (Vertex v = 0; v < n_; ++v)
      if (this->label(v) == label) return v;
    return std::nullopt;
  }

  /// Sum of conductances at each vertex; a loop counts once.
  std::vector<double> weighted_degree() const {
    std::vector<double> d(n_, 0.0);
    for (const auto& e : edges_) {
      d[e.u] += e.conductance();
      if (!e.is_loop()) d[e.v] += e.conductance();
    }
    return d;
  }

  /// Graph distance (edge count) from `source`.
  std::vector<std::size_t> distances(Vertex source) const {
    const auto adj = adjacency();
    std::vector<std::size_t> dist(n_, static_cast<std::size_t>(-1));
    std::vector<Vertex> queue{source};
    dist[source] = 0;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      Vertex x = queue[i];
      for (Vertex y : adj[x])
        if (dist[y] == static_cast<std::size_t>(-1)) {
          dist[y] = dist[x] + 1;
          queue.push_back(y);
        }
    }
    return dist;
  }

  std::vector<std::vector<Vertex>> adjacency() const {
    std::vector<std::vector<Vertex>> adj(n_);
    for (const auto& e : edges_) {
      if (e.is_loop()) continue;
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    return adj;
  }

 private:
  std::size_t component_count() const {
    std::vector<Vertex> parent(n_);
    std::iota(parent.begin(), parent.end(), Vertex{0});
    auto find = [&](Vertex x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::size_t count = n_;
    for (const auto& e : edges_) {
      Vertex a = find(e.u), b = find(e.v);
      if (a != b) {
        parent[a] = b;
        --count;
      }
    }
    return count;
  }

  std::size_t n_ = 0;
  std::vector<NetEdge> edges_;
  std::vector<char> boundary_mask_;
  std::vector<std::string> labels_;
};

/// A real function on vertices: explicit values plus a default for the rest.
struct VertexFunction {
  std::map<Vertex, double> values;
  double fallback = 0.0;

  static VertexFunction dense(const std::vector<double>& v) {
    VertexFunction f;
    for (Vertex i = 0; i < v.size(); ++i) f.values[i] = v[i];
    return f;
  }
  static VertexFunction indicator(const std::vector<Vertex>& set) {
    VertexFunction f;
    for (Vertex v : set) f.values[v] = 1.0;
    return f;
  }

  double operator()(Vertex v) const {
    auto it = values.find(v);
    return it == values.end() ? fallback : it->second;
  }
};

/// D(f) = sum over edges of a(e) (f(e+) - f(e-))^2.
inline double dirichlet_energy(const Network& net, const VertexFunction& f) {
  double sum = 0.0;
  for (const auto& e : net.edges()) {
    double d = f(e.u) - f(e.v);
    sum += e.conductance() * d * d;
  }
  return sum;
}

struct ShortedNetwork {
  Network network;
  /// Block index of every original vertex.
  std::vector<Vertex> block_of;
};

/// Merges each block of `partition` into one vertex. Edges inside a block are dropped and
/// conductances between blocks are summed. A block is on the boundary when any member is.
inline ShortedNetwork short_network(const Network& net, const std::vector<std::vector<Vertex>>& partition) {
  const auto none = static_cast<Vertex>(-1);
  std::vector<Vertex> block(net.size(), none);
  for (Vertex b = 0; b < partition.size(); ++b) {
    if (partition[b].empty()) throw NetworkError("empty block in partition");
    for (Vertex v : partition[b]) {
      if (v >= net.size()) throw NetworkError("partition vertex out of range");
      if (block[v] != none) throw NetworkError("partition blocks overlap");
      block[v] = b;
    }
  }
  if (std::find(block.begin(), block.end(), none) != block.end())
    throw NetworkError("partition does not cover every vertex");

  std::map<std::pair<Vertex, Vertex>, double> conductance;
  for (const auto& e : net.edges()) {
    Vertex a = block[e.u], b = block[e.v];
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    conductance[{a, b}] += e.conductance();
  }
  std::vector<NetEdge> edges;
  for (auto [key, c] : conductance) edges.push_back({key.first, key.second, 1.0 / c});
  std::vector<Vertex> boundary;
  for (Vertex v : net.boundary()) boundary.push_back(block[v]);
  std::sort(boundary.begin(), boundary.end());
  boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
  return {Network(partition.size(), std::move(edges), boundary), block};
}

struct SolverConfig {
  std::size_t direct_limit = 2000;
  double tolerance = 1e-10;
  long max_iterations = 100000;
};

namespace detail {

/// Harmonic extension of `fixed` over an arbitrary edge list. Components of the graph
/// holding no fixed vertex take `free_value`.
inline std::vector<double> harmonic_extension(std::size_t n, const std::vector<NetEdge>& edges,
                                              const std::map<Vertex, double>& fixed, double free_value,
                                              const SolverConfig& cfg = {}) {
  std::vector<double> value(n, free_value);
  std::vector<char> is_fixed(n, 0);
  for (auto [v, x] : fixed) {
    is_fixed[v] = 1;
    value[v] = x;
  }
  // vertices connected to a fixed vertex are the true unknowns
  std::vector<std::vector<Vertex>> adj(n);
  for (const auto& e : edges) {
    if (e.is_loop()) continue;
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<char> anchored(n, 0);
  std::vector<Vertex> queue;
  for (auto [v, _] : fixed) {
    anchored[v] = 1;
    queue.push_back(v);
  }
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (Vertex y : adj[queue[i]])
      if (!anchored[y]) {
        anchored[y] = 1;
        queue.push_back(y);
      }

  const auto none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, none);
  std::size_t m = 0;
  for (Vertex v = 0; v < n; ++v)
    if (anchored[v] && !is_fixed[v]) index[v] = m++;
  if (m == 0) return value;

  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  for (const auto& e : edges) {
    if (e.is_loop()) continue;
    double c = e.conductance();
    std::size_t iu = index[e.u], iv = index[e.v];
    if (iu != none) trip.emplace_back(iu, iu, c);
    if (iv != none) trip.emplace_back(iv, iv, c);
    if (iu != none && iv != none) {
      trip.emplace_back(iu, iv, -c);
      trip.emplace_back(iv, iu, -c);
    } else if (iu != none && is_fixed[e.v]) {
      rhs[static_cast<Eigen::Index>(iu)] += c * value[e.v];
    } else if (iv != none && is_fixed[e.u]) {
      rhs[static_cast<Eigen::Index>(iv)] += c * value[e.u];
    }
  }
  Eigen::SparseMatrix<double> L(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  L.setFromTriplets(trip.begin(), trip.end());

  Eigen::VectorXd x;
  if (m < cfg.direct_limit) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(L);
    if (solver.info() != Eigen::Success) throw NetworkError("harmonic system is singular");
    x = solver.solve(rhs);
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> solver;
    solver.setTolerance(cfg.tolerance);
    solver.setMaxIterations(cfg.max_iterations);
    solver.compute(L);
    x = solver.solve(rhs);
    if (solver.info() != Eigen::Success) throw NetworkError("iterative solver did not converge");
  }
  for (Vertex v = 0; v < n; ++v)
    if (index[v] != none) value[v] = x[static_cast<Eigen::Index>(index[v])];
  return value;
}

}  // namespace detail

/// The harmonic function with the given boundary values.
inline std::vector<double> harmonic_extension(const Network& net, const std::map<Vertex, double>& fixed,
                                              const SolverConfig& cfg = {}) {
  if (fixed.empty()) throw NetworkError("harmonic extension needs at least one fixed vertex");
  for (auto [v, _] : fixed)
    if (v >= net.size()) throw NetworkError("fixed vertex out of range");
  return detail::harmonic_extension(net.size(), net.edges(), fixed, 0.0, cfg);
}

/// R_eff between `source` and the set `sinks`: the reciprocal of the minimal energy of a
/// function equal to 1 at the source and 0 on the sinks.
inline double effective_resistance(const Network& net, Vertex source, const std::vector<Vertex>& sinks,
                                   const SolverConfig& cfg = {}) {
  if (sinks.empty()) throw NetworkError("no sink vertices");
  if (source >= net.size()) throw NetworkError("source out of range");
  std::map<Vertex, double> fixed{{source, 1.0}};
  for (Vertex s : sinks) {
    if (s == source) throw NetworkError("source is also a sink");
    fixed[s] = 0.0;
  }
  auto f = harmonic_extension(net, fixed, cfg);
  double current = 0.0;
  for (const auto& e : net.edges()) {
    if (e.u == source && e.v != source) current += e.conductance() * (f[e.u] - f[e.v]);
    if (e.v == source && e.u != source) current += e.conductance() * (f[e.v] - f[e.u]);
  }
  if (!(current > 0.0)) throw NetworkError("source and sinks are disconnected");
  return 1.0 / current;
}

inline double effective_resistance_to_boundary(const Network& net, Vertex source,
                                               const SolverConfig& cfg = {}) {
  return effective_resistance(net, source, net.boundary(), cfg);
}

}  // namespace selfsim
