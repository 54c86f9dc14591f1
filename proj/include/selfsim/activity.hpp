#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "selfsim/automaton.hpp"
#include "selfsim/perm.hpp"

namespace selfsim {

/// alpha_n(g): a count, or infinite when some default transition leads to a
/// nontrivial section. Finite counts saturate at the largest uint64.
struct Activity {
  std::uint64_t value = 0;
  bool infinite = false;

  static Activity finite(std::uint64_t v) { return {v, false}; }
  static Activity unbounded() { return {0, true}; }

  friend bool operator==(const Activity&, const Activity&) = default;

  std::string to_string() const { return infinite ? "inf" : std::to_string(value); }
};

namespace detail {

inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = a + b;
  return r < a ? std::numeric_limits<std::uint64_t>::max() : r;
}

}  // namespace detail

/// The digraph of nontrivial sections of a canonical automorphism: vertices are the
/// non-identity states, one edge per letter whose target is not `e`.
class SectionGraph {
 public:
  struct Edge {
    Letter letter;
    StateId target;
  };

  explicit SectionGraph(const TreeAutomorphism& g) : g_(g) {
    const auto& a = g.automaton();
    const std::size_t n = a.size();
    edges_.resize(n);
    wild_.assign(n, 0);
    for (StateId s = 1; s < n; ++s) {
      for (auto [x, t] : a.state(s).exceptions)
        if (t != kIdentityState) edges_[s].push_back({x, t});
      if (a.alphabet().is_integers() && a.state(s).fallback != kIdentityState) wild_[s] = 1;
    }
    compute_components();
  }

  const TreeAutomorphism& automorphism() const noexcept { return g_; }
  std::size_t size() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges(StateId s) const { return edges_[s]; }

  /// State whose default transition leads to a nontrivial section (only possible on Z).
  bool wild(StateId s) const { return wild_[s] != 0; }

  /// Strongly connected component index; `e` is its own trivial component.
  std::size_t component(StateId s) const { return comp_[s]; }
  std::size_t component_count() const { return comp_count_; }

  /// Whether s lies on a cycle of the graph.
  bool on_cycle(StateId s) const { return cyclic_[comp_[s]] != 0; }

  /// Letters along the edges that stay in s's component.
  std::vector<Edge> internal_edges(StateId s) const {
    std::vector<Edge> out;
    for (auto e : edges_[s])
      if (comp_[e.target] == comp_[s]) out.push_back(e);
    return out;
  }

  /// Whether some cycle is reachable from s (s itself included).
  bool reaches_cycle(StateId s) const { return reach_cycle_[comp_[s]] != 0; }
  bool finitary(StateId s) const { return s == kIdentityState || !reaches_cycle(s); }

  /// Maximal number of cycles on a path starting in s's component.
  std::size_t cycle_chain(StateId s) const { return chain_[comp_[s]]; }

  /// Longest edge path starting at s; only meaningful when s is finitary.
  std::size_t height(StateId s) const { return height_[comp_[s]]; }

 private:
  void compute_components() {
    const std::size_t n = edges_.size();
    comp_.assign(n, 0);
    // Tarjan, iterative
    std::vector<std::int64_t> index(n, -1), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<StateId> stack;
    std::int64_t counter = 0;
    comp_count_ = 0;
    std::vector<std::size_t> comp_of(n, 0);
    for (StateId root = 0; root < n; ++root) {
      if (index[root] >= 0) continue;
      std::vector<std::pair<StateId, std::size_t>> work{{root, 0}};
      index[root] = low[root] = counter++;
      stack.push_back(root);
      on_stack[root] = 1;
      while (!work.empty()) {
        auto& [v, i] = work.back();
        if (i < edges_[v].size()) {
          StateId w = edges_[v][i++].target;
          if (index[w] < 0) {
            index[w] = low[w] = counter++;
            stack.push_back(w);
            on_stack[w] = 1;
            work.emplace_back(w, 0);
          } else if (on_stack[w]) {
            low[v] = std::min(low[v], index[w]);
          }
          continue;
        }
        if (low[v] == index[v]) {
          for (;;) {
            StateId w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp_of[w] = comp_count_;
            if (w == v) break;
          }
          ++comp_count_;
        }
        StateId done = v;
        work.pop_back();
        if (!work.empty()) low[work.back().first] = std::min(low[work.back().first], low[done]);
      }
    }
    comp_ = comp_of;
    // Tarjan emits components in reverse topological order: successors first.
    cyclic_.assign(comp_count_, 0);
    for (StateId s = 0; s < n; ++s)
      for (auto e : edges_[s])
        if (comp_[e.target] == comp_[s]) cyclic_[comp_[s]] = 1;
    reach_cycle_.assign(comp_count_, 0);
    chain_.assign(comp_count_, 0);
    height_.assign(comp_count_, 0);
    std::vector<std::vector<StateId>> members(comp_count_);
    for (StateId s = 0; s < n; ++s) members[comp_[s]].push_back(s);
    for (std::size_t c = 0; c < comp_count_; ++c) {
      std::size_t best_chain = 0, best_height = 0;
      bool reach = cyclic_[c];
      for (StateId s : members[c])
        for (auto e : edges_[s]) {
          std::size_t d = comp_[e.target];
          if (d == c) continue;
          reach = reach || reach_cycle_[d];
          best_chain = std::max(best_chain, chain_[d]);
          best_height = std::max(best_height, height_[d] + 1);
        }
      reach_cycle_[c] = reach;
      chain_[c] = best_chain + (cyclic_[c] ? 1 : 0);
      height_[c] = best_height;
    }
  }

  TreeAutomorphism g_;
  std::vector<std::vector<Edge>> edges_;
  std::vector<char> wild_;
  std::vector<std::size_t> comp_;
  std::size_t comp_count_ = 0;
  std::vector<char> cyclic_;
  std::vector<char> reach_cycle_;
  std::vector<std::size_t> chain_;
  std::vector<std::size_t> height_;
};

/// alpha_n(g): the number of words of length n with nontrivial section, by path counting
/// in the section graph. alpha_0(g) = [g != id].
inline Activity activity(const TreeAutomorphism& g, std::size_t n) {
  if (g.is_identity()) return Activity::finite(0);
  SectionGraph graph(g);
  std::vector<std::uint64_t> count(graph.size(), 0);
  count[g.initial()] = 1;
  for (std::size_t level = 0; level < n; ++level) {
    std::vector<std::uint64_t> next(graph.size(), 0);
    for (StateId s = 1; s < graph.size(); ++s) {
      if (count[s] == 0) continue;
      if (graph.wild(s)) return Activity::unbounded();
      for (auto e : graph.edges(s)) next[e.target] = detail::sat_add(next[e.target], count[s]);
    }
    count = std::move(next);
  }
  std::uint64_t total = 0;
  for (StateId s = 1; s < graph.size(); ++s) total = detail::sat_add(total, count[s]);
  return Activity::finite(total);
}

/// All of alpha_0 .. alpha_n in one pass.
inline std::vector<Activity> activity_profile(const TreeAutomorphism& g, std::size_t n) {
  std::vector<Activity> out;
  if (g.is_identity()) {
    out.assign(n + 1, Activity::finite(0));
    return out;
  }
  SectionGraph graph(g);
  std::vector<std::uint64_t> count(graph.size(), 0);
  count[g.initial()] = 1;
  bool infinite = false;
  for (std::size_t level = 0; level <= n; ++level) {
    if (infinite) {
      out.push_back(Activity::unbounded());
      continue;
    }
    std::uint64_t total = 0;
    for (StateId s = 1; s < graph.size(); ++s) total = detail::sat_add(total, count[s]);
    out.push_back(Activity::finite(total));
    std::vector<std::uint64_t> next(graph.size(), 0);
    for (StateId s = 1; s < graph.size(); ++s) {
      if (count[s] == 0) continue;
      if (graph.wild(s)) infinite = true;
      for (auto e : graph.edges(s)) next[e.target] = detail::sat_add(next[e.target], count[s]);
    }
    count = std::move(next);
  }
  return out;
}

enum class ActivityKind { Finitary, Bounded, PolynomialDegree, Exponential, InfiniteActivity };

/// Position of an automorphism in the activity hierarchy. The polynomial and exponential
/// grades are informational; the criterion only needs finitary and bounded.
struct ActivityClass {
  ActivityKind kind = ActivityKind::Finitary;
  std::size_t depth = 0;                 // Finitary: alpha_n = 0 for all n >= depth
  std::uint64_t sup = 0;                 // Bounded: sup_n alpha_n
  std::vector<StateId> directed_states;  // Bounded: states lying on cycles
  std::size_t degree = 0;                // PolynomialDegree
  std::size_t level = 0;                 // InfiniteActivity: first infinite alpha_n

  bool bounded() const {
    return kind == ActivityKind::Finitary || kind == ActivityKind::Bounded;
  }

  std::string to_string() const {
    switch (kind) {
      case ActivityKind::Finitary: return "Finitary(" + std::to_string(depth) + ")";
      case ActivityKind::Bounded: return "Bounded(" + std::to_string(sup) + ")";
      case ActivityKind::PolynomialDegree: return "PolynomialDegree(" + std::to_string(degree) + ")";
      case ActivityKind::Exponential: return "Exponential";
      case ActivityKind::InfiniteActivity: return "InfiniteActivity(" + std::to_string(level) + ")";
    }
    return "?";
  }
};

/// Lengths of the (disjoint, simple) cycles of a bounded automorphism's section graph,
/// one entry per cycle.
inline std::vector<std::size_t> cycle_lengths(const SectionGraph& graph) {
  std::map<std::size_t, std::size_t> sizes;
  for (StateId s = 1; s < graph.size(); ++s)
    if (graph.on_cycle(s)) ++sizes[graph.component(s)];
  std::vector<std::size_t> out;
  for (auto [c, k] : sizes) out.push_back(k);
  return out;
}

inline ActivityClass classify(const TreeAutomorphism& g) {
  ActivityClass result;
  if (g.is_identity()) return result;
  SectionGraph graph(g);
  const std::size_t n = graph.size();

  // breadth-first distances, to locate the first infinite level
  std::vector<std::size_t> dist(n, std::numeric_limits<std::size_t>::max());
  std::vector<StateId> queue{g.initial()};
  dist[g.initial()] = 0;
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (auto e : graph.edges(queue[i]))
      if (dist[e.target] == std::numeric_limits<std::size_t>::max()) {
        dist[e.target] = dist[queue[i]] + 1;
        queue.push_back(e.target);
      }
  std::size_t wild_level = std::numeric_limits<std::size_t>::max();
  for (StateId s : queue)
    if (graph.wild(s)) wild_level = std::min(wild_level, dist[s] + 1);
  if (wild_level != std::numeric_limits<std::size_t>::max()) {
    result.kind = ActivityKind::InfiniteActivity;
    result.level = wild_level;
    return result;
  }

  for (StateId s : queue)
    if (graph.on_cycle(s) && graph.internal_edges(s).size() >= 2) {
      result.kind = ActivityKind::Exponential;
      return result;
    }

  std::size_t chain = graph.cycle_chain(g.initial());
  if (chain == 0) {
    result.kind = ActivityKind::Finitary;
    result.depth = graph.height(g.initial()) + 1;
    return result;
  }
  if (chain >= 2) {
    result.kind = ActivityKind::PolynomialDegree;
    result.degree = chain - 1;
    return result;
  }

  // Paths run through at most one cycle, so alpha_n is periodic with period the lcm of
  // the cycle lengths once n exceeds twice the number of states.
  result.kind = ActivityKind::Bounded;
  std::size_t period = 1;
  for (std::size_t len : cycle_lengths(graph)) period = std::lcm(period, len);
  period = std::min<std::size_t>(period, 1u << 16);
  for (auto a : activity_profile(g, 2 * n + period)) result.sup = std::max(result.sup, a.value);
  for (StateId s : queue)
    if (graph.on_cycle(s)) result.directed_states.push_back(s);
  std::sort(result.directed_states.begin(), result.directed_states.end());
  return result;
}

/// Least n such that every level-n section is directed or finitary, read off the section
/// graph: a level-n section is neither exactly when it reaches a cycle without lying on one.
inline std::size_t structure_level(const TreeAutomorphism& g, std::size_t cap = 64) {
  if (!classify(g).bounded())
    throw HypothesisError("structure level needs a finitary or bounded automorphism");
  SectionGraph graph(g);
  std::set<StateId> frontier{g.initial()};
  for (std::size_t level = 0; level <= cap; ++level) {
    bool ok = std::all_of(frontier.begin(), frontier.end(), [&](StateId s) {
      return graph.finitary(s) || graph.on_cycle(s);
    });
    if (ok) return level;
    std::set<StateId> next;
    for (StateId s : frontier)
      for (auto e : graph.edges(s)) next.insert(e.target);
    frontier = std::move(next);
  }
  throw ResourceError("structure level exceeds the cap");
}

/// Whether every section's root permutation lies in the class, i.e. g in Aut(X*; P).
inline bool in_aut_p(const TreeAutomorphism& g, const PClass& cls) {
  const auto& a = g.automaton();
  for (StateId s = 0; s < a.size(); ++s)
    if (!in_class(a.state(s).output, cls)) return false;
  return true;
}

/// The word read along the cycle through `s`, starting at s. Requires graph.on_cycle(s)
/// and a bounded automorphism (one internal edge per cycle state).
inline Word cycle_word(const SectionGraph& graph, StateId s) {
  Word w;
  StateId t = s;
  do {
    auto internal = graph.internal_edges(t);
    if (internal.size() != 1) throw HypothesisError("state is not on a simple cycle");
    w.push_back(internal.front().letter);
    t = internal.front().target;
  } while (t != s);
  return w;
}

}  // namespace selfsim
