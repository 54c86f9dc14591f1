#pragma once

// Independent reference implementations and random generators for the tests. Nothing
// here calls the algorithm it is meant to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "selfsim/selfsim.hpp"

namespace oracle {

using namespace selfsim;

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline Perm random_perm(Rng& rng, std::int64_t k, double identity_bias = 0.3) {
  if (coin(rng, identity_bias)) return Perm::identity(k);
  std::vector<Letter> img(static_cast<std::size_t>(k));
  for (Letter x = 0; x < k; ++x) img[static_cast<std::size_t>(x)] = x;
  std::shuffle(img.begin(), img.end(), rng);
  Perm::Table t;
  for (Letter x = 0; x < k; ++x) t.emplace_back(x, img[static_cast<std::size_t>(x)]);
  return Perm::from_table(k, 0, t);
}

/// Arbitrary automaton on k letters with m non-identity states; initial state 1.
inline TreeAutomorphism random_automaton(Rng& rng, std::int64_t k, std::size_t m) {
  Automaton a(Alphabet::range(static_cast<std::size_t>(k)));
  for (std::size_t i = 0; i < m; ++i) a.add_state("q" + std::to_string(i), random_perm(rng, k));
  for (StateId s = 1; s <= m; ++s)
    for (Letter x = 0; x < k; ++x) a.set_transition(s, x, static_cast<StateId>(pick(rng, m + 1)));
  return TreeAutomorphism::from(a, 1);
}

/// Bounded automaton on k letters: finitary states form a DAG, each cycle state has one
/// letter continuing its cycle and otherwise falls into finitary states, and entry states
/// route into cycles or finitary states. No path meets two cycles.
inline TreeAutomorphism random_bounded(Rng& rng, std::int64_t k, bool allow_finitary_only = true) {
  Automaton a(Alphabet::range(static_cast<std::size_t>(k)));
  std::vector<StateId> fin{kIdentityState};
  const std::size_t nf = 1 + pick(rng, 3);
  for (std::size_t i = 0; i < nf; ++i) {
    StateId s = a.add_state("f" + std::to_string(i), random_perm(rng, k, 0.1));
    for (Letter x = 0; x < k; ++x) a.set_transition(s, x, fin[pick(rng, fin.size())]);
    fin.push_back(s);
  }
  std::vector<StateId> cyc;
  const std::size_t cycles = 1 + pick(rng, 2);
  for (std::size_t c = 0; c < cycles; ++c) {
    const std::size_t len = 1 + pick(rng, 3);
    std::vector<StateId> ring;
    for (std::size_t i = 0; i < len; ++i)
      ring.push_back(a.add_state("c" + std::to_string(c) + "_" + std::to_string(i), random_perm(rng, k)));
    for (std::size_t i = 0; i < len; ++i) {
      Letter on = static_cast<Letter>(pick(rng, static_cast<std::size_t>(k)));
      for (Letter x = 0; x < k; ++x)
        a.set_transition(ring[i], x, x == on ? ring[(i + 1) % len] : fin[pick(rng, fin.size())]);
    }
    cyc.insert(cyc.end(), ring.begin(), ring.end());
  }
  std::vector<StateId> targets = cyc;
  targets.insert(targets.end(), fin.begin(), fin.end());
  const std::size_t ne = pick(rng, 3);
  for (std::size_t i = 0; i < ne; ++i) {
    StateId s = a.add_state("n" + std::to_string(i), random_perm(rng, k));
    for (Letter x = 0; x < k; ++x) a.set_transition(s, x, targets[pick(rng, targets.size())]);
    targets.push_back(s);
  }
  std::vector<StateId> initials(targets.begin(), targets.end());
  if (!allow_finitary_only) {
    initials.clear();
    for (StateId s : targets)
      if (std::find(fin.begin(), fin.end(), s) == fin.end()) initials.push_back(s);
  }
  return TreeAutomorphism::from(a, initials[pick(rng, initials.size())]);
}

/// Finitary automaton of depth at most `depth` on k letters.
inline TreeAutomorphism random_finitary(Rng& rng, std::int64_t k, std::size_t depth) {
  Automaton a(Alphabet::range(static_cast<std::size_t>(k)));
  std::vector<StateId> below{kIdentityState};
  StateId last = kIdentityState;
  for (std::size_t d = 0; d < depth; ++d) {
    std::vector<StateId> layer;
    for (std::size_t i = 0; i < 2; ++i) {
      StateId s = a.add_state("l" + std::to_string(d) + "_" + std::to_string(i), random_perm(rng, k, 0.2));
      for (Letter x = 0; x < k; ++x) a.set_transition(s, x, below[pick(rng, below.size())]);
      layer.push_back(s);
      last = s;
    }
    below.insert(below.end(), layer.begin(), layer.end());
  }
  return TreeAutomorphism::from(a, last);
}

// ---- words ----

inline std::vector<Word> all_words(std::int64_t k, std::size_t n) {
  std::vector<Word> out{Word{}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Word> next;
    for (const auto& w : out)
      for (Letter x = 0; x < k; ++x) {
        Word v = w;
        v.push_back(x);
        next.push_back(std::move(v));
      }
    out = std::move(next);
  }
  return out;
}

inline std::vector<Word> words_up_to(std::int64_t k, std::size_t n) {
  std::vector<Word> out;
  for (std::size_t i = 0; i <= n; ++i) {
    auto layer = all_words(k, i);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

// ---- automaton walking straight off the state table ----

inline Word run(const Automaton& a, StateId s, const Word& w) {
  Word out;
  for (Letter x : w) {
    out.push_back(a.state(s).output(x));
    s = a.next(s, x);
  }
  return out;
}

inline StateId walk(const Automaton& a, StateId s, const Word& v) {
  for (Letter x : v) s = a.next(s, x);
  return s;
}

/// Letters that can matter for a state table: every exception letter, plus one letter no
/// exception mentions to stand for the fallback class on Z.
inline std::vector<Letter> relevant_letters(const Automaton& a) {
  if (a.alphabet().is_finite()) {
    std::vector<Letter> out;
    for (Letter x = 0; x < a.alphabet().size(); ++x) out.push_back(x);
    return out;
  }
  std::set<Letter> seen;
  for (StateId s = 0; s < a.size(); ++s)
    for (auto [x, t] : a.state(s).exceptions) seen.insert(x);
  std::vector<Letter> out(seen.begin(), seen.end());
  out.push_back(seen.empty() ? 0 : *seen.rbegin() + 1);
  return out;
}

/// Whether the state acts nontrivially: some reachable state has a non-identity output.
inline bool acts_nontrivially(const Automaton& a, StateId s) {
  std::set<StateId> seen{s};
  std::vector<StateId> todo{s};
  while (!todo.empty()) {
    StateId t = todo.back();
    todo.pop_back();
    if (!a.state(t).output.is_identity()) return true;
    for (auto [x, u] : a.state(t).exceptions)
      if (seen.insert(u).second) todo.push_back(u);
    if (seen.insert(a.state(t).fallback).second) todo.push_back(a.state(t).fallback);
  }
  return false;
}

/// alpha_n by enumerating words of length n; nullopt when the count is infinite (a
/// nontrivial section reached through the Z fallback).
inline std::optional<std::uint64_t> brute_activity(const TreeAutomorphism& g, std::size_t n) {
  const auto& a = g.automaton();
  auto letters = relevant_letters(a);
  const Letter sentinel = letters.back();
  std::vector<StateId> layer{g.initial()};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<StateId> next;
    for (StateId s : layer) {
      if (!acts_nontrivially(a, s)) continue;
      for (Letter x : letters) {
        StateId t = a.next(s, x);
        if (a.alphabet().is_integers() && x == sentinel && acts_nontrivially(a, t)) return std::nullopt;
        next.push_back(t);
      }
    }
    layer = std::move(next);
  }
  std::uint64_t count = 0;
  for (StateId s : layer) count += acts_nontrivially(a, s) ? 1 : 0;
  return count;
}

/// Heads of length `head` of the words of length `deep` with nontrivial section: the
/// prefix-tree pruning view of the singular set. Finite alphabets only.
inline std::set<Word> surviving_heads(const TreeAutomorphism& g, std::size_t head, std::size_t deep) {
  const auto& a = g.automaton();
  std::vector<std::pair<Word, StateId>> layer{{{}, g.initial()}};
  for (std::size_t i = 0; i < deep; ++i) {
    std::vector<std::pair<Word, StateId>> next;
    for (const auto& [w, s] : layer) {
      if (!acts_nontrivially(a, s)) continue;
      for (Letter x = 0; x < a.alphabet().size(); ++x) {
        Word v = w;
        v.push_back(x);
        next.emplace_back(std::move(v), a.next(s, x));
      }
    }
    layer = std::move(next);
  }
  std::set<Word> out;
  for (const auto& [w, s] : layer)
    if (acts_nontrivially(a, s)) out.insert(Word(w.begin(), w.begin() + static_cast<long>(head)));
  return out;
}

/// Finitary by exhaustion: every section at depth `depth` acts trivially.
inline bool brute_finitary(const TreeAutomorphism& g, std::size_t depth) {
  const auto& a = g.automaton();
  for (const auto& v : all_words(a.alphabet().size(), depth))
    if (acts_nontrivially(a, walk(a, g.initial(), v))) return false;
  return true;
}

/// Directed by exhaustion: some word v of length <= max_len has g|_v = g and every other
/// section at that level finitary within `depth`.
inline bool brute_directed(const TreeAutomorphism& g, std::size_t max_len, std::size_t depth) {
  const std::int64_t k = g.alphabet().size();
  for (std::size_t len = 1; len <= max_len; ++len) {
    bool found = false, others_finitary = true;
    for (const auto& v : all_words(k, len)) {
      auto s = section(g, v);
      if (s == g && !found) {
        found = true;
        continue;
      }
      if (!brute_finitary(s, depth)) {
        others_finitary = false;
        break;
      }
    }
    if (found && others_finitary) return true;
  }
  return false;
}

/// Least n at which every level-n section is finitary or directed, by enumeration.
inline std::size_t brute_structure_level(const TreeAutomorphism& g, std::size_t cap, std::size_t depth) {
  const std::int64_t k = g.alphabet().size();
  for (std::size_t n = 0; n <= cap; ++n) {
    bool ok = true;
    for (const auto& v : all_words(k, n)) {
      auto s = section(g, v);
      if (!brute_finitary(s, depth) && !brute_directed(s, depth, depth)) {
        ok = false;
        break;
      }
    }
    if (ok) return n;
  }
  return cap + 1;
}

// ---- networks ----

/// Dense Gaussian elimination with partial pivoting.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> A, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(A[r][c]) > std::abs(A[p][c])) p = r;
    std::swap(A[c], A[p]);
    std::swap(b[c], b[p]);
    for (std::size_t r = c + 1; r < n; ++r) {
      double f = A[r][c] / A[c][c];
      if (f == 0.0) continue;
      for (std::size_t j = c; j < n; ++j) A[r][j] -= f * A[c][j];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= A[i][j] * x[j];
    x[i] = s / A[i][i];
  }
  return x;
}

/// Dense weighted Laplacian.
inline std::vector<std::vector<double>> laplacian(std::size_t n, const std::vector<NetEdge>& edges) {
  std::vector<std::vector<double>> L(n, std::vector<double>(n, 0.0));
  for (const auto& e : edges) {
    if (e.u == e.v) continue;
    double c = 1.0 / e.resistance;
    L[e.u][e.u] += c;
    L[e.v][e.v] += c;
    L[e.u][e.v] -= c;
    L[e.v][e.u] -= c;
  }
  return L;
}

/// R_eff between `source` and the set `sinks` by grounding the sinks and injecting unit
/// current at the source: R = potential at the source.
inline double dense_resistance(std::size_t n, const std::vector<NetEdge>& edges, Vertex source,
                               const std::vector<Vertex>& sinks) {
  auto L = laplacian(n, edges);
  std::vector<char> grounded(n, 0);
  for (Vertex s : sinks) grounded[s] = 1;
  std::vector<std::size_t> idx(n, n);
  std::vector<Vertex> free;
  for (Vertex v = 0; v < n; ++v)
    if (!grounded[v]) {
      idx[v] = free.size();
      free.push_back(v);
    }
  std::vector<std::vector<double>> A(free.size(), std::vector<double>(free.size(), 0.0));
  std::vector<double> b(free.size(), 0.0);
  for (std::size_t i = 0; i < free.size(); ++i)
    for (std::size_t j = 0; j < free.size(); ++j) A[i][j] = L[free[i]][free[j]];
  b[idx[source]] = 1.0;
  return solve_dense(std::move(A), std::move(b))[idx[source]];
}

/// Connected random network: a random spanning tree plus extra edges, resistances in
/// [0.5, 2], and a random boundary not containing vertex 0.
inline Network random_network(Rng& rng, std::size_t n, std::size_t extra) {
  std::uniform_real_distribution<double> r(0.5, 2.0);
  std::vector<NetEdge> edges;
  for (Vertex v = 1; v < n; ++v) edges.push_back({pick(rng, v), v, r(rng)});
  for (std::size_t i = 0; i < extra; ++i) edges.push_back({pick(rng, n), pick(rng, n), r(rng)});
  std::vector<Vertex> boundary;
  for (Vertex v = 1; v < n; ++v)
    if (coin(rng, 0.2)) boundary.push_back(v);
  if (boundary.empty()) boundary.push_back(n - 1);
  return Network(n, std::move(edges), std::move(boundary));
}

// ---- random walks ----

/// Return statistics by an adjacency-list walk with uniform neighbour choice on a
/// unit-resistance network. Own seeding: one engine per run, trials in sequence.
struct WalkOracle {
  double fraction = 0.0;
  double sigma = 0.0;
};

inline WalkOracle simple_walk(const Network& net, Vertex start, std::size_t steps, std::size_t trials,
                              std::uint64_t seed) {
  std::vector<std::vector<Vertex>> nbr(net.size());
  for (const auto& e : net.edges()) {
    nbr[e.u].push_back(e.v);
    if (e.u != e.v) nbr[e.v].push_back(e.u);
  }
  Rng rng(seed);
  std::size_t returns = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Vertex x = start;
    for (std::size_t s = 0; s < steps; ++s) {
      x = nbr[x][pick(rng, nbr[x].size())];
      if (x == start) {
        ++returns;
        break;
      }
    }
  }
  WalkOracle o;
  o.fraction = static_cast<double>(returns) / static_cast<double>(trials);
  o.sigma = std::sqrt(o.fraction * (1.0 - o.fraction) / static_cast<double>(trials));
  return o;
}

// ---- corpus ----

inline ParsedDocument corpus_document(const std::string& name) {
  return parse_document(corpus::find(name).text);
}

/// Every automorphism in the corpus: automaton files and group generators.
inline std::vector<std::pair<std::string, TreeAutomorphism>> corpus_elements() {
  std::vector<std::pair<std::string, TreeAutomorphism>> out;
  for (const auto& e : corpus::entries()) {
    if (e.text.empty()) continue;
    auto doc = parse_document(e.text);
    if (doc.initial) out.emplace_back(e.name, *doc.initial);
    for (std::size_t i = 0; i < doc.generators.size(); ++i)
      out.emplace_back(std::string(e.name) + "/" + doc.generator_names[i], doc.generators[i]);
  }
  return out;
}

}  // namespace oracle
