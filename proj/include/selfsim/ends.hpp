#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "selfsim/activity.hpp"
#include "selfsim/automaton.hpp"
#include "selfsim/network.hpp"
#include "selfsim/schreier.hpp"

namespace selfsim {

/// The eventually periodic end u v v v ... Kept canonical: v is primitive and u is as
/// short as possible, so equality of ends is equality of members.
class EndPoint {
 public:
  EndPoint(Word prefix, Word period) : prefix_(std::move(prefix)), period_(std::move(period)) {
    if (period_.empty()) throw Error("end point needs a nonempty period");
    canonicalize();
  }

  static EndPoint constant(Letter x) { return EndPoint({}, {x}); }

  const Word& prefix() const noexcept { return prefix_; }
  const Word& period() const noexcept { return period_; }

  Letter at(std::size_t i) const {
    return i < prefix_.size() ? prefix_[i] : period_[(i - prefix_.size()) % period_.size()];
  }

  Word head(std::size_t n) const {
    Word w;
    for (std::size_t i = 0; i < n; ++i) w.push_back(at(i));
    return w;
  }

  /// The end with its first n letters removed.
  EndPoint drop(std::size_t n) const {
    if (n <= prefix_.size()) return EndPoint(Word(prefix_.begin() + static_cast<long>(n), prefix_.end()), period_);
    std::size_t r = (n - prefix_.size()) % period_.size();
    Word p(period_.begin() + static_cast<long>(r), period_.end());
    p.insert(p.end(), period_.begin(), period_.begin() + static_cast<long>(r));
    return EndPoint({}, std::move(p));
  }

  /// Whether the end is eventually a repetition of one block of length `block`.
  bool eventually_constant_in_blocks(std::size_t block) const { return block % period_.size() == 0; }

  /// `u.(v)`, or `(v)` when the prefix is empty.
  std::string to_string(const Alphabet& a) const {
    std::string s;
    if (!prefix_.empty()) s = a.format_word(prefix_) + ".";
    return s + "(" + a.format_word(period_) + ")";
  }

  static EndPoint parse(std::string_view text, const Alphabet& a) {
    auto open = text.find('(');
    auto close = text.rfind(')');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open || close + 1 != text.size())
      throw Error("end point must look like u.(v) or (v): '" + std::string(text) + "'");
    std::string_view head = text.substr(0, open);
    if (!head.empty()) {
      if (head.back() != '.') throw Error("missing '.' before the period in '" + std::string(text) + "'");
      head.remove_suffix(1);
    }
    Word u = a.parse_word(head);
    Word v = a.parse_word(text.substr(open + 1, close - open - 1));
    a.check(u);
    a.check(v);
    return EndPoint(std::move(u), std::move(v));
  }

  friend auto operator<=>(const EndPoint&, const EndPoint&) = default;
  friend bool operator==(const EndPoint&, const EndPoint&) = default;

 private:
  void canonicalize() {
    const std::size_t n = period_.size();
    for (std::size_t d = 1; d < n; ++d) {
      if (n % d) continue;
      bool repeats = true;
      for (std::size_t i = d; i < n && repeats; ++i) repeats = period_[i] == period_[i - d];
      if (repeats) {
        period_.resize(d);
        break;
      }
    }
    while (!prefix_.empty() && prefix_.back() == period_.back()) {
      prefix_.pop_back();
      std::rotate(period_.rbegin(), period_.rbegin() + 1, period_.rend());
    }
  }

  Word prefix_;
  Word period_;
};

namespace detail {

/// States of g along w: the state after the prefix and then at each period boundary
/// until the boundary state repeats.
struct EndTrace {
  Word output_prefix;
  /// output blocks produced by successive passes through the period
  std::vector<Word> blocks;
  /// index of the first block of the repeating part
  std::size_t loop_start = 0;
  bool meets_identity = false;
};

inline EndTrace trace_end(const TreeAutomorphism& g, const EndPoint& w) {
  const auto& a = g.automaton();
  a.alphabet().check(w.prefix());
  a.alphabet().check(w.period());
  EndTrace t;
  StateId s = g.initial();
  t.meets_identity = s == kIdentityState;
  for (Letter x : w.prefix()) {
    t.output_prefix.push_back(a.state(s).output(x));
    s = a.next(s, x);
    t.meets_identity |= s == kIdentityState;
  }
  std::map<StateId, std::size_t> seen;
  while (!seen.count(s)) {
    seen[s] = t.blocks.size();
    Word block;
    for (Letter x : w.period()) {
      block.push_back(a.state(s).output(x));
      s = a.next(s, x);
      t.meets_identity |= s == kIdentityState;
    }
    t.blocks.push_back(std::move(block));
  }
  t.loop_start = seen[s];
  return t;
}

}  // namespace detail

/// Image of an eventually periodic end.
inline EndPoint evaluate_end(const TreeAutomorphism& g, const EndPoint& w) {
  auto t = detail::trace_end(g, w);
  Word prefix = t.output_prefix;
  for (std::size_t i = 0; i < t.loop_start; ++i) prefix.insert(prefix.end(), t.blocks[i].begin(), t.blocks[i].end());
  Word period;
  for (std::size_t i = t.loop_start; i < t.blocks.size(); ++i)
    period.insert(period.end(), t.blocks[i].begin(), t.blocks[i].end());
  std::size_t bound = w.prefix().size() + g.state_count() * w.period().size();
  if (prefix.size() + period.size() > bound)
    throw Error("end image exceeds its size bound");
  return EndPoint(std::move(prefix), std::move(period));
}

/// Whether the section of g along some prefix of w is trivial, i.e. the germ of g at w
/// is a germ of a tail equivalence.
inline bool germ_in_tail_groupoid(const TreeAutomorphism& g, const EndPoint& w) {
  return detail::trace_end(g, w).meets_identity;
}

/// Ends along which every section of g is nontrivial. They follow the cycles of the
/// section graph, so for bounded g each entry path into a cycle gives one periodic end.
inline std::vector<EndPoint> singular_points(const TreeAutomorphism& g) {
  auto cls = classify(g);
  if (!cls.bounded())
    throw HypothesisError("singular points need bounded activity; got " + cls.to_string());
  std::set<EndPoint> out;
  if (cls.kind == ActivityKind::Finitary) return {};
  SectionGraph graph(g);
  // DFS over entry paths: off-cycle states only, stop at the first cycle state
  std::vector<std::pair<StateId, Word>> stack{{g.initial(), {}}};
  while (!stack.empty()) {
    auto [s, path] = std::move(stack.back());
    stack.pop_back();
    if (!graph.reaches_cycle(s)) continue;
    if (graph.on_cycle(s)) {
      out.insert(EndPoint(path, cycle_word(graph, s)));
      continue;
    }
    for (auto e : graph.edges(s)) {
      Word next = path;
      next.push_back(e.letter);
      stack.emplace_back(e.target, std::move(next));
    }
  }
  if (out.size() > cls.sup) throw Error("more singular points than the activity bound");
  return {out.begin(), out.end()};
}

/// Least n such that w and w' agree after their first n letters, if any.
inline std::optional<std::size_t> cofinal_level(const EndPoint& w, const EndPoint& v) {
  const std::size_t start = std::max(w.prefix().size(), v.prefix().size());
  const std::size_t window = std::lcm(w.period().size(), v.period().size());
  for (std::size_t i = start; i < start + window; ++i)
    if (w.at(i) != v.at(i)) return std::nullopt;
  std::size_t n = start;
  while (n > 0 && w.at(n - 1) == v.at(n - 1)) --n;
  return n;
}

/// BFS ball of the orbital Schreier graph around w under the symmetrized generators.
inline SchreierBall<EndPoint> orbital_ball(const std::vector<TreeAutomorphism>& gens, const EndPoint& w,
                                           std::size_t radius) {
  if (gens.empty()) throw Error("no generators");
  const Alphabet alphabet = gens.front().alphabet();
  auto sym = symmetrize(gens);
  return schreier_ball<EndPoint>(
      w, sym.size(), [&](const EndPoint& p, std::size_t i) { return evaluate_end(sym[i], p); }, radius,
      [&](const EndPoint& p) { return p.to_string(alphabet); });
}

struct CofinalityDecomposition {
  std::size_t level = 0;
  /// Vertices grouped by their end with the first `level` letters removed.
  std::vector<std::vector<Vertex>> classes;
  std::vector<std::size_t> class_of;
  /// Arrows x -> s(x) whose ends lie in different classes.
  std::vector<std::pair<Vertex, Vertex>> crossing;
  /// Crossing arrows leaving each class.
  std::vector<std::size_t> outgoing;
  std::size_t bound = 0;
  bool within_bound = true;
};

/// Partitions an orbital ball into level-n tail classes. Each generator s moves at most
/// alpha_n(s) <= K points of a class out of it, so every class has at most K |S| outgoing
/// crossing arrows, where K bounds the activity of the generators.
inline CofinalityDecomposition cofinality_decomposition(const SchreierBall<EndPoint>& ball, std::size_t n,
                                                        std::size_t K, std::size_t generator_count) {
  CofinalityDecomposition d;
  d.level = n;
  std::map<EndPoint, std::size_t> index;
  d.class_of.resize(ball.points.size());
  for (Vertex v = 0; v < ball.points.size(); ++v) {
    auto [it, fresh] = index.emplace(ball.points[v].drop(n), d.classes.size());
    if (fresh) d.classes.emplace_back();
    d.classes[it->second].push_back(v);
    d.class_of[v] = it->second;
  }
  d.outgoing.assign(d.classes.size(), 0);
  for (const auto& [x, y, s] : ball.arrows) {
    if (d.class_of[x] == d.class_of[y]) continue;
    d.crossing.emplace_back(x, y);
    ++d.outgoing[d.class_of[x]];
  }
  d.bound = K * generator_count;
  for (auto c : d.outgoing) d.within_bound &= c <= d.bound;
  return d;
}

}  // namespace selfsim
