#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "selfsim/alphabet.hpp"
#include "selfsim/error.hpp"
#include "selfsim/perm.hpp"

namespace selfsim {

using StateId = std::uint32_t;

/// Every automaton reserves state 0 for the identity `e`.
inline constexpr StateId kIdentityState = 0;

struct State {
  std::string name;
  Perm output;
  /// Sorted by letter; each letter at most once.
  std::vector<std::pair<Letter, StateId>> exceptions;
  /// Target for every letter not listed in `exceptions`.
  StateId fallback = kIdentityState;
};

/// Mealy automaton over an alphabet, realising g_s(xw) = output(s)(x) g_{next(s,x)}(w).
class Automaton {
 public:
  explicit Automaton(Alphabet alphabet) : alphabet_(std::move(alphabet)) {
    states_.push_back(State{"e", Perm::identity(alphabet_), {}, kIdentityState});
  }

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return states_.size(); }
  const State& state(StateId s) const { return states_.at(s); }

  StateId add_state(std::string name, Perm output) {
    if (output.domain() != alphabet_.size())
      throw AlphabetError("state output acts on a different alphabet");
    states_.push_back(State{std::move(name), std::move(output), {}, kIdentityState});
    return static_cast<StateId>(states_.size() - 1);
  }

  void set_transition(StateId s, Letter x, StateId target) {
    alphabet_.check(x);
    check_target(s, target);
    auto& ex = states_[s].exceptions;
    auto it = std::lower_bound(ex.begin(), ex.end(), x,
                               [](const auto& e, Letter l) { return e.first < l; });
    if (it != ex.end() && it->first == x)
      throw Error("duplicate transition on letter " + alphabet_.format_letter(x));
    ex.insert(it, {x, target});
  }

  void set_fallback(StateId s, StateId target) {
    check_target(s, target);
    states_[s].fallback = target;
  }

  StateId next(StateId s, Letter x) const {
    const auto& ex = states_[s].exceptions;
    auto it = std::lower_bound(ex.begin(), ex.end(), x,
                               [](const auto& e, Letter l) { return e.first < l; });
    return (it != ex.end() && it->first == x) ? it->second : states_[s].fallback;
  }

  /// Whether some letter is routed through the fallback.
  bool fallback_used(StateId s) const {
    return alphabet_.is_integers() ||
           static_cast<std::int64_t>(states_[s].exceptions.size()) < alphabet_.size();
  }

  /// Targets of all letters, fallback included when some letter uses it.
  std::vector<StateId> successors(StateId s) const {
    std::vector<StateId> out;
    for (auto [x, t] : states_[s].exceptions) out.push_back(t);
    if (fallback_used(s)) out.push_back(states_[s].fallback);
    return out;
  }

 private:
  void check_target(StateId s, StateId target) const {
    if (s == kIdentityState) throw Error("the identity state has fixed transitions");
    if (s >= states_.size() || target >= states_.size()) throw Error("undeclared state");
  }

  Alphabet alphabet_;
  std::vector<State> states_;
};

/// Coinductive identity test: the greatest set of reachable states with identity
/// output whose transitions stay inside the set.
inline bool is_identity_state(const Automaton& a, StateId s) {
  std::vector<char> reach(a.size(), 0);
  std::vector<StateId> order{s};
  reach[s] = 1;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (StateId t : a.successors(order[i]))
      if (!reach[t]) {
        reach[t] = 1;
        order.push_back(t);
      }
  std::vector<char> candidate(a.size(), 0);
  for (StateId t : order) candidate[t] = a.state(t).output.is_identity();
  for (bool changed = true; changed;) {
    changed = false;
    for (StateId t : order) {
      if (!candidate[t]) continue;
      for (StateId u : a.successors(t))
        if (!candidate[u]) {
          candidate[t] = 0;
          changed = true;
          break;
        }
    }
  }
  return candidate[s];
}

/// A finite-state tree automorphism in canonical form: minimal, restricted to the states
/// reachable from the initial one, numbered breadth-first (exceptions in letter order,
/// then the fallback), with `e` at 0. On finite alphabets the fallback is always `e` and
/// exceptions list exactly the letters leading elsewhere; on Z exceptions list exactly
/// the letters whose target differs from the fallback.
class TreeAutomorphism {
 public:
  static TreeAutomorphism identity(const Alphabet& alphabet) {
    return TreeAutomorphism(std::make_shared<const Automaton>(alphabet), kIdentityState);
  }

  /// Minimizes and canonicalizes the automorphism given by `initial` in `a`.
  static TreeAutomorphism from(const Automaton& a, StateId initial);

  const Automaton& automaton() const noexcept { return *automaton_; }
  const Alphabet& alphabet() const noexcept { return automaton_->alphabet(); }
  StateId initial() const noexcept { return initial_; }
  bool is_identity() const noexcept { return initial_ == kIdentityState; }
  const std::string& name() const { return automaton_->state(initial_).name; }
  /// Number of distinct sections, the identity included.
  std::size_t state_count() const noexcept { return automaton_->size(); }
  const Perm& root_permutation() const { return automaton_->state(initial_).output; }

  /// Structural comparison of canonical forms; state names are ignored.
  friend bool operator==(const TreeAutomorphism& a, const TreeAutomorphism& b) {
    return compare(a, b) == 0;
  }
  friend bool operator<(const TreeAutomorphism& a, const TreeAutomorphism& b) {
    return compare(a, b) < 0;
  }

 private:
  TreeAutomorphism(std::shared_ptr<const Automaton> a, StateId initial)
      : automaton_(std::move(a)), initial_(initial) {}

  static int compare(const TreeAutomorphism& a, const TreeAutomorphism& b) {
    const auto& x = *a.automaton_;
    const auto& y = *b.automaton_;
    if (x.alphabet().size() != y.alphabet().size())
      return x.alphabet().size() < y.alphabet().size() ? -1 : 1;
    if (x.alphabet().is_finite() && x.alphabet().symbols() != y.alphabet().symbols())
      return x.alphabet().symbols() < y.alphabet().symbols() ? -1 : 1;
    if (a.initial_ != b.initial_) return a.initial_ < b.initial_ ? -1 : 1;
    if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
    for (StateId s = 0; s < x.size(); ++s) {
      const auto& p = x.state(s);
      const auto& q = y.state(s);
      if (p.output != q.output) return p.output < q.output ? -1 : 1;
      if (p.fallback != q.fallback) return p.fallback < q.fallback ? -1 : 1;
      if (p.exceptions != q.exceptions) return p.exceptions < q.exceptions ? -1 : 1;
    }
    return 0;
  }

  std::shared_ptr<const Automaton> automaton_;
  StateId initial_ = kIdentityState;
};

namespace detail {

// Full list of (letter, target) for finite alphabets; exceptions plus fallback on Z.
struct Row {
  std::vector<std::pair<Letter, StateId>> listed;
  StateId fallback = kIdentityState;
};

inline Row expanded_row(const Automaton& a, StateId s) {
  Row r;
  if (a.alphabet().is_finite()) {
    for (Letter x = 0; x < a.alphabet().size(); ++x) r.listed.emplace_back(x, a.next(s, x));
    r.fallback = kIdentityState;
  } else {
    r.listed = a.state(s).exceptions;
    r.fallback = a.state(s).fallback;
  }
  return r;
}

}  // namespace detail

inline TreeAutomorphism TreeAutomorphism::from(const Automaton& a, StateId initial) {
  if (initial >= a.size()) throw Error("undeclared initial state");
  const bool finite = a.alphabet().is_finite();

  // reachable states, with e always present
  std::vector<StateId> reach{kIdentityState};
  std::vector<char> seen(a.size(), 0);
  seen[kIdentityState] = 1;
  if (!seen[initial]) {
    seen[initial] = 1;
    reach.push_back(initial);
  }
  for (std::size_t i = 0; i < reach.size(); ++i)
    for (StateId t : a.successors(reach[i]))
      if (!seen[t]) {
        seen[t] = 1;
        reach.push_back(t);
      }

  std::vector<detail::Row> rows;
  rows.reserve(reach.size());
  std::vector<std::int64_t> local(a.size(), -1);
  for (std::size_t i = 0; i < reach.size(); ++i) local[reach[i]] = static_cast<std::int64_t>(i);
  for (StateId s : reach) {
    auto r = detail::expanded_row(a, s);
    for (auto& [x, t] : r.listed) t = static_cast<StateId>(local[t]);
    r.fallback = static_cast<StateId>(local[r.fallback]);
    rows.push_back(std::move(r));
  }
  // the identity state transitions to itself everywhere
  rows[0].listed.clear();
  if (finite)
    for (Letter x = 0; x < a.alphabet().size(); ++x) rows[0].listed.emplace_back(x, 0);
  rows[0].fallback = 0;

  // Moore refinement, starting from the partition by output
  const std::size_t n = reach.size();
  std::vector<std::size_t> cls(n);
  {
    std::map<Perm, std::size_t> by_output;
    for (std::size_t i = 0; i < n; ++i)
      cls[i] = by_output.emplace(a.state(reach[i]).output, by_output.size()).first->second;
  }
  std::size_t classes = 0;
  for (std::size_t i = 0; i < n; ++i) classes = std::max(classes, cls[i] + 1);
  for (;;) {
    using Signature = std::pair<std::vector<std::int64_t>, std::vector<std::pair<Letter, std::size_t>>>;
    std::map<Signature, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      Signature sig;
      sig.first.push_back(static_cast<std::int64_t>(cls[i]));
      std::size_t fb = cls[rows[i].fallback];
      if (!finite) sig.first.push_back(static_cast<std::int64_t>(fb));
      for (auto [x, t] : rows[i].listed)
        if (finite || cls[t] != fb) sig.second.emplace_back(x, cls[t]);
      next[i] = ids.emplace(std::move(sig), ids.size()).first->second;
    }
    cls = std::move(next);
    if (ids.size() == classes) break;
    classes = ids.size();
  }

  // quotient, renumbered breadth-first from the initial class
  const std::size_t e_class = cls[0];
  const std::size_t init_class = cls[static_cast<std::size_t>(local[initial])];
  std::vector<std::size_t> rep(classes, n);
  for (std::size_t i = 0; i < n; ++i)
    if (rep[cls[i]] == n) rep[cls[i]] = i;
  // prefer the initial state's own name for its class
  rep[init_class] = static_cast<std::size_t>(local[initial]);
  rep[e_class] = 0;

  auto out = std::make_shared<Automaton>(a.alphabet());
  if (init_class == e_class) return TreeAutomorphism(std::move(out), kIdentityState);

  std::vector<std::int64_t> number(classes, -1);
  number[e_class] = kIdentityState;
  std::deque<std::size_t> queue{init_class};
  std::vector<std::size_t> order;
  number[init_class] = 1;
  std::int64_t next_number = 2;
  while (!queue.empty()) {
    std::size_t c = queue.front();
    queue.pop_front();
    order.push_back(c);
    const auto& row = rows[rep[c]];
    std::size_t fb = finite ? e_class : cls[row.fallback];
    auto visit = [&](std::size_t d) {
      if (number[d] < 0) {
        number[d] = next_number++;
        queue.push_back(d);
      }
    };
    for (auto [x, t] : row.listed)
      if (cls[t] != fb) visit(cls[t]);
    visit(fb);
  }
  for (std::size_t c : order) out->add_state(a.state(reach[rep[c]]).name, a.state(reach[rep[c]]).output);
  for (std::size_t c : order) {
    auto s = static_cast<StateId>(number[c]);
    const auto& row = rows[rep[c]];
    std::size_t fb = finite ? e_class : cls[row.fallback];
    out->set_fallback(s, static_cast<StateId>(number[fb]));
    for (auto [x, t] : row.listed)
      if (cls[t] != fb) out->set_transition(s, x, static_cast<StateId>(number[cls[t]]));
  }
  return TreeAutomorphism(std::move(out), 1);
}

inline TreeAutomorphism minimize(const TreeAutomorphism& g) {
  return TreeAutomorphism::from(g.automaton(), g.initial());
}

inline bool is_identity(const TreeAutomorphism& g) {
  return is_identity_state(g.automaton(), g.initial());
}

/// Image of a finite word: g(xw) = output(x) g|_x(w).
inline Word evaluate(const TreeAutomorphism& g, const Word& v) {
  const auto& a = g.automaton();
  a.alphabet().check(v);
  Word out;
  out.reserve(v.size());
  StateId s = g.initial();
  for (Letter x : v) {
    out.push_back(a.state(s).output(x));
    s = a.next(s, x);
  }
  return out;
}

/// Level-n action; `v` must have length n.
inline Word rho_n_apply(const TreeAutomorphism& g, const Word& v, std::size_t n) {
  if (v.size() != n) throw Error("word length differs from the level");
  return evaluate(g, v);
}

inline StateId state_after(const TreeAutomorphism& g, const Word& v) {
  g.alphabet().check(v);
  StateId s = g.initial();
  for (Letter x : v) s = g.automaton().next(s, x);
  return s;
}

/// The section g|_v, determined by g(vw) = g(v) g|_v(w).
inline TreeAutomorphism section(const TreeAutomorphism& g, const Word& v) {
  return TreeAutomorphism::from(g.automaton(), state_after(g, v));
}

/// The automorphism of state `s` of g's automaton.
inline TreeAutomorphism state_automorphism(const TreeAutomorphism& g, StateId s) {
  return TreeAutomorphism::from(g.automaton(), s);
}

inline constexpr std::size_t kDefaultProductCap = 1'000'000;

/// (g h)(w) = g(h(w)). The product state (s, t) outputs output(s) o output(t) and moves
/// on x to (next(s, output(t)(x)), next(t, x)).
inline TreeAutomorphism compose(const TreeAutomorphism& g, const TreeAutomorphism& h,
                                std::size_t cap = kDefaultProductCap) {
  if (!(g.alphabet() == h.alphabet())) throw AlphabetError("composing over different alphabets");
  if (h.is_identity()) return g;
  if (g.is_identity()) return h;
  const auto& A = g.automaton();
  const auto& B = h.automaton();
  const bool finite = A.alphabet().is_finite();

  Automaton prod(A.alphabet());
  std::map<std::pair<StateId, StateId>, StateId> ids;
  ids[{kIdentityState, kIdentityState}] = kIdentityState;
  std::vector<std::pair<StateId, StateId>> pending;
  auto id_of = [&](StateId s, StateId t) {
    auto [it, fresh] = ids.emplace(std::make_pair(s, t), 0);
    if (fresh) {
      if (ids.size() > cap) throw ResourceError("product automaton exceeds the state cap");
      std::string name = t == kIdentityState   ? A.state(s).name
                         : s == kIdentityState ? B.state(t).name
                                               : A.state(s).name + "*" + B.state(t).name;
      it->second = prod.add_state(std::move(name), compose(A.state(s).output, B.state(t).output));
      pending.emplace_back(s, t);
    }
    return it->second;
  };
  StateId start = id_of(g.initial(), h.initial());
  while (!pending.empty()) {
    auto [s, t] = pending.back();
    pending.pop_back();
    StateId me = ids.at({s, t});
    const Perm& ht = B.state(t).output;
    if (finite) {
      for (Letter x = 0; x < A.alphabet().size(); ++x) {
        StateId tt = B.next(t, x);
        StateId ss = A.next(s, ht(x));
        if (ss != kIdentityState || tt != kIdentityState) prod.set_transition(me, x, id_of(ss, tt));
      }
      continue;
    }
    std::vector<Letter> letters;
    for (auto [x, _] : B.state(t).exceptions) letters.push_back(x);
    Perm ht_inv = inverse(ht);
    for (auto [y, _] : A.state(s).exceptions) letters.push_back(ht_inv(y));
    std::sort(letters.begin(), letters.end());
    letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
    std::pair<StateId, StateId> fb{A.state(s).fallback, B.state(t).fallback};
    StateId fb_id = id_of(fb.first, fb.second);
    prod.set_fallback(me, fb_id);
    for (Letter x : letters) {
      std::pair<StateId, StateId> target{A.next(s, ht(x)), B.next(t, x)};
      if (target != fb) prod.set_transition(me, x, id_of(target.first, target.second));
    }
  }
  return TreeAutomorphism::from(prod, start);
}

/// State s^-1 outputs output(s)^-1 and reads y = output(s)(x) into (next(s, x))^-1.
inline TreeAutomorphism inverse(const TreeAutomorphism& g) {
  if (g.is_identity()) return g;
  const auto& A = g.automaton();
  Automaton inv(A.alphabet());
  for (StateId s = 1; s < A.size(); ++s)
    inv.add_state(A.state(s).name + "^-1", inverse(A.state(s).output));
  for (StateId s = 1; s < A.size(); ++s) {
    const auto& st = A.state(s);
    for (auto [x, t] : st.exceptions) inv.set_transition(s, st.output(x), t);
    inv.set_fallback(s, st.fallback);
  }
  return TreeAutomorphism::from(inv, g.initial());
}

}  // namespace selfsim
