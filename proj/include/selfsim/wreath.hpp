#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "selfsim/activity.hpp"
#include "selfsim/automaton.hpp"
#include "selfsim/perm.hpp"
#include "selfsim/schreier.hpp"

namespace selfsim {

inline bool is_trivial(const Perm& p) { return p.is_identity(); }
inline bool is_trivial(const TreeAutomorphism& g) { return g.is_identity(); }

/// An element (f, a) of the restricted wreath product B wr A over the alphabet L, where
/// a is the top permutation and f is finitely supported in B. It acts on pairs by
/// (f, a)(l, m) = (a(l), f(l)(m)), so (f1, a1)(f2, a2) = (l -> f1(a2 l) f2(l), a1 a2).
template <class B>
struct WreathElement {
  Perm top;
  /// Sorted by letter; identity values are never stored.
  std::vector<std::pair<Letter, B>> fiber;

  const B* at(Letter l) const {
    auto it = std::lower_bound(fiber.begin(), fiber.end(), l,
                               [](const auto& e, Letter x) { return e.first < x; });
    return (it != fiber.end() && it->first == l) ? &it->second : nullptr;
  }

  friend bool operator==(const WreathElement& a, const WreathElement& b) {
    return a.top == b.top && a.fiber == b.fiber;
  }
};

template <class B>
bool is_trivial(const WreathElement<B>& w) {
  return w.top.is_identity() && w.fiber.empty();
}

template <class B>
WreathElement<B> make_wreath(Perm top, std::vector<std::pair<Letter, B>> fiber) {
  std::sort(fiber.begin(), fiber.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < fiber.size(); ++i)
    if (fiber[i].first == fiber[i - 1].first) throw Error("fiber lists a letter twice");
  std::erase_if(fiber, [](const auto& e) { return is_trivial(e.second); });
  return {std::move(top), std::move(fiber)};
}

/// iota(a): the top permutation with trivial fiber.
template <class B>
WreathElement<B> embed_top(const Perm& a) {
  return {a, {}};
}

/// b @ l: the single-coordinate element with trivial top.
template <class B>
WreathElement<B> embed_at(const B& b, Letter l, std::int64_t domain) {
  return make_wreath<B>(Perm::identity(domain), {{l, b}});
}

template <class B>
WreathElement<B> wreath_multiply(const WreathElement<B>& u, const WreathElement<B>& v) {
  if (u.top.domain() != v.top.domain()) throw Error("wreath elements over different alphabets");
  std::vector<Letter> letters;
  for (const auto& [l, _] : v.fiber) letters.push_back(l);
  Perm v_inv = inverse(v.top);
  for (const auto& [l, _] : u.fiber) letters.push_back(v_inv(l));
  std::sort(letters.begin(), letters.end());
  letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
  std::vector<std::pair<Letter, B>> fiber;
  for (Letter l : letters) {
    const B* f1 = u.at(v.top(l));
    const B* f2 = v.at(l);
    if (f1 && f2)
      fiber.emplace_back(l, compose(*f1, *f2));
    else
      fiber.emplace_back(l, f1 ? *f1 : *f2);
  }
  return make_wreath<B>(compose(u.top, v.top), std::move(fiber));
}

template <class B>
WreathElement<B> wreath_inverse(const WreathElement<B>& u) {
  std::vector<std::pair<Letter, B>> fiber;
  Perm inv = inverse(u.top);
  for (const auto& [l, b] : u.fiber) fiber.emplace_back(u.top(l), inverse(b));
  return make_wreath<B>(inv, std::move(fiber));
}

template <class B>
WreathElement<B> compose(const WreathElement<B>& u, const WreathElement<B>& v) {
  return wreath_multiply(u, v);
}

template <class B>
WreathElement<B> inverse(const WreathElement<B>& u) {
  return wreath_inverse(u);
}

inline Letter act(const Perm& p, Letter x) { return p(x); }
inline Word act(const TreeAutomorphism& g, const Word& w) { return evaluate(g, w); }

template <class B, class M>
std::pair<Letter, M> act(const WreathElement<B>& u, const std::pair<Letter, M>& point) {
  const B* f = u.at(point.first);
  return {u.top(point.first), f ? act(*f, point.second) : point.second};
}

/// The wreath recursion g -> (x -> g|_x, rho_1(g)).
inline WreathElement<TreeAutomorphism> wreath_decompose(const TreeAutomorphism& g) {
  const auto& a = g.automaton();
  const auto& st = a.state(g.initial());
  if (a.alphabet().is_integers() && st.fallback != kIdentityState)
    throw InfiniteActivityError("infinitely many nontrivial first-level sections");
  std::vector<std::pair<Letter, TreeAutomorphism>> fiber;
  for (auto [x, t] : st.exceptions)
    if (t != kIdentityState) fiber.emplace_back(x, state_automorphism(g, t));
  return make_wreath<TreeAutomorphism>(st.output, std::move(fiber));
}

/// Fiber entry of an assembly system: a concrete automorphism or the name of another
/// definition of the same system, which allows self-reference.
using FiberRef = std::variant<TreeAutomorphism, std::string>;

struct WreathDefinition {
  Perm top;
  std::vector<std::pair<Letter, FiberRef>> fiber;
};

/// Solves the system name_i = (fiber_i, top_i) and returns the automorphism `root`.
inline TreeAutomorphism wreath_assemble(const Alphabet& alphabet,
                                        const std::map<std::string, WreathDefinition>& system,
                                        const std::string& root) {
  Automaton out(alphabet);
  std::map<std::string, StateId> named;
  for (const auto& [name, def] : system) named[name] = out.add_state(name, def.top);
  if (!named.count(root)) throw Error("unknown root definition '" + root + "'");

  // concrete fibers are copied in; states of one automorphism are shared between uses
  std::map<const Automaton*, std::vector<StateId>> copies;
  auto copy = [&](const TreeAutomorphism& g) -> StateId {
    if (!(g.alphabet() == alphabet)) throw AlphabetError("fiber over a different alphabet");
    const Automaton& src = g.automaton();
    auto [it, fresh] = copies.emplace(&src, std::vector<StateId>{});
    if (fresh) {
      auto& ids = it->second;
      ids.assign(src.size(), kIdentityState);
      for (StateId s = 1; s < src.size(); ++s) ids[s] = out.add_state(src.state(s).name, src.state(s).output);
      for (StateId s = 1; s < src.size(); ++s) {
        for (auto [x, t] : src.state(s).exceptions) out.set_transition(ids[s], x, ids[t]);
        out.set_fallback(ids[s], ids[src.state(s).fallback]);
      }
    }
    return it->second[g.initial()];
  };

  for (const auto& [name, def] : system) {
    for (const auto& [x, ref] : def.fiber) {
      StateId target;
      if (const auto* g = std::get_if<TreeAutomorphism>(&ref)) {
        target = copy(*g);
      } else {
        const auto& ref_name = std::get<std::string>(ref);
        auto it = named.find(ref_name);
        if (it == named.end()) throw Error("undefined fiber reference '" + ref_name + "'");
        target = it->second;
      }
      if (target != kIdentityState) out.set_transition(named[name], x, target);
    }
  }
  return TreeAutomorphism::from(out, named[root]);
}

/// Inverse of the wreath recursion for a concrete finitely supported fiber.
inline TreeAutomorphism wreath_assemble(const Alphabet& alphabet, const WreathElement<TreeAutomorphism>& w) {
  WreathDefinition def{w.top, {}};
  for (const auto& [x, g] : w.fiber) def.fiber.emplace_back(x, g);
  return wreath_assemble(alphabet, {{"g", def}}, "g");
}

/// An element of the iterated wreath product P_n acting on words of length n: the first
/// letter is acted on by `top`, the remaining n - 1 letters by the child at that letter.
struct Portrait {
  Perm top;
  std::vector<std::pair<Letter, Portrait>> children;
  std::size_t depth = 0;

  bool is_identity() const { return top.is_identity() && children.empty(); }

  const Portrait* child(Letter x) const {
    for (const auto& [l, p] : children)
      if (l == x) return &p;
    return nullptr;
  }

  Word apply(const Word& v) const {
    if (v.size() != depth) throw Error("word length differs from the portrait depth");
    Word out;
    out.reserve(v.size());
    const Portrait* p = this;
    for (Letter x : v) {
      if (!p) {
        out.push_back(x);
        continue;
      }
      out.push_back(p->top(x));
      p = p->child(x);
    }
    return out;
  }

  /// Whether every local permutation lies in the class.
  bool within(const PClass& cls) const {
    if (!in_class(top, cls)) return false;
    for (const auto& [_, p] : children)
      if (!p.within(cls)) return false;
    return true;
  }
};

struct LevelDecomposition {
  std::size_t level = 0;
  /// Nontrivial sections g|_v for v of length `level`, ordered by word.
  std::map<Word, TreeAutomorphism> sections;
  Portrait action;

  Word apply(const Word& v) const { return action.apply(v); }
};

namespace detail {

inline Portrait portrait_of(const TreeAutomorphism& g, StateId s, std::size_t depth) {
  const auto& a = g.automaton();
  Portrait p{a.state(s).output, {}, depth};
  if (depth <= 1) {
    if (depth == 0) p.top = Perm::identity(a.alphabet());
    return p;
  }
  for (auto [x, t] : a.state(s).exceptions) {
    if (t == kIdentityState) continue;
    Portrait c = portrait_of(g, t, depth - 1);
    if (!c.is_identity()) p.children.emplace_back(x, std::move(c));
  }
  return p;
}

}  // namespace detail

/// g -> (v -> g|_v, rho_n(g)) for words v of length n.
inline LevelDecomposition level_n_decompose(const TreeAutomorphism& g, std::size_t n) {
  SectionGraph graph(g);
  LevelDecomposition d;
  d.level = n;
  std::vector<std::pair<Word, StateId>> frontier;
  if (!g.is_identity()) frontier.emplace_back(Word{}, g.initial());
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::pair<Word, StateId>> next;
    for (const auto& [w, s] : frontier) {
      if (graph.wild(s)) throw InfiniteActivityError("infinite activity at level " + std::to_string(k + 1));
      for (auto e : graph.edges(s)) {
        Word v = w;
        v.push_back(e.letter);
        next.emplace_back(std::move(v), e.target);
      }
    }
    frontier = std::move(next);
  }
  for (const auto& [w, s] : frontier) d.sections.emplace(w, state_automorphism(g, s));
  d.action = detail::portrait_of(g, g.initial(), n);
  return d;
}

/// Rebuilds g from its level-n sections and level-n action.
inline TreeAutomorphism level_n_assemble(const Alphabet& alphabet, const LevelDecomposition& d) {
  std::function<TreeAutomorphism(const Word&, const Portrait*, std::size_t)> node =
      [&](const Word& v, const Portrait* p, std::size_t k) -> TreeAutomorphism {
    if (k == d.level) {
      auto it = d.sections.find(v);
      return it == d.sections.end() ? TreeAutomorphism::identity(alphabet) : it->second;
    }
    std::vector<Letter> letters;
    if (p)
      for (const auto& [x, _] : p->children) letters.push_back(x);
    for (auto it = d.sections.lower_bound(v); it != d.sections.end(); ++it) {
      const Word& w = it->first;
      if (!std::equal(v.begin(), v.end(), w.begin())) break;
      letters.push_back(w[k]);
    }
    std::sort(letters.begin(), letters.end());
    letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
    WreathElement<TreeAutomorphism> w{p ? p->top : Perm::identity(alphabet), {}};
    for (Letter x : letters) {
      Word vx = v;
      vx.push_back(x);
      TreeAutomorphism child = node(vx, p ? p->child(x) : nullptr, k + 1);
      if (!child.is_identity()) w.fiber.emplace_back(x, std::move(child));
    }
    return wreath_assemble(alphabet, w);
  };
  return node({}, &d.action, 0);
}

/// The generating set iota(S) followed by T @ l0 of B wr A acting on L x M.
inline std::vector<WreathElement<Perm>> product_action_generators(const std::vector<Perm>& S,
                                                                  const std::vector<Perm>& T, Letter l0) {
  if (S.empty() || T.empty()) throw Error("product action needs generators on both factors");
  std::vector<WreathElement<Perm>> gens;
  for (const auto& s : S) gens.push_back(embed_top<Perm>(s));
  for (const auto& t : T) gens.push_back(embed_at<Perm>(t, l0, S.front().domain()));
  return gens;
}

using LetterPair = std::pair<Letter, Letter>;

inline std::string format_pair(const LetterPair& p) {
  return "(" + std::to_string(p.first) + "," + std::to_string(p.second) + ")";
}

/// Unit-resistance Schreier ball of the product action around `base`; generators are
/// used as given (pass a symmetric set for an undirected graph).
inline SchreierBall<LetterPair> product_action_ball(const std::vector<WreathElement<Perm>>& gens,
                                                    const LetterPair& base, std::size_t radius) {
  return schreier_ball<LetterPair>(
      base, gens.size(), [&](const LetterPair& p, std::size_t i) { return act(gens[i], p); }, radius,
      format_pair);
}

}  // namespace selfsim
