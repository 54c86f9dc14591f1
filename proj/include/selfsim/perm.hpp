#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "selfsim/alphabet.hpp"
#include "selfsim/error.hpp"

namespace selfsim {

/// A finitely describable permutation of the alphabet: x -> c(x + shift) where the
/// correction c moves finitely many letters. On finite alphabets the shift is always 0.
///
/// The correction table is kept canonical (sorted by input, no fixed points), so two
/// permutations are equal exactly when their members are.
class Perm {
 public:
  using Table = std::vector<std::pair<Letter, Letter>>;

  /// `domain` is the alphabet size, 0 for the integers.
  explicit Perm(std::int64_t domain = 0) : domain_(domain) {}

  static Perm identity(std::int64_t domain) { return Perm(domain); }
  static Perm identity(const Alphabet& a) { return Perm(a.size()); }

  static Perm translation(Letter k) { return from_table(0, k, {}); }

  /// Validates that `table` is a bijection of its own key set.
  static Perm from_table(std::int64_t domain, Letter shift, Table table) {
    if (domain != 0 && shift != 0) throw AlphabetError("shift on a finite alphabet");
    std::sort(table.begin(), table.end());
    std::vector<Letter> keys, values;
    for (auto [x, y] : table) {
      if (domain != 0 && (x < 0 || x >= domain || y < 0 || y >= domain))
        throw AlphabetError("permutation letter outside alphabet");
      keys.push_back(x);
      values.push_back(y);
    }
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
      throw AlphabetError("permutation maps a letter twice");
    std::sort(values.begin(), values.end());
    if (keys != values) throw AlphabetError("correction table is not a permutation of its domain");
    Perm p(domain);
    p.shift_ = shift;
    for (auto [x, y] : table)
      if (x != y) p.table_.emplace_back(x, y);
    return p;
  }

  /// Cycle notation: each inner list (a b c) maps a->b->c->a.
  static Perm from_cycles(std::int64_t domain, const std::vector<std::vector<Letter>>& cycles,
                          Letter shift = 0) {
    Table t;
    std::set<Letter> seen;
    for (const auto& cyc : cycles) {
      for (std::size_t i = 0; i < cyc.size(); ++i) {
        if (!seen.insert(cyc[i]).second) throw AlphabetError("letter repeated in cycles");
        t.emplace_back(cyc[i], cyc[(i + 1) % cyc.size()]);
      }
    }
    return from_table(domain, shift, std::move(t));
  }

  std::int64_t domain() const noexcept { return domain_; }
  Letter shift() const noexcept { return shift_; }
  const Table& table() const noexcept { return table_; }
  bool is_identity() const noexcept { return shift_ == 0 && table_.empty(); }

  Letter operator()(Letter x) const {
    if (domain_ != 0 && (x < 0 || x >= domain_))
      throw AlphabetError("letter " + std::to_string(x) + " outside alphabet");
    return correct(x + shift_);
  }

  /// Letters moved by the correction (not by the shift).
  std::vector<Letter> support() const {
    std::vector<Letter> s;
    for (auto [x, y] : table_) s.push_back(x);
    return s;
  }

  /// Cycles of the correction, each starting at its least letter, ordered by that letter.
  std::vector<std::vector<Letter>> cycles() const {
    std::vector<std::vector<Letter>> out;
    std::set<Letter> done;
    for (auto [x, y] : table_) {
      if (done.count(x)) continue;
      std::vector<Letter> cyc{x};
      done.insert(x);
      for (Letter z = correct(x); z != x; z = correct(z)) {
        cyc.push_back(z);
        done.insert(z);
      }
      out.push_back(std::move(cyc));
    }
    return out;
  }

  friend auto operator<=>(const Perm&, const Perm&) = default;
  friend bool operator==(const Perm&, const Perm&) = default;

  friend Perm compose(const Perm& p, const Perm& q);
  friend Perm inverse(const Perm& p);

 private:
  Letter correct(Letter y) const {
    auto it = std::lower_bound(table_.begin(), table_.end(), std::make_pair(y, Letter{0}),
                               [](const auto& a, const auto& b) { return a.first < b.first; });
    return (it != table_.end() && it->first == y) ? it->second : y;
  }

  std::int64_t domain_ = 0;
  Letter shift_ = 0;
  Table table_;
};

/// x -> p(q(x)).
inline Perm compose(const Perm& p, const Perm& q) {
  if (p.domain_ != q.domain_) throw AlphabetError("composing permutations of different alphabets");
  // p(q(x)) = c1(c2(y - k1) + k1) with y = x + k1 + k2
  const Letter k1 = p.shift_;
  std::vector<Letter> candidates;
  for (auto [x, _] : p.table_) candidates.push_back(x);
  for (auto [x, _] : q.table_) candidates.push_back(x + k1);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  Perm r(p.domain_);
  r.shift_ = p.shift_ + q.shift_;
  for (Letter y : candidates) {
    Letter z = p.correct(q.correct(y - k1) + k1);
    if (z != y) r.table_.emplace_back(y, z);
  }
  return r;
}

inline Perm inverse(const Perm& p) {
  // p^-1(y) = c'(y - k) with c'(z) = c^-1(z + k) - k
  Perm r(p.domain_);
  r.shift_ = -p.shift_;
  for (auto [x, y] : p.table_) r.table_.emplace_back(y - p.shift_, x - p.shift_);
  std::sort(r.table_.begin(), r.table_.end());
  return r;
}

/// Renders in the text syntax of automaton files: `id`, `shift k`, `cycles (a b)(c d)`,
/// `shift k * cycles (...)`.
inline std::string render(const Perm& p, const Alphabet& alphabet) {
  if (p.is_identity()) return "id";
  std::string out;
  if (p.shift() != 0) out = "shift " + std::to_string(p.shift());
  auto cyc = p.cycles();
  if (!cyc.empty()) {
    if (!out.empty()) out += " * ";
    out += "cycles ";
    for (const auto& c : cyc) {
      out += '(';
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) out += ' ';
        out += alphabet.format_letter(c[i]);
      }
      out += ')';
    }
  }
  return out;
}

enum class PClassKind { FullFinite, FiniteSupport, TranslationsWithFiniteSupport, Trivial };

enum class Recurrence { Recurrent, NonRecurrent, Unknown };

/// A syntactic class of first-level permutations together with the facts the criterion
/// may rely on. Built-in classes are amenable and act recurrently; both flags can be
/// overridden to model weaker knowledge.
struct PClass {
  PClassKind kind = PClassKind::TranslationsWithFiniteSupport;
  bool declared_amenable = true;
  Recurrence recurrence = Recurrence::Recurrent;

  static PClass builtin(PClassKind k) { return PClass{k, true, Recurrence::Recurrent}; }

  std::string name() const {
    switch (kind) {
      case PClassKind::FullFinite: return "full-finite";
      case PClassKind::FiniteSupport: return "fin-supp";
      case PClassKind::TranslationsWithFiniteSupport: return "trans-fin";
      case PClassKind::Trivial: return "trivial";
    }
    return "?";
  }

  static PClass parse(const std::string& name) {
    static const std::map<std::string, PClassKind> names{
        {"full-finite", PClassKind::FullFinite},
        {"fin-supp", PClassKind::FiniteSupport},
        {"trans-fin", PClassKind::TranslationsWithFiniteSupport},
        {"trivial", PClassKind::Trivial},
    };
    auto it = names.find(name);
    if (it == names.end()) throw Error("unknown permutation class '" + name + "'");
    return builtin(it->second);
  }

  std::string amenability_justification() const {
    switch (kind) {
      case PClassKind::FullFinite: return "finite group";
      case PClassKind::FiniteSupport: return "locally finite group";
      case PClassKind::TranslationsWithFiniteSupport:
        return "extension of a locally finite group by Z";
      case PClassKind::Trivial: return "trivial group";
    }
    return "";
  }
};

inline bool in_class(const Perm& p, const PClass& cls) {
  switch (cls.kind) {
    case PClassKind::FullFinite: return p.domain() != 0;
    case PClassKind::FiniteSupport: return p.shift() == 0;
    case PClassKind::TranslationsWithFiniteSupport: return true;
    case PClassKind::Trivial: return p.is_identity();
  }
  return false;
}

}  // namespace selfsim
