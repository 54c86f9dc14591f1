#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "selfsim/error.hpp"

namespace selfsim::corpus {

/// A built-in example. Expected values are re-derived by the test suite.
struct Entry {
  std::string_view name;
  std::string_view file;
  std::string_view text;
  bool is_group = false;
  /// Classification of the automorphism, empty for groups.
  std::string_view classification;
  /// Singular points (of all closed generators for groups), space separated.
  std::string_view singular;
  /// Criterion verdict for groups, recurrence verdict for the comb network.
  std::string_view verdict;
};

inline const std::vector<Entry>& entries() {
  static const std::vector<Entry> all{
      {"odometer", "odometer.aut", R"(# binary odometer: adds one to a little-endian binary number
alphabet 0 1
state a output cycles (0 1)
  on 1 -> a
initial a
)", false, "Bounded(1)", "(1)", ""},
      {"grigorchuk-a", "grigorchuk-a.aut", R"(alphabet 0 1
state a output cycles (0 1)
initial a
)", false, "Finitary(1)", "", ""},
      {"grigorchuk-b", "grigorchuk-b.aut", R"(# b = (a, c), c = (a, d), d = (e, b)
alphabet 0 1
state b output id
  on 0 -> a
  on 1 -> c
state c output id
  on 0 -> a
  on 1 -> d
state d output id
  on 1 -> b
state a output cycles (0 1)
initial b
)", false, "Bounded(2)", "(1)", ""},
      {"grigorchuk-c", "grigorchuk-c.aut", R"(# Grigorchuk generator, see grigorchuk-b.aut
alphabet 0 1
state b output id
  on 0 -> a
  on 1 -> c
state c output id
  on 0 -> a
  on 1 -> d
state d output id
  on 1 -> b
state a output cycles (0 1)
initial c
)", false, "Bounded(2)", "(1)", ""},
      {"grigorchuk-d", "grigorchuk-d.aut", R"(# Grigorchuk generator, see grigorchuk-b.aut
alphabet 0 1
state b output id
  on 0 -> a
  on 1 -> c
state c output id
  on 0 -> a
  on 1 -> d
state d output id
  on 1 -> b
state a output cycles (0 1)
initial d
)", false, "Bounded(2)", "(1)", ""},
      {"grigorchuk", "grigorchuk.group", R"(name grigorchuk
alphabet 0 1
pclass full-finite
state a output cycles (0 1)
state b output id
  on 0 -> a
  on 1 -> c
state c output id
  on 0 -> a
  on 1 -> d
state d output id
  on 1 -> b
generators a b c d
)", true, "", "(1)", "criterion-satisfied"},
      {"basilica", "basilica.group", R"(name basilica
# a = (1, b), b = (1, a) with swap at the root
alphabet 0 1
pclass full-finite
state a output id
  on 1 -> b
state b output cycles (0 1)
  on 1 -> a
generators a b
)", true, "", "(01) (1) (10)", "criterion-satisfied"},
      {"z-directed", "z-directed.aut", R"(# directed along 0^omega: g(0w) = 1 g(w), g(xw) = (x+1) w otherwise
alphabet integers
state g output shift 1
  on 0 -> g
  default -> e
initial g
)", false, "Bounded(1)", "(0)", ""},
      {"z-directed-group", "z-directed.group", R"(name z-directed
alphabet integers
pclass trans-fin
state g output shift 1
  on 0 -> g
  default -> e
state t output shift 1
state u output cycles (0 1)
  on 1 -> g
generators g t u
)", true, "", "(0) (1) 0.(1) 1.(0)", "criterion-satisfied"},
      {"comb", "", "", false, "", "", "recurrent-evidence"},
  };
  return all;
}

/// The comb entry has no file: it is the Schreier graph of shift wr shift on Z^2, produced
/// by exhaustions::comb().
inline bool is_network_generator(std::string_view name) { return name == "comb"; }

inline const Entry& find(std::string_view name) {
  for (const auto& e : entries())
    if (e.name == name) return e;
  throw Error("unknown corpus entry '" + std::string(name) + "'");
}

}  // namespace selfsim::corpus
