#pragma once

// Text format for automata and groups.
//
//   # comment
//   name <free text>                  optional
//   alphabet integers | alphabet <symbol> <symbol> ...
//   pclass full-finite|fin-supp|trans-fin|trivial   optional
//   state <name> output <perm>
//     on <letter> -> <name>
//     default -> <name>
//   initial <name>                    an automorphism file
//   generators <name> <name> ...      a group file
//
// <perm> is `id`, `shift <k>`, `cycles (a b c)(d e)` or `shift <k> * cycles (...)`,
// the last meaning x -> cycles(x + k). The state `e` is implicit; omitted transitions
// lead to it. States may be referenced before they are declared.

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "selfsim/automaton.hpp"
#include "selfsim/error.hpp"
#include "selfsim/perm.hpp"

namespace selfsim {

struct ParsedDocument {
  std::string name;
  Alphabet alphabet = Alphabet::integers();
  std::optional<PClass> pclass;
  std::optional<TreeAutomorphism> initial;
  std::vector<TreeAutomorphism> generators;
  std::vector<std::string> generator_names;

  bool is_group() const { return !generators.empty(); }
};

namespace detail {

struct Token {
  std::string text;
  std::size_t column;
};

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '(' || c == ')' || c == '*') {
      out.push_back({std::string(1, c), i + 1});
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      out.push_back({"->", i + 1});
      i += 2;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '(' &&
           line[j] != ')' && line[j] != '#' && line[j] != '*' &&
           !(line[j] == '-' && j + 1 < line.size() && line[j + 1] == '>'))
      ++j;
    out.push_back({std::string(line.substr(i, j - i)), i + 1});
    i = j;
  }
  return out;
}

class DocumentParser {
 public:
  ParsedDocument parse(std::string_view text) {
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      ++lineno;
      line_ = lineno;
      statement(text.substr(pos, end - pos));
      pos = end + 1;
    }
    return finish();
  }

 private:
  [[noreturn]] void fail(std::size_t column, const std::string& what) const {
    throw ParseError(line_, column, what);
  }

  void statement(std::string_view line) {
    auto toks = tokenize(line);
    if (toks.empty()) return;
    const std::string& kw = toks[0].text;
    if (kw == "name") {
      auto start = toks.size() > 1 ? toks[1].column - 1 : line.size();
      std::string rest(line.substr(std::min(start, line.size())));
      auto hash = rest.find('#');
      if (hash != std::string::npos) rest.resize(hash);
      while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.back()))) rest.pop_back();
      doc_.name = rest;
    } else if (kw == "alphabet") {
      alphabet_statement(toks);
    } else if (kw == "pclass") {
      if (toks.size() != 2) fail(toks[0].column, "pclass takes one class name");
      try {
        doc_.pclass = PClass::parse(toks[1].text);
      } catch (const Error& e) {
        fail(toks[1].column, e.what());
      }
    } else if (kw == "state") {
      state_statement(toks);
    } else if (kw == "on") {
      on_statement(toks);
    } else if (kw == "default") {
      if (!current_) fail(toks[0].column, "transition outside a state block");
      if (toks.size() != 3 || toks[1].text != "->") fail(toks[0].column, "expected 'default -> <state>'");
      if (has_default_.count(*current_)) fail(toks[0].column, "duplicate default transition");
      has_default_.insert(*current_);
      defaults_.push_back({*current_, toks[2], line_});
    } else if (kw == "initial") {
      if (toks.size() != 2) fail(toks[0].column, "initial takes one state name");
      if (initial_) fail(toks[0].column, "initial declared twice");
      initial_ = Ref{toks[1], line_};
    } else if (kw == "generators") {
      if (toks.size() < 2) fail(toks[0].column, "generators needs at least one state name");
      for (std::size_t i = 1; i < toks.size(); ++i) generators_.push_back(Ref{toks[i], line_});
    } else {
      fail(toks[0].column, "unknown keyword '" + kw + "'");
    }
  }

  void alphabet_statement(const std::vector<Token>& toks) {
    if (automaton_) fail(toks[0].column, "alphabet declared twice");
    if (toks.size() < 2) fail(toks[0].column, "empty alphabet");
    try {
      if (toks.size() == 2 && toks[1].text == "integers") {
        alphabet_ = Alphabet::integers();
      } else {
        std::vector<std::string> symbols;
        for (std::size_t i = 1; i < toks.size(); ++i) symbols.push_back(toks[i].text);
        alphabet_ = Alphabet::finite(std::move(symbols));
      }
    } catch (const AlphabetError& e) {
      fail(toks[1].column, e.what());
    }
    automaton_.emplace(alphabet_);
  }

  void state_statement(const std::vector<Token>& toks) {
    if (!automaton_) fail(toks[0].column, "state before alphabet");
    if (toks.size() < 4 || toks[2].text != "output") fail(toks[0].column, "expected 'state <name> output <perm>'");
    const std::string& name = toks[1].text;
    if (name == "e") fail(toks[1].column, "the identity state 'e' is implicit");
    if (declared_.count(name)) fail(toks[1].column, "state '" + name + "' declared twice");
    Perm p = permutation(toks, 3);
    StateId id = automaton_->add_state(name, p);
    declared_[name] = id;
    current_ = id;
  }

  void on_statement(const std::vector<Token>& toks) {
    if (!current_) fail(toks[0].column, "transition outside a state block");
    if (toks.size() != 4 || toks[2].text != "->") fail(toks[0].column, "expected 'on <letter> -> <state>'");
    Letter x;
    try {
      x = alphabet_.parse_letter(toks[1].text);
    } catch (const AlphabetError& e) {
      fail(toks[1].column, e.what());
    }
    auto& seen = letters_[*current_];
    if (!seen.insert(x).second) fail(toks[1].column, "duplicate letter " + toks[1].text);
    transitions_.push_back({*current_, x, toks[3], line_});
  }

  Perm permutation(const std::vector<Token>& toks, std::size_t i) {
    const std::int64_t domain = alphabet_.size();
    auto at = [&](std::size_t k) -> const Token& {
      if (k >= toks.size()) fail(toks.back().column, "incomplete permutation");
      return toks[k];
    };
    try {
      if (at(i).text == "id") {
        if (i + 1 != toks.size()) fail(toks[i + 1].column, "trailing tokens after permutation");
        return Perm::identity(domain);
      }
      Letter shift = 0;
      if (at(i).text == "shift") {
        if (alphabet_.is_finite()) fail(at(i).column, "shift needs the integer alphabet");
        shift = Alphabet::integers().parse_letter(at(i + 1).text);
        i += 2;
        if (i == toks.size()) return Perm::translation(shift);
        if (at(i).text != "*") fail(at(i).column, "expected '*' after shift");
        ++i;
      }
      if (at(i).text != "cycles") fail(at(i).column, "expected 'id', 'shift' or 'cycles'");
      ++i;
      std::vector<std::vector<Letter>> cycles;
      while (i < toks.size()) {
        if (toks[i].text != "(") fail(toks[i].column, "expected '('");
        ++i;
        std::vector<Letter> cyc;
        while (at(i).text != ")") {
          cyc.push_back(alphabet_.parse_letter(at(i).text));
          ++i;
        }
        if (cyc.empty()) fail(toks[i].column, "empty cycle");
        ++i;
        cycles.push_back(std::move(cyc));
      }
      if (cycles.empty()) fail(toks.back().column, "cycles needs at least one cycle");
      return Perm::from_cycles(domain, cycles, shift);
    } catch (const AlphabetError& e) {
      fail(toks[std::min(i, toks.size() - 1)].column, std::string("invalid permutation: ") + e.what());
    }
  }

  struct Ref {
    Token token;
    std::size_t line;
  };
  struct PendingTransition {
    StateId from;
    Letter letter;
    Token target;
    std::size_t line;
  };
  struct PendingDefault {
    StateId from;
    Token target;
    std::size_t line;
  };

  StateId resolve(const Token& t, std::size_t line) {
    if (t.text == "e") return kIdentityState;
    auto it = declared_.find(t.text);
    if (it == declared_.end()) {
      line_ = line;
      fail(t.column, "undeclared state '" + t.text + "'");
    }
    return it->second;
  }

  ParsedDocument finish() {
    if (!automaton_) throw ParseError(line_, 1, "missing alphabet");
    for (const auto& t : transitions_) automaton_->set_transition(t.from, t.letter, resolve(t.target, t.line));
    for (const auto& d : defaults_) automaton_->set_fallback(d.from, resolve(d.target, d.line));
    doc_.alphabet = alphabet_;
    if (initial_) doc_.initial = TreeAutomorphism::from(*automaton_, resolve(initial_->token, initial_->line));
    for (const auto& g : generators_) {
      doc_.generators.push_back(TreeAutomorphism::from(*automaton_, resolve(g.token, g.line)));
      doc_.generator_names.push_back(g.token.text);
    }
    if (!initial_ && generators_.empty()) throw ParseError(line_, 1, "missing 'initial' or 'generators'");
    return std::move(doc_);
  }

  std::size_t line_ = 0;
  ParsedDocument doc_;
  Alphabet alphabet_ = Alphabet::integers();
  std::optional<Automaton> automaton_;
  std::map<std::string, StateId> declared_;
  std::optional<StateId> current_;
  std::map<StateId, std::set<Letter>> letters_;
  std::set<StateId> has_default_;
  std::vector<PendingTransition> transitions_;
  std::vector<PendingDefault> defaults_;
  std::optional<Ref> initial_;
  std::vector<Ref> generators_;
};

// Unique, parseable state names for one or more automata rendered into a single file.
class NameTable {
 public:
  std::string claim(std::string wanted) {
    for (std::size_t i = 0; i < wanted.size(); ++i) {
      char& c = wanted[i];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '#' || c == '(' || c == ')' || c == '*' ||
          (c == '-' && i + 1 < wanted.size() && wanted[i + 1] == '>'))
        c = '_';
    }
    if (wanted.empty()) wanted = "s";
    std::string name = wanted;
    for (int k = 1; used_.count(name) || name == "e"; ++k) name = wanted + "_" + std::to_string(k);
    used_.insert(name);
    return name;
  }

 private:
  std::set<std::string> used_;
};

inline void render_states(std::ostringstream& out, const TreeAutomorphism& g, NameTable& names,
                          std::vector<std::string>& assigned) {
  const auto& a = g.automaton();
  assigned.assign(a.size(), "e");
  for (StateId s = 1; s < a.size(); ++s) assigned[s] = names.claim(a.state(s).name);
  for (StateId s = 1; s < a.size(); ++s) {
    const auto& st = a.state(s);
    out << "state " << assigned[s] << " output " << render(st.output, a.alphabet()) << '\n';
    for (auto [x, t] : st.exceptions)
      out << "  on " << a.alphabet().format_letter(x) << " -> " << assigned[t] << '\n';
    if (st.fallback != kIdentityState) out << "  default -> " << assigned[st.fallback] << '\n';
  }
}

inline std::string render_alphabet(const Alphabet& a) {
  if (a.is_integers()) return "alphabet integers\n";
  std::string s = "alphabet";
  for (const auto& sym : a.symbols()) s += " " + sym;
  return s + "\n";
}

}  // namespace detail

inline ParsedDocument parse_document(std::string_view text) {
  return detail::DocumentParser().parse(text);
}

/// Parses a file with an `initial` line.
inline TreeAutomorphism parse_automaton(std::string_view text) {
  auto doc = parse_document(text);
  if (!doc.initial) throw ParseError(1, 1, "file declares no 'initial' state");
  return *doc.initial;
}

inline std::string render_automaton(const TreeAutomorphism& g) {
  std::ostringstream out;
  out << detail::render_alphabet(g.alphabet());
  detail::NameTable names;
  std::vector<std::string> assigned;
  detail::render_states(out, g, names, assigned);
  out << "initial " << assigned[g.initial()] << '\n';
  return out.str();
}

inline std::string render_group(const std::vector<TreeAutomorphism>& gens, const std::string& name = {},
                                const std::optional<PClass>& pclass = std::nullopt) {
  if (gens.empty()) throw Error("a group file needs at least one generator");
  std::ostringstream out;
  if (!name.empty()) out << "name " << name << '\n';
  out << detail::render_alphabet(gens.front().alphabet());
  if (pclass) out << "pclass " << pclass->name() << '\n';
  detail::NameTable names;
  std::vector<std::string> roots;
  for (const auto& g : gens) {
    std::vector<std::string> assigned;
    detail::render_states(out, g, names, assigned);
    roots.push_back(assigned[g.initial()]);
  }
  out << "generators";
  for (const auto& r : roots) out << ' ' << r;
  out << '\n';
  return out.str();
}

}  // namespace selfsim
