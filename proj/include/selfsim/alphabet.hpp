#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "selfsim/error.hpp"

namespace selfsim {

/// Letters are symbol indices for finite alphabets and the integers themselves for X = Z.
using Letter = std::int64_t;
using Word = std::vector<Letter>;

/// Either a finite ordered list of distinct symbols or the integers.
class Alphabet {
 public:
  static Alphabet integers() { return Alphabet(); }

  static Alphabet finite(std::vector<std::string> symbols) {
    if (symbols.empty()) throw AlphabetError("finite alphabet needs at least one symbol");
    for (const auto& s : symbols) {
      if (s.empty()) throw AlphabetError("empty alphabet symbol");
    }
    auto sorted = symbols;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw AlphabetError("duplicate alphabet symbol");
    Alphabet a;
    a.symbols_ = std::make_shared<const std::vector<std::string>>(std::move(symbols));
    return a;
  }

  /// Finite alphabet with symbols "0", "1", ..., "n-1".
  static Alphabet range(std::size_t n) {
    std::vector<std::string> s;
    for (std::size_t i = 0; i < n; ++i) s.push_back(std::to_string(i));
    return finite(std::move(s));
  }

  bool is_finite() const noexcept { return symbols_ != nullptr; }
  bool is_integers() const noexcept { return symbols_ == nullptr; }

  /// Number of letters; 0 stands for the infinite alphabet Z.
  std::int64_t size() const noexcept {
    return symbols_ ? static_cast<std::int64_t>(symbols_->size()) : 0;
  }

  const std::vector<std::string>& symbols() const {
    static const std::vector<std::string> none;
    return symbols_ ? *symbols_ : none;
  }

  bool contains(Letter x) const noexcept { return is_integers() || (x >= 0 && x < size()); }

  void check(Letter x) const {
    if (!contains(x))
      throw AlphabetError("letter " + std::to_string(x) + " outside alphabet of size " +
                          std::to_string(size()));
  }

  void check(const Word& w) const {
    for (Letter x : w) check(x);
  }

  Letter parse_letter(std::string_view token) const {
    if (is_finite()) {
      const auto& s = *symbols_;
      auto it = std::find(s.begin(), s.end(), token);
      if (it == s.end()) throw AlphabetError("unknown symbol '" + std::string(token) + "'");
      return static_cast<Letter>(it - s.begin());
    }
    Letter value = 0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (!token.empty() && token.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last)
      throw AlphabetError("not an integer letter: '" + std::string(token) + "'");
    return value;
  }

  std::string format_letter(Letter x) const {
    if (is_finite()) {
      check(x);
      return (*symbols_)[static_cast<std::size_t>(x)];
    }
    return std::to_string(x);
  }

  /// Words are written compactly ("0110") when every letter renders as one character,
  /// and comma-separated otherwise ("0,-3,12").
  Word parse_word(std::string_view text) const {
    Word w;
    auto separated = text.find_first_of(", \t") != std::string_view::npos;
    bool digits_only = std::all_of(text.begin(), text.end(),
                                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    if (!separated && text.size() > 1 && single_char_letters() && (is_finite() || digits_only)) {
      for (char c : text) w.push_back(parse_letter(std::string_view(&c, 1)));
      return w;
    }
    std::size_t i = 0;
    while (i < text.size()) {
      while (i < text.size() && (text[i] == ',' || std::isspace(static_cast<unsigned char>(text[i]))))
        ++i;
      std::size_t j = i;
      while (j < text.size() && text[j] != ',' && !std::isspace(static_cast<unsigned char>(text[j])))
        ++j;
      if (j > i) w.push_back(parse_letter(text.substr(i, j - i)));
      i = j;
    }
    return w;
  }

  std::string format_word(const Word& w) const {
    bool compact = std::all_of(w.begin(), w.end(),
                               [&](Letter x) { return format_letter(x).size() == 1; });
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!compact && i > 0) out += ',';
      out += format_letter(w[i]);
    }
    // a lone multi-digit integer needs a separator to survive parse_word
    if (!compact && w.size() == 1 && is_integers()) out += ',';
    return out;
  }

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    if (a.symbols_ == b.symbols_) return true;
    if (!a.symbols_ || !b.symbols_) return false;
    return *a.symbols_ == *b.symbols_;
  }

 private:
  Alphabet() = default;

  bool single_char_letters() const {
    if (is_integers()) return true;
    return std::all_of(symbols_->begin(), symbols_->end(),
                       [](const std::string& s) { return s.size() == 1; });
  }

  std::shared_ptr<const std::vector<std::string>> symbols_;
};

}  // namespace selfsim
