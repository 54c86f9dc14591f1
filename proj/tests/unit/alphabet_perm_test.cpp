#include <gtest/gtest.h>

#include "support/oracles.hpp"

using namespace selfsim;

namespace {

Perm random_z_perm(oracle::Rng& rng) {
  Letter shift = static_cast<Letter>(oracle::pick(rng, 7)) - 3;
  std::vector<Letter> keys;
  for (Letter x = -4; x <= 4; ++x)
    if (oracle::coin(rng, 0.4)) keys.push_back(x);
  auto vals = keys;
  std::shuffle(vals.begin(), vals.end(), rng);
  Perm::Table t;
  for (std::size_t i = 0; i < keys.size(); ++i) t.emplace_back(keys[i], vals[i]);
  return Perm::from_table(0, shift, t);
}

}  // namespace

TEST(Alphabet, FiniteSymbolsRoundTrip) {
  auto a = Alphabet::finite({"x", "y", "z"});
  EXPECT_EQ(a.size(), 3);
  Word w = a.parse_word("zyx");
  EXPECT_EQ(w, (Word{2, 1, 0}));
  EXPECT_EQ(a.format_word(w), "zyx");
  EXPECT_THROW(a.parse_letter("q"), AlphabetError);
  EXPECT_THROW(a.check(Letter{3}), AlphabetError);
}

TEST(Alphabet, MultiCharSymbolsUseCommas) {
  auto a = Alphabet::finite({"ab", "cd"});
  Word w{0, 1, 1};
  EXPECT_EQ(a.format_word(w), "ab,cd,cd");
  EXPECT_EQ(a.parse_word("ab,cd,cd"), w);
  EXPECT_EQ(a.parse_word("ab cd cd"), w);
}

TEST(Alphabet, IntegerWords) {
  auto z = Alphabet::integers();
  EXPECT_TRUE(z.is_integers());
  EXPECT_EQ(z.parse_word("0110"), (Word{0, 1, 1, 0}));
  EXPECT_EQ(z.parse_word("0,-3,12"), (Word{0, -3, 12}));
  EXPECT_EQ(z.format_word({0, -3, 12}), "0,-3,12");
  EXPECT_EQ(z.format_word({5, 1}), "51");
  for (const Word& w : {Word{12}, Word{-1}, Word{7}, Word{0, -1}, Word{}})
    EXPECT_EQ(z.parse_word(z.format_word(w)), w) << z.format_word(w);
  EXPECT_THROW(z.parse_letter("1x"), AlphabetError);
}

TEST(Perm, FiniteComposeIsPointwise) {
  oracle::Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const std::int64_t k = 2 + static_cast<std::int64_t>(oracle::pick(rng, 4));
    Perm p = oracle::random_perm(rng, k), q = oracle::random_perm(rng, k);
    Perm pq = compose(p, q), pi = inverse(p);
    for (Letter x = 0; x < k; ++x) {
      EXPECT_EQ(pq(x), p(q(x)));
      EXPECT_EQ(pi(p(x)), x);
    }
  }
}

TEST(Perm, IntegerComposeIsPointwise) {
  oracle::Rng rng(12);
  for (int t = 0; t < 300; ++t) {
    Perm p = random_z_perm(rng), q = random_z_perm(rng);
    Perm pq = compose(p, q), pi = inverse(p);
    for (Letter x = -12; x <= 12; ++x) {
      ASSERT_EQ(pq(x), p(q(x)));
      ASSERT_EQ(pi(p(x)), x);
      ASSERT_EQ(p(pi(x)), x);
    }
    EXPECT_EQ(compose(p, pi), Perm::identity(0));
    EXPECT_EQ(compose(compose(p, q), pi), compose(p, compose(q, pi)));
  }
}

TEST(Perm, RejectsNonBijections) {
  EXPECT_THROW(Perm::from_table(3, 0, {{0, 1}, {1, 1}}), AlphabetError);
  EXPECT_THROW(Perm::from_table(3, 0, {{0, 1}}), AlphabetError);
  EXPECT_THROW(Perm::from_table(2, 1, {}), AlphabetError);
  EXPECT_THROW(Perm::from_cycles(3, {{0, 1}, {1, 2}}), AlphabetError);
}

TEST(Perm, RenderSyntax) {
  auto z = Alphabet::integers();
  EXPECT_EQ(render(Perm::identity(0), z), "id");
  EXPECT_EQ(render(Perm::translation(3), z), "shift 3");
  EXPECT_EQ(render(Perm::from_cycles(0, {{1, 0}}, -1), z), "shift -1 * cycles (0 1)");
  EXPECT_EQ(render(Perm::from_cycles(4, {{2, 3}, {0, 1}}), Alphabet::range(4)), "cycles (0 1)(2 3)");
}

TEST(Perm, Cycles) {
  Perm p = Perm::from_cycles(5, {{3, 1, 4}});
  ASSERT_EQ(p.cycles().size(), 1u);
  EXPECT_EQ(p.cycles()[0], (std::vector<Letter>{1, 4, 3}));
  EXPECT_EQ(p.support(), (std::vector<Letter>{1, 3, 4}));
}

TEST(PClass, Membership) {
  auto trans = PClass::parse("trans-fin");
  auto fin = PClass::parse("fin-supp");
  auto triv = PClass::parse("trivial");
  Perm t = Perm::translation(2);
  Perm c = Perm::from_cycles(0, {{0, 5}});
  EXPECT_TRUE(in_class(t, trans));
  EXPECT_FALSE(in_class(t, fin));
  EXPECT_TRUE(in_class(c, fin));
  EXPECT_TRUE(in_class(compose(t, c), trans));
  EXPECT_FALSE(in_class(c, triv));
  EXPECT_TRUE(in_class(Perm::identity(0), triv));
  EXPECT_EQ(trans.name(), "trans-fin");
  EXPECT_THROW(PClass::parse("nope"), Error);
}
