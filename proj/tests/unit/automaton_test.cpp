#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "support/oracles.hpp"

using namespace selfsim;

namespace {

TreeAutomorphism corpus_aut(const std::string& name) { return *oracle::corpus_document(name).initial; }

std::vector<TreeAutomorphism> corpus_group(const std::string& name) {
  return oracle::corpus_document(name).generators;
}

/// Action on all words of length <= n agrees.
bool same_action(const TreeAutomorphism& g, const TreeAutomorphism& h, std::size_t n) {
  for (const auto& w : oracle::words_up_to(g.alphabet().size(), n))
    if (evaluate(g, w) != evaluate(h, w)) return false;
  return true;
}

}  // namespace

TEST(Automaton, OdometerAddsOne) {
  auto a = corpus_aut("odometer");
  auto z = a.alphabet();
  EXPECT_EQ(z.format_word(evaluate(a, z.parse_word("1101"))), "0011");
  EXPECT_EQ(z.format_word(evaluate(a, z.parse_word("111"))), "000");
  for (const auto& w : oracle::all_words(2, 8)) {
    std::uint64_t n = 0, m = 0;
    auto img = evaluate(a, w);
    for (std::size_t i = 0; i < w.size(); ++i) {
      n |= static_cast<std::uint64_t>(w[i]) << i;
      m |= static_cast<std::uint64_t>(img[i]) << i;
    }
    EXPECT_EQ(m, (n + 1) % 256);
  }
}

TEST(Automaton, EvaluateMatchesStateTable) {
  oracle::Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    auto g = oracle::random_automaton(rng, 2 + static_cast<std::int64_t>(oracle::pick(rng, 2)), 4);
    for (const auto& w : oracle::words_up_to(g.alphabet().size(), 4))
      ASSERT_EQ(evaluate(g, w), oracle::run(g.automaton(), g.initial(), w));
  }
}

TEST(Automaton, CanonicalFormIsActionEquality) {
  // a redundant presentation of the odometer: two states doing the same thing
  Automaton m(Alphabet::range(2));
  auto p = m.add_state("p", Perm::from_cycles(2, {{0, 1}}));
  auto q = m.add_state("q", Perm::from_cycles(2, {{0, 1}}));
  m.set_transition(p, 1, q);
  m.set_transition(q, 1, p);
  auto g = TreeAutomorphism::from(m, p);
  EXPECT_EQ(g, corpus_aut("odometer"));
  EXPECT_EQ(g.state_count(), 2u);

  Automaton idm(Alphabet::range(2));
  auto i1 = idm.add_state("i1", Perm::identity(2));
  auto i2 = idm.add_state("i2", Perm::identity(2));
  idm.set_transition(i1, 0, i2);
  idm.set_transition(i2, 1, i1);
  EXPECT_TRUE(TreeAutomorphism::from(idm, i1).is_identity());
  EXPECT_TRUE(is_identity_state(idm, i1));
}

TEST(Automaton, IntegerFallbackCanonicalization) {
  auto g = corpus_aut("z-directed");
  const auto& a = g.automaton();
  EXPECT_EQ(a.state(g.initial()).fallback, kIdentityState);
  EXPECT_EQ(a.next(g.initial(), 0), g.initial());
  EXPECT_EQ(a.next(g.initial(), 5), kIdentityState);
  EXPECT_EQ(evaluate(g, {0, 0, 3}), (Word{1, 1, 4}));
  EXPECT_EQ(evaluate(g, {-2, 0}), (Word{-1, 0}));
}

TEST(Automaton, SectionsAndDefiningIdentity) {
  oracle::Rng rng(21);
  for (int t = 0; t < 60; ++t) {
    auto g = oracle::random_bounded(rng, 2 + static_cast<std::int64_t>(oracle::pick(rng, 2)));
    const auto k = g.alphabet().size();
    for (const auto& v : oracle::words_up_to(k, 3)) {
      auto gv = section(g, v);
      for (const auto& w : oracle::words_up_to(k, 3)) {
        Word vw = v;
        vw.insert(vw.end(), w.begin(), w.end());
        Word expect = evaluate(g, v);
        auto tail = evaluate(gv, w);
        expect.insert(expect.end(), tail.begin(), tail.end());
        ASSERT_EQ(evaluate(g, vw), expect);
      }
    }
  }
}

TEST(Automaton, ComposeAndInverseAgreeWithAction) {
  oracle::Rng rng(22);
  for (int t = 0; t < 60; ++t) {
    const std::int64_t k = 2 + static_cast<std::int64_t>(oracle::pick(rng, 2));
    auto g = oracle::random_automaton(rng, k, 3), h = oracle::random_automaton(rng, k, 3);
    auto gh = compose(g, h);
    auto gi = inverse(g);
    for (const auto& w : oracle::words_up_to(k, 5)) {
      ASSERT_EQ(evaluate(gh, w), evaluate(g, evaluate(h, w)));
      ASSERT_EQ(evaluate(gi, evaluate(g, w)), w);
    }
    EXPECT_TRUE(compose(g, gi).is_identity());
    EXPECT_EQ(compose(compose(g, h), gi), compose(g, compose(h, gi)));
  }
}

TEST(Automaton, IntegerComposeAgreesWithAction) {
  auto g = corpus_aut("z-directed");
  auto gens = corpus_group("z-directed-group");
  for (const auto& h : gens) {
    auto gh = compose(g, h);
    for (Letter x = -3; x <= 3; ++x)
      for (Letter y = -3; y <= 3; ++y)
        for (Letter z : {Letter{0}, Letter{1}, Letter{-1}}) {
          Word w{x, y, z};
          ASSERT_EQ(evaluate(gh, w), evaluate(g, evaluate(h, w)));
          ASSERT_EQ(evaluate(inverse(h), evaluate(h, w)), w);
        }
  }
}

TEST(Automaton, ProductCapIsEnforced) {
  oracle::Rng rng(23);
  auto g = oracle::random_automaton(rng, 3, 6), h = oracle::random_automaton(rng, 3, 6);
  EXPECT_THROW(compose(g, h, 2), ResourceError);
}

TEST(Format, RoundTripRandom) {
  oracle::Rng rng(24);
  for (int t = 0; t < 40; ++t) {
    auto g = oracle::random_automaton(rng, 3, 4);
    auto text = render_automaton(g);
    EXPECT_EQ(parse_automaton(text), g) << text;
  }
  auto z = corpus_aut("z-directed");
  EXPECT_EQ(parse_automaton(render_automaton(z)), z);
}

TEST(Format, GroupRoundTrip) {
  auto doc = oracle::corpus_document("grigorchuk");
  auto text = render_group(doc.generators, doc.name, doc.pclass);
  auto back = parse_document(text);
  ASSERT_EQ(back.generators.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(back.generators[i], doc.generators[i]);
  EXPECT_EQ(back.pclass->name(), "full-finite");
  EXPECT_EQ(back.name, "grigorchuk");
}

TEST(Format, ErrorsCarryPositions) {
  try {
    parse_document("alphabet 0 1\nstate a output cycles (0 2)\ninitial a\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_document("alphabet 0 1\nstate a output id\n  on 0 -> nowhere\ninitial a\n"), ParseError);
  EXPECT_THROW(parse_document("alphabet 0 1\nstate a output shift 1\ninitial a\n"), ParseError);
  EXPECT_THROW(parse_automaton("alphabet 0 1\nstate a output id\ngenerators a\n"), ParseError);
}

TEST(Corpus, EmbeddedTextMatchesFiles) {
  for (const auto& e : corpus::entries()) {
    if (e.file.empty()) continue;
    std::ifstream in(std::string(SELFSIM_CORPUS_DIR) + "/" + std::string(e.file));
    ASSERT_TRUE(in) << e.file;
    std::ostringstream s;
    s << in.rdbuf();
    EXPECT_EQ(s.str(), std::string(e.text)) << e.file;
  }
}

TEST(Corpus, ClassificationsMatchEntries) {
  for (const auto& e : corpus::entries()) {
    if (e.classification.empty()) continue;
    EXPECT_EQ(classify(corpus_aut(std::string(e.name))).to_string(), e.classification) << e.name;
  }
}

TEST(Activity, PathCountingMatchesEnumeration) {
  for (const auto& [name, g] : oracle::corpus_elements()) {
    auto prof = activity_profile(g, 10);
    for (std::size_t n = 0; n <= 10; ++n) {
      auto brute = oracle::brute_activity(g, n);
      ASSERT_TRUE(brute.has_value()) << name;
      EXPECT_EQ(prof[n].value, *brute) << name << " n=" << n;
      EXPECT_EQ(activity(g, n).value, *brute) << name << " n=" << n;
    }
  }
  oracle::Rng rng(31);
  for (int t = 0; t < 40; ++t) {
    auto g = oracle::random_automaton(rng, 2, 3);
    for (std::size_t n = 0; n <= 8; ++n) ASSERT_EQ(activity(g, n).value, *oracle::brute_activity(g, n));
  }
}

TEST(Activity, ClassifyKinds) {
  EXPECT_EQ(classify(corpus_aut("odometer")).to_string(), "Bounded(1)");
  EXPECT_EQ(classify(corpus_aut("grigorchuk-a")).to_string(), "Finitary(1)");
  EXPECT_EQ(classify(corpus_aut("grigorchuk-b")).to_string(), "Bounded(2)");
  EXPECT_EQ(classify(corpus_aut("z-directed")).to_string(), "Bounded(1)");

  // two letters both looping: alpha_n = 2^n
  Automaton ex(Alphabet::range(2));
  auto s = ex.add_state("s", Perm::from_cycles(2, {{0, 1}}));
  ex.set_transition(s, 0, s);
  ex.set_transition(s, 1, s);
  EXPECT_EQ(classify(TreeAutomorphism::from(ex, s)).kind, ActivityKind::Exponential);

  // s -> s on 0 and s -> odometer on 1: alpha_n = n + 1
  Automaton poly(Alphabet::range(2));
  auto o = poly.add_state("o", Perm::from_cycles(2, {{0, 1}}));
  poly.set_transition(o, 1, o);
  auto p = poly.add_state("p", Perm::identity(2));
  poly.set_transition(p, 0, p);
  poly.set_transition(p, 1, o);
  auto pc = classify(TreeAutomorphism::from(poly, p));
  EXPECT_EQ(pc.kind, ActivityKind::PolynomialDegree);
  EXPECT_EQ(pc.degree, 1u);
  for (std::size_t n = 0; n < 6; ++n) EXPECT_EQ(activity(TreeAutomorphism::from(poly, p), n).value, n + 1);

  // fallback to a nontrivial state on Z: infinitely many sections at level 1
  Automaton wild(Alphabet::integers());
  auto w = wild.add_state("w", Perm::translation(1));
  auto t = wild.add_state("t", Perm::translation(1));
  wild.set_fallback(w, t);
  auto wc = classify(TreeAutomorphism::from(wild, w));
  EXPECT_EQ(wc.kind, ActivityKind::InfiniteActivity);
  EXPECT_EQ(wc.level, 1u);
  EXPECT_TRUE(activity(TreeAutomorphism::from(wild, w), 1).infinite);
}

TEST(Activity, RandomBoundedStayBounded) {
  oracle::Rng rng(32);
  for (int t = 0; t < 100; ++t) {
    auto g = oracle::random_bounded(rng, 2 + static_cast<std::int64_t>(oracle::pick(rng, 2)));
    auto cls = classify(g);
    ASSERT_TRUE(cls.bounded()) << render_automaton(g);
    std::uint64_t mx = 0;
    for (std::size_t n = 0; n <= 10; ++n) mx = std::max(mx, *oracle::brute_activity(g, n));
    if (cls.kind == ActivityKind::Bounded) EXPECT_EQ(cls.sup, mx);
    if (cls.kind == ActivityKind::Finitary) EXPECT_TRUE(oracle::brute_finitary(g, cls.depth));
  }
}

TEST(Activity, StructureLevelMatchesEnumeration) {
  for (const auto& [name, g] : oracle::corpus_elements()) {
    if (!g.alphabet().is_finite()) continue;
    EXPECT_EQ(structure_level(g), oracle::brute_structure_level(g, 6, 6)) << name;
  }
  oracle::Rng rng(33);
  for (int t = 0; t < 40; ++t) {
    auto g = oracle::random_bounded(rng, 2);
    auto n = structure_level(g);
    ASSERT_LE(n, 6u);
    EXPECT_EQ(n, oracle::brute_structure_level(g, 6, 8)) << render_automaton(g);
  }
}
