#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "selfsim/activity.hpp"
#include "selfsim/ends.hpp"
#include "selfsim/recurrence.hpp"
#include "selfsim/schreier.hpp"

namespace selfsim {

/// A finitely generated group of finite-state automorphisms with its permutation class.
struct GroupSpec {
  std::string name;
  std::vector<TreeAutomorphism> generators;
  std::vector<std::string> generator_names;
  PClass p_class;
};

enum class Status { Certified, Evidence, Unknown, Violated };

inline std::string to_string(Status s) {
  switch (s) {
    case Status::Certified: return "certified";
    case Status::Evidence: return "evidence";
    case Status::Unknown: return "unknown";
    case Status::Violated: return "violated";
  }
  return "?";
}

enum class Verdict { CriterionSatisfied, SupportedByEvidence, HypothesisViolated, Inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::CriterionSatisfied: return "criterion-satisfied";
    case Verdict::SupportedByEvidence: return "supported-by-evidence";
    case Verdict::HypothesisViolated: return "hypothesis-violated";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

inline int exit_code(Verdict v) {
  switch (v) {
    case Verdict::CriterionSatisfied: return 0;
    case Verdict::SupportedByEvidence: return 2;
    case Verdict::HypothesisViolated: return 3;
    case Verdict::Inconclusive: return 4;
  }
  return 4;
}

struct CriterionConfig {
  /// Orbital balls are built at radii 2, 4, 8, ... up to this cap.
  std::size_t orbital_radius_cap = 16;
  /// Word length bound for the isotropy check.
  std::size_t isotropy_budget = 4;
  /// Elements taken from each end of the enumeration for the pairwise checks.
  std::size_t isotropy_pair_sample = 24;
  /// Limit on the number of stabilization steps per element.
  std::size_t stabilization_cap = 256;
  /// Evidence walks for classes without a certified recurrence argument.
  std::size_t walk_steps = 2000;
  std::size_t walk_trials = 2000;
  std::uint64_t walk_seed = 1;
  std::size_t p_radius_cap = 32;
};

struct GeneratorCheck {
  std::string name;
  std::string classification;
  bool finite_state = true;
  bool bounded = false;
  std::uint64_t sup_activity = 0;
  bool outputs_in_p = false;
  std::size_t states = 0;
};

struct Normalization {
  std::size_t level = 1;
  std::size_t cycle_lcm = 1;
  std::size_t max_structure_level = 0;
  std::vector<TreeAutomorphism> closed;
  std::vector<std::string> closed_names;
  std::size_t directed_sections = 0;
  std::size_t finitary_sections = 0;
  /// Every level-N section of every closed element is finitary or directed along a
  /// constant letter of X^N.
  bool verified = false;
};

struct PRecurrence {
  Status status = Status::Unknown;
  std::string reason;
  std::optional<double> cut_bound;
  std::optional<RecurrenceProfile> profile;
  std::optional<WalkStats> walk;
};

struct SingularDiagnostics {
  EndPoint point;
  std::string text;
  std::vector<std::size_t> radii;
  std::vector<std::size_t> ball_sizes;
  std::optional<RecurrenceProfile> profile;
  bool finite_orbit = false;
  Status structural = Status::Unknown;
  std::string derivation;
};

struct IsotropyRecord {
  EndPoint point;
  std::string text;
  std::size_t budget = 0;
  std::size_t elements = 0;
  std::size_t fixing = 0;
  std::size_t max_stabilization = 0;
  bool all_stabilized = true;
  bool off_path_finitary = true;
  std::size_t homomorphism_pairs = 0;
  bool homomorphism_holds = true;
  std::size_t bound_pairs = 0;
  std::size_t bound_violations = 0;
  Status status = Status::Unknown;
};

struct Condition {
  std::string name;
  Status status = Status::Unknown;
  std::string detail;
};

struct CriterionReport {
  std::string group;
  std::string p_class;
  std::vector<GeneratorCheck> generators;
  std::optional<std::string> violation;
  std::optional<Normalization> normalization;
  std::optional<PRecurrence> p_recurrence;
  std::vector<std::string> singular_points;
  std::vector<SingularDiagnostics> orbital;
  std::vector<IsotropyRecord> isotropy;
  std::vector<Condition> conditions;
  Verdict verdict = Verdict::Inconclusive;

  std::string text() const;
  nlohmann::ordered_json json() const;
};

// ---------------------------------------------------------------------------------------

inline std::vector<GeneratorCheck> check_generators(const GroupSpec& G) {
  std::vector<GeneratorCheck> out;
  for (std::size_t i = 0; i < G.generators.size(); ++i) {
    const auto& g = G.generators[i];
    GeneratorCheck c;
    c.name = i < G.generator_names.size() ? G.generator_names[i] : g.name();
    auto cls = classify(g);
    c.classification = cls.to_string();
    c.bounded = cls.bounded();
    c.sup_activity = cls.kind == ActivityKind::Bounded ? cls.sup : 0;
    c.outputs_in_p = in_aut_p(g, G.p_class);
    c.states = g.state_count();
    out.push_back(std::move(c));
  }
  return out;
}

/// Closes `gens` under sections and inverses; the identity is included.
inline std::vector<TreeAutomorphism> close_under_sections(const std::vector<TreeAutomorphism>& gens) {
  std::set<TreeAutomorphism> seen;
  std::vector<TreeAutomorphism> queue;
  auto push = [&](const TreeAutomorphism& g) {
    if (seen.insert(g).second) queue.push_back(g);
  };
  for (const auto& g : gens) push(g);
  for (std::size_t i = 0; i < queue.size(); ++i) {
    TreeAutomorphism g = queue[i];
    for (StateId s = 0; s < g.state_count(); ++s) push(state_automorphism(g, s));
    push(inverse(g));
  }
  if (!gens.empty()) push(TreeAutomorphism::identity(gens.front().alphabet()));
  return {seen.begin(), seen.end()};
}

/// Level-N sections of g as (word, state) pairs, nontrivial ones only.
inline std::vector<std::pair<Word, StateId>> nontrivial_sections(const SectionGraph& graph, StateId start,
                                                                 std::size_t n) {
  std::vector<std::pair<Word, StateId>> frontier;
  if (start != kIdentityState) frontier.emplace_back(Word{}, start);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::pair<Word, StateId>> next;
    for (const auto& [w, s] : frontier)
      for (auto e : graph.edges(s)) {
        Word v = w;
        v.push_back(e.letter);
        next.emplace_back(std::move(v), e.target);
      }
    frontier = std::move(next);
  }
  return frontier;
}

/// Passes to X^N: N is the least multiple of the lcm of all directed cycle lengths that
/// is at least every structure level, and the generators are closed under sections and
/// inverses.
inline Normalization normalize_generators(const GroupSpec& G) {
  Normalization n;
  n.closed = close_under_sections(G.generators);
  for (const auto& g : n.closed) {
    SectionGraph graph(g);
    for (auto len : cycle_lengths(graph)) n.cycle_lcm = std::lcm(n.cycle_lcm, len);
    n.max_structure_level = std::max(n.max_structure_level, structure_level(g));
  }
  n.level = n.cycle_lcm;
  while (n.level < n.max_structure_level) n.level += n.cycle_lcm;

  n.verified = true;
  for (const auto& g : n.closed) {
    n.closed_names.push_back(g.is_identity() ? "e" : g.name());
    SectionGraph graph(g);
    for (const auto& [w, s] : nontrivial_sections(graph, g.initial(), n.level)) {
      if (graph.finitary(s)) {
        ++n.finitary_sections;
        continue;
      }
      if (!graph.on_cycle(s)) {
        n.verified = false;
        continue;
      }
      // directed: the cycle word repeated to length N returns to s, all else finitary
      Word c = cycle_word(graph, s);
      Word x;
      while (x.size() < n.level) x.insert(x.end(), c.begin(), c.end());
      for (const auto& [v, t] : nontrivial_sections(graph, s, n.level)) {
        if (v == x) {
          if (t != s) n.verified = false;
        } else if (!graph.finitary(t)) {
          n.verified = false;
        }
      }
      ++n.directed_sections;
    }
  }
  return n;
}

/// Recurrence of the action of P on X, certified for the built-in classes.
inline PRecurrence p_recurrence_evidence(const PClass& cls, const std::vector<Perm>& sample, const Alphabet& alphabet,
                                         const CriterionConfig& cfg = {}) {
  PRecurrence r;
  if (cls.recurrence == Recurrence::NonRecurrent) {
    r.status = Status::Violated;
    r.reason = "the class is declared to act non-recurrently";
    return r;
  }
  if (cls.recurrence == Recurrence::Recurrent) {
    switch (cls.kind) {
      case PClassKind::FullFinite:
        r.status = Status::Certified;
        r.reason = "finite alphabet: every orbit is finite";
        return r;
      case PClassKind::FiniteSupport:
        r.status = Status::Certified;
        r.reason = "finitely supported permutations: every orbit of a finitely generated subgroup is finite";
        return r;
      case PClassKind::Trivial:
        r.status = Status::Certified;
        r.reason = "trivial action";
        return r;
      case PClassKind::TranslationsWithFiniteSupport: {
        double bound = 0.0;
        for (const auto& p : symmetrize(sample))
          bound += static_cast<double>(std::abs(p.shift()) + static_cast<Letter>(p.table().size()));
        bound *= 2.0;
        r.status = Status::Certified;
        r.cut_bound = bound;
        r.reason = "Nash-Williams: every cut between far-apart intervals has conductance at most " +
                   format_real(bound) + ", so the sum of reciprocals diverges";
        return r;
      }
    }
  }
  // no certified argument available: collect numeric evidence only
  r.status = Status::Evidence;
  r.reason = "recurrence of the class is not known; numeric evidence only";
  if (sample.empty()) return r;
  std::vector<double> levels, values;
  const Letter base = 0;
  for (std::size_t radius = 1; radius <= cfg.p_radius_cap; ++radius) {
    auto ball = p_schreier_ball(sample, alphabet, base, radius);
    if (ball.network.boundary().empty()) break;
    levels.push_back(static_cast<double>(radius));
    values.push_back(effective_resistance_to_boundary(ball.network, 0));
  }
  RecurrenceProfile profile;
  for (double l : levels) profile.levels.push_back(static_cast<std::size_t>(l));
  profile.resistance = values;
  profile.fit = fit_growth(levels, values);
  profile.verdict = verdict_from(profile.fit);
  r.profile = profile;
  auto ball = p_schreier_ball(sample, alphabet, base, cfg.p_radius_cap);
  r.walk = random_walk(ball.network, 0, cfg.walk_steps, cfg.walk_trials, cfg.walk_seed);
  return r;
}

/// Orbital recurrence at one singular point: R_eff profile over growing balls, plus the
/// structural derivation from the recurrence of P.
inline SingularDiagnostics condition3_diagnostics(const std::vector<TreeAutomorphism>& gens, const EndPoint& w,
                                                  const Alphabet& alphabet, Status p_status,
                                                  const CriterionConfig& cfg = {}) {
  SingularDiagnostics d{w, w.to_string(alphabet), {}, {}, std::nullopt, false, Status::Unknown, {}};
  std::vector<double> x, y;
  for (std::size_t r = 2; r <= cfg.orbital_radius_cap; r *= 2) {
    auto ball = orbital_ball(gens, w, r);
    d.radii.push_back(r);
    d.ball_sizes.push_back(ball.points.size());
    if (ball.network.boundary().empty()) {
      d.finite_orbit = true;
      break;
    }
    x.push_back(static_cast<double>(r));
    y.push_back(effective_resistance_to_boundary(ball.network, 0));
  }
  if (!x.empty()) {
    RecurrenceProfile p;
    for (double r : x) p.levels.push_back(static_cast<std::size_t>(r));
    p.resistance = y;
    p.fit = fit_growth(x, y);
    p.verdict = verdict_from(p.fit);
    d.profile = p;
  }
  d.structural = p_status;
  d.derivation =
      "P recurrent => iterated wreath products P_n act recurrently on X^n => G acts recurrently on every level "
      "=> bounded activity gives recurrence on every orbital Schreier graph";
  return d;
}

namespace detail {

struct Stabilization {
  bool stable = false;
  std::size_t level = 0;
  StateId state = kIdentityState;
};

/// Sections of g along w at the boundaries of X^N letters after the prefix of w.
inline Stabilization stabilize(const TreeAutomorphism& g, const EndPoint& w, std::size_t N, std::size_t cap) {
  const auto& a = g.automaton();
  StateId s = g.initial();
  for (Letter x : w.prefix()) s = a.next(s, x);
  Word block;
  while (block.size() < N) block.insert(block.end(), w.period().begin(), w.period().end());
  block.resize(N);
  std::map<StateId, std::size_t> seen;
  for (std::size_t k = 0; k <= cap; ++k) {
    auto [it, fresh] = seen.emplace(s, k);
    if (!fresh) {
      if (k == it->second + 1) return {true, it->second, s};
      return {false, k, s};
    }
    for (Letter x : block) s = a.next(s, x);
  }
  return {false, cap, s};
}

}  // namespace detail

/// Checks at an end that is eventually constant in X^N that the sections of every short
/// word over the closed generators stabilize along w, that off-path sections of the stable
/// section are finitary, and that g -> stable section is multiplicative on fixers of w.
inline IsotropyRecord isotropy_embedding(const std::vector<TreeAutomorphism>& closed, const EndPoint& w,
                                         std::size_t N, const Alphabet& alphabet, std::size_t budget,
                                         const CriterionConfig& cfg = {}) {
  IsotropyRecord rec{w, w.to_string(alphabet), budget};
  if (!w.eventually_constant_in_blocks(N)) {
    rec.status = Status::Unknown;
    rec.all_stabilized = false;
    return rec;
  }
  // ball of radius `budget` in the Cayley graph, deduplicated by canonical form
  std::vector<TreeAutomorphism> letters;
  for (const auto& g : closed)
    if (!g.is_identity()) letters.push_back(g);
  std::set<TreeAutomorphism> seen;
  std::vector<TreeAutomorphism> elements{TreeAutomorphism::identity(alphabet)};
  seen.insert(elements.front());
  std::size_t layer_begin = 0;
  for (std::size_t len = 0; len < budget; ++len) {
    std::size_t layer_end = elements.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i)
      for (const auto& s : letters) {
        TreeAutomorphism p = compose(s, elements[i]);
        if (seen.insert(p).second) elements.push_back(p);
      }
    layer_begin = layer_end;
  }
  rec.elements = elements.size();

  Word block;
  while (block.size() < N) block.insert(block.end(), w.period().begin(), w.period().end());
  block.resize(N);

  struct Info {
    detail::Stabilization st;
    bool fixes = false;
  };
  std::vector<Info> info;
  for (const auto& g : elements) {
    Info in{detail::stabilize(g, w, N, cfg.stabilization_cap), evaluate_end(g, w) == w};
    if (!in.st.stable) {
      rec.all_stabilized = false;
    } else {
      rec.max_stabilization = std::max(rec.max_stabilization, in.st.level);
      SectionGraph graph(g);
      for (const auto& [v, t] : nontrivial_sections(graph, in.st.state, N))
        if (v != block && !graph.finitary(t)) rec.off_path_finitary = false;
    }
    rec.fixing += in.fixes ? 1 : 0;
    info.push_back(in);
  }

  // pairwise checks on a deterministic sample: the first and last few elements
  std::vector<std::size_t> sample;
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (i < cfg.isotropy_pair_sample || i + cfg.isotropy_pair_sample >= elements.size()) sample.push_back(i);
  for (std::size_t i : sample)
    for (std::size_t j : sample) {
      if (!info[i].st.stable || !info[j].st.stable) continue;
      TreeAutomorphism gh = compose(elements[i], elements[j]);
      auto st = detail::stabilize(gh, w, N, cfg.stabilization_cap);
      ++rec.bound_pairs;
      if (!st.stable || st.level > std::max(info[i].st.level, info[j].st.level) + 1) ++rec.bound_violations;
      if (info[i].fixes && info[j].fixes) {
        ++rec.homomorphism_pairs;
        auto lhs = state_automorphism(gh, st.state);
        auto rhs = compose(state_automorphism(elements[i], info[i].st.state),
                           state_automorphism(elements[j], info[j].st.state));
        if (!st.stable || !(lhs == rhs)) rec.homomorphism_holds = false;
      }
    }
  rec.status = rec.all_stabilized && rec.off_path_finitary && rec.homomorphism_holds ? Status::Certified
                                                                                      : Status::Unknown;
  return rec;
}

inline CriterionReport run_criterion(const GroupSpec& G, const CriterionConfig& cfg = {}) {
  CriterionReport rep;
  rep.group = G.name;
  rep.p_class = G.p_class.name();
  if (G.generators.empty()) {
    rep.violation = "no generators";
    rep.verdict = Verdict::HypothesisViolated;
    return rep;
  }
  const Alphabet alphabet = G.generators.front().alphabet();
  for (const auto& g : G.generators)
    if (!(g.alphabet() == alphabet)) throw AlphabetError("generators act on different alphabets");

  rep.generators = check_generators(G);
  for (const auto& c : rep.generators) {
    if (!c.bounded) {
      rep.violation = "generator " + c.name + " is not of bounded activity: " + c.classification;
      break;
    }
    if (!c.outputs_in_p) {
      rep.violation = "generator " + c.name + " has a section whose root permutation is outside " + rep.p_class;
      break;
    }
  }
  if (rep.violation) {
    rep.verdict = Verdict::HypothesisViolated;
    return rep;
  }

  rep.normalization = normalize_generators(G);
  const auto& norm = *rep.normalization;

  std::vector<Perm> outputs;
  for (const auto& g : norm.closed)
    for (StateId s = 1; s < g.state_count(); ++s) {
      const Perm& p = g.automaton().state(s).output;
      if (!p.is_identity() && std::find(outputs.begin(), outputs.end(), p) == outputs.end()) outputs.push_back(p);
    }
  std::sort(outputs.begin(), outputs.end());
  rep.p_recurrence = p_recurrence_evidence(G.p_class, outputs, alphabet, cfg);

  std::set<EndPoint> singular;
  for (const auto& g : norm.closed)
    for (const auto& w : singular_points(g)) singular.insert(w);
  for (const auto& w : singular) rep.singular_points.push_back(w.to_string(alphabet));

  std::vector<TreeAutomorphism> gens;
  for (const auto& g : norm.closed)
    if (!g.is_identity()) gens.push_back(g);
  for (const auto& w : singular)
    rep.orbital.push_back(condition3_diagnostics(gens, w, alphabet, rep.p_recurrence->status, cfg));
  for (const auto& w : singular)
    rep.isotropy.push_back(isotropy_embedding(norm.closed, w, norm.level, alphabet, cfg.isotropy_budget, cfg));

  Condition c1{"finitary part amenable", Status::Certified,
               "the germs of tail equivalences in G form a subgroup of the finitary automorphisms, a direct limit "
               "of iterated wreath products of P; P amenable: " +
                   G.p_class.amenability_justification()};
  if (!G.p_class.declared_amenable) {
    c1.status = Status::Violated;
    c1.detail = "P is not declared amenable";
  }
  if (!norm.verified) {
    c1.status = Status::Unknown;
    c1.detail = "level-N normal form could not be verified";
  }
  Condition c2{"finitely many singular points", Status::Certified,
               std::to_string(singular.size()) + " singular point(s); bounded activity keeps germs in the tail "
                                                 "groupoid away from them"};
  Condition c3{"recurrent orbital Schreier graphs", rep.p_recurrence->status, rep.p_recurrence->reason};
  if (singular.empty() && c3.status != Status::Violated) {
    c3.status = Status::Certified;
    c3.detail = "no singular points; the condition is vacuous";
  }
  Condition c4{"amenable isotropy groups", Status::Certified,
               "isotropy groups embed into a wreath product of finitary automorphisms over a point stabilizer of "
               "P_N"};
  if (!G.p_class.declared_amenable) {
    c4.status = Status::Violated;
    c4.detail = "P is not declared amenable";
  }
  for (const auto& r : rep.isotropy)
    if (r.status != Status::Certified && c4.status == Status::Certified) {
      c4.status = Status::Unknown;
      c4.detail = "stabilization or embedding check failed at " + r.text;
    }
  rep.conditions = {c1, c2, c3, c4};

  bool violated = false, unknown = false, evidence = false;
  for (const auto& c : rep.conditions) {
    violated |= c.status == Status::Violated;
    unknown |= c.status == Status::Unknown;
    evidence |= c.status == Status::Evidence;
  }
  rep.verdict = violated   ? Verdict::HypothesisViolated
                : unknown  ? Verdict::Inconclusive
                : evidence ? Verdict::SupportedByEvidence
                           : Verdict::CriterionSatisfied;
  if (violated)
    for (const auto& c : rep.conditions)
      if (c.status == Status::Violated) {
        rep.violation = c.name + ": " + c.detail;
        break;
      }
  return rep;
}

inline std::string CriterionReport::text() const {
  std::ostringstream out;
  out << "group: " << (group.empty() ? "(unnamed)" : group) << "\n";
  out << "permutation class: " << p_class << "\n";
  out << "generators:\n";
  for (const auto& g : generators)
    out << "  " << g.name << ": " << g.classification << ", states " << g.states
        << ", outputs in class: " << (g.outputs_in_p ? "yes" : "no") << "\n";
  if (normalization) {
    const auto& n = *normalization;
    out << "normalization: N = " << n.level << " (cycle lcm " << n.cycle_lcm << ", structure level "
        << n.max_structure_level << "), closed set of " << n.closed.size() << " elements, "
        << n.directed_sections << " directed and " << n.finitary_sections << " finitary level-N sections, "
        << (n.verified ? "verified" : "NOT verified") << "\n";
  }
  if (p_recurrence) {
    out << "recurrence of P: " << to_string(p_recurrence->status) << " (" << p_recurrence->reason << ")\n";
    if (p_recurrence->profile) out << "  R_eff profile: " << p_recurrence->profile->summary() << "\n";
    if (p_recurrence->walk)
      out << "  return fraction: " << format_real(p_recurrence->walk->return_fraction) << "\n";
  }
  if (normalization) {
    out << "singular points:";
    if (singular_points.empty()) out << " none";
    for (const auto& s : singular_points) out << " " << s;
    out << "\n";
  }
  for (const auto& d : orbital) {
    out << "  orbit of " << d.text << ": radii";
    for (std::size_t i = 0; i < d.radii.size(); ++i) out << " " << d.radii[i] << "(" << d.ball_sizes[i] << ")";
    if (d.finite_orbit) out << ", finite orbit";
    if (d.profile) {
      out << ", R_eff";
      for (double r : d.profile->resistance) out << " " << format_measured(r);
      out << ", " << d.profile->summary();
    }
    out << ", structural " << to_string(d.structural) << "\n";
  }
  for (const auto& r : isotropy)
    out << "  isotropy at " << r.text << ": " << r.elements << " elements up to length " << r.budget << ", "
        << r.fixing << " fix the point, stabilization level <= " << r.max_stabilization
        << (r.all_stabilized ? "" : " (some did not stabilize)")
        << (r.off_path_finitary ? ", off-path sections finitary" : ", NON-finitary off-path section") << ", "
        << r.homomorphism_pairs << " homomorphism pairs " << (r.homomorphism_holds ? "ok" : "FAILED") << ", "
        << r.bound_violations << "/" << r.bound_pairs << " pairs exceed max level + 1\n";
  for (std::size_t i = 0; i < conditions.size(); ++i)
    out << "condition " << i + 1 << " (" << conditions[i].name << "): " << to_string(conditions[i].status) << " - "
        << conditions[i].detail << "\n";
  if (violation) out << "violation: " << *violation << "\n";
  out << "verdict: " << to_string(verdict) << "\n";
  return out.str();
}

inline nlohmann::ordered_json CriterionReport::json() const {
  using nlohmann::ordered_json;
  ordered_json j;
  j["schema"] = "selfsim.criterion/1";
  j["group"] = group;
  j["p_class"] = p_class;
  j["generators"] = ordered_json::array();
  for (const auto& g : generators)
    j["generators"].push_back({{"name", g.name},
                               {"classification", g.classification},
                               {"finite_state", g.finite_state},
                               {"bounded", g.bounded},
                               {"sup_activity", g.sup_activity},
                               {"outputs_in_p", g.outputs_in_p},
                               {"states", g.states}});
  if (normalization) {
    const auto& n = *normalization;
    j["normalization"] = {{"level", n.level},
                          {"cycle_lcm", n.cycle_lcm},
                          {"max_structure_level", n.max_structure_level},
                          {"closed", n.closed_names},
                          {"directed_sections", n.directed_sections},
                          {"finitary_sections", n.finitary_sections},
                          {"verified", n.verified}};
  }
  if (p_recurrence) {
    ordered_json p{{"status", to_string(p_recurrence->status)}, {"reason", p_recurrence->reason}};
    if (p_recurrence->cut_bound) p["cut_bound"] = *p_recurrence->cut_bound;
    if (p_recurrence->profile) {
      p["levels"] = p_recurrence->profile->levels;
      p["resistance"] = p_recurrence->profile->resistance;
      p["assessment"] = p_recurrence->profile->summary();
    }
    if (p_recurrence->walk)
      p["walk"] = {{"trials", p_recurrence->walk->trials},
                   {"return_fraction", p_recurrence->walk->return_fraction},
                   {"mean_return_time", p_recurrence->walk->mean_return_time}};
    j["p_recurrence"] = p;
  }
  j["singular_points"] = singular_points;
  j["orbital"] = ordered_json::array();
  for (const auto& d : orbital) {
    ordered_json o{{"point", d.text},
                   {"radii", d.radii},
                   {"ball_sizes", d.ball_sizes},
                   {"finite_orbit", d.finite_orbit},
                   {"structural", to_string(d.structural)},
                   {"derivation", d.derivation}};
    if (d.profile) {
      o["resistance"] = d.profile->resistance;
      o["assessment"] = d.profile->summary();
    }
    j["orbital"].push_back(o);
  }
  j["isotropy"] = ordered_json::array();
  for (const auto& r : isotropy)
    j["isotropy"].push_back({{"point", r.text},
                             {"budget", r.budget},
                             {"elements", r.elements},
                             {"fixing", r.fixing},
                             {"max_stabilization", r.max_stabilization},
                             {"all_stabilized", r.all_stabilized},
                             {"off_path_finitary", r.off_path_finitary},
                             {"homomorphism_pairs", r.homomorphism_pairs},
                             {"homomorphism_holds", r.homomorphism_holds},
                             {"bound_pairs", r.bound_pairs},
                             {"bound_violations", r.bound_violations},
                             {"status", to_string(r.status)}});
  j["conditions"] = ordered_json::array();
  for (const auto& c : conditions)
    j["conditions"].push_back({{"name", c.name}, {"status", to_string(c.status)}, {"detail", c.detail}});
  if (violation) j["violation"] = *violation;
  j["verdict"] = to_string(verdict);
  j["exit_code"] = exit_code(verdict);
  return j;
}

}  // namespace selfsim
