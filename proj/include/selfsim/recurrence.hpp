#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "selfsim/growth.hpp"
#include "selfsim/network.hpp"
#include "selfsim/wreath.hpp"

namespace selfsim {

/// An increasing chain of finite networks X_1 c X_2 c ... Level i is a connected
/// network whose boundary is the outer shell of X_i. Vertex `source` lies in X_1.
struct Exhaustion {
  std::string name;
  std::function<Network(std::size_t)> level;
  Vertex source = 0;
};

namespace exhaustions {

/// Z truncated to [-i, i]; vertex 0 is the origin.
inline Exhaustion line() {
  return {"line",
          [](std::size_t i) {
            std::vector<NetEdge> edges;
            std::vector<std::string> labels{"0"};
            // vertex 2k-1 is +k, vertex 2k is -k
            for (std::size_t k = 1; k <= i; ++k) {
              labels.push_back(std::to_string(k));
              labels.push_back("-" + std::to_string(k));
              Vertex pos_prev = k == 1 ? 0 : 2 * k - 3;
              Vertex neg_prev = k == 1 ? 0 : 2 * k - 2;
              edges.push_back({pos_prev, 2 * k - 1, 1.0});
              edges.push_back({neg_prev, 2 * k, 1.0});
            }
            std::vector<Vertex> boundary = i == 0 ? std::vector<Vertex>{} : std::vector<Vertex>{2 * i - 1, 2 * i};
            return Network(2 * i + 1, std::move(edges), std::move(boundary), std::move(labels));
          },
          0};
}

/// Rooted tree where every vertex has `branching` children, cut at depth i.
inline Exhaustion rooted_tree(std::size_t branching) {
  return {"tree" + std::to_string(branching),
          [branching](std::size_t i) {
            std::vector<NetEdge> edges;
            std::vector<Vertex> layer{0}, boundary;
            std::size_t n = 1;
            for (std::size_t d = 0; d < i; ++d) {
              std::vector<Vertex> next;
              for (Vertex p : layer)
                for (std::size_t c = 0; c < branching; ++c) {
                  edges.push_back({p, n, 1.0});
                  next.push_back(n++);
                }
              layer = std::move(next);
            }
            if (i > 0) boundary = layer;
            return Network(n, std::move(edges), std::move(boundary));
          },
          0};
}

inline Exhaustion binary_tree() {
  auto ex = rooted_tree(2);
  ex.name = "binary-tree";
  return ex;
}

/// Ball of radius i in the d-regular tree; the root has d neighbours.
inline Exhaustion regular_tree(std::size_t d) {
  return {"regular-tree" + std::to_string(d),
          [d](std::size_t i) {
            std::vector<NetEdge> edges;
            std::vector<Vertex> layer{0};
            std::size_t n = 1;
            for (std::size_t r = 0; r < i; ++r) {
              std::vector<Vertex> next;
              for (Vertex p : layer)
                for (std::size_t c = 0; c < (r == 0 ? d : d - 1); ++c) {
                  edges.push_back({p, n, 1.0});
                  next.push_back(n++);
                }
              layer = std::move(next);
            }
            return Network(n, std::move(edges), i > 0 ? layer : std::vector<Vertex>{});
          },
          0};
}

/// The box [-i, i]^2 of Z^2 with its border as boundary; the origin is vertex 0.
inline Exhaustion grid() {
  return {"grid",
          [](std::size_t i) {
            const auto r = static_cast<std::int64_t>(i);
            const auto side = 2 * r + 1;
            auto id = [&](std::int64_t x, std::int64_t y) {
              // origin first, everything else shifted by one
              std::int64_t raw = (y + r) * side + (x + r);
              std::int64_t origin = r * side + r;
              if (raw == origin) return Vertex{0};
              return static_cast<Vertex>(raw < origin ? raw + 1 : raw);
            };
            std::vector<NetEdge> edges;
            std::vector<Vertex> boundary;
            std::vector<std::string> labels(static_cast<std::size_t>(side * side));
            for (std::int64_t y = -r; y <= r; ++y)
              for (std::int64_t x = -r; x <= r; ++x) {
                labels[id(x, y)] = "(" + std::to_string(x) + "," + std::to_string(y) + ")";
                if (x < r) edges.push_back({id(x, y), id(x + 1, y), 1.0});
                if (y < r) edges.push_back({id(x, y), id(x, y + 1), 1.0});
                if (r > 0 && (std::abs(x) == r || std::abs(y) == r)) boundary.push_back(id(x, y));
              }
            return Network(static_cast<std::size_t>(side * side), std::move(edges), std::move(boundary),
                           std::move(labels));
          },
          0};
}

/// Schreier graph of shift wr shift acting on Z^2 with generators iota(+-1) and (+-1) @ 0:
/// rows are copies of Z and only column 0 carries vertical edges.
inline std::vector<WreathElement<Perm>> comb_generators() {
  std::vector<Perm> shifts{Perm::translation(1), Perm::translation(-1)};
  return product_action_generators(shifts, shifts, 0);
}

inline Exhaustion comb() {
  return {"comb",
          [](std::size_t i) { return product_action_ball(comb_generators(), {0, 0}, i).network; }, 0};
}

/// Growing Schreier balls of any action.
template <class Point, class Act, class Label>
Exhaustion balls(std::string name, Point base, std::size_t generator_count, Act act, Label label) {
  return {std::move(name),
          [=](std::size_t i) { return schreier_ball<Point>(base, generator_count, act, i, label).network; }, 0};
}

}  // namespace exhaustions

enum class RecurrenceVerdict { RecurrentEvidence, TransientEvidence, Inconclusive };

inline std::string to_string(RecurrenceVerdict v) {
  switch (v) {
    case RecurrenceVerdict::RecurrentEvidence: return "recurrent-evidence";
    case RecurrenceVerdict::TransientEvidence: return "transient-evidence";
    case RecurrenceVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct RecurrenceProfile {
  std::vector<std::size_t> levels;
  std::vector<double> resistance;
  GrowthFit fit;
  RecurrenceVerdict verdict = RecurrenceVerdict::Inconclusive;

  /// e.g. "recurrent-evidence(log)" or "transient-evidence(1.0)".
  std::string summary() const {
    std::string s = to_string(verdict);
    if (verdict == RecurrenceVerdict::RecurrentEvidence) s += "(" + to_string(fit.model) + ")";
    if (verdict == RecurrenceVerdict::TransientEvidence) s += "(" + format_measured(fit.last_value) + ")";
    return s;
  }
};

inline RecurrenceVerdict verdict_from(const GrowthFit& fit) {
  if (!fit.enough_data) return RecurrenceVerdict::Inconclusive;
  return fit.bounded ? RecurrenceVerdict::TransientEvidence : RecurrenceVerdict::RecurrentEvidence;
}

/// R_eff from the source to the boundary of X_i for i in [first, last]. The sequence is
/// nondecreasing by Rayleigh monotonicity; a decrease beyond solver precision throws.
inline RecurrenceProfile recurrence_profile(const Exhaustion& ex, std::size_t first, std::size_t last,
                                            const GrowthFitConfig& fit_cfg = {}, const SolverConfig& cfg = {}) {
  if (first == 0 || first > last) throw Error("levels must satisfy 1 <= first <= last");
  RecurrenceProfile p;
  for (std::size_t i = first; i <= last; ++i) {
    Network net = ex.level(i);
    double r = effective_resistance_to_boundary(net, ex.source, cfg);
    if (!p.resistance.empty() && r < p.resistance.back() * (1.0 - 1e-8))
      throw Error("effective resistance decreased along the exhaustion " + ex.name);
    p.levels.push_back(i);
    p.resistance.push_back(r);
  }
  std::vector<double> x(p.levels.begin(), p.levels.end());
  p.fit = fit_growth(x, p.resistance, fit_cfg);
  p.verdict = verdict_from(p.fit);
  return p;
}

enum class NashWilliamsAssessment { CertifiedDivergent, DivergesWithRate, Inconclusive };

struct NashWilliamsResult {
  std::vector<double> partial_sums;
  NashWilliamsAssessment assessment = NashWilliamsAssessment::Inconclusive;
  GrowthFit fit;
  std::optional<double> bound;

  std::string summary() const {
    switch (assessment) {
      case NashWilliamsAssessment::CertifiedDivergent:
        return "certified-divergent(a' <= " + format_real(*bound) + ")";
      case NashWilliamsAssessment::DivergesWithRate:
        return "diverges-with-rate(" + to_string(fit.model) + ") [evidence]";
      case NashWilliamsAssessment::Inconclusive: return "inconclusive [evidence]";
    }
    return "?";
  }
};

/// Partial sums of 1 / a'_i over disjoint cutsets. With a caller-supplied bound a'_i <= C
/// for all i the divergence is certified; otherwise a growth fit of the partial sums is
/// reported as evidence.
inline NashWilliamsResult nash_williams_partial_sums(const std::vector<double>& cuts,
                                                     std::optional<double> bound = std::nullopt,
                                                     const GrowthFitConfig& cfg = {}) {
  NashWilliamsResult r;
  r.bound = bound;
  double s = 0.0;
  for (double a : cuts) {
    if (!(a > 0.0)) throw NetworkError("cut conductance must be positive");
    s += 1.0 / a;
    r.partial_sums.push_back(s);
  }
  std::vector<double> x;
  for (std::size_t i = 1; i <= cuts.size(); ++i) x.push_back(static_cast<double>(i));
  r.fit = fit_growth(x, r.partial_sums, cfg);
  if (bound && *bound > 0.0 && !cuts.empty() &&
      std::all_of(cuts.begin(), cuts.end(), [&](double a) { return a <= *bound; })) {
    r.assessment = NashWilliamsAssessment::CertifiedDivergent;
  } else if (r.fit.enough_data && !r.fit.bounded) {
    r.assessment = NashWilliamsAssessment::DivergesWithRate;
  }
  return r;
}

/// Conductances of the cuts between consecutive distance shells from `source`.
inline std::vector<double> shell_cuts(const Network& net, Vertex source) {
  auto dist = net.distances(source);
  std::size_t maxd = 0;
  for (auto d : dist) maxd = std::max(maxd, d);
  std::vector<double> cuts(maxd, 0.0);
  for (const auto& e : net.edges()) {
    std::size_t a = dist[e.u], b = dist[e.v];
    if (a == b) continue;
    cuts[std::min(a, b)] += e.conductance();
  }
  return cuts;
}

/// Shorts each distance shell around `source` into a single vertex.
inline ShortedNetwork short_shells(const Network& net, Vertex source) {
  auto dist = net.distances(source);
  std::size_t maxd = 0;
  for (auto d : dist) maxd = std::max(maxd, d);
  std::vector<std::vector<Vertex>> blocks(maxd + 1);
  for (Vertex v = 0; v < net.size(); ++v) blocks[dist[v]].push_back(v);
  return short_network(net, blocks);
}

struct WitnessStep {
  std::size_t level = 0;
  double energy = 0.0;
  VertexFunction f;
};

struct D0Witness {
  std::vector<WitnessStep> steps;
  /// Energies never increase after the burn-in (the first quarter of the levels).
  bool nonincreasing_after_burn_in = false;
  /// Post-burn-in energies decay at least like n^decay_exponent (log-log slope), or vanish.
  bool converging = false;
};

/// Attempts to approximate the indicator of Y in energy by finitely supported functions:
/// at level n, f_n is 1 on the Y-vertices within distance n/2 of the source, 0 on the
/// boundary and off Y, and harmonic on the rest of Y. Reports D(f_n - chi_Y).
inline D0Witness d0_witness(const Exhaustion& ex, const std::function<bool(const Network&, Vertex)>& in_y,
                            std::size_t first, std::size_t last, double decay_exponent = -0.5,
                            const SolverConfig& cfg = {}) {
  if (first == 0 || first > last) throw Error("levels must satisfy 1 <= first <= last");
  D0Witness w;
  for (std::size_t n = first; n <= last; ++n) {
    Network net = ex.level(n);
    auto dist = net.distances(ex.source);
    std::vector<char> y(net.size());
    for (Vertex v = 0; v < net.size(); ++v) y[v] = in_y(net, v) ? 1 : 0;
    std::map<Vertex, double> fixed;
    for (Vertex v = 0; v < net.size(); ++v) {
      if (!y[v]) continue;
      if (dist[v] <= n / 2) fixed[v] = 1.0;
      if (net.is_boundary(v)) fixed[v] = 0.0;
    }
    std::vector<NetEdge> inside;
    for (const auto& e : net.edges())
      if (y[e.u] && y[e.v]) inside.push_back(e);
    std::vector<double> f = fixed.empty() ? std::vector<double>(net.size(), 1.0)
                                          : detail::harmonic_extension(net.size(), inside, fixed, 1.0, cfg);
    WitnessStep step;
    step.level = n;
    VertexFunction diff;
    for (Vertex v = 0; v < net.size(); ++v) {
      if (!y[v]) continue;
      step.f.values[v] = f[v];
      diff.values[v] = f[v] - 1.0;
    }
    step.energy = dirichlet_energy(net, diff);
    w.steps.push_back(std::move(step));
  }
  std::size_t burn = w.steps.size() / 4;
  w.nonincreasing_after_burn_in = true;
  for (std::size_t i = burn + 1; i < w.steps.size(); ++i)
    if (w.steps[i].energy > w.steps[i - 1].energy * (1.0 + 1e-9) + 1e-12) w.nonincreasing_after_burn_in = false;
  bool vanished = w.steps.back().energy < 1e-12;
  bool decaying = false;
  if (!vanished && w.steps.size() > burn + 2) {
    std::vector<double> t, y;
    for (std::size_t i = burn; i < w.steps.size(); ++i) {
      if (w.steps[i].energy <= 0.0) continue;
      t.push_back(std::log(static_cast<double>(w.steps[i].level)));
      y.push_back(std::log(w.steps[i].energy));
    }
    decaying = t.size() > 2 && detail::least_squares(t, y).b <= decay_exponent;
  }
  w.converging = w.nonincreasing_after_burn_in && w.steps.size() > burn + 1 && (vanished || decaying);
  return w;
}

struct WalkStats {
  std::size_t trials = 0;
  std::size_t returns = 0;
  double return_fraction = 0.0;
  /// Mean first-return time among the returning trials; 0 when none returned.
  double mean_return_time = 0.0;
  /// Binomial standard error of the return fraction.
  double standard_error = 0.0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Per-trial stream derived from the master seed; trials are independent of order.
inline std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial) {
  return std::mt19937_64(detail::splitmix64(detail::splitmix64(seed) ^ detail::splitmix64(trial + 1)));
}

/// Simple random walk weighted by conductance (parallel edges add, loops stay put).
inline WalkStats random_walk(const Network& net, Vertex start, std::size_t steps, std::size_t trials,
                             std::uint64_t seed) {
  if (steps == 0 || trials == 0) throw Error("steps and trials must be positive");
  if (start >= net.size()) throw NetworkError("start vertex out of range");
  const std::size_t n = net.size();
  // cumulative conductances of the arcs leaving each vertex
  std::vector<std::size_t> offset(n + 1, 0);
  for (const auto& e : net.edges()) {
    ++offset[e.u + 1];
    if (!e.is_loop()) ++offset[e.v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offset[i + 1] += offset[i];
  std::vector<Vertex> target(offset[n]);
  std::vector<double> cumulative(offset[n]);
  std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
  for (const auto& e : net.edges()) {
    target[fill[e.u]] = e.v;
    cumulative[fill[e.u]++] = e.conductance();
    if (!e.is_loop()) {
      target[fill[e.v]] = e.u;
      cumulative[fill[e.v]++] = e.conductance();
    }
  }
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t k = offset[v] + 1; k < offset[v + 1]; ++k) cumulative[k] += cumulative[k - 1];

  WalkStats stats;
  stats.trials = trials;
  double total_time = 0.0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = trial_engine(seed, t);
    Vertex x = start;
    for (std::size_t step = 1; step <= steps; ++step) {
      std::size_t lo = offset[x], hi = offset[x + 1];
      if (lo == hi) break;
      double u = unit(rng) * cumulative[hi - 1];
      auto it = std::upper_bound(cumulative.begin() + static_cast<long>(lo),
                                 cumulative.begin() + static_cast<long>(hi), u);
      if (it == cumulative.begin() + static_cast<long>(hi)) --it;
      x = target[static_cast<std::size_t>(it - cumulative.begin())];
      if (x == start) {
        ++stats.returns;
        total_time += static_cast<double>(step);
        break;
      }
    }
  }
  stats.return_fraction = static_cast<double>(stats.returns) / static_cast<double>(trials);
  stats.mean_return_time = stats.returns ? total_time / static_cast<double>(stats.returns) : 0.0;
  stats.standard_error =
      std::sqrt(stats.return_fraction * (1.0 - stats.return_fraction) / static_cast<double>(trials));
  return stats;
}

}  // namespace selfsim
