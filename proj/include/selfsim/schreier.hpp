#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "selfsim/automaton.hpp"
#include "selfsim/network.hpp"
#include "selfsim/perm.hpp"

namespace selfsim {

/// A BFS ball of a Schreier graph together with the points behind its vertices.
/// Vertex 0 is the base point; vertices are numbered in BFS order.
template <class Point>
struct SchreierBall {
  Network network;
  std::vector<Point> points;
  std::vector<std::size_t> depth;
  /// Directed edges (x, s(x), s) with both ends in the ball, in BFS order.
  std::vector<std::tuple<Vertex, Vertex, std::size_t>> arrows;
};

/// Ball of radius `radius` around `base` for generators acting through `act(point, i)`.
/// Every vertex x and generator s give one unit edge x -- s(x) when s(x) lies in the
/// ball, so loops and parallel edges survive. The sphere is the boundary.
template <class Point, class Act, class Label>
SchreierBall<Point> schreier_ball(const Point& base, std::size_t generator_count, Act act, std::size_t radius,
                                  Label label) {
  SchreierBall<Point> ball;
  std::map<Point, Vertex> index;
  index.emplace(base, 0);
  ball.points.push_back(base);
  ball.depth.push_back(0);
  for (std::size_t i = 0; i < ball.points.size(); ++i) {
    if (ball.depth[i] == radius) continue;
    for (std::size_t s = 0; s < generator_count; ++s) {
      Point y = act(ball.points[i], s);
      if (index.emplace(y, ball.points.size()).second) {
        ball.points.push_back(std::move(y));
        ball.depth.push_back(ball.depth[i] + 1);
      }
    }
  }
  std::vector<NetEdge> edges;
  for (Vertex x = 0; x < ball.points.size(); ++x) {
    for (std::size_t s = 0; s < generator_count; ++s) {
      auto it = index.find(act(ball.points[x], s));
      if (it == index.end()) continue;
      edges.push_back({x, it->second, 1.0});
      ball.arrows.emplace_back(x, it->second, s);
    }
  }
  std::vector<Vertex> sphere;
  std::vector<std::string> labels;
  for (Vertex x = 0; x < ball.points.size(); ++x) {
    if (ball.depth[x] == radius) sphere.push_back(x);
    labels.push_back(label(ball.points[x]));
  }
  ball.network = Network(ball.points.size(), std::move(edges), std::move(sphere), std::move(labels));
  return ball;
}

/// Appends the inverses that are not already present.
inline std::vector<Perm> symmetrize(std::vector<Perm> gens) {
  const std::size_t n = gens.size();
  for (std::size_t i = 0; i < n; ++i) {
    Perm inv = inverse(gens[i]);
    if (std::find(gens.begin(), gens.end(), inv) == gens.end()) gens.push_back(inv);
  }
  return gens;
}

inline std::vector<TreeAutomorphism> symmetrize(std::vector<TreeAutomorphism> gens) {
  const std::size_t n = gens.size();
  for (std::size_t i = 0; i < n; ++i) {
    TreeAutomorphism inv = inverse(gens[i]);
    if (std::find(gens.begin(), gens.end(), inv) == gens.end()) gens.push_back(inv);
  }
  return gens;
}

/// Schreier ball of the action of permutations on the alphabet.
inline SchreierBall<Letter> p_schreier_ball(const std::vector<Perm>& gens, const Alphabet& alphabet, Letter base,
                                            std::size_t radius) {
  alphabet.check(base);
  auto sym = symmetrize(gens);
  return schreier_ball<Letter>(
      base, sym.size(), [&](Letter x, std::size_t i) { return sym[i](x); }, radius,
      [&](Letter x) { return alphabet.format_letter(x); });
}

/// Schreier ball of the action on the words of length `level` containing `base`.
inline SchreierBall<Word> level_schreier_ball(const std::vector<TreeAutomorphism>& gens, const Word& base,
                                              std::size_t radius) {
  if (gens.empty()) throw Error("no generators");
  const Alphabet alphabet = gens.front().alphabet();
  alphabet.check(base);
  auto sym = symmetrize(gens);
  return schreier_ball<Word>(
      base, sym.size(), [&](const Word& w, std::size_t i) { return evaluate(sym[i], w); }, radius,
      [&](const Word& w) { return alphabet.format_word(w); });
}

}  // namespace selfsim
