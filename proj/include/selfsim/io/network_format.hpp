#pragma once

// Network exchange format, one edge per line:
//
//   # comment
//   u v resistance
//   ...
//   #boundary
//   w1 w2 ...
//
// Vertex names are whitespace-free tokens numbered in order of first appearance. Lines
// after `#boundary` list boundary vertices. The resistance column may be omitted (1).

#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "selfsim/error.hpp"
#include "selfsim/growth.hpp"
#include "selfsim/network.hpp"

namespace selfsim {

inline Network parse_network(std::string_view text) {
  std::map<std::string, Vertex> ids;
  std::vector<std::string> labels;
  std::vector<NetEdge> edges;
  std::vector<Vertex> boundary;
  std::vector<std::pair<std::string, std::size_t>> boundary_names;
  auto id = [&](const std::string& name) {
    auto [it, fresh] = ids.emplace(name, labels.size());
    if (fresh) labels.push_back(name);
    return it->second;
  };
  bool in_boundary = false;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line.compare(first, 9, "#boundary") == 0) {
      in_boundary = true;
      continue;
    }
    if (line[first] == '#') continue;
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (in_boundary) {
      for (const auto& t : tok) boundary_names.emplace_back(t, line_no);
      continue;
    }
    if (tok.size() != 2 && tok.size() != 3)
      throw ParseError(line_no, first + 1, "expected 'u v [resistance]'");
    double r = 1.0;
    if (tok.size() == 3) {
      try {
        std::size_t used = 0;
        r = std::stod(tok[2], &used);
        if (used != tok[2].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError(line_no, line.find(tok[2]) + 1, "invalid resistance '" + tok[2] + "'");
      }
      if (!(r > 0.0)) throw ParseError(line_no, line.find(tok[2]) + 1, "resistance must be positive");
    }
    Vertex u = id(tok[0]);
    Vertex v = id(tok[1]);
    edges.push_back({u, v, r});
  }
  for (const auto& [name, line] : boundary_names) {
    auto it = ids.find(name);
    if (it == ids.end()) throw ParseError(line, 1, "boundary vertex '" + name + "' has no edges");
    boundary.push_back(it->second);
  }
  if (labels.empty()) throw ParseError(line_no, 1, "network has no edges");
  const std::size_t n = labels.size();
  return Network(n, std::move(edges), std::move(boundary), std::move(labels));
}

inline std::string render_network(const Network& net) {
  std::ostringstream out;
  for (const auto& e : net.edges())
    out << net.label(e.u) << ' ' << net.label(e.v) << ' ' << format_real(e.resistance) << '\n';
  auto b = net.boundary();
  if (!b.empty()) {
    out << "#boundary\n";
    for (Vertex v : b) out << net.label(v) << '\n';
  }
  return out.str();
}

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

/// Undirected DOT graph. Boundary vertices are drawn as double circles; when `classes` is
/// given, vertices are filled by class index (12-colour palette, cycling).
inline std::string render_dot(const Network& net, const std::vector<std::size_t>& classes = {},
                              const std::string& name = "network") {
  std::ostringstream out;
  out << "graph \"" << detail::dot_escape(name) << "\" {\n";
  for (Vertex v = 0; v < net.size(); ++v) {
    out << "  v" << v << " [label=\"" << detail::dot_escape(net.label(v)) << "\"";
    if (net.is_boundary(v)) out << ", shape=doublecircle";
    if (!classes.empty())
      out << ", style=filled, colorscheme=set312, fillcolor=" << (classes.at(v) % 12) + 1;
    out << "];\n";
  }
  for (const auto& e : net.edges()) {
    out << "  v" << e.u << " -- v" << e.v;
    if (e.resistance != 1.0) out << " [label=\"" << format_real(e.resistance) << "\"]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

/// `level,value` rows under a header line.
inline std::string render_csv(const std::vector<std::size_t>& levels, const std::vector<double>& values) {
  if (levels.size() != values.size()) throw Error("csv columns differ in length");
  std::string out = "level,value\n";
  for (std::size_t i = 0; i < levels.size(); ++i)
    out += std::to_string(levels[i]) + "," + format_measured(values[i]) + "\n";
  return out;
}

}  // namespace selfsim
