#pragma once

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "selfsim/corpus.hpp"
#include "selfsim/criterion.hpp"
#include "selfsim/io/automaton_format.hpp"
#include "selfsim/io/network_format.hpp"
#include "selfsim/wreath.hpp"

namespace selfsim::cli {

inline constexpr int kUsageError = 64;
inline constexpr int kDataError = 65;
inline constexpr int kNoInput = 66;
inline constexpr int kFailure = 1;

struct InputError : Error {
  using Error::Error;
};

/// Reads a file, or a built-in example when the path is `corpus:NAME`.
inline std::string read_input(const std::string& path) {
  if (path.rfind("corpus:", 0) == 0) {
    const auto& e = corpus::find(path.substr(7));
    if (e.text.empty()) throw InputError("corpus entry '" + path.substr(7) + "' is not a file");
    return std::string(e.text);
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_output(const std::string& path, const std::string& content, std::ostream& out) {
  if (path == "-") {
    out << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << content;
}

inline ParsedDocument load(const std::string& path) {
  try {
    return parse_document(read_input(path));
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.column(), path + ":" + std::to_string(e.line()) + ":" +
                                                std::to_string(e.column()) + ": " + e.what());
  }
}

inline TreeAutomorphism load_automorphism(const std::string& path) {
  auto doc = load(path);
  if (!doc.initial) throw Error(path + " describes a group; an automaton file with `initial` is expected");
  return *doc.initial;
}

/// Generators of a group file, or the single automorphism of an automaton file.
inline std::vector<TreeAutomorphism> load_generators(const std::string& path) {
  auto doc = load(path);
  if (doc.is_group()) return doc.generators;
  return {*doc.initial};
}

inline std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
  auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      auto v = std::stoul(text);
      return {v, v};
    }
    return {std::stoul(text.substr(0, dots)), std::stoul(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--levels", "expected a..b, got '" + text + "'");
  }
}

/// `top` alone, or `top [x: child; y: child]`.
inline std::string render_portrait(const Portrait& p, const Alphabet& a) {
  std::string s = render(p.top, a);
  if (p.children.empty()) return s;
  s += " [";
  for (std::size_t i = 0; i < p.children.size(); ++i) {
    if (i) s += "; ";
    s += a.format_letter(p.children[i].first) + ": " + render_portrait(p.children[i].second, a);
  }
  return s + "]";
}

inline std::optional<Exhaustion> builtin_exhaustion(const std::string& name) {
  if (name == "line") return exhaustions::line();
  if (name == "binary-tree") return exhaustions::binary_tree();
  if (name == "grid") return exhaustions::grid();
  if (name == "comb") return exhaustions::comb();
  if (name.rfind("regular-tree", 0) == 0) {
    std::size_t d = name.size() > 12 ? std::stoul(name.substr(12)) : 3;
    return exhaustions::regular_tree(d);
  }
  return std::nullopt;
}

/// Exhaustion by Schreier balls of a group: orbital balls when `end` is set, level-n
/// balls around `base` otherwise.
inline Exhaustion group_exhaustion(const std::vector<TreeAutomorphism>& gens, const std::optional<EndPoint>& end,
                                   const Word& base) {
  if (end) {
    auto w = *end;
    return {"orbital", [gens, w](std::size_t r) { return orbital_ball(gens, w, r).network; }, 0};
  }
  return {"level", [gens, base](std::size_t r) { return level_schreier_ball(gens, base, r).network; }, 0};
}

inline void print_corpus_entry(const corpus::Entry& e, std::ostream& out) {
  if (corpus::is_network_generator(e.name)) {
    auto p = recurrence_profile(exhaustions::comb(), 1, 24);
    out << "comb: Schreier graph of shift wr shift on Z^2, R_eff levels 1..24\n";
    out << render_csv(p.levels, p.resistance);
    out << "verdict: " << p.summary() << "\n";
    return;
  }
  auto doc = parse_document(e.text);
  const auto& a = doc.alphabet;
  auto singular_line = [&](const std::vector<EndPoint>& pts) {
    std::string s;
    for (const auto& w : pts) s += (s.empty() ? "" : " ") + w.to_string(a);
    return s.empty() ? std::string("none") : s;
  };
  if (!doc.is_group()) {
    const auto& g = *doc.initial;
    auto cls = classify(g);
    out << "classification: " << cls.to_string() << "\n";
    if (cls.bounded()) out << "singular: " << singular_line(singular_points(g)) << "\n";
    return;
  }
  for (std::size_t i = 0; i < doc.generators.size(); ++i) {
    const auto& g = doc.generators[i];
    auto cls = classify(g);
    out << doc.generator_names[i] << ": " << cls.to_string();
    if (cls.bounded()) out << ", singular " << singular_line(singular_points(g));
    out << "\n";
  }
  GroupSpec G{doc.name, doc.generators, doc.generator_names, doc.pclass.value_or(PClass{})};
  out << run_criterion(G).text();
}

/// Runs one command line (without the program name). Returns the exit status.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-state tree automorphisms, bounded activity, and recurrence diagnostics", "selfsim"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  int status = 0;

  std::string file, file2, word, end_text, base_text, net_file, exhaustion, levels = "1..20", dot, csv, json_file;
  std::string pclass_name, recurrence_name, cuts_file;
  std::size_t level = 1, radius = 4, steps = 0, trials = 0, profile = 0, tail_level = 1, budget = 4,
              radius_cap = 16;
  std::optional<std::size_t> decompose_level;
  std::optional<std::uint64_t> seed;
  std::optional<double> bound;
  std::vector<std::string> corpus_args;

  auto* classify_cmd = app.add_subcommand("classify", "Activity class of an automaton or of each group generator");
  classify_cmd->add_option("FILE", file, "automaton or group file")->required();
  classify_cmd->add_option("--profile", profile, "also print alpha_0 .. alpha_n");

  auto* eval_cmd = app.add_subcommand("eval", "Image of a finite word");
  eval_cmd->add_option("FILE", file)->required();
  eval_cmd->add_option("-v,--word", word, "input word")->required();

  auto* mul_cmd = app.add_subcommand("mul", "Product g h, acting as g(h(w))");
  mul_cmd->add_option("G", file)->required();
  mul_cmd->add_option("H", file2)->required();

  auto* inv_cmd = app.add_subcommand("inv", "Inverse automorphism");
  inv_cmd->add_option("FILE", file)->required();

  auto* section_cmd = app.add_subcommand("section", "Section along a word");
  section_cmd->add_option("FILE", file)->required();
  section_cmd->add_option("-v,--word", word)->required();

  auto* decompose_cmd = app.add_subcommand("decompose", "Level-n sections and level-n action");
  decompose_cmd->add_option("FILE", file)->required();
  decompose_cmd->add_option("--level", decompose_level, "level n (default 1)");

  auto* singular_cmd = app.add_subcommand("singular", "Ends where every section is nontrivial");
  singular_cmd->add_option("FILE", file)->required();

  auto* ends_cmd = app.add_subcommand("ends-eval", "Image of an eventually periodic end u.(v)");
  ends_cmd->add_option("FILE", file)->required();
  ends_cmd->add_option("-w,--end", end_text)->required();

  auto* schreier_cmd = app.add_subcommand("schreier", "Schreier ball on a level or on an orbit of ends");
  schreier_cmd->add_option("FILE", file)->required();
  auto* level_opt = schreier_cmd->add_option("--level", level, "word length n");
  auto* orbital_opt = schreier_cmd->add_flag("--orbital", "orbital graph of the end given by -w");
  schreier_cmd->add_option("-w,--end", end_text, "base end for --orbital");
  schreier_cmd->add_option("--base", base_text, "base word for --level (default 0^n)");
  schreier_cmd->add_option("--radius", radius)->required();
  schreier_cmd->add_option("--dot", dot, "write DOT to this file ('-' for stdout)");
  schreier_cmd->add_option("--tail-level", tail_level, "colour orbital vertices by this tail class level");
  level_opt->excludes(orbital_opt);

  auto* walk_cmd = app.add_subcommand("walk", "Monte Carlo return statistics of the simple random walk");
  walk_cmd->add_option("FILE", file, "group or automaton file (with --level or --orbital)");
  walk_cmd->add_option("--net", net_file, "network file");
  walk_cmd->add_option("--exhaustion", exhaustion, "line, binary-tree, grid, comb, regular-treeD");
  auto* walk_level = walk_cmd->add_option("--level", level);
  auto* walk_orbital = walk_cmd->add_flag("--orbital");
  walk_cmd->add_option("-w,--end", end_text);
  walk_cmd->add_option("--base", base_text);
  walk_cmd->add_option("--radius", radius, "ball radius for generated networks");
  walk_cmd->add_option("--start", base_text, "start vertex label for --net (default: first vertex)");
  walk_cmd->add_option("--steps", steps)->required();
  walk_cmd->add_option("--trials", trials)->required();
  walk_cmd->add_option("--seed", seed, "master seed")->required();
  walk_level->excludes(walk_orbital);

  auto* reff_cmd = app.add_subcommand("reff", "Effective resistance along an exhaustion");
  reff_cmd->add_option("FILE", file, "group or automaton file (with --level or --orbital)");
  reff_cmd->add_option("--exhaustion", exhaustion, "line, binary-tree, grid, comb, regular-treeD");
  auto* reff_level = reff_cmd->add_option("--level", level);
  auto* reff_orbital = reff_cmd->add_flag("--orbital");
  reff_cmd->add_option("-w,--end", end_text);
  reff_cmd->add_option("--base", base_text);
  reff_cmd->add_option("--levels", levels, "range a..b");
  reff_cmd->add_option("--csv", csv, "write level,value CSV to this file ('-' for stdout)");
  reff_level->excludes(reff_orbital);

  auto* nw_cmd = app.add_subcommand("nashwilliams", "Partial sums of reciprocal cut conductances");
  nw_cmd->add_option("--cuts", cuts_file, "whitespace separated conductances")->required();
  nw_cmd->add_option("--bound", bound, "symbolic bound C with every cut <= C");
  nw_cmd->add_option("--csv", csv, "write partial sums as level,value CSV");

  auto* criterion_cmd = app.add_subcommand("criterion", "Check the amenability criterion for a group");
  criterion_cmd->add_option("FILE", file)->required();
  criterion_cmd->add_option("--pclass", pclass_name, "full-finite, fin-supp, trans-fin, trivial");
  criterion_cmd->add_option("--recurrence", recurrence_name, "recurrent (default), unknown, non-recurrent");
  criterion_cmd->add_option("--json", json_file, "write the machine-readable report ('-' for stdout)");
  criterion_cmd->add_option("--budget", budget, "word length bound for the isotropy check");
  criterion_cmd->add_option("--radius-cap", radius_cap, "largest orbital ball radius");

  auto* corpus_cmd = app.add_subcommand("corpus", "Built-in examples: list | show NAME | run NAME");
  corpus_cmd->add_option("ARGS", corpus_args)->required()->expected(1, 2);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  auto usage = [&](const std::string& msg) {
    err << "usage error: " << msg << "\n";
    return kUsageError;
  };

  try {
    if (*classify_cmd) {
      auto doc = load(file);
      if (doc.is_group()) {
        for (std::size_t i = 0; i < doc.generators.size(); ++i)
          out << doc.generator_names[i] << ": " << classify(doc.generators[i]).to_string() << "\n";
      } else {
        out << classify(*doc.initial).to_string() << "\n";
        if (classify_cmd->count("--profile")) {
          out << "activity:";
          for (const auto& a : activity_profile(*doc.initial, profile)) out << " " << a.to_string();
          out << "\n";
        }
      }
    } else if (*eval_cmd) {
      auto g = load_automorphism(file);
      out << g.alphabet().format_word(evaluate(g, g.alphabet().parse_word(word))) << "\n";
    } else if (*mul_cmd) {
      out << render_automaton(compose(load_automorphism(file), load_automorphism(file2)));
    } else if (*inv_cmd) {
      out << render_automaton(inverse(load_automorphism(file)));
    } else if (*section_cmd) {
      auto g = load_automorphism(file);
      out << render_automaton(section(g, g.alphabet().parse_word(word)));
    } else if (*decompose_cmd) {
      auto g = load_automorphism(file);
      const auto& a = g.alphabet();
      std::size_t n = decompose_level.value_or(1);
      auto d = level_n_decompose(g, n);
      out << "level: " << n << "\n";
      out << "action: " << render_portrait(d.action, a) << "\n";
      for (const auto& [v, s] : d.sections)
        out << "section " << a.format_word(v) << ": " << s.name() << " (" << s.state_count() - 1
            << " nontrivial states)\n";
    } else if (*singular_cmd) {
      auto g = load_automorphism(file);
      auto pts = singular_points(g);
      if (pts.empty()) out << "none\n";
      for (const auto& w : pts) out << w.to_string(g.alphabet()) << "\n";
    } else if (*ends_cmd) {
      auto g = load_automorphism(file);
      out << evaluate_end(g, EndPoint::parse(end_text, g.alphabet())).to_string(g.alphabet()) << "\n";
    } else if (*schreier_cmd) {
      auto gens = load_generators(file);
      const auto& a = gens.front().alphabet();
      const bool orbital = schreier_cmd->count("--orbital") > 0;
      if (orbital && end_text.empty()) return usage("--orbital needs -w <end>");
      if (!orbital && !schreier_cmd->count("--level")) return usage("schreier needs --level n or --orbital -w <end>");
      Network net;
      std::vector<std::size_t> classes;
      if (orbital) {
        auto ball = orbital_ball(gens, EndPoint::parse(end_text, a), radius);
        std::size_t K = 0;
        for (const auto& g : symmetrize(gens)) {
          auto prof = activity_profile(g, tail_level);
          K = std::max<std::size_t>(K, prof.back().value);
        }
        auto dec = cofinality_decomposition(ball, tail_level, K, symmetrize(gens).size());
        classes = dec.class_of;
        net = ball.network;
        out << "tail classes at level " << tail_level << ": " << dec.classes.size() << ", crossing arrows "
            << dec.crossing.size() << ", bound per class " << dec.bound << (dec.within_bound ? "" : " (EXCEEDED)")
            << "\n";
      } else {
        Word base = base_text.empty() ? Word(level, 0) : a.parse_word(base_text);
        if (base.size() != level) return usage("--base must have length --level");
        net = level_schreier_ball(gens, base, radius).network;
      }
      out << "vertices: " << net.size() << "\nedges: " << net.edges().size() << "\nsphere: " << net.boundary().size()
          << "\n";
      if (!dot.empty()) write_output(dot, render_dot(net, classes, orbital ? "orbital" : "level"), out);
    } else if (*walk_cmd) {
      Network net;
      Vertex start = 0;
      if (!net_file.empty()) {
        net = parse_network(read_input(net_file));
        if (!base_text.empty()) {
          auto v = net.find(base_text);
          if (!v) return usage("no vertex named '" + base_text + "'");
          start = *v;
        }
      } else if (!exhaustion.empty()) {
        auto ex = builtin_exhaustion(exhaustion);
        if (!ex) return usage("unknown exhaustion '" + exhaustion + "'");
        net = ex->level(radius);
      } else if (!file.empty()) {
        auto gens = load_generators(file);
        const auto& a = gens.front().alphabet();
        if (walk_cmd->count("--orbital")) {
          if (end_text.empty()) return usage("--orbital needs -w <end>");
          net = orbital_ball(gens, EndPoint::parse(end_text, a), radius).network;
        } else {
          Word base = base_text.empty() ? Word(level, 0) : a.parse_word(base_text);
          net = level_schreier_ball(gens, base, radius).network;
        }
      } else {
        return usage("walk needs --net FILE, --exhaustion NAME, or a group FILE");
      }
      auto s = random_walk(net, start, steps, trials, *seed);
      out << "vertices: " << net.size() << "\nreturns: " << s.returns << "/" << s.trials
          << "\nreturn_fraction: " << format_real(s.return_fraction)
          << "\nstandard_error: " << format_real(s.standard_error)
          << "\nmean_return_time: " << format_real(s.mean_return_time) << "\n";
    } else if (*reff_cmd) {
      auto [first, last] = parse_range(levels);
      std::optional<Exhaustion> ex;
      if (!exhaustion.empty()) {
        ex = builtin_exhaustion(exhaustion);
        if (!ex) return usage("unknown exhaustion '" + exhaustion + "'");
      } else if (!file.empty()) {
        auto gens = load_generators(file);
        const auto& a = gens.front().alphabet();
        std::optional<EndPoint> end;
        if (reff_cmd->count("--orbital")) {
          if (end_text.empty()) return usage("--orbital needs -w <end>");
          end = EndPoint::parse(end_text, a);
        }
        Word base = base_text.empty() ? Word(level, 0) : a.parse_word(base_text);
        ex = group_exhaustion(gens, end, base);
      } else {
        return usage("reff needs --exhaustion NAME or a group FILE");
      }
      if (first == 0 || first > last) return usage("--levels must satisfy 1 <= a <= b");
      auto p = recurrence_profile(*ex, first, last);
      std::string table = render_csv(p.levels, p.resistance);
      out << table << "verdict: " << p.summary() << "\n";
      if (!csv.empty()) write_output(csv, table, out);
    } else if (*nw_cmd) {
      std::istringstream in(read_input(cuts_file));
      std::vector<double> cuts;
      for (std::string t; in >> t;) {
        try {
          cuts.push_back(std::stod(t));
        } catch (const std::exception&) {
          throw ParseError(0, 0, cuts_file + ": not a number '" + t + "'");
        }
      }
      auto r = nash_williams_partial_sums(cuts, bound);
      std::vector<std::size_t> idx;
      for (std::size_t i = 1; i <= cuts.size(); ++i) idx.push_back(i);
      std::string table = render_csv(idx, r.partial_sums);
      out << table << "assessment: " << r.summary() << "\n";
      if (!csv.empty()) write_output(csv, table, out);
    } else if (*criterion_cmd) {
      auto doc = load(file);
      GroupSpec G;
      G.name = doc.name;
      if (doc.is_group()) {
        G.generators = doc.generators;
        G.generator_names = doc.generator_names;
      } else {
        G.generators = {*doc.initial};
        G.generator_names = {doc.initial->name()};
      }
      if (!pclass_name.empty())
        G.p_class = PClass::parse(pclass_name);
      else if (doc.pclass)
        G.p_class = *doc.pclass;
      else
        return usage("criterion needs --pclass (the file declares none)");
      if (recurrence_name == "unknown")
        G.p_class.recurrence = Recurrence::Unknown;
      else if (recurrence_name == "non-recurrent")
        G.p_class.recurrence = Recurrence::NonRecurrent;
      else if (!recurrence_name.empty() && recurrence_name != "recurrent")
        return usage("--recurrence must be recurrent, unknown, or non-recurrent");
      CriterionConfig cfg;
      cfg.isotropy_budget = budget;
      cfg.orbital_radius_cap = radius_cap;
      auto rep = run_criterion(G, cfg);
      out << rep.text();
      if (!json_file.empty()) write_output(json_file, rep.json().dump(2) + "\n", out);
      status = exit_code(rep.verdict);
    } else if (*corpus_cmd) {
      const std::string& verb = corpus_args.front();
      if (verb == "list") {
        for (const auto& e : corpus::entries())
          out << e.name << (e.is_group ? "  (group)" : corpus::is_network_generator(e.name) ? "  (network)" : "")
              << "\n";
      } else if (verb == "show" || verb == "run") {
        if (corpus_args.size() != 2) return usage("corpus " + verb + " needs an entry name");
        const auto& e = corpus::find(corpus_args[1]);
        if (verb == "show")
          out << (e.text.empty() ? "(generated network: comb)\n" : std::string(e.text));
        else
          print_corpus_entry(e, out);
      } else {
        return usage("corpus takes list, show NAME, or run NAME");
      }
    }
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kNoInput;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const AlphabetError& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const HypothesisError& e) {
    err << "hypothesis violated: " << e.what() << "\n";
    return exit_code(Verdict::HypothesisViolated);
  } catch (const InfiniteActivityError& e) {
    err << "hypothesis violated: " << e.what() << "\n";
    return exit_code(Verdict::HypothesisViolated);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return status;
}

}  // namespace selfsim::cli
