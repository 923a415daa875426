#include "pipg/cli.hpp"

#include <algorithm>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pipg/behaviours.hpp"
#include "pipg/dot.hpp"
#include "pipg/gen.hpp"
#include "pipg/io.hpp"
#include "pipg/pi_syntax.hpp"
#include "pipg/testing.hpp"
#include "pipg/traces.hpp"

namespace pipg::cli {
namespace {

using json = nlohmann::json;
namespace beh = behaviours;
namespace tst = testing;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool is_behaviour_text(const std::string& text) {
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) {
    std::istringstream ls(line.substr(0, line.find('#')));
    std::string w;
    if (ls >> w) return w == "STATE";
  }
  return false;
}

json labels_json(const std::vector<pi::SigmaLabel>& ls) {
  json a = json::array();
  for (auto l : ls) a.push_back(pi::label_name(l));
  return a;
}

int truth_code(tst::Truth t) {
  switch (t) {
    case tst::Truth::True: return kOk;
    case tst::Truth::False: return kNegative;
    default: return kInconclusive;
  }
}

tst::Pole pole_arg(const std::string& s) {
  auto p = tst::parse_pole(s);
  if (!p) throw UsageError("unknown pole '" + s + "' (fair|may|must|forallreach)");
  return *p;
}

traces::Tie tie_arg(const std::string& s) {
  if (s == "least") return traces::Tie::Least;
  if (s == "greatest") return traces::Tie::Greatest;
  throw UsageError("unknown tie '" + s + "' (least|greatest)");
}

// Graph summaries shared by step and bbot.
template <class S, class Show>
void print_graph(std::ostream& out, const tst::LtsGraph<S>& g, Show show) {
  for (std::size_t i = 0; i < g.size(); ++i) out << "state " << i << ": " << show(g.states[i]) << "\n";
  for (std::size_t i = 0; i < g.size(); ++i)
    for (const auto& [l, j] : g.edges[i]) out << i << " -" << pi::label_name(l) << "-> " << j << "\n";
  out << (g.complete ? "complete" : "truncated") << " states=" << g.size() << " edges=" << g.edge_count() << "\n";
}

json graph_report(const tst::Graph& g, tst::Pole pole, const tst::PoleResult& r) {
  json j;
  j["pole"] = tst::pole_name(pole);
  j["complete"] = g.complete;
  j["verdict"] = tst::truth_name(r.verdict);
  j["witness"] = labels_json(r.witness);
  if (!r.reason.empty()) j["reason"] = r.reason;
  j["states"] = g.size();
  j["edges"] = g.edge_count();
  j["budget_used"] = g.budget_used;
  return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"pipg: pi-calculus, trace and behaviour workbench"};
  app.require_subcommand(1);

  // parse
  std::string file, file2;
  auto* parse = app.add_subcommand("parse", "Parse a .pi file and print it back");
  parse->add_option("file", file, "definitions plus one configuration line")->required();

  // step
  std::string lts = "conf";
  std::size_t steps = 1;
  std::size_t cap = 200000;
  double time_cap = 120.0;
  auto* step = app.add_subcommand("step", "Explore a configuration's transitions to depth n");
  step->add_option("file", file)->required();
  step->add_option("--lts", lts, "conf|m|s")->check(CLI::IsMember({"conf", "m", "s"}));
  step->add_option("-n", steps, "depth");
  step->add_option("--cap", cap, "state budget");

  // translate / zeta
  auto* translate = app.add_subcommand("translate", "Translate a configuration into a behaviour system");
  translate->add_option("file", file)->required();
  auto* zeta = app.add_subcommand("zeta", "Back-translate behaviours (or T of a .pi file) to processes");
  zeta->add_option("file", file)->required();

  // trace
  auto* trace = app.add_subcommand("trace", "Trace cospans");
  trace->require_subcommand(1);
  auto* tcheck = trace->add_subcommand("check", "Check the trace criterion");
  tcheck->add_option("file", file)->required();
  std::string tie = "least";
  auto* tseq = trace->add_subcommand("seq", "Sequentialise into actions");
  tseq->add_option("file", file)->required();
  tseq->add_option("--tie", tie, "least|greatest");
  auto* tviews = trace->add_subcommand("views", "Print the view of every final agent");
  tviews->add_option("file", file)->required();
  tviews->add_option("--tie", tie, "least|greatest");
  auto* tcompose = trace->add_subcommand("compose", "Compose two traces");
  tcompose->add_option("first", file)->required();
  tcompose->add_option("second", file2)->required();
  std::string seed_label;
  auto* tseed = trace->add_subcommand("seed", "Print a seed cospan");
  tseed->add_option("label", seed_label, "e.g. fork:2 or sync:1,1,2,1,2")->required();
  std::size_t rlen = 3, ragents = 3, rchans = 4;
  bool rclosed = false;
  std::uint64_t rseed = 0;
  auto* trandom = trace->add_subcommand("random", "Print a random composite of actions");
  trandom->add_option("--length", rlen);
  trandom->add_option("--agents", ragents);
  trandom->add_option("--channels", rchans);
  trandom->add_flag("--closed", rclosed, "closed-world actions only");
  trandom->add_option("--seed", rseed, "overrides PIPG_SEED");

  // dot
  auto* dot = app.add_subcommand("dot", "DOT renderings of a trace");
  dot->require_subcommand(1);
  auto* dcausal = dot->add_subcommand("causal", "Causal graph of the middle object");
  dcausal->add_option("file", file)->required();
  auto* ddiagram = dot->add_subcommand("diagram", "Layered string diagram");
  ddiagram->add_option("file", file)->required();

  // fairtest
  std::string pole = "fair", tests = "auto:2";
  unsigned jobs = 1;
  auto* fairtest = app.add_subcommand("fairtest", "Compare two configurations over a test battery");
  fairtest->add_option("x", file)->required();
  fairtest->add_option("y", file2)->required();
  fairtest->add_option("--pole", pole, "fair|may|must|forallreach");
  fairtest->add_option("--tests", tests, "FILE or auto:d");
  fairtest->add_option("--cap", cap, "state budget per exploration");
  fairtest->add_option("--time", time_cap, "seconds per exploration");
  fairtest->add_option("--jobs", jobs, "parallel tests")->check(CLI::Range(1u, 64u));

  // bisim
  std::string mode = "weak", expansion_file, against = "auto";
  std::size_t depth = 6;
  auto* bisim = app.add_subcommand("bisim", "Bisimilarity of two configurations, or the expansion check");
  bisim->add_option("a", file);
  bisim->add_option("b", file2);
  bisim->add_option("--mode", mode, "weak|strong|expansion")->check(CLI::IsMember({"weak", "strong", "expansion"}));
  bisim->add_option("--expansion", expansion_file, "configuration to check against its translation");
  bisim->add_option("--against", against, "auto|zeta")->check(CLI::IsMember({"auto", "zeta"}));
  bisim->add_option("--depth", depth);
  bisim->add_option("--cap", cap);

  // bbot
  auto* bbot = app.add_subcommand("bbot", "Pole membership of a configuration's initial state");
  bbot->add_option("file", file)->required();
  bbot->add_option("--pole", pole, "fair|may|must|forallreach");
  bbot->add_option("--lts", lts, "conf|m|s")->check(CLI::IsMember({"conf", "m", "s"}));
  bbot->add_option("--cap", cap);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    tst::Budget budget;
    budget.max_states = cap;
    budget.time_cap_s = time_cap;

    if (*parse) {
      pi::PiFile f = pi::parse_pi_file(io::read_file(file));
      out << pi::print_definitions(f.defs) << pi::print_configuration(f.config, f.defs) << "\n";
      return kOk;
    }

    if (*step || *bbot) {
      pi::PiFile f = pi::parse_pi_file(io::read_file(file));
      if (*step) budget.max_depth = steps;
      std::optional<tst::Pole> p;
      if (*bbot) p = pole_arg(pole);
      auto finish = [&](const auto& g, auto show) {
        if (*step) {
          print_graph(out, g, show);
          return g.complete ? kOk : kInconclusive;
        }
        tst::PoleResult r = tst::pole_membership(g, g.root, *p);
        out << graph_report(g, *p, r).dump(2) << "\n";
        return truth_code(r.verdict);
      };
      if (lts == "conf") {
        auto g = tst::explore_conf(f.config, f.defs, budget);
        return finish(g, [&](const pi::Configuration& c) { return pi::print_configuration(c, f.defs); });
      }
      beh::BehaviourSystem sys;
      beh::MixedBehaviour m = beh::translate_config(f.config, f.defs, sys);
      if (lts == "m") {
        auto g = tst::explore_m(sys, m, budget);
        return finish(g, [&](const beh::MixedBehaviour& s) { return beh::print_mixed(sys, s); });
      }
      auto g = tst::explore_s(sys, beh::a_section(sys, m), budget);
      return finish(g, [&](const beh::PositionedBehaviour& s) { return beh::print_mixed(sys, beh::m_map(s)); });
    }

    if (*translate) {
      pi::PiFile f = pi::parse_pi_file(io::read_file(file));
      beh::BehaviourSystem sys;
      beh::MixedBehaviour m = beh::translate_config(f.config, f.defs, sys);
      std::vector<beh::StateId> roots;
      for (const auto& it : m.items) roots.push_back(it.state);
      out << "# " << beh::print_mixed(sys, m) << "\n" << beh::print_system(sys, roots);
      return kOk;
    }

    if (*zeta) {
      std::string text = io::read_file(file);
      pi::PiFile z;
      if (is_behaviour_text(text)) {
        beh::SystemFile sf = beh::parse_system(text);
        sf.sys.validate();
        if (sf.roots.empty()) throw UsageError("behaviour file has no ROOT lines");
        beh::MixedBehaviour m;
        unsigned top = 0;
        for (auto r : sf.roots) top = std::max(top, sf.sys.at(r).arity);
        for (unsigned i = 0; i < top; ++i) m.gamma.push_back(i);
        for (auto r : sf.roots) {
          beh::MixedItem it{r, {}};
          for (unsigned i = 0; i < sf.sys.at(r).arity; ++i) it.sigma.push_back(i);
          m.items.push_back(std::move(it));
        }
        z = beh::zeta_config(sf.sys, m);
      } else {
        pi::PiFile f = pi::parse_pi_file(text);
        beh::BehaviourSystem sys;
        z = beh::zeta_config(sys, beh::translate_config(f.config, f.defs, sys));
      }
      out << pi::print_definitions(z.defs) << pi::print_configuration(z.config, z.defs) << "\n";
      return kOk;
    }

    if (*tcheck) {
      traces::TraceCospan c = io::parse_cospan(io::read_file(file));
      traces::TraceCheck r = traces::check_trace(c);
      if (r.ok()) {
        out << "Ok length=" << r.length << "\n";
        return kOk;
      }
      json j;
      j["condition"] = traces::condition_name(r.condition);
      j["message"] = r.message;
      j["witness"] = r.witness;
      out << "Violation " << j.dump() << "\n";
      return kNegative;
    }

    if (*tseq || *tviews) {
      traces::TraceCospan c = io::parse_cospan(io::read_file(file));
      traces::TraceCheck r = traces::check_trace(c);
      if (!r.ok()) {
        out << "Violation " << traces::condition_name(r.condition) << ": " << r.message << "\n";
        return kNegative;
      }
      traces::Tie t = tie_arg(tie);
      if (*tseq) {
        for (const auto& a : traces::sequentialize(c, t)) out << a.label.str() << " core=" << a.core << "\n";
        return kOk;
      }
      for (auto y : c.y.agents()) {
        traces::View v = traces::view_of(c, y, t);
        out << "agent " << y << " origin=" << v.origin << " view=";
        if (v.word.empty()) out << "id";
        for (std::size_t i = 0; i < v.word.size(); ++i) out << (i ? "." : "") << v.word[i].tag();
        out << "\n";
      }
      return kOk;
    }

    if (*tcompose) {
      traces::TraceCospan a = io::parse_cospan(io::read_file(file));
      traces::TraceCospan b = io::parse_cospan(io::read_file(file2));
      out << io::print_cospan(traces::compose_traces(a, b));
      return kOk;
    }

    if (*tseed) {
      auto o = presheaf::Object::parse_tag(seed_label);
      if (!o || o->dimension() < 2 || !o->valid()) throw UsageError("not a seed label: " + seed_label);
      out << io::print_cospan(traces::seed_cospan(traces::SeedLabel{*o}));
      return kOk;
    }

    if (*trandom) {
      gen::Rng rng(trandom->count("--seed") ? rseed : gen::seed_from_env(1));
      gen::CompositeOptions o;
      o.max_length = rlen;
      o.max_agents = ragents;
      o.max_channels = rchans;
      o.closed_world = rclosed;
      presheaf::Presheaf x = gen::random_position(rng, std::max<std::size_t>(1, ragents), std::max<std::size_t>(1, rchans), 2);
      out << io::print_cospan(gen::random_composite(rng, x, o));
      return kOk;
    }

    if (*dcausal || *ddiagram) {
      traces::TraceCospan c = io::parse_cospan(io::read_file(file));
      out << (*dcausal ? dot::causal(c.u) : dot::diagram(c));
      return kOk;
    }

    if (*fairtest) {
      tst::Pole p = pole_arg(pole);
      pi::PiFile x = pi::parse_pi_file(io::read_file(file));
      pi::PiFile y = pi::parse_pi_file(io::read_file(file2));
      tst::TestSuite suite;
      if (tests.rfind("auto:", 0) == 0) {
        std::size_t d = 0;
        try {
          d = std::stoul(tests.substr(5));
        } catch (const std::exception&) {
          throw UsageError("bad battery depth in '" + tests + "'");
        }
        suite.tests = tst::auto_battery(x.config.gamma, d);
      } else {
        suite = tst::parse_tests(io::read_file(tests), x.config, x.defs);
      }
      tst::CompareResult r = tst::fair_testing_compare(x, y, suite, p, budget, jobs);
      json j;
      j["pole"] = tst::pole_name(p);
      j["verdict"] = tst::outcome_name(r.outcome);
      j["battery"] = tests;
      j["tests_run"] = r.runs.size();
      bool complete = true;
      std::size_t states = 0, edges = 0, used = 0;
      for (const auto& run : r.runs) {
        complete = complete && run.x_complete && run.y_complete;
        states += run.x_states + run.y_states;
        edges += run.x_edges + run.y_edges;
        used += run.x_budget + run.y_budget;
      }
      j["complete"] = complete;
      j["states"] = states;
      j["edges"] = edges;
      j["budget_used"] = used;
      if (r.differing) {
        const tst::TestRun& run = r.runs[*r.differing];
        bool x_fails = run.x.verdict == tst::Truth::False;
        const tst::PoleResult& bad = x_fails ? run.x : run.y;
        j["witness"] = {{"test", run.test}, {"side", x_fails ? "x" : "y"}, {"path", labels_json(bad.witness)},
                        {"reason", bad.reason}};
      } else {
        j["witness"] = nullptr;
      }
      out << j.dump(2) << "\n";
      switch (r.outcome) {
        case tst::Outcome::Same: return kOk;
        case tst::Outcome::Differ: return kNegative;
        default: return kInconclusive;
      }
    }

    if (*bisim) {
      if (!expansion_file.empty() || mode == "expansion") {
        std::string path = expansion_file.empty() ? file : expansion_file;
        if (path.empty()) throw UsageError("expansion needs a configuration file");
        pi::PiFile f = pi::parse_pi_file(io::read_file(path));
        beh::BehaviourSystem sys;
        beh::MixedBehaviour m = beh::translate_config(f.config, f.defs, sys);
        tst::ExpansionResult r;
        if (against == "zeta") {
          pi::PiFile z = beh::zeta_config(sys, m);
          r = tst::expansion_check(z.config, z.defs, m, sys, depth);
        } else {
          r = tst::expansion_check(f.config, f.defs, m, sys, depth);
        }
        json j{{"mode", "expansion"}, {"against", against}, {"depth", depth}, {"ok", r.ok}, {"pairs", r.pairs},
               {"play", r.play}};
        out << j.dump(2) << "\n";
        return r.ok ? kOk : kNegative;
      }
      if (file.empty() || file2.empty()) throw UsageError("bisim needs two configuration files");
      pi::PiFile a = pi::parse_pi_file(io::read_file(file));
      pi::PiFile b = pi::parse_pi_file(io::read_file(file2));
      auto ga = tst::explore_conf(a.config, a.defs, budget);
      auto gb = tst::explore_conf(b.config, b.defs, budget);
      json j{{"mode", mode}, {"complete", ga.complete && gb.complete}, {"states", ga.size() + gb.size()},
             {"edges", ga.edge_count() + gb.edge_count()}};
      if (!ga.complete || !gb.complete) {
        j["verdict"] = "Inconclusive";
        out << j.dump(2) << "\n";
        return kInconclusive;
      }
      bool eq = mode == "strong" ? tst::strong_bisim(ga, ga.root, gb, gb.root) : tst::weak_bisim(ga, ga.root, gb, gb.root);
      j["verdict"] = eq ? "true" : "false";
      out << j.dump(2) << "\n";
      return eq ? kOk : kNegative;
    }
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const beh::TranslationBudget& e) {
    err << "inconclusive: " << e.what() << "\n";
    return kInconclusive;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace pipg::cli
