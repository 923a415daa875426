#pragma once

#include <chrono>
#include <cstddef>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pipg/behaviours.hpp"
#include "pipg/pi_syntax.hpp"
#include "pipg/traces.hpp"

namespace pipg::testing {

using behaviours::BehaviourSystem;
using behaviours::MixedBehaviour;
using behaviours::PositionedBehaviour;
using pi::SigmaLabel;

struct Budget {
  std::size_t max_states = 200000;
  std::size_t max_depth = std::numeric_limits<std::size_t>::max();
  double time_cap_s = 120.0;
};

// Edges point from a state to its successors; identity edges are implicit
// and never stored.
struct Graph {
  std::vector<std::vector<std::pair<SigmaLabel, std::size_t>>> edges;
  std::size_t root = 0;
  bool complete = true;
  std::size_t budget_used = 0;  // expanded states

  std::size_t size() const { return edges.size(); }
  std::size_t edge_count() const;
};

template <class S>
struct LtsGraph : Graph {
  std::vector<S> states;
  std::vector<std::string> keys;
};

// Breadth-first exploration over canonical states. canon(s) returns the pair
// (key, representative); succ(s) returns (label, successor) pairs.
template <class S, class Canon, class Succ>
LtsGraph<S> explore(const S& root, Canon canon, Succ succ, const Budget& budget) {
  LtsGraph<S> g;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::size_t> depth;
  auto start = std::chrono::steady_clock::now();
  auto intern = [&](std::pair<std::string, S> kr, std::size_t d) -> std::optional<std::size_t> {
    auto it = index.find(kr.first);
    if (it != index.end()) return it->second;
    if (g.states.size() >= budget.max_states) return std::nullopt;
    std::size_t id = g.states.size();
    index.emplace(kr.first, id);
    g.keys.push_back(std::move(kr.first));
    g.states.push_back(std::move(kr.second));
    g.edges.emplace_back();
    depth.push_back(d);
    return id;
  };
  g.root = *intern(canon(root), 0);
  for (std::size_t cur = 0; cur < g.states.size(); ++cur) {
    if (depth[cur] >= budget.max_depth) {
      g.complete = false;
      continue;
    }
    std::chrono::duration<double> el = std::chrono::steady_clock::now() - start;
    if (el.count() > budget.time_cap_s) {
      g.complete = false;
      break;
    }
    ++g.budget_used;
    S here = g.states[cur];
    for (auto& [label, next] : succ(here)) {
      auto id = intern(canon(next), depth[cur] + 1);
      if (!id) {
        g.complete = false;
        continue;
      }
      g.edges[cur].emplace_back(label, *id);
    }
  }
  return g;
}

// ---- LTS instances ----

LtsGraph<pi::Configuration> explore_conf(const pi::Configuration& c, const pi::DefinitionEnv& defs,
                                         const Budget& budget = {});

struct MTransition {
  SigmaLabel label = SigmaLabel::Silent;
  std::string rule;  // fork, tau, tick, nu, sync
  MixedBehaviour target;
};
std::vector<MTransition> m_transitions(const BehaviourSystem& sys, const MixedBehaviour& m);
LtsGraph<MixedBehaviour> explore_m(const BehaviourSystem& sys, const MixedBehaviour& m, const Budget& budget = {});

struct STransition {
  SigmaLabel label = SigmaLabel::Silent;
  traces::Action action;
  std::map<presheaf::ElemId, std::size_t> choices;
  PositionedBehaviour target;
};
// Every branch-choice family for one action; empty if the action is refused.
std::vector<STransition> s_successors_along(const BehaviourSystem& sys, const PositionedBehaviour& pb,
                                            const traces::Action& a);
std::vector<STransition> s_transitions(const BehaviourSystem& sys, const PositionedBehaviour& pb);
std::string s_key(const PositionedBehaviour& pb);
LtsGraph<PositionedBehaviour> explore_s(const BehaviourSystem& sys, const PositionedBehaviour& pb,
                                        const Budget& budget = {});
// Parallel composition in S: pushout of the two positions over their shared
// channels, keeping the left ids.
PositionedBehaviour join_positioned(const PositionedBehaviour& a, const PositionedBehaviour& b);
MixedBehaviour join_mixed(const MixedBehaviour& a, const MixedBehaviour& b);

// ---- poles ----

enum class Pole { Fair, May, Must, ForallReach };
const char* pole_name(Pole p);
std::optional<Pole> parse_pole(const std::string& s);

enum class Truth { True, False, Inconclusive };
const char* truth_name(Truth t);

struct PoleResult {
  Truth verdict = Truth::Inconclusive;
  std::vector<SigmaLabel> witness;  // path from the vertex to the offending state
  std::string reason;
};

PoleResult pole_membership(const Graph& g, std::size_t v, Pole pole);

// ---- fair testing ----

enum class Outcome { Same, Differ, Inconclusive };
const char* outcome_name(Outcome o);

struct TestRun {
  std::string test;
  PoleResult x, y;
  bool x_complete = true, y_complete = true;
  std::size_t x_states = 0, y_states = 0;
  std::size_t x_edges = 0, y_edges = 0;
  std::size_t x_budget = 0, y_budget = 0;
};

struct CompareResult {
  Outcome outcome = Outcome::Same;
  std::optional<std::size_t> differing;  // index into runs
  std::vector<TestRun> runs;
};

// Tests are processes over the channels of x (which must be those of y).
struct TestSuite {
  pi::DefinitionEnv defs;
  std::vector<pi::TermPtr> tests;
};

// Guarded chains alpha_1...alpha_k.tick.0 (1 <= k <= depth) plus binary sums
// of single-action chains; outputs, then inputs, then tau.
std::vector<pi::TermPtr> auto_battery(const std::vector<pi::Chan>& gamma, std::size_t depth);
TestSuite parse_tests(const std::string& text, const pi::Configuration& over, const pi::DefinitionEnv& defs);

// x and y are renamed onto a common channel numbering by display name.
CompareResult fair_testing_compare(const pi::PiFile& x, const pi::PiFile& y, const TestSuite& tests, Pole pole,
                                   const Budget& budget = {}, unsigned jobs = 1);

// Copies `extra` into base's environment (renaming clashing names) and
// relinks `terms`, which were built against `extra`.
pi::PiFile merge_files(const pi::PiFile& base, const pi::DefinitionEnv& extra, std::vector<pi::TermPtr>* terms);

// ---- bisimulation and expansion ----

bool strong_bisim(const Graph& g1, std::size_t v1, const Graph& g2, std::size_t v2);
bool weak_bisim(const Graph& g1, std::size_t v1, const Graph& g2, std::size_t v2);

struct ExpansionBounds {
  std::size_t tau_before = 4;  // weak answers: tau^{<=tau_before} alpha tau^{<=tau_after}
  std::size_t tau_after = 2;
};

struct ExpansionResult {
  bool ok = true;
  std::vector<std::string> play;  // a distinguishing play when !ok
  std::size_t pairs = 0;
};

ExpansionResult expansion_check(const pi::Configuration& c, const pi::DefinitionEnv& defs, const MixedBehaviour& m,
                                const BehaviourSystem& sys, std::size_t depth, ExpansionBounds bounds = {});

// ---- end-formula oracle ----

struct Occurrence {
  presheaf::ElemId agent = 0;   // agent of W.u
  presheaf::ElemId origin = 0;  // initial agent of W (an id of W.x)
  std::vector<behaviours::BasicLabel> word;
  std::optional<presheaf::ElemId> parent;  // occurrence of the one-shorter prefix
};

using GlobalState = std::map<presheaf::ElemId, std::vector<std::size_t>>;  // occurrence -> element of D

struct AcceptResult {
  std::vector<Occurrence> occurrences;
  std::vector<GlobalState> states;
  std::size_t assignments = 0;  // brute-force search space
};

std::vector<Occurrence> view_occurrences(const traces::TraceCospan& w);
// Elements of the behaviour at a view: summand choices along the word.
std::vector<std::vector<std::size_t>> elements_at(const BehaviourSystem& sys, behaviours::StateId s,
                                                  const std::vector<behaviours::BasicLabel>& word);
AcceptResult accept_states(const BehaviourSystem& sys, const PositionedBehaviour& pb, const traces::TraceCospan& w,
                           std::size_t cap = 5000000);
// Per final agent of W (ids of W.y), the choices along its maximal view.
std::map<presheaf::ElemId, std::vector<std::size_t>> psi(const traces::TraceCospan& w, const GlobalState& s);
std::size_t psi_codomain_size(const BehaviourSystem& sys, const PositionedBehaviour& pb, const traces::TraceCospan& w);
PositionedBehaviour residual_along_trace(const BehaviourSystem& sys, const PositionedBehaviour& pb,
                                         const traces::TraceCospan& w,
                                         const std::map<presheaf::ElemId, std::vector<std::size_t>>& family);
bool c_transition_exists(const BehaviourSystem& sys, const PositionedBehaviour& pb, const traces::TraceCospan& w,
                         const PositionedBehaviour& target);

}  // namespace pipg::testing
