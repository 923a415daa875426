#pragma once

// Pointwise checks relating the S, M and C transition systems.

#include <algorithm>
#include <deque>
#include <set>
#include <string>
#include <vector>

#include "pipg/testing.hpp"

namespace coherence {

using pipg::behaviours::BehaviourSystem;
using pipg::behaviours::MixedBehaviour;
using pipg::behaviours::PositionedBehaviour;

inline std::string mkey(const MixedBehaviour& m) { return pipg::behaviours::canonicalize(m).key; }

inline std::string edge_key(pipg::pi::SigmaLabel l, const std::string& k) {
  return std::string(pipg::pi::label_name(l)) + "|" + k;
}

// Successors of pb in S read through m, and successors of m(pb) in M.
inline std::vector<std::string> s_edges(const BehaviourSystem& sys, const PositionedBehaviour& pb) {
  std::vector<std::string> out;
  for (const auto& t : pipg::testing::s_transitions(sys, pb))
    out.push_back(edge_key(t.label, mkey(pipg::behaviours::m_map(t.target))));
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::string> m_edges(const BehaviourSystem& sys, const MixedBehaviour& m) {
  std::vector<std::string> out;
  for (const auto& t : pipg::testing::m_transitions(sys, m)) out.push_back(edge_key(t.label, mkey(t.target)));
  std::sort(out.begin(), out.end());
  return out;
}

// The S and M transitions of pb and m(pb) agree as multisets.
inline bool s_m_bijection(const BehaviourSystem& sys, const PositionedBehaviour& pb) {
  return s_edges(sys, pb) == m_edges(sys, pipg::behaviours::m_map(pb));
}

// {(pb, m(pb))} is closed under S and M steps up to `depth`: the two
// successor sets coincide at every S state reached in fewer steps.
inline bool m_bisim_to_depth(const BehaviourSystem& sys, const PositionedBehaviour& root, std::size_t depth,
                             std::size_t max_states = 5000) {
  std::set<std::string> seen{pipg::testing::s_key(root)};
  std::deque<std::pair<PositionedBehaviour, std::size_t>> todo{{root, 0}};
  while (!todo.empty()) {
    auto [pb, d] = todo.front();
    todo.pop_front();
    auto se = s_edges(sys, pb);
    auto me = m_edges(sys, pipg::behaviours::m_map(pb));
    se.erase(std::unique(se.begin(), se.end()), se.end());
    me.erase(std::unique(me.begin(), me.end()), me.end());
    if (se != me) return false;
    if (d + 1 >= depth) continue;
    for (auto& t : pipg::testing::s_transitions(sys, pb))
      if (seen.size() < max_states && seen.insert(pipg::testing::s_key(t.target)).second)
        todo.emplace_back(std::move(t.target), d + 1);
  }
  return true;
}

inline bool same_states(const BehaviourSystem& sys, const PositionedBehaviour& a, const PositionedBehaviour& b) {
  if (!(a.position == b.position)) return false;
  for (const auto& [y, s] : a.state)
    if (!pipg::behaviours::behaviour_eq(sys, s, b.state.at(y), sys.size() + 1)) return false;
  return true;
}

struct PathAgreement {
  std::size_t paths = 0;       // composites checked
  std::size_t endpoints = 0;   // S-path endpoints
  bool ok = true;
  std::string detail;
};

// For every closed-world path of length 1 or 2 from pb: each S-path endpoint
// is a C-transition target over the composite, and each accepted global
// state of the end formula lands on some S-path endpoint.
inline PathAgreement s_c_agreement(const BehaviourSystem& sys, const PositionedBehaviour& pb,
                                   std::size_t max_paths = 200) {
  using pipg::traces::Action;
  PathAgreement r;
  auto check = [&](const pipg::traces::TraceCospan& w, const std::vector<PositionedBehaviour>& ends) {
    ++r.paths;
    r.endpoints += ends.size();
    for (const auto& e : ends)
      if (!pipg::testing::c_transition_exists(sys, pb, w, e)) {
        r.ok = false;
        r.detail = "S endpoint without a C transition";
      }
    auto acc = pipg::testing::accept_states(sys, pb, w);
    for (const auto& g : acc.states) {
      auto res = pipg::testing::residual_along_trace(sys, pb, w, pipg::testing::psi(w, g));
      bool hit = std::any_of(ends.begin(), ends.end(), [&](const auto& e) { return same_states(sys, res, e); });
      if (!hit) {
        r.ok = false;
        r.detail = "C transition without an S path";
      }
    }
  };
  for (const Action& a1 : pipg::traces::closed_world_actions_from(pb.position)) {
    if (r.paths >= max_paths) break;
    auto first = pipg::testing::s_successors_along(sys, pb, a1);
    std::vector<PositionedBehaviour> ends1;
    for (const auto& t : first) ends1.push_back(t.target);
    check(a1.cospan, ends1);
    for (const Action& a2 : pipg::traces::closed_world_actions_from(a1.cospan.y)) {
      if (r.paths >= max_paths) break;
      std::vector<PositionedBehaviour> ends2;
      for (const auto& t : first)
        for (const auto& u : pipg::testing::s_successors_along(sys, t.target, a2)) ends2.push_back(u.target);
      check(pipg::traces::compose_traces(a1.cospan, a2.cospan), ends2);
    }
  }
  return r;
}

}  // namespace coherence
