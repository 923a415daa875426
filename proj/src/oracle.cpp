// Brute-force end formula over closed-world traces.
#include <map>
#include <stdexcept>

#include "pipg/testing.hpp"

namespace pipg::testing {

using behaviours::BasicLabel;
using behaviours::StateId;
using presheaf::ElemId;

std::vector<Occurrence> view_occurrences(const traces::TraceCospan& w) {
  std::map<ElemId, ElemId> producer;
  for (const auto& [id, e] : w.u.elements())
    if (e.obj.dimension() == 2) producer[e.faces[presheaf::kS]] = id;
  std::map<ElemId, ElemId> initial;  // U id -> X id
  for (const auto& [x, ux] : w.t) initial[ux] = x;

  std::vector<Occurrence> out;
  for (ElemId a : w.u.agents()) {
    Occurrence o;
    o.agent = a;
    ElemId cur = a;
    for (auto it = producer.find(cur); it != producer.end(); it = producer.find(cur)) {
      auto b = BasicLabel::from_object(w.u.at(it->second).obj);
      if (!b) throw std::logic_error("cell is not a basic action");
      o.word.insert(o.word.begin(), *b);
      cur = w.u.face(it->second, presheaf::kT);
      if (!o.parent) o.parent = cur;
    }
    auto x = initial.find(cur);
    if (x == initial.end()) throw std::invalid_argument("agent " + std::to_string(a) + " has no initial ancestor");
    o.origin = x->second;
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<std::vector<std::size_t>> elements_at(const BehaviourSystem& sys, StateId s,
                                                  const std::vector<BasicLabel>& word) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> path;
  auto go = [&](auto&& self, StateId cur, std::size_t k) -> void {
    if (k == word.size()) {
      out.push_back(path);
      return;
    }
    const auto& row = sys.residual(cur, word[k]);
    for (std::size_t i = 0; i < row.size(); ++i) {
      path.push_back(i);
      self(self, row[i], k + 1);
      path.pop_back();
    }
  };
  go(go, s, 0);
  return out;
}

AcceptResult accept_states(const BehaviourSystem& sys, const PositionedBehaviour& pb, const traces::TraceCospan& w,
                           std::size_t cap) {
  if (!(w.x == pb.position)) throw std::invalid_argument("trace does not start from the behaviour's position");
  AcceptResult r;
  r.occurrences = view_occurrences(w);
  std::vector<std::vector<std::vector<std::size_t>>> elems;
  std::size_t space = 1;
  for (const Occurrence& o : r.occurrences) {
    elems.push_back(elements_at(sys, pb.state.at(o.origin), o.word));
    if (elems.back().empty()) {
      space = 0;
      break;
    }
    if (space > cap / elems.back().size()) throw std::length_error("end formula exceeds the brute-force cap");
    space *= elems.back().size();
  }
  r.assignments = space;
  if (space == 0) return r;

  std::map<ElemId, std::size_t> index;
  for (std::size_t i = 0; i < r.occurrences.size(); ++i) index[r.occurrences[i].agent] = i;
  std::vector<std::size_t> pick(r.occurrences.size(), 0);
  for (;;) {
    bool natural = true;
    for (std::size_t i = 0; natural && i < r.occurrences.size(); ++i) {
      const Occurrence& o = r.occurrences[i];
      if (!o.parent) continue;
      const auto& mine = elems[i][pick[i]];
      std::size_t p = index.at(*o.parent);
      const auto& theirs = elems[p][pick[p]];
      natural = std::equal(theirs.begin(), theirs.end(), mine.begin());
    }
    if (natural) {
      GlobalState g;
      for (std::size_t i = 0; i < r.occurrences.size(); ++i) g[r.occurrences[i].agent] = elems[i][pick[i]];
      r.states.push_back(std::move(g));
    }
    std::size_t k = 0;
    while (k < pick.size() && ++pick[k] == elems[k].size()) pick[k++] = 0;
    if (k == pick.size()) break;
  }
  return r;
}

std::map<ElemId, std::vector<std::size_t>> psi(const traces::TraceCospan& w, const GlobalState& s) {
  std::map<ElemId, std::vector<std::size_t>> out;
  for (ElemId y : w.y.agents()) out[y] = s.at(w.s.at(y));
  return out;
}

std::size_t psi_codomain_size(const BehaviourSystem& sys, const PositionedBehaviour& pb, const traces::TraceCospan& w) {
  std::map<ElemId, const Occurrence*> occ;
  auto all = view_occurrences(w);
  for (const Occurrence& o : all) occ[o.agent] = &o;
  std::size_t n = 1;
  for (ElemId y : w.y.agents()) {
    const Occurrence& o = *occ.at(w.s.at(y));
    n *= elements_at(sys, pb.state.at(o.origin), o.word).size();
  }
  return n;
}

PositionedBehaviour residual_along_trace(const BehaviourSystem& sys, const PositionedBehaviour& pb,
                                         const traces::TraceCospan& w,
                                         const std::map<ElemId, std::vector<std::size_t>>& family) {
  std::map<ElemId, Occurrence> occ;
  for (Occurrence& o : view_occurrences(w)) occ[o.agent] = std::move(o);
  PositionedBehaviour out;
  out.position = w.y;
  for (ElemId y : w.y.agents()) {
    const Occurrence& o = occ.at(w.s.at(y));
    const auto& choice = family.at(y);
    if (choice.size() != o.word.size()) throw std::invalid_argument("choice does not match the view");
    StateId s = pb.state.at(o.origin);
    for (std::size_t k = 0; k < o.word.size(); ++k) s = sys.restrict(s, o.word[k], choice[k]);
    out.state[y] = s;
  }
  return out;
}

bool c_transition_exists(const BehaviourSystem& sys, const PositionedBehaviour& pb, const traces::TraceCospan& w,
                         const PositionedBehaviour& target) {
  if (!(target.position == w.y)) throw std::invalid_argument("target is not on the final position of the trace");
  AcceptResult acc = accept_states(sys, pb, w);
  std::size_t depth = sys.size() + 1;
  for (const GlobalState& g : acc.states) {
    PositionedBehaviour r = residual_along_trace(sys, pb, w, psi(w, g));
    bool all = true;
    for (const auto& [y, s] : r.state)
      if (!behaviours::behaviour_eq(sys, s, target.state.at(y), depth)) {
        all = false;
        break;
      }
    if (all) return true;
  }
  return false;
}

}  // namespace pipg::testing
