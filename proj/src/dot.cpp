#include "pipg/dot.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace pipg::dot {

using presheaf::ElemId;

namespace {

void node(std::ostringstream& os, const presheaf::Presheaf& u, ElemId id, int label) {
  os << "  n" << id << " [";
  switch (label) {
    case 0: os << "shape=ellipse, label=\"c" << id << "\""; break;
    case 1: os << "shape=box, label=\"" << id << " " << u.at(id).obj.tag() << "\""; break;
    default: os << "shape=diamond, label=\"" << u.at(id).obj.tag() << "\""; break;
  }
  os << "];\n";
}

}  // namespace

std::string causal(const presheaf::Presheaf& u) {
  traces::CausalGraph g = traces::causal_graph(u);
  std::ostringstream os;
  os << "digraph causal {\n  rankdir=BT;\n";
  for (const auto& [id, l] : g.label) node(os, u, id, l);
  for (const auto& [from, tos] : g.edges)
    for (ElemId to : tos) os << "  n" << from << " -> n" << to << ";\n";
  os << "}\n";
  return os.str();
}

std::string diagram(const traces::TraceCospan& c) {
  const presheaf::Presheaf& u = c.u;
  traces::CausalGraph g = traces::causal_graph(u);
  std::vector<traces::Core> cores = traces::cores_of(u);

  // Layer agents and cores: an initial agent sits at 0, a core one above its
  // highest target, a produced agent one above its core.
  std::map<ElemId, int> layer;
  std::map<ElemId, const traces::Core*> producer;
  for (const auto& core : cores)
    for (ElemId s : core.sources) producer[s] = &core;
  std::map<ElemId, int> core_layer;
  auto agent_layer = [&](auto&& self, ElemId a) -> int {
    if (auto it = layer.find(a); it != layer.end()) return it->second;
    layer[a] = 0;  // guards against cycles in malformed input
    int l = 0;
    if (auto p = producer.find(a); p != producer.end()) {
      const traces::Core* core = p->second;
      int cl = 0;
      for (ElemId t : core->targets) cl = std::max(cl, self(self, t) + 1);
      core_layer[core->id] = cl;
      l = cl + 1;
    }
    return layer[a] = l;
  };
  for (ElemId a : u.agents()) agent_layer(agent_layer, a);
  for (const auto& core : cores)
    if (!core_layer.count(core.id)) {
      int cl = 0;
      for (ElemId t : core.targets) cl = std::max(cl, layer.at(t) + 1);
      core_layer[core.id] = cl;
    }

  std::map<int, std::vector<ElemId>> ranks;
  for (const auto& [a, l] : layer) ranks[l].push_back(a);
  for (const auto& [id, l] : core_layer) ranks[l].push_back(id);

  std::ostringstream os;
  os << "digraph trace {\n  rankdir=BT;\n";
  for (ElemId ch : u.channels()) node(os, u, ch, 0);
  for (const auto& [l, ids] : ranks) {
    os << "  { rank=same;";
    for (ElemId id : ids) os << " n" << id << ";";
    os << " }\n";
    for (ElemId id : ids) node(os, u, id, g.label.at(id));
  }
  for (const auto& core : cores) {
    for (ElemId t : core.targets) os << "  n" << t << " -> n" << core.id << ";\n";
    for (ElemId s : core.sources) os << "  n" << core.id << " -> n" << s << ";\n";
    for (ElemId ch : core.created) os << "  n" << core.id << " -> n" << ch << " [style=dotted];\n";
  }
  for (ElemId a : u.agents())
    for (ElemId ch : u.at(a).faces) os << "  n" << a << " -> n" << ch << " [style=dashed, arrowhead=none, constraint=false];\n";
  os << "}\n";
  return os.str();
}

}  // namespace pipg::dot
