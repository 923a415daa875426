#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pipg/presheaf.hpp"

namespace pipg::traces {

using presheaf::ElemId;
using presheaf::Kind;
using presheaf::Morphism;
using presheaf::Object;
using presheaf::Presheaf;

// A seed is named by its middle object.
struct SeedLabel {
  Object obj;

  bool basic() const;
  bool full() const;
  bool closed_world() const;
  std::string str() const { return obj.tag(); }
  auto operator<=>(const SeedLabel&) const = default;
};

struct Action;

// Y -s-> U <-t- X. The decomposition cache is informational; every
// operation recomputes what it needs from U.
struct TraceCospan {
  Presheaf x, y, u;
  Morphism s, t;
  std::vector<SeedLabel> decomposition;
};

struct Action {
  SeedLabel label;
  Presheaf ambient;     // Z: the position the seed is attached to
  Morphism attach;      // seed interface -> Z
  TraceCospan cospan;   // Y' -> M' <- X'
  ElemId core = 0;      // the core of M'
};

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The seed's interface: the channels of its initial position, with the ids
// used by seed_cospan.
Presheaf seed_interface(const SeedLabel& label);
TraceCospan seed_cospan(const SeedLabel& label);
TraceCospan identity_trace(const Presheaf& x);

// Pushes the seed cone along `attach`: seed interface -> z.
Action instantiate_action(const SeedLabel& label, const Presheaf& z, const Morphism& attach);
// The action of `label` performed by the given agents of x, with every other
// agent passive; its initial position is x itself (same ids). For a Sync the
// agents are {receiver, sender}.
Action act_on(const Presheaf& x, const SeedLabel& label, const std::vector<ElemId>& agents);
// Re-derives the action from its label and attachment and compares up to
// special isomorphism.
bool recheck_action(const Action& a);

std::vector<Action> closed_world_actions_from(const Presheaf& x);
// All actions, including basic half-forks and lone inputs/outputs.
std::vector<Action> all_actions_from(const Presheaf& x);

// u then v. `ident` maps v.x onto u.y; when omitted the positions must be
// equal or isomorphic.
TraceCospan compose_traces(const TraceCospan& u, const TraceCospan& v, const Morphism* ident = nullptr);

struct Core {
  ElemId id = 0;
  Object obj;
  std::vector<ElemId> cells;    // its 2-dimensional parts
  std::vector<ElemId> sources;  // agents mu.f.s
  std::vector<ElemId> targets;  // agents mu.f.t
  std::vector<ElemId> created;  // channels created by a core nu or input
};

std::vector<Core> cores_of(const Presheaf& u);

struct CausalGraph {
  std::map<ElemId, int> label;                 // 0 channel, 1 agent, 2 core
  std::map<ElemId, std::set<ElemId>> edges;    // directed
  bool has_path(ElemId from, ElemId to) const;
  std::vector<ElemId> find_cycle() const;      // empty if acyclic
};

CausalGraph causal_graph(const Presheaf& u);

enum class Condition { Ok, Malformed, Monic, LocalInjectivity, Initial, Final, Linearity, Acyclicity };
const char* condition_name(Condition c);

struct TraceCheck {
  Condition condition = Condition::Ok;
  std::size_t length = 0;
  std::string message;
  std::vector<ElemId> witness;
  bool ok() const { return condition == Condition::Ok; }
};

TraceCheck check_trace(const TraceCospan& c);

enum class Tie { Least, Greatest };

// Peels maximal cores one at a time. The actions are sub-cospans of c.u
// (same ids), in temporal order.
std::vector<Action> sequentialize(const TraceCospan& c, Tie tie = Tie::Least);
TraceCospan recompose(const Presheaf& x, const std::vector<Action>& actions);
// Isomorphism of middle objects commuting with both legs. phx: a.x -> b.x and
// phy: a.y -> b.y identify the positions; when omitted they must be equal.
presheaf::IsoResult special_iso(const TraceCospan& a, const TraceCospan& b, const Morphism* phx = nullptr,
                                const Morphism* phy = nullptr);

struct View {
  std::vector<Object> word;  // basic labels, earliest first
  ElemId origin = 0;         // agent of X
  bool operator==(const View&) const = default;
};

// Via sequentialize, folding right to left.
View view_of(const TraceCospan& c, ElemId y, Tie tie = Tie::Least);
// By walking U directly from s(y) back through producing cells.
View view_direct(const TraceCospan& c, ElemId y);

// The 2-dimensional parts of an element of dimension >= 2.
std::vector<ElemId> cells_of(const Presheaf& u, ElemId mu);

}  // namespace pipg::traces
