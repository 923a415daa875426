#pragma once

// Hand-built traces and trace mutations shared by the unit and acceptance
// suites.

#include <optional>

#include "pipg/gen.hpp"
#include "pipg/traces.hpp"

namespace fixtures {

using pipg::presheaf::ElemId;
using pipg::presheaf::Object;
using pipg::presheaf::Presheaf;
using pipg::traces::Action;
using pipg::traces::SeedLabel;
using pipg::traces::TraceCospan;

struct Named {
  Presheaf x;
  ElemId a = 0, b = 0, c = 0;
  ElemId p = 0, q = 0, r = 0;  // agents, in order of introduction
};

// Channels a, b, c; x(a, b) and y(b, c).
inline Named fork_ambient() {
  Named n;
  n.a = n.x.add(Object::star());
  n.b = n.x.add(Object::star());
  n.c = n.x.add(Object::star());
  n.p = n.x.add(Object::agent(2), {n.a, n.b});
  n.q = n.x.add(Object::agent(2), {n.b, n.c});
  return n;
}

// x forks, then y forks.
inline TraceCospan two_forks(bool y_first, std::vector<Action>* acts = nullptr) {
  Named n = fork_ambient();
  ElemId first = y_first ? n.q : n.p, second = y_first ? n.p : n.q;
  Action a1 = pipg::traces::act_on(n.x, SeedLabel{Object::fork(2)}, {first});
  Action a2 = pipg::traces::act_on(a1.cospan.y, SeedLabel{Object::fork(2)}, {second});
  if (acts) *acts = {a1, a2};
  return pipg::traces::compose_traces(a1.cospan, a2.cospan);
}

// The final agent of one side of a synchronisation (kRho or kEps).
inline ElemId final_of(const Action& act, std::size_t role) {
  const Presheaf& u = act.cospan.u;
  return u.face(u.face(act.core, role), pipg::presheaf::kS);
}

// Channels a, b, c; x(a, b), y(b), z(a, c). x sends a on b to y, then z sends
// c on a to the avatar of y.
struct TwoSyncs {
  TraceCospan trace;
  std::vector<Action> actions;
  ElemId y = 0;        // in X
  ElemId y_final = 0;  // in Y
};

inline TwoSyncs two_syncs() {
  Presheaf x;
  ElemId a = x.add(Object::star()), b = x.add(Object::star()), c = x.add(Object::star());
  ElemId px = x.add(Object::agent(2), {a, b});
  ElemId py = x.add(Object::agent(1), {b});
  ElemId pz = x.add(Object::agent(2), {a, c});
  TwoSyncs out;
  out.y = py;
  Action s1 = pipg::traces::act_on(x, SeedLabel{Object::sync(1, 1, 2, 2, 1)}, {py, px});
  ElemId y1 = final_of(s1, pipg::presheaf::kRho);
  Action s2 = pipg::traces::act_on(s1.cospan.y, SeedLabel{Object::sync(2, 2, 2, 1, 2)}, {y1, pz});
  out.y_final = final_of(s2, pipg::presheaf::kRho);
  out.actions = {s1, s2};
  out.trace = pipg::traces::compose_traces(s1.cospan, s2.cospan);
  return out;
}

// ---- mutations ----

// Drops one final agent from Y.
inline TraceCospan drop_final_agent(TraceCospan c, pipg::gen::Rng& rng) {
  auto ags = c.y.agents();
  ElemId victim = ags[pipg::gen::below(rng, ags.size())];
  c.y.erase(victim);
  c.s.erase(victim);
  return c;
}

// Merges agent `gone` into `keep` inside U (same arity and channels).
inline Presheaf merge_agents(const Presheaf& u, ElemId keep, ElemId gone) {
  Presheaf out;
  for (const auto& [id, e] : u.elements()) {
    if (id == gone) continue;
    auto faces = e.faces;
    for (auto& f : faces)
      if (f == gone) f = keep;
    out.put(id, e.obj, faces);
  }
  return out;
}

inline ElemId random_channel_list_agent(Presheaf& x, const std::vector<ElemId>& chans, unsigned n,
                                        pipg::gen::Rng& rng, std::vector<ElemId>* faces) {
  faces->clear();
  for (unsigned i = 0; i < n; ++i) faces->push_back(chans[pipg::gen::below(rng, chans.size())]);
  return x.add(Object::agent(n), *faces);
}

inline Object silent_or_tick(unsigned n, pipg::gen::Rng& rng) {
  return pipg::gen::below(rng, 2) ? Object::tau(n) : Object::tick(n);
}

// Two twin agents each take two silent-or-tick steps; their intermediate
// avatars are then identified, so one agent ends two actions and starts two.
inline TraceCospan merged_intermediates(pipg::gen::Rng& rng) {
  Presheaf x;
  std::vector<ElemId> chans;
  for (std::size_t i = 0, k = 1 + pipg::gen::below(rng, 3); i < k; ++i) chans.push_back(x.add(Object::star()));
  unsigned n = static_cast<unsigned>(pipg::gen::below(rng, 3));
  std::vector<ElemId> faces, scratch;
  ElemId p = random_channel_list_agent(x, chans, n, rng, &faces);
  ElemId q = x.add(Object::agent(n), faces);
  for (std::size_t i = 0, k = pipg::gen::below(rng, 2); i < k; ++i)
    random_channel_list_agent(x, chans, static_cast<unsigned>(pipg::gen::below(rng, 3)), rng, &scratch);

  auto step = [&](const TraceCospan& acc, ElemId agent_in_y) {
    Action a = pipg::traces::act_on(acc.y, SeedLabel{silent_or_tick(n, rng)}, {agent_in_y});
    ElemId produced = 0;
    for (ElemId ag : a.cospan.y.agents())
      if (!acc.y.contains(ag)) produced = ag;
    return std::pair{pipg::traces::compose_traces(acc, a.cospan), produced};
  };
  TraceCospan acc = pipg::traces::identity_trace(x);
  auto [t1, p1] = step(acc, p);
  auto [t2, q1] = step(t1, q);
  auto [t3, p2] = step(t2, p1);
  auto [t4, q2] = step(t3, q1);
  (void)p2;
  (void)q2;
  // p1 and q1 are ids of intermediate positions; find their images in U.
  auto image = [&](const TraceCospan& part, ElemId y) { return part.s.at(y); };
  ElemId up = image(t1, p1), uq = image(t2, q1);
  // Later compositions keep the ids of the earlier middle object.
  TraceCospan m = t4;
  m.u = merge_agents(t4.u, up, uq);
  return m;
}

// Two synchronisations on a twin pair of senders; the first one's sender is
// redirected to the second one's final sender, closing a causal cycle. The
// orphaned initial sender and the now-consumed final sender are removed
// from the boundary.
inline TraceCospan cyclic_syncs(pipg::gen::Rng& rng) {
  using pipg::gen::below;
  Presheaf x;
  std::vector<ElemId> chans;
  for (std::size_t i = 0, k = 1 + below(rng, 3); i < k; ++i) chans.push_back(x.add(Object::star()));
  unsigned n = 1 + static_cast<unsigned>(below(rng, 2)), m = 1 + static_cast<unsigned>(below(rng, 2));
  unsigned a = 1 + static_cast<unsigned>(below(rng, n)), c = 1 + static_cast<unsigned>(below(rng, m)),
           d = 1 + static_cast<unsigned>(below(rng, m));
  std::vector<ElemId> sf, rf, scratch;
  ElemId e1 = random_channel_list_agent(x, chans, m, rng, &sf);
  ElemId e2 = x.add(Object::agent(m), sf);
  for (unsigned i = 0; i < n; ++i) rf.push_back(chans[below(rng, chans.size())]);
  rf[a - 1] = sf[c - 1];
  ElemId r = x.add(Object::agent(n), rf);
  for (std::size_t i = 0, k = below(rng, 2); i < k; ++i)
    random_channel_list_agent(x, chans, static_cast<unsigned>(below(rng, 3)), rng, &scratch);

  Action s1 = pipg::traces::act_on(x, SeedLabel{Object::sync(n, a, m, c, d)}, {r, e1});
  ElemId r1 = final_of(s1, pipg::presheaf::kRho);
  Action s2 = pipg::traces::act_on(s1.cospan.y, SeedLabel{Object::sync(n + 1, a, m, c, d)}, {r1, e2});
  TraceCospan t = pipg::traces::compose_traces(s1.cospan, s2.cospan);

  // The sender cell of the first sync and the second sync's final sender.
  ElemId out1 = t.u.face(s1.core, pipg::presheaf::kEps);
  ElemId e2_final = final_of(s2, pipg::presheaf::kEps);
  ElemId ue1 = t.t.at(e1), ue2f = t.s.at(e2_final);
  t.u.at_mut(out1).faces[pipg::presheaf::kT] = ue2f;
  t.u.erase(ue1);
  t.x.erase(e1);
  t.t.erase(e1);
  t.y.erase(e2_final);
  t.s.erase(e2_final);
  return t;
}

}  // namespace fixtures
