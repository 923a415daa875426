#include "pipg/traces.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace pipg::traces {

using presheaf::kEps;
using presheaf::kL;
using presheaf::kR;
using presheaf::kRho;
using presheaf::kS;
using presheaf::kT;

bool SeedLabel::basic() const {
  switch (obj.kind) {
    case Kind::Fork:
    case Kind::Sync: return false;
    default: return true;
  }
}

bool SeedLabel::full() const { return obj.kind != Kind::PiL && obj.kind != Kind::PiR; }

bool SeedLabel::closed_world() const {
  switch (obj.kind) {
    case Kind::Tau:
    case Kind::Fork:
    case Kind::Sync:
    case Kind::Nu:
    case Kind::Tick: return true;
    default: return false;
  }
}

std::vector<ElemId> cells_of(const Presheaf& u, ElemId mu) {
  const presheaf::Element& e = u.at(mu);
  switch (e.obj.kind) {
    case Kind::Fork:
    case Kind::Sync: return {e.faces[0], e.faces[1]};
    default:
      if (e.obj.dimension() == 2) return {mu};
      return {};
  }
}

namespace {

Morphism inclusion(const Presheaf& sub) {
  Morphism m;
  for (const auto& [id, e] : sub.elements()) m[id] = id;
  return m;
}

std::set<ElemId> with_faces(const Presheaf& u, const std::vector<ElemId>& ids) {
  std::set<ElemId> out;
  std::function<void(ElemId)> go = [&](ElemId x) {
    if (!out.insert(x).second) return;
    for (ElemId f : u.at(x).faces) go(f);
  };
  for (ElemId x : ids) go(x);
  return out;
}

std::vector<ElemId> sorted_unique(std::vector<ElemId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Initial and final agents of the seed, in face order.
std::vector<ElemId> seed_agents(const Presheaf& y, ElemId top, std::size_t face) {
  std::vector<ElemId> out;
  for (ElemId c : cells_of(y, top)) {
    ElemId a = y.face(c, face);
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  }
  return out;
}

}  // namespace

Presheaf seed_interface(const SeedLabel& label) {
  auto rep = presheaf::representable(label.obj);
  Presheaf out;
  for (ElemId a : seed_agents(rep.y, rep.top, kT))
    for (ElemId c : rep.y.at(a).faces) out.put(c, Object::star());
  return out;
}

TraceCospan seed_cospan(const SeedLabel& label) {
  if (label.obj.dimension() < 2) throw TraceError("not a seed: " + label.str());
  auto rep = presheaf::representable(label.obj);
  TraceCospan c;
  c.u = rep.y;
  c.x = restrict_to(rep.y, with_faces(rep.y, seed_agents(rep.y, rep.top, kT)));
  std::vector<ElemId> fin = seed_agents(rep.y, rep.top, kS);
  for (ElemId ch : rep.y.channels()) fin.push_back(ch);
  c.y = restrict_to(rep.y, with_faces(rep.y, fin));
  c.s = inclusion(c.y);
  c.t = inclusion(c.x);
  c.decomposition = {label};
  return c;
}

TraceCospan identity_trace(const Presheaf& x) {
  TraceCospan c;
  c.x = c.y = c.u = x;
  c.s = c.t = presheaf::identity(x);
  return c;
}

Action instantiate_action(const SeedLabel& label, const Presheaf& z, const Morphism& attach) {
  if (!presheaf::is_position(z)) throw TraceError("ambient is not a position");
  Presheaf iface = seed_interface(label);
  for (const auto& [id, e] : iface.elements()) {
    auto it = attach.find(id);
    if (it == attach.end() || !z.contains(it->second) || z.at(it->second).obj.kind != Kind::Star)
      throw TraceError("attach is not a map from the seed interface into the ambient channels");
  }
  if (attach.size() != iface.size()) throw TraceError("attach is not a map from the seed interface");
  TraceCospan seed = seed_cospan(label);
  auto po = presheaf::pushout(iface, z, seed.u, attach, inclusion(iface));
  std::vector<ElemId> xs, ys;
  for (const auto& [id, e] : z.elements()) {
    xs.push_back(po.in_a.at(id));
    ys.push_back(po.in_a.at(id));
  }
  for (const auto& [id, e] : seed.x.elements()) xs.push_back(po.in_b.at(id));
  for (const auto& [id, e] : seed.y.elements()) ys.push_back(po.in_b.at(id));
  Action a;
  a.label = label;
  a.ambient = z;
  a.attach = attach;
  a.cospan.u = po.p;
  a.cospan.x = restrict_to(po.p, {xs.begin(), xs.end()});
  a.cospan.y = restrict_to(po.p, {ys.begin(), ys.end()});
  a.cospan.s = inclusion(a.cospan.y);
  a.cospan.t = inclusion(a.cospan.x);
  a.cospan.decomposition = {label};
  a.core = po.in_b.at(presheaf::representable(label.obj).top);
  return a;
}

Action act_on(const Presheaf& x, const SeedLabel& label, const std::vector<ElemId>& agents) {
  auto rep = presheaf::representable(label.obj);
  std::vector<ElemId> seed_init = seed_agents(rep.y, rep.top, kT);
  if (seed_init.size() != agents.size()) throw TraceError("wrong number of acting agents for " + label.str());
  Morphism attach;
  std::set<ElemId> acting;
  for (std::size_t k = 0; k < agents.size(); ++k) {
    if (!x.contains(agents[k]) || x.at(agents[k]).obj != rep.y.at(seed_init[k]).obj)
      throw TraceError("acting agent has the wrong arity for " + label.str());
    if (!acting.insert(agents[k]).second) throw TraceError("an agent cannot play two roles");
    const auto& sf = rep.y.at(seed_init[k]).faces;
    const auto& af = x.at(agents[k]).faces;
    for (std::size_t i = 0; i < sf.size(); ++i) {
      auto [it, fresh] = attach.emplace(sf[i], af[i]);
      if (!fresh && it->second != af[i]) throw TraceError("agents do not share the channel required by " + label.str());
    }
  }
  std::set<ElemId> keep;
  for (const auto& [id, e] : x.elements())
    if (!acting.count(id)) keep.insert(id);
  Presheaf z = restrict_to(x, keep);

  Presheaf iface = seed_interface(label);
  TraceCospan seed = seed_cospan(label);
  auto po = presheaf::pushout(iface, z, seed.u, attach, inclusion(iface), x.next_id());
  Morphism ren = presheaf::identity(po.p);
  for (std::size_t k = 0; k < agents.size(); ++k) ren[po.in_b.at(seed_init[k])] = agents[k];
  Presheaf u = presheaf::relabel(po.p, ren);
  std::vector<ElemId> xs, ys;
  for (ElemId id : keep) {
    xs.push_back(id);
    ys.push_back(id);
  }
  for (const auto& [id, e] : seed.x.elements()) xs.push_back(ren.at(po.in_b.at(id)));
  for (const auto& [id, e] : seed.y.elements()) ys.push_back(ren.at(po.in_b.at(id)));

  Action a;
  a.label = label;
  a.ambient = z;
  a.attach = attach;
  a.cospan.u = u;
  a.cospan.x = restrict_to(u, {xs.begin(), xs.end()});
  a.cospan.y = restrict_to(u, {ys.begin(), ys.end()});
  a.cospan.s = inclusion(a.cospan.y);
  a.cospan.t = inclusion(a.cospan.x);
  a.cospan.decomposition = {label};
  a.core = ren.at(po.in_b.at(rep.top));
  if (!(a.cospan.x == x)) throw std::logic_error("act_on did not reproduce its initial position");
  return a;
}

bool recheck_action(const Action& a) {
  Action b = instantiate_action(a.label, a.ambient, a.attach);
  Morphism fixed;
  for (const auto& [id, e] : a.ambient.elements()) fixed[id] = id;
  auto iso = presheaf::iso_check(a.cospan.u, b.cospan.u, fixed);
  if (iso.status != presheaf::IsoStatus::Found) return false;
  auto maps_onto = [&](const Presheaf& p, const Presheaf& q) {
    std::set<ElemId> img;
    for (const auto& [id, e] : p.elements()) img.insert(iso.iso.at(id));
    std::set<ElemId> want;
    for (const auto& [id, e] : q.elements()) want.insert(id);
    return img == want;
  };
  return maps_onto(a.cospan.x, b.cospan.x) && maps_onto(a.cospan.y, b.cospan.y);
}

namespace {

void push_agent_actions(const Presheaf& x, ElemId ag, bool closed, std::vector<Action>& out) {
  unsigned n = x.at(ag).obj.n;
  out.push_back(act_on(x, {Object::tau(n)}, {ag}));
  out.push_back(act_on(x, {Object::tick(n)}, {ag}));
  out.push_back(act_on(x, {Object::fork(n)}, {ag}));
  out.push_back(act_on(x, {Object::nu(n)}, {ag}));
  if (closed) return;
  out.push_back(act_on(x, {Object::pil(n)}, {ag}));
  out.push_back(act_on(x, {Object::pir(n)}, {ag}));
  for (unsigned a = 1; a <= n; ++a) out.push_back(act_on(x, {Object::iota(n, a)}, {ag}));
  for (unsigned c = 1; c <= n; ++c)
    for (unsigned d = 1; d <= n; ++d) out.push_back(act_on(x, {Object::out(n, c, d)}, {ag}));
}

void push_syncs(const Presheaf& x, std::vector<Action>& out) {
  for (ElemId r : x.agents())
    for (ElemId e : x.agents()) {
      if (r == e) continue;
      const auto& rf = x.at(r).faces;
      const auto& ef = x.at(e).faces;
      unsigned n = static_cast<unsigned>(rf.size()), m = static_cast<unsigned>(ef.size());
      for (unsigned c = 1; c <= m; ++c)
        for (unsigned a = 1; a <= n; ++a) {
          if (ef[c - 1] != rf[a - 1]) continue;
          for (unsigned d = 1; d <= m; ++d) out.push_back(act_on(x, {Object::sync(n, a, m, c, d)}, {r, e}));
        }
    }
}

}  // namespace

std::vector<Action> closed_world_actions_from(const Presheaf& x) {
  std::vector<Action> out;
  for (ElemId ag : x.agents()) push_agent_actions(x, ag, true, out);
  push_syncs(x, out);
  return out;
}

std::vector<Action> all_actions_from(const Presheaf& x) {
  std::vector<Action> out;
  for (ElemId ag : x.agents()) push_agent_actions(x, ag, false, out);
  push_syncs(x, out);
  return out;
}

TraceCospan compose_traces(const TraceCospan& u, const TraceCospan& v, const Morphism* ident) {
  Morphism phi;
  if (ident) {
    phi = *ident;
    std::string why;
    if (!presheaf::is_natural(phi, v.x, u.y, &why) || !presheaf::is_injective(phi) || phi.size() != u.y.size())
      throw TraceError("identification is not an isomorphism of positions: " + why);
  } else if (v.x == u.y) {
    phi = presheaf::identity(v.x);
  } else {
    auto iso = presheaf::iso_check(v.x, u.y);
    if (iso.status != presheaf::IsoStatus::Found) throw TraceError("position mismatch");
    phi = iso.iso;
  }
  Morphism g;
  for (const auto& [vx, uy] : phi) g[uy] = v.t.at(vx);
  auto po = presheaf::pushout(u.y, u.u, v.u, u.s, g);
  TraceCospan c;
  c.x = u.x;
  c.y = v.y;
  c.u = po.p;
  c.t = presheaf::compose(po.in_a, u.t);
  c.s = presheaf::compose(po.in_b, v.s);
  c.decomposition = u.decomposition;
  c.decomposition.insert(c.decomposition.end(), v.decomposition.begin(), v.decomposition.end());
  return c;
}

// ---- cores and causal graphs ----

std::vector<Core> cores_of(const Presheaf& u) {
  std::set<ElemId> covered;
  for (const auto& [id, e] : u.elements())
    if (e.obj.dimension() > 2)
      for (ElemId f : e.faces) covered.insert(f);
  std::vector<Core> out;
  for (const auto& [id, e] : u.elements()) {
    if (e.obj.dimension() < 2 || covered.count(id)) continue;
    Core c;
    c.id = id;
    c.obj = e.obj;
    c.cells = cells_of(u, id);
    for (ElemId cell : c.cells) {
      c.sources.push_back(u.face(cell, kS));
      c.targets.push_back(u.face(cell, kT));
    }
    c.sources = sorted_unique(c.sources);
    c.targets = sorted_unique(c.targets);
    if (e.obj.kind == Kind::Nu || e.obj.kind == Kind::Iota) c.created.push_back(u.face(u.face(id, kS), e.obj.n));
    out.push_back(std::move(c));
  }
  return out;
}

bool CausalGraph::has_path(ElemId from, ElemId to) const {
  std::set<ElemId> seen{from};
  std::deque<ElemId> q{from};
  while (!q.empty()) {
    ElemId x = q.front();
    q.pop_front();
    auto it = edges.find(x);
    if (it == edges.end()) continue;
    for (ElemId y : it->second) {
      if (y == to) return true;
      if (seen.insert(y).second) q.push_back(y);
    }
  }
  return false;
}

std::vector<ElemId> CausalGraph::find_cycle() const {
  std::map<ElemId, int> colour;
  std::vector<ElemId> stack;
  std::vector<ElemId> cycle;
  std::function<bool(ElemId)> dfs = [&](ElemId x) {
    colour[x] = 1;
    stack.push_back(x);
    auto it = edges.find(x);
    if (it != edges.end())
      for (ElemId y : it->second) {
        if (colour[y] == 1) {
          auto at = std::find(stack.begin(), stack.end(), y);
          cycle.assign(at, stack.end());
          return true;
        }
        if (colour[y] == 0 && dfs(y)) return true;
      }
    stack.pop_back();
    colour[x] = 2;
    return false;
  };
  for (const auto& [v, l] : label)
    if (colour[v] == 0 && dfs(v)) return cycle;
  return {};
}

CausalGraph causal_graph(const Presheaf& u) {
  CausalGraph g;
  for (const auto& [id, e] : u.elements()) {
    if (e.obj.kind == Kind::Star) g.label[id] = 0;
    if (e.obj.kind == Kind::Agent) {
      g.label[id] = 1;
      for (ElemId c : e.faces) g.edges[id].insert(c);
    }
  }
  for (const Core& c : cores_of(u)) {
    g.label[c.id] = 2;
    for (ElemId s : c.sources) g.edges[s].insert(c.id);
    for (ElemId ch : c.created) g.edges[ch].insert(c.id);
    for (ElemId t : c.targets) g.edges[c.id].insert(t);
  }
  return g;
}

const char* condition_name(Condition c) {
  switch (c) {
    case Condition::Ok: return "Ok";
    case Condition::Malformed: return "Malformed";
    case Condition::Monic: return "Monic";
    case Condition::LocalInjectivity: return "LocalInjectivity";
    case Condition::Initial: return "Initial";
    case Condition::Final: return "Final";
    case Condition::Linearity: return "Linearity";
    case Condition::Acyclicity: return "Acyclicity";
  }
  return "?";
}

TraceCheck check_trace(const TraceCospan& c) {
  TraceCheck r;
  auto fail = [&](Condition k, std::string msg, std::vector<ElemId> w = {}) {
    r.condition = k;
    r.message = std::move(msg);
    r.witness = std::move(w);
    return r;
  };
  for (const Presheaf* p : {&c.x, &c.y, &c.u}) {
    auto v = presheaf::validate_presheaf(*p);
    if (!v.empty()) return fail(Condition::Malformed, v.front().str(), {v.front().element});
  }
  if (!presheaf::is_position(c.x) || !presheaf::is_position(c.y))
    return fail(Condition::Malformed, "boundary is not a position");
  std::string why;
  if (!presheaf::is_natural(c.s, c.y, c.u, &why)) return fail(Condition::Malformed, "leg s: " + why);
  if (!presheaf::is_natural(c.t, c.x, c.u, &why)) return fail(Condition::Malformed, "leg t: " + why);
  if (!presheaf::is_injective(c.s)) return fail(Condition::Monic, "leg s is not injective");
  if (!presheaf::is_injective(c.t)) return fail(Condition::Monic, "leg t is not injective");

  const Presheaf& u = c.u;
  std::vector<Core> cores = cores_of(u);
  for (const Core& core : cores) {
    auto rep = presheaf::representable(core.obj);
    Morphism ym = presheaf::yoneda_map(rep, u, core.id);
    if (!presheaf::is_one_injective(ym, rep.y))
      return fail(Condition::LocalInjectivity, "Yoneda map of core " + std::to_string(core.id) + " is not 1-injective",
                  {core.id});
    if (core.obj.kind == Kind::Nu || core.obj.kind == Kind::Iota) {
      ElemId created = ym.at(core.obj.n);
      for (ElemId i = 0; i < core.obj.n; ++i)
        if (ym.at(i) == created)
          return fail(Condition::LocalInjectivity,
                      "core " + std::to_string(core.id) + " creates a channel it already knows", {core.id, created});
    }
  }

  std::set<ElemId> produced, consumed, created;
  for (const auto& [id, e] : u.elements())
    if (e.obj.dimension() == 2) {
      produced.insert(e.faces[kS]);
      consumed.insert(e.faces[kT]);
    }
  for (const Core& core : cores)
    for (ElemId ch : core.created) created.insert(ch);

  std::set<ElemId> want_x, want_y, have_x, have_y;
  for (const auto& [id, e] : u.elements()) {
    if (e.obj.kind == Kind::Agent && !produced.count(id)) want_x.insert(id);
    if (e.obj.kind == Kind::Star && !created.count(id)) want_x.insert(id);
    if (e.obj.kind == Kind::Agent && !consumed.count(id)) want_y.insert(id);
    if (e.obj.kind == Kind::Star) want_y.insert(id);
  }
  for (const auto& [a, b] : c.t) have_x.insert(b);
  for (const auto& [a, b] : c.s) have_y.insert(b);
  auto diff = [](const std::set<ElemId>& p, const std::set<ElemId>& q) {
    std::vector<ElemId> d;
    std::set_symmetric_difference(p.begin(), p.end(), q.begin(), q.end(), std::back_inserter(d));
    return d;
  };
  if (auto d = diff(want_x, have_x); !d.empty())
    return fail(Condition::Initial,
                "element " + std::to_string(d.front()) + (want_x.count(d.front()) ? " is initial but not in X" : " is in X but not initial"),
                {d.front()});
  if (auto d = diff(want_y, have_y); !d.empty())
    return fail(Condition::Final,
                "element " + std::to_string(d.front()) + (want_y.count(d.front()) ? " is final but not in Y" : " is in Y but not final"),
                {d.front()});

  CausalGraph g = causal_graph(u);
  std::map<ElemId, int> in_from_core;
  for (const auto& [v, outs] : g.edges) {
    int to_cores = 0;
    for (ElemId w : outs) {
      if (g.label.at(w) == 2) ++to_cores;
      if (g.label.at(v) == 2) ++in_from_core[w];
    }
    if (to_cores > 1) return fail(Condition::Linearity, "vertex " + std::to_string(v) + " is a source of two cores", {v});
  }
  for (const auto& [w, k] : in_from_core)
    if (k > 1) return fail(Condition::Linearity, "vertex " + std::to_string(w) + " is a target of two cores", {w});
  if (auto cyc = g.find_cycle(); !cyc.empty()) return fail(Condition::Acyclicity, "causal graph has a cycle", cyc);

  r.length = cores.size();
  return r;
}

// ---- sequentialisation ----

std::vector<Action> sequentialize(const TraceCospan& c, Tie tie) {
  TraceCheck chk = check_trace(c);
  if (!chk.ok()) throw TraceError(std::string("not a trace: ") + condition_name(chk.condition) + ": " + chk.message);
  const Presheaf& u = c.u;
  std::set<ElemId> remaining;
  for (const auto& [id, e] : u.elements()) remaining.insert(id);
  std::set<ElemId> xcur;
  for (const auto& [a, b] : c.t) xcur.insert(b);

  std::vector<Action> out;
  for (;;) {
    Presheaf sub = restrict_to(u, remaining);
    std::vector<Core> cores = cores_of(sub);
    if (cores.empty()) break;
    CausalGraph g = causal_graph(sub);
    const Core* pick = nullptr;
    for (const Core& mu : cores) {
      bool maximal = true;
      for (const Core& nu : cores)
        if (nu.id != mu.id && g.has_path(mu.id, nu.id)) maximal = false;
      if (!maximal) continue;
      if (!pick || (tie == Tie::Least ? mu.id < pick->id : mu.id > pick->id)) pick = &mu;
    }
    if (!pick) throw std::logic_error("no maximal core in an acyclic causal graph");
    const Core& mu = *pick;

    auto rep = presheaf::representable(mu.obj);
    Morphism ym = presheaf::yoneda_map(rep, sub, mu.id);
    std::set<ElemId> nbhd;
    for (const auto& [a, b] : ym) nbhd.insert(b);

    std::set<ElemId> past(mu.targets.begin(), mu.targets.end());
    for (ElemId e : nbhd)
      if (u.dim(e) >= 2) past.insert(e);
    std::set<ElemId> mset = xcur;
    mset.insert(nbhd.begin(), nbhd.end());
    std::set<ElemId> zset;
    for (ElemId e : xcur)
      if (!std::count(mu.targets.begin(), mu.targets.end(), e)) zset.insert(e);
    std::set<ElemId> ambient = zset;
    zset.insert(mu.sources.begin(), mu.sources.end());
    for (ElemId e : nbhd)
      if (u.dim(e) == 0) zset.insert(e);

    Action a;
    a.label = SeedLabel{mu.obj};
    a.core = mu.id;
    a.ambient = restrict_to(u, ambient);
    Presheaf iface = seed_interface(a.label);
    for (const auto& [id, e] : iface.elements()) a.attach[id] = ym.at(id);
    a.cospan.x = restrict_to(u, xcur);
    a.cospan.u = restrict_to(u, mset);
    a.cospan.y = restrict_to(u, zset);
    a.cospan.s = inclusion(a.cospan.y);
    a.cospan.t = inclusion(a.cospan.x);
    a.cospan.decomposition = {a.label};
    out.push_back(std::move(a));

    for (ElemId e : past) remaining.erase(e);
    xcur = zset;
  }
  return out;
}

TraceCospan recompose(const Presheaf& x, const std::vector<Action>& actions) {
  TraceCospan acc = identity_trace(actions.empty() ? x : actions.front().cospan.x);
  for (const Action& a : actions) acc = compose_traces(acc, a.cospan);
  return acc;
}

presheaf::IsoResult special_iso(const TraceCospan& a, const TraceCospan& b, const Morphism* phx,
                                const Morphism* phy) {
  if ((!phx && !(a.x == b.x)) || (!phy && !(a.y == b.y))) return {};
  Morphism fixed;
  for (const auto& [x, ux] : a.t) {
    auto it = b.t.find(phx ? phx->at(x) : x);
    if (it == b.t.end()) return {};
    fixed[ux] = it->second;
  }
  for (const auto& [y, uy] : a.s) {
    auto it = b.s.find(phy ? phy->at(y) : y);
    if (it == b.s.end()) return {};
    auto [f, fresh] = fixed.emplace(uy, it->second);
    if (!fresh && f->second != it->second) return {};
  }
  return presheaf::iso_check(a.u, b.u, fixed);
}

// ---- views ----

namespace {

ElemId origin_of(const TraceCospan& c, ElemId agent) {
  for (const auto& [x, ux] : c.t)
    if (ux == agent) return x;
  throw TraceError("view walk ended at an agent outside X");
}

void require_final(const TraceCospan& c, ElemId y) {
  if (!c.y.contains(y) || c.y.at(y).obj.kind != Kind::Agent) throw TraceError("not a final agent");
}

}  // namespace

View view_of(const TraceCospan& c, ElemId y, Tie tie) {
  require_final(c, y);
  std::vector<Action> acts = sequentialize(c, tie);
  ElemId a = c.s.at(y);
  std::deque<Object> word;
  for (auto it = acts.rbegin(); it != acts.rend(); ++it) {
    for (ElemId cell : cells_of(c.u, it->core)) {
      if (c.u.face(cell, kS) != a) continue;
      word.push_front(c.u.at(cell).obj);
      a = c.u.face(cell, kT);
      break;
    }
  }
  return View{{word.begin(), word.end()}, origin_of(c, a)};
}

View view_direct(const TraceCospan& c, ElemId y) {
  require_final(c, y);
  std::map<ElemId, ElemId> producer;
  for (const auto& [id, e] : c.u.elements())
    if (e.obj.dimension() == 2) producer[e.faces[kS]] = id;
  ElemId a = c.s.at(y);
  std::deque<Object> word;
  for (auto it = producer.find(a); it != producer.end(); it = producer.find(a)) {
    word.push_front(c.u.at(it->second).obj);
    a = c.u.face(it->second, kT);
  }
  return View{{word.begin(), word.end()}, origin_of(c, a)};
}

}  // namespace pipg::traces
