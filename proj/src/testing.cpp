#include "pipg/testing.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace pipg::testing {

using behaviours::BasicLabel;
using behaviours::LabelKind;
using behaviours::MixedItem;
using behaviours::StateId;
using pi::Chan;
using presheaf::ElemId;

std::size_t Graph::edge_count() const {
  std::size_t n = 0;
  for (const auto& e : edges) n += e.size();
  return n;
}

// ---- LTS instances ----

LtsGraph<pi::Configuration> explore_conf(const pi::Configuration& c, const pi::DefinitionEnv& defs,
                                         const Budget& budget) {
  return explore(
      c,
      [](const pi::Configuration& x) {
        pi::Canonical k = pi::canonicalize(x);
        return std::pair<std::string, pi::Configuration>{k.key, k.config};
      },
      [&](const pi::Configuration& x) {
        std::vector<std::pair<SigmaLabel, pi::Configuration>> out;
        for (auto& tr : pi::conf_transitions(x, defs)) out.emplace_back(tr.label, std::move(tr.target));
        return out;
      },
      budget);
}

namespace {

Chan fresh_in(const std::vector<Chan>& gamma) {
  Chan c = 0;
  for (Chan g : gamma) {
    if (g != c) break;
    ++c;
  }
  return c;
}

}  // namespace

std::vector<MTransition> m_transitions(const BehaviourSystem& sys, const MixedBehaviour& m) {
  std::vector<MTransition> out;
  auto replaced = [&](std::size_t i, MixedItem it) {
    MixedBehaviour t = m;
    t.items[i] = std::move(it);
    return t;
  };
  for (std::size_t i = 0; i < m.items.size(); ++i) {
    const MixedItem& item = m.items[i];
    const auto& st = sys.at(item.state);
    unsigned n = st.arity;
    for (StateId l : sys.residual(item.state, BasicLabel::pil(n)))
      for (StateId r : sys.residual(item.state, BasicLabel::pir(n))) {
        MixedBehaviour t = replaced(i, {l, item.sigma});
        t.items.insert(t.items.begin() + static_cast<std::ptrdiff_t>(i) + 1, MixedItem{r, item.sigma});
        out.push_back({SigmaLabel::Silent, "fork", std::move(t)});
      }
    for (StateId s : sys.residual(item.state, BasicLabel::tau(n)))
      out.push_back({SigmaLabel::Silent, "tau", replaced(i, {s, item.sigma})});
    for (StateId s : sys.residual(item.state, BasicLabel::tick(n)))
      out.push_back({SigmaLabel::Tick, "tick", replaced(i, {s, item.sigma})});
    for (StateId s : sys.residual(item.state, BasicLabel::nu(n))) {
      Chan a = fresh_in(m.gamma);
      std::vector<Chan> sigma = item.sigma;
      sigma.push_back(a);
      MixedBehaviour t = replaced(i, {s, sigma});
      t.gamma.insert(std::lower_bound(t.gamma.begin(), t.gamma.end(), a), a);
      out.push_back({SigmaLabel::Silent, "nu", std::move(t)});
    }
    for (const auto& [b1, row1] : st.rows) {
      if (b1.kind != LabelKind::Iota) continue;
      for (std::size_t j = 0; j < m.items.size(); ++j) {
        if (j == i) continue;
        const MixedItem& other = m.items[j];
        for (const auto& [b2, row2] : sys.at(other.state).rows) {
          if (b2.kind != LabelKind::Out || item.sigma[b1.a - 1u] != other.sigma[b2.a - 1u]) continue;
          for (StateId s1 : row1)
            for (StateId s2 : row2) {
              std::vector<Chan> sigma = item.sigma;
              sigma.push_back(other.sigma[b2.b - 1u]);
              MixedBehaviour t = replaced(i, {s1, sigma});
              t.items[j] = {s2, other.sigma};
              out.push_back({SigmaLabel::Silent, "sync", std::move(t)});
            }
        }
      }
    }
  }
  return out;
}

LtsGraph<MixedBehaviour> explore_m(const BehaviourSystem& sys, const MixedBehaviour& m, const Budget& budget) {
  return explore(
      m,
      [](const MixedBehaviour& x) {
        auto k = behaviours::canonicalize(x);
        return std::pair<std::string, MixedBehaviour>{k.key, k.mixed};
      },
      [&](const MixedBehaviour& x) {
        std::vector<std::pair<SigmaLabel, MixedBehaviour>> out;
        for (auto& tr : m_transitions(sys, x)) out.emplace_back(tr.label, std::move(tr.target));
        return out;
      },
      budget);
}

std::vector<STransition> s_successors_along(const BehaviourSystem& sys, const PositionedBehaviour& pb,
                                            const traces::Action& a) {
  std::vector<behaviours::ActiveAgent> active = behaviours::active_agents(a);
  std::vector<std::size_t> cards;
  for (const auto& ag : active) {
    cards.push_back(sys.card(pb.state.at(ag.origin), ag.label));
    if (cards.back() == 0) return {};
  }
  SigmaLabel label = a.label.obj.kind == presheaf::Kind::Tick ? SigmaLabel::Tick : SigmaLabel::Silent;
  std::vector<STransition> out;
  std::vector<std::size_t> pick(active.size(), 0);
  for (;;) {
    STransition t;
    t.label = label;
    t.action = a;
    for (std::size_t k = 0; k < active.size(); ++k) t.choices[active[k].final_agent] = pick[k];
    t.target = behaviours::residual_along_action(sys, pb, a, t.choices);
    out.push_back(std::move(t));
    std::size_t k = 0;
    while (k < pick.size() && ++pick[k] == cards[k]) pick[k++] = 0;
    if (k == pick.size()) break;
  }
  return out;
}

std::vector<STransition> s_transitions(const BehaviourSystem& sys, const PositionedBehaviour& pb) {
  std::vector<STransition> out;
  for (const traces::Action& a : traces::closed_world_actions_from(pb.position))
    for (auto& t : s_successors_along(sys, pb, a)) out.push_back(std::move(t));
  return out;
}

std::string s_key(const PositionedBehaviour& pb) { return behaviours::canonicalize(behaviours::m_map(pb)).key; }

LtsGraph<PositionedBehaviour> explore_s(const BehaviourSystem& sys, const PositionedBehaviour& pb,
                                        const Budget& budget) {
  return explore(
      pb, [](const PositionedBehaviour& x) { return std::pair<std::string, PositionedBehaviour>{s_key(x), x}; },
      [&](const PositionedBehaviour& x) {
        std::vector<std::pair<SigmaLabel, PositionedBehaviour>> out;
        for (auto& tr : s_transitions(sys, x)) out.emplace_back(tr.label, std::move(tr.target));
        return out;
      },
      budget);
}

PositionedBehaviour join_positioned(const PositionedBehaviour& a, const PositionedBehaviour& b) {
  if (a.position.channels() != b.position.channels())
    throw std::invalid_argument("positions do not share their channels");
  presheaf::Presheaf iface;
  presheaf::Morphism incl;
  for (ElemId c : a.position.channels()) {
    iface.put(c, presheaf::Object::star());
    incl[c] = c;
  }
  auto po = presheaf::pushout(iface, a.position, b.position, incl, incl);
  PositionedBehaviour out;
  out.position = po.p;
  out.state = a.state;
  for (const auto& [x, s] : b.state) out.state[po.in_b.at(x)] = s;
  return out;
}

MixedBehaviour join_mixed(const MixedBehaviour& a, const MixedBehaviour& b) {
  if (a.gamma != b.gamma) throw std::invalid_argument("mixed behaviours over different channel sets");
  MixedBehaviour out = a;
  out.items.insert(out.items.end(), b.items.begin(), b.items.end());
  return out;
}

// ---- poles ----

const char* pole_name(Pole p) {
  switch (p) {
    case Pole::Fair: return "fair";
    case Pole::May: return "may";
    case Pole::Must: return "must";
    case Pole::ForallReach: return "forallreach";
  }
  return "?";
}

std::optional<Pole> parse_pole(const std::string& s) {
  for (Pole p : {Pole::Fair, Pole::May, Pole::Must, Pole::ForallReach})
    if (s == pole_name(p)) return p;
  return std::nullopt;
}

const char* truth_name(Truth t) {
  switch (t) {
    case Truth::True: return "true";
    case Truth::False: return "false";
    case Truth::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

using Path = std::vector<SigmaLabel>;

// Vertices with a tau*-tick path.
std::vector<bool> can_tick(const Graph& g) {
  std::vector<std::vector<std::size_t>> rev_tau(g.size());
  std::vector<bool> ok(g.size(), false);
  std::deque<std::size_t> q;
  for (std::size_t u = 0; u < g.size(); ++u)
    for (const auto& [l, w] : g.edges[u]) {
      if (l == SigmaLabel::Silent) rev_tau[w].push_back(u);
      if (l == SigmaLabel::Tick && !ok[u]) {
        ok[u] = true;
        q.push_back(u);
      }
    }
  while (!q.empty()) {
    std::size_t w = q.front();
    q.pop_front();
    for (std::size_t u : rev_tau[w])
      if (!ok[u]) {
        ok[u] = true;
        q.push_back(u);
      }
  }
  return ok;
}

// BFS from v (over tau edges only unless `all`); returns the first vertex
// satisfying `bad` and the labels of a shortest path to it.
std::optional<std::pair<std::size_t, Path>> search(const Graph& g, std::size_t v, bool all,
                                                   const std::function<bool(std::size_t)>& bad) {
  std::vector<std::optional<std::pair<std::size_t, SigmaLabel>>> parent(g.size());
  std::vector<bool> seen(g.size(), false);
  std::deque<std::size_t> q{v};
  seen[v] = true;
  while (!q.empty()) {
    std::size_t u = q.front();
    q.pop_front();
    if (bad(u)) {
      Path p;
      for (std::size_t x = u; parent[x]; x = parent[x]->first) p.push_back(parent[x]->second);
      std::reverse(p.begin(), p.end());
      return std::pair{u, p};
    }
    for (const auto& [l, w] : g.edges[u]) {
      if (!all && l != SigmaLabel::Silent) continue;
      if (seen[w]) continue;
      seen[w] = true;
      parent[w] = std::pair{u, l};
      q.push_back(w);
    }
  }
  return std::nullopt;
}

// A tau-cycle reachable from v by tau edges, as a lasso path.
std::optional<Path> tau_lasso(const Graph& g, std::size_t v) {
  std::vector<int> colour(g.size(), 0);
  std::vector<std::pair<std::size_t, std::size_t>> stack;  // vertex, next edge
  std::vector<std::size_t> onpath;
  stack.emplace_back(v, 0);
  colour[v] = 1;
  onpath.push_back(v);
  while (!stack.empty()) {
    auto& [u, k] = stack.back();
    if (k == g.edges[u].size()) {
      colour[u] = 2;
      stack.pop_back();
      onpath.pop_back();
      continue;
    }
    auto [l, w] = g.edges[u][k++];
    if (l != SigmaLabel::Silent) continue;
    if (colour[w] == 1) return Path(onpath.size(), SigmaLabel::Silent);
    if (colour[w] == 0) {
      colour[w] = 1;
      onpath.push_back(w);
      stack.emplace_back(w, 0);
    }
  }
  return std::nullopt;
}

}  // namespace

PoleResult pole_membership(const Graph& g, std::size_t v, Pole pole) {
  if (v >= g.size()) throw std::out_of_range("vertex not in graph");
  PoleResult r;
  if (!g.complete) {
    r.reason = "graph truncated";
    return r;
  }
  std::vector<bool> ok = can_tick(g);
  auto no_tick = [&](std::size_t u) { return !ok[u]; };
  switch (pole) {
    case Pole::May:
      r.verdict = ok[v] ? Truth::True : Truth::False;
      if (!ok[v]) r.reason = "no silent path to a tick";
      return r;
    case Pole::Fair:
    case Pole::ForallReach:
      if (auto hit = search(g, v, pole == Pole::ForallReach, no_tick)) {
        r.verdict = Truth::False;
        r.witness = hit->second;
        r.reason = "reaches a state that can no longer tick";
      } else {
        r.verdict = Truth::True;
      }
      return r;
    case Pole::Must:
      if (auto hit = search(g, v, false, [&](std::size_t u) { return g.edges[u].empty(); })) {
        r.verdict = Truth::False;
        r.witness = hit->second;
        r.reason = "silent path to a deadlock";
      } else if (auto lasso = tau_lasso(g, v)) {
        r.verdict = Truth::False;
        r.witness = *lasso;
        r.reason = "silent cycle";
      } else {
        r.verdict = Truth::True;
      }
      return r;
  }
  return r;
}

// ---- fair testing ----

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Same: return "Same";
    case Outcome::Differ: return "Differ";
    case Outcome::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::vector<pi::TermPtr> auto_battery(const std::vector<Chan>& gamma, std::size_t depth) {
  std::vector<pi::Guard> acts;
  for (Chan a : gamma)
    for (Chan b : gamma) acts.push_back(pi::out_guard(pi::Ref::free_chan(a), pi::Ref::free_chan(b)));
  for (Chan a : gamma) acts.push_back(pi::in_guard(pi::Ref::free_chan(a), "x"));
  acts.push_back(pi::tau_guard());
  pi::TermPtr done = pi::prefix(pi::tick_guard(), pi::nil());

  std::vector<pi::TermPtr> out;
  std::vector<std::size_t> word;
  std::function<void(std::size_t)> chains = [&](std::size_t k) {
    if (word.size() == k) {
      pi::TermPtr t = done;
      for (auto it = word.rbegin(); it != word.rend(); ++it) t = pi::prefix(acts[*it], t);
      out.push_back(t);
      return;
    }
    for (std::size_t i = 0; i < acts.size(); ++i) {
      word.push_back(i);
      chains(k);
      word.pop_back();
    }
  };
  for (std::size_t k = 1; k <= depth; ++k) chains(k);
  for (std::size_t i = 0; i < acts.size(); ++i)
    for (std::size_t j = i + 1; j < acts.size(); ++j)
      out.push_back(pi::sum({{acts[i], done}, {acts[j], done}}));
  return out;
}

TestSuite parse_tests(const std::string& text, const pi::Configuration& over, const pi::DefinitionEnv& defs) {
  (void)defs;
  TestSuite s;
  std::string def_text;
  std::vector<std::string> procs;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) {
    std::string body = line.substr(0, line.find('#'));
    if (body.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (body.find(":=") != std::string::npos)
      def_text += line + "\n";
    else
      procs.push_back(line);
  }
  pi::parse_definitions(def_text, s.defs);
  std::vector<std::string> names;
  std::map<Chan, Chan> to_gamma;
  for (std::size_t i = 0; i < over.gamma.size(); ++i) {
    names.push_back(over.name_of(over.gamma[i]));
    to_gamma[static_cast<Chan>(i)] = over.gamma[i];
  }
  for (const std::string& p : procs) s.tests.push_back(pi::substitute(pi::parse_process(p, names, s.defs), to_gamma));
  return s;
}

namespace {

pi::TermPtr relink(const pi::TermPtr& t, const std::map<std::uint32_t, std::uint32_t>& ids) {
  switch (t->kind) {
    case pi::TermKind::Sum: {
      std::vector<pi::Branch> bs;
      for (const pi::Branch& b : t->branches) bs.push_back({b.guard, relink(b.body, ids)});
      return pi::sum(std::move(bs));
    }
    case pi::TermKind::Par: return pi::par(relink(t->left, ids), relink(t->right, ids));
    case pi::TermKind::Constant: return pi::constant(ids.at(t->constant), t->args);
  }
  return t;
}

// Renames y's channels onto x's by display name.
pi::PiFile align(const pi::PiFile& x, const pi::PiFile& y) {
  std::map<std::string, Chan> by_name;
  for (Chan c : x.config.gamma) by_name[x.config.name_of(c)] = c;
  if (by_name.size() != y.config.gamma.size())
    throw std::invalid_argument("configurations are not coherent: different channel sets");
  std::map<Chan, Chan> ren;
  for (Chan c : y.config.gamma) {
    auto it = by_name.find(y.config.name_of(c));
    if (it == by_name.end())
      throw std::invalid_argument("configurations are not coherent: channel '" + y.config.name_of(c) + "'");
    ren[c] = it->second;
  }
  pi::PiFile out;
  out.defs = y.defs;
  out.config = x.config;
  out.config.processes.clear();
  for (const auto& p : y.config.processes) out.config.processes.push_back(pi::substitute(p, ren));
  return out;
}

}  // namespace

pi::PiFile merge_files(const pi::PiFile& base, const pi::DefinitionEnv& extra, std::vector<pi::TermPtr>* terms) {
  pi::PiFile out = base;
  std::map<std::uint32_t, std::uint32_t> ids;
  for (std::uint32_t i = 0; i < extra.size(); ++i) {
    pi::Definition d = extra.at(i);
    while (out.defs.find(d.name)) d.name += "_t";
    d.body = pi::nil();
    ids[i] = out.defs.add(std::move(d));
  }
  for (std::uint32_t i = 0; i < extra.size(); ++i) out.defs.set_body(ids.at(i), relink(extra.at(i).body, ids));
  if (terms)
    for (auto& t : *terms) t = relink(t, ids);
  return out;
}

CompareResult fair_testing_compare(const pi::PiFile& x, const pi::PiFile& y0, const TestSuite& suite, Pole pole,
                                   const Budget& budget, unsigned jobs) {
  pi::PiFile y = align(x, y0);
  std::vector<pi::TermPtr> tx = suite.tests, ty = suite.tests;
  pi::PiFile ex = merge_files(x, suite.defs, &tx);
  pi::PiFile ey = merge_files(y, suite.defs, &ty);

  std::size_t n = suite.tests.size();
  std::vector<std::optional<TestRun>> runs(n);
  auto run_one = [&](std::size_t i) {
    TestRun r;
    r.test = pi::print_process(tx[i], ex.config.names, ex.defs);
    pi::Configuration tcx{ex.config.gamma, {tx[i]}, ex.config.names};
    pi::Configuration tcy{ey.config.gamma, {ty[i]}, ey.config.names};
    auto gx = explore_conf(pi::join(ex.config, tcx), ex.defs, budget);
    auto gy = explore_conf(pi::join(ey.config, tcy), ey.defs, budget);
    r.x = pole_membership(gx, gx.root, pole);
    r.y = pole_membership(gy, gy.root, pole);
    r.x_complete = gx.complete;
    r.y_complete = gy.complete;
    r.x_states = gx.size();
    r.y_states = gy.size();
    r.x_edges = gx.edge_count();
    r.y_edges = gy.edge_count();
    r.x_budget = gx.budget_used;
    r.y_budget = gy.budget_used;
    return r;
  };
  auto differs = [](const TestRun& r) {
    return r.x.verdict != Truth::Inconclusive && r.y.verdict != Truth::Inconclusive && r.x.verdict != r.y.verdict;
  };

  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      runs[i] = run_one(i);
      if (differs(*runs[i])) break;
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next++) < n;) runs[i] = run_one(i);
      });
    for (auto& t : pool) t.join();
  }

  CompareResult out;
  bool inconclusive = false;
  for (std::size_t i = 0; i < n && runs[i]; ++i) {
    out.runs.push_back(*runs[i]);
    if (differs(*runs[i])) {
      out.outcome = Outcome::Differ;
      out.differing = i;
      return out;
    }
    if (runs[i]->x.verdict == Truth::Inconclusive || runs[i]->y.verdict == Truth::Inconclusive) inconclusive = true;
  }
  out.outcome = inconclusive ? Outcome::Inconclusive : Outcome::Same;
  return out;
}

// ---- bisimulation ----

namespace {

using Adj = std::vector<std::vector<std::pair<SigmaLabel, std::size_t>>>;

std::vector<std::size_t> refine(const Adj& adj) {
  std::vector<std::size_t> cls(adj.size(), 0);
  std::size_t count = 1;
  for (;;) {
    std::map<std::pair<std::size_t, std::set<std::pair<SigmaLabel, std::size_t>>>, std::size_t> ids;
    std::vector<std::size_t> next(adj.size());
    for (std::size_t u = 0; u < adj.size(); ++u) {
      std::set<std::pair<SigmaLabel, std::size_t>> sig;
      for (const auto& [l, w] : adj[u]) sig.emplace(l, cls[w]);
      next[u] = ids.emplace(std::pair{cls[u], std::move(sig)}, ids.size()).first->second;
    }
    cls = std::move(next);
    if (ids.size() == count) return cls;
    count = ids.size();
  }
}

Adj disjoint_union(const Graph& g1, const Graph& g2) {
  if (!g1.complete || !g2.complete) throw std::invalid_argument("bisimulation needs complete graphs");
  Adj adj = g1.edges;
  std::size_t off = g1.size();
  for (const auto& row : g2.edges) {
    adj.emplace_back();
    for (const auto& [l, w] : row) adj.back().emplace_back(l, w + off);
  }
  return adj;
}

Adj saturate(const Adj& adj) {
  std::size_t n = adj.size();
  std::vector<std::vector<std::size_t>> closure(n);
  for (std::size_t u = 0; u < n; ++u) {
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> q{u};
    seen[u] = true;
    while (!q.empty()) {
      std::size_t x = q.front();
      q.pop_front();
      closure[u].push_back(x);
      for (const auto& [l, w] : adj[x])
        if (l == SigmaLabel::Silent && !seen[w]) {
          seen[w] = true;
          q.push_back(w);
        }
    }
  }
  Adj out(n);
  for (std::size_t u = 0; u < n; ++u) {
    std::set<std::pair<SigmaLabel, std::size_t>> e;
    for (std::size_t x : closure[u]) {
      e.emplace(SigmaLabel::Silent, x);
      for (const auto& [l, w] : adj[x])
        if (l == SigmaLabel::Tick)
          for (std::size_t z : closure[w]) e.emplace(SigmaLabel::Tick, z);
    }
    out[u].assign(e.begin(), e.end());
  }
  return out;
}

}  // namespace

bool strong_bisim(const Graph& g1, std::size_t v1, const Graph& g2, std::size_t v2) {
  auto cls = refine(disjoint_union(g1, g2));
  return cls.at(v1) == cls.at(v2 + g1.size());
}

bool weak_bisim(const Graph& g1, std::size_t v1, const Graph& g2, std::size_t v2) {
  auto cls = refine(saturate(disjoint_union(g1, g2)));
  return cls.at(v1) == cls.at(v2 + g1.size());
}

// ---- expansion ----

namespace {

std::string conf_raw_key(const pi::Configuration& c) {
  std::vector<std::string> items;
  for (const auto& p : c.processes) items.push_back(key_string(pi::process_tokens(p)));
  std::sort(items.begin(), items.end());
  std::string k;
  for (Chan g : c.gamma) k += std::to_string(g) + ",";
  for (const auto& i : items) k += "|" + i;
  return k;
}

class Expansion {
 public:
  Expansion(const pi::DefinitionEnv& defs, const BehaviourSystem& sys, ExpansionBounds b)
      : defs_(defs), sys_(sys), bounds_(b) {}

  std::vector<std::string> play;
  std::size_t pairs() const { return memo_.size(); }

  bool check(const pi::Configuration& c, const MixedBehaviour& m, std::size_t k) {
    if (k == 0) return true;
    std::string key = pair_key(c, m) + "#" + std::to_string(k);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool ok = left(c, m, k) && right(c, m, k);
    memo_[key] = ok;
    return ok;
  }

 private:
  static std::string pair_key(const pi::Configuration& c, const MixedBehaviour& m) {
    std::vector<Item> items;
    for (const auto& p : c.processes) {
      Item t{lit(0)};
      Item body = pi::process_tokens(p);
      t.insert(t.end(), body.begin(), body.end());
      items.push_back(std::move(t));
    }
    for (const auto& it : m.items) {
      Item t{lit(1), lit(it.state), lit(it.sigma.size())};
      for (Chan ch : it.sigma) t.push_back(chan_tok(ch));
      items.push_back(std::move(t));
    }
    Item gc{lit(2)}, gm{lit(3)};
    for (Chan ch : c.gamma) gc.push_back(chan_tok(ch));
    for (Chan ch : m.gamma) gm.push_back(chan_tok(ch));
    items.push_back(gc);
    items.push_back(gm);
    std::set<std::uint64_t> chans(c.gamma.begin(), c.gamma.end());
    chans.insert(m.gamma.begin(), m.gamma.end());
    return key_string(canonical_order(items, {chans.begin(), chans.end()}).key);
  }

  // Every C-step is answered by exactly one M-step (or none, for tau).
  bool left(const pi::Configuration& c, const MixedBehaviour& m, std::size_t k) {
    auto msteps = m_transitions(sys_, m);
    for (const auto& tr : pi::conf_transitions(c, defs_)) {
      std::size_t mark = play.size();
      bool answered = tr.label == SigmaLabel::Silent && check(tr.target, m, k - 1);
      for (std::size_t i = 0; !answered && i < msteps.size(); ++i)
        answered = msteps[i].label == tr.label && check(tr.target, msteps[i].target, k - 1);
      if (answered) {
        play.resize(mark);
      } else {
        play.push_back("C " + std::string(pi::rule_name(tr.rule)) + " (" + pi::label_name(tr.label) +
                                      ") unanswered by M at remaining depth " + std::to_string(k));
        return false;
      }
    }
    return true;
  }

  // C-states reachable by tau^{<=n}.
  std::vector<pi::Configuration> tau_star(const std::vector<pi::Configuration>& from, std::size_t n) {
    std::vector<pi::Configuration> all = from, layer = from;
    std::set<std::string> seen;
    for (const auto& c : from) seen.insert(conf_raw_key(c));
    for (std::size_t i = 0; i < n && !layer.empty(); ++i) {
      std::vector<pi::Configuration> next;
      for (const auto& c : layer)
        for (auto& tr : pi::conf_transitions(c, defs_))
          if (tr.label == SigmaLabel::Silent && seen.insert(conf_raw_key(tr.target)).second) {
            next.push_back(tr.target);
            all.push_back(std::move(tr.target));
          }
      layer = std::move(next);
    }
    return all;
  }

  // Every M-step is answered by a weak C-sequence.
  bool right(const pi::Configuration& c, const MixedBehaviour& m, std::size_t k) {
    bool have_tau = false, have_tick = false;
    std::vector<pi::Configuration> tau_answers, tick_answers;
    for (const auto& tr : m_transitions(sys_, m)) {
      std::vector<pi::Configuration>* cand;
      if (tr.label == SigmaLabel::Silent) {
        if (!have_tau) tau_answers = tau_star({c}, bounds_.tau_before + bounds_.tau_after);
        have_tau = true;
        cand = &tau_answers;
      } else {
        if (!have_tick) {
          std::vector<pi::Configuration> after;
          for (const auto& x : tau_star({c}, bounds_.tau_before))
            for (auto& t2 : pi::conf_transitions(x, defs_))
              if (t2.label == SigmaLabel::Tick) after.push_back(std::move(t2.target));
          tick_answers = tau_star(after, bounds_.tau_after);
        }
        have_tick = true;
        cand = &tick_answers;
      }
      std::size_t mark = play.size();
      bool answered = false;
      for (std::size_t i = 0; !answered && i < cand->size(); ++i) answered = check((*cand)[i], tr.target, k - 1);
      if (answered) {
        play.resize(mark);
      } else {
        play.push_back("M " + tr.rule + " (" + pi::label_name(tr.label) +
                                      ") unanswered by C at remaining depth " + std::to_string(k));
        return false;
      }
    }
    return true;
  }

  const pi::DefinitionEnv& defs_;
  const BehaviourSystem& sys_;
  ExpansionBounds bounds_;
  std::unordered_map<std::string, bool> memo_;
};

}  // namespace

ExpansionResult expansion_check(const pi::Configuration& c, const pi::DefinitionEnv& defs, const MixedBehaviour& m,
                                const BehaviourSystem& sys, std::size_t depth, ExpansionBounds bounds) {
  if (c.gamma != m.gamma) return {false, {"channel sets differ"}, 0};
  Expansion e(defs, sys, bounds);
  ExpansionResult r;
  r.ok = e.check(c, m, depth);
  r.pairs = e.pairs();
  if (!r.ok) r.play.assign(e.play.rbegin(), e.play.rend());
  return r;
}

}  // namespace pipg::testing
