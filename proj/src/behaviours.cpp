#include "pipg/behaviours.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace pipg::behaviours {

using presheaf::Kind;
using presheaf::Object;

// ---- labels ----

bool BasicLabel::valid() const {
  switch (kind) {
    case LabelKind::Iota: return a >= 1 && a <= n && b == 0;
    case LabelKind::Out: return a >= 1 && a <= n && b >= 1 && b <= n;
    default: return a == 0 && b == 0;
  }
}

unsigned BasicLabel::target_arity() const {
  return (kind == LabelKind::Nu || kind == LabelKind::Iota) ? n + 1u : n;
}

Object BasicLabel::to_object() const {
  switch (kind) {
    case LabelKind::PiL: return Object::pil(n);
    case LabelKind::PiR: return Object::pir(n);
    case LabelKind::Tau: return Object::tau(n);
    case LabelKind::Tick: return Object::tick(n);
    case LabelKind::Nu: return Object::nu(n);
    case LabelKind::Iota: return Object::iota(n, a);
    case LabelKind::Out: return Object::out(n, a, b);
  }
  return {};
}

std::optional<BasicLabel> BasicLabel::from_object(const Object& o) {
  switch (o.kind) {
    case Kind::PiL: return pil(o.n);
    case Kind::PiR: return pir(o.n);
    case Kind::Tau: return tau(o.n);
    case Kind::Tick: return tick(o.n);
    case Kind::Nu: return nu(o.n);
    case Kind::Iota: return iota(o.n, o.a);
    case Kind::Out: return out(o.m, o.c, o.d);
    default: return std::nullopt;
  }
}

std::optional<BasicLabel> BasicLabel::parse(const std::string& s) {
  auto o = Object::parse_tag(s);
  if (!o) return std::nullopt;
  auto b = from_object(*o);
  if (!b || !b->valid()) return std::nullopt;
  return b;
}

// ---- systems ----

StateId BehaviourSystem::add(State s) {
  auto id = static_cast<StateId>(states_.size());
  if (s.name.empty()) s.name = "s" + std::to_string(id);
  if (!by_name_.emplace(s.name, id).second) throw BehaviourError("duplicate state name '" + s.name + "'");
  states_.push_back(std::move(s));
  return id;
}

std::optional<StateId> BehaviourSystem::find(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

const FormalSum& BehaviourSystem::residual(StateId s, const BasicLabel& b) const {
  static const FormalSum empty;
  const State& st = at(s);
  if (b.n != st.arity) throw BehaviourError("label " + b.str() + " does not apply to arity " + std::to_string(st.arity));
  auto it = st.rows.find(b);
  return it == st.rows.end() ? empty : it->second;
}

StateId BehaviourSystem::restrict(StateId s, const BasicLabel& b, std::size_t k) const {
  const FormalSum& r = residual(s, b);
  if (k >= r.size())
    throw BehaviourError("summand " + std::to_string(k) + " out of range for " + at(s).name + "." + b.str());
  return r[k];
}

StateId BehaviourSystem::definite_sum(const std::vector<StateId>& parts, std::string name) {
  State s;
  s.name = std::move(name);
  if (parts.empty()) throw BehaviourError("definite sum of no behaviours has no arity");
  s.arity = at(parts.front()).arity;
  for (StateId p : parts) {
    if (at(p).arity != s.arity) throw BehaviourError("definite sum of behaviours of different arities");
    for (const auto& [b, row] : at(p).rows) s.rows[b].insert(s.rows[b].end(), row.begin(), row.end());
  }
  return add(std::move(s));
}

void BehaviourSystem::validate() const {
  for (const State& s : states_)
    for (const auto& [b, row] : s.rows) {
      if (!b.valid() || b.n != s.arity) throw BehaviourError("state " + s.name + ": bad label " + b.str());
      for (StateId t : row) {
        if (t >= states_.size()) throw BehaviourError("state " + s.name + ": dangling reference");
        if (states_[t].arity != b.target_arity())
          throw BehaviourError("state " + s.name + ": " + b.str() + " leads to " + states_[t].name + " of arity " +
                               std::to_string(states_[t].arity));
      }
    }
}

std::vector<StateId> BehaviourSystem::reachable(const std::vector<StateId>& roots) const {
  std::vector<StateId> out;
  std::set<StateId> seen;
  std::vector<StateId> stack(roots.rbegin(), roots.rend());
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    if (!seen.insert(s).second) continue;
    out.push_back(s);
    for (const auto& [b, row] : at(s).rows)
      for (auto it = row.rbegin(); it != row.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

// ---- translation ----

StateId Translator::fresh_state(unsigned arity, std::string name) {
  if (sys_.size() >= opts_.max_states)
    throw TranslationBudget("translation exceeds " + std::to_string(opts_.max_states) + " states");
  State s;
  s.name = std::move(name);
  s.arity = arity;
  return sys_.add(std::move(s));
}

StateId Translator::translate(const pi::TermPtr& p, const std::vector<Chan>& h) {
  std::set<Chan> dom(h.begin(), h.end());
  if (dom.size() != h.size()) throw BehaviourError("h is not a bijection");
  for (Chan c : pi::free_channels(p))
    if (!dom.count(c)) throw BehaviourError("free channel " + std::to_string(c) + " outside the domain of h");
  StateId root = term(p, h);
  while (!pending_.empty()) {
    Pending job = std::move(pending_.front());
    pending_.pop_front();
    fill(job.id, job.term, job.h);
  }
  return root;
}

namespace {

unsigned position_of(const std::vector<Chan>& h, const pi::Ref& r) {
  if (r.bound) throw std::logic_error("translation met a bound reference at top level");
  auto it = std::find(h.begin(), h.end(), r.index);
  if (it == h.end()) throw std::logic_error("translation met a channel outside h");
  return static_cast<unsigned>(it - h.begin()) + 1;
}

Chan fresh_for(const std::vector<Chan>& h) {
  Chan c = 0;
  for (Chan x : h) c = std::max(c, x + 1);
  return c;
}

}  // namespace

StateId Translator::term(const pi::TermPtr& p, const std::vector<Chan>& h) {
  if (p->kind == pi::TermKind::Constant) return constant(p, h);
  StateId id = fresh_state(static_cast<unsigned>(h.size()));
  pending_.push_back({id, p, h});
  return id;
}

StateId Translator::constant(const pi::TermPtr& p, const std::vector<Chan>& h) {
  std::vector<std::uint32_t> key{p->constant, static_cast<std::uint32_t>(h.size())};
  for (const pi::Ref& r : p->args) key.push_back(position_of(h, r));
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  std::string name = defs_.at(p->constant).name + "@" + std::to_string(h.size());
  for (std::size_t i = 2; i < key.size(); ++i) name += (i == 2 ? ":" : ".") + std::to_string(key[i]);
  StateId id = fresh_state(static_cast<unsigned>(h.size()), name);
  memo_[key] = id;
  pending_.push_back({id, defs_.unfold_top(p), h});
  return id;
}

void Translator::fill(StateId id, const pi::TermPtr& p, const std::vector<Chan>& h) {
  auto n = static_cast<unsigned>(h.size());
  std::map<BasicLabel, FormalSum> rows;
  if (p->kind == pi::TermKind::Par) {
    StateId l = term(p->left, h);
    StateId r = term(p->right, h);
    rows[BasicLabel::pil(n)].push_back(l);
    rows[BasicLabel::pir(n)].push_back(r);
  } else {
    for (const pi::Branch& br : p->branches) {
      const pi::Guard& g = br.guard;
      if (g.binds()) {
        Chan c = fresh_for(h);
        std::vector<Chan> h2 = h;
        h2.push_back(c);
        StateId t = term(pi::open(br.body, c), h2);
        BasicLabel b = g.kind == pi::GuardKind::New ? BasicLabel::nu(n) : BasicLabel::iota(n, position_of(h, g.channel));
        rows[b].push_back(t);
        continue;
      }
      StateId t = term(br.body, h);
      switch (g.kind) {
        case pi::GuardKind::Tau: rows[BasicLabel::tau(n)].push_back(t); break;
        case pi::GuardKind::Tick: rows[BasicLabel::tick(n)].push_back(t); break;
        case pi::GuardKind::Out:
          rows[BasicLabel::out(n, position_of(h, g.channel), position_of(h, g.payload))].push_back(t);
          break;
        default: break;
      }
    }
  }
  sys_.at_mut(id).rows = std::move(rows);
}

StateId translate_process(const pi::TermPtr& p, const std::vector<Chan>& h, const pi::DefinitionEnv& defs,
                          BehaviourSystem& sys) {
  Translator t(defs, sys);
  return t.translate(p, h);
}

// ---- equality ----

std::map<StateId, std::size_t> behaviour_classes(const BehaviourSystem& sys, const std::vector<StateId>& roots,
                                                 std::size_t k) {
  std::vector<StateId> states = sys.reachable(roots);
  std::map<StateId, std::size_t> cls;
  for (StateId s : states) cls[s] = sys.at(s).arity;
  std::size_t nclasses = 0;
  for (std::size_t round = 0; round < k; ++round) {
    using Sig = std::pair<std::size_t, std::vector<std::pair<BasicLabel, std::vector<std::size_t>>>>;
    std::map<Sig, std::size_t> ids;
    std::map<StateId, std::size_t> next;
    for (StateId s : states) {
      Sig sig{cls.at(s), {}};
      for (const auto& [b, row] : sys.at(s).rows) {
        if (row.empty()) continue;
        std::vector<std::size_t> targets;
        for (StateId t : row) targets.push_back(cls.at(t));
        std::sort(targets.begin(), targets.end());
        sig.second.emplace_back(b, std::move(targets));
      }
      next[s] = ids.emplace(std::move(sig), ids.size()).first->second;
    }
    cls = std::move(next);
    if (ids.size() == nclasses) break;
    nclasses = ids.size();
  }
  return cls;
}

bool behaviour_eq(const BehaviourSystem& sys, StateId a, StateId b, std::size_t k) {
  auto cls = behaviour_classes(sys, {a, b}, k);
  return cls.at(a) == cls.at(b);
}

bool behaviour_eq(const BehaviourSystem& s1, StateId a, const BehaviourSystem& s2, StateId b, std::size_t k) {
  if (&s1 == &s2) return behaviour_eq(s1, a, b, k);
  BehaviourSystem merged;
  for (std::size_t i = 0; i < s1.size(); ++i) merged.add(s1.at(static_cast<StateId>(i)));
  auto off = static_cast<StateId>(s1.size());
  for (std::size_t i = 0; i < s2.size(); ++i) {
    State s = s2.at(static_cast<StateId>(i));
    s.name = "\x01" + s.name;
    for (auto& [lbl, row] : s.rows)
      for (StateId& t : row) t += off;
    merged.add(std::move(s));
  }
  return behaviour_eq(merged, a, b + off, k);
}

// ---- positioned and mixed behaviours ----

void check_positioned(const BehaviourSystem& sys, const PositionedBehaviour& pb) {
  if (!presheaf::is_position(pb.position)) throw BehaviourError("not a position");
  auto agents = pb.position.agents();
  if (agents.size() != pb.state.size()) throw BehaviourError("state assignment does not cover the agents");
  for (ElemId x : agents) {
    auto it = pb.state.find(x);
    if (it == pb.state.end()) throw BehaviourError("agent " + std::to_string(x) + " has no state");
    if (it->second >= sys.size() || sys.at(it->second).arity != pb.position.at(x).obj.n)
      throw BehaviourError("agent " + std::to_string(x) + " has a state of the wrong arity");
  }
}

void check_mixed(const BehaviourSystem& sys, const MixedBehaviour& m) {
  if (!std::is_sorted(m.gamma.begin(), m.gamma.end()) ||
      std::adjacent_find(m.gamma.begin(), m.gamma.end()) != m.gamma.end())
    throw BehaviourError("gamma must be sorted and distinct");
  for (const MixedItem& it : m.items) {
    if (it.state >= sys.size() || sys.at(it.state).arity != it.sigma.size())
      throw BehaviourError("substitution does not match the arity of its state");
    for (Chan c : it.sigma)
      if (!std::binary_search(m.gamma.begin(), m.gamma.end(), c))
        throw BehaviourError("substitution leaves gamma");
  }
}

CanonicalMixed canonicalize(const MixedBehaviour& m) {
  std::vector<Item> items;
  for (const MixedItem& it : m.items) {
    Item t{lit(it.state), lit(it.sigma.size())};
    for (Chan c : it.sigma) t.push_back(chan_tok(c));
    items.push_back(std::move(t));
  }
  CanonResult r = canonical_order(items, {m.gamma.begin(), m.gamma.end()});
  CanonicalMixed out;
  for (const auto& [o, n] : r.renaming) out.renaming[static_cast<Chan>(o)] = static_cast<Chan>(n);
  for (Chan g : m.gamma) out.mixed.gamma.push_back(out.renaming.at(g));
  std::sort(out.mixed.gamma.begin(), out.mixed.gamma.end());
  for (std::size_t idx : r.order) {
    MixedItem it = m.items[idx];
    for (Chan& c : it.sigma) c = out.renaming.at(c);
    out.mixed.items.push_back(std::move(it));
  }
  out.key = key_string(r.key);
  return out;
}

std::string print_mixed(const BehaviourSystem& sys, const MixedBehaviour& m) {
  std::ostringstream os;
  os << "<";
  for (std::size_t i = 0; i < m.gamma.size(); ++i) os << (i ? "," : "") << m.gamma[i];
  os << ">[";
  for (std::size_t k = 0; k < m.items.size(); ++k) {
    os << (k ? ", " : "") << sys.at(m.items[k].state).name << "[";
    for (std::size_t i = 0; i < m.items[k].sigma.size(); ++i) os << (i ? "," : "") << m.items[k].sigma[i];
    os << "]";
  }
  os << "]";
  return os.str();
}

MixedBehaviour m_map(const PositionedBehaviour& pb) {
  MixedBehaviour m;
  for (ElemId c : pb.position.channels()) m.gamma.push_back(c);
  for (ElemId x : pb.position.agents()) m.items.push_back({pb.state.at(x), pb.position.at(x).faces});
  return m;
}

PositionedBehaviour a_section(const BehaviourSystem& sys, const MixedBehaviour& m) {
  check_mixed(sys, m);
  PositionedBehaviour pb;
  for (Chan c : m.gamma) pb.position.put(c, Object::star());
  ElemId base = m.gamma.empty() ? 0 : m.gamma.back() + 1;
  for (std::size_t k = 0; k < m.items.size(); ++k) {
    auto id = static_cast<ElemId>(base + k);
    pb.position.put(id, Object::agent(static_cast<unsigned>(m.items[k].sigma.size())), m.items[k].sigma);
    pb.state[id] = m.items[k].state;
  }
  return pb;
}

MixedBehaviour translate_config(const pi::Configuration& c, const pi::DefinitionEnv& defs, BehaviourSystem& sys) {
  Translator tr(defs, sys);
  MixedBehaviour m;
  m.gamma = c.gamma;
  for (const pi::TermPtr& p : c.processes) m.items.push_back({tr.translate(p, c.gamma), c.gamma});
  return m;
}

std::vector<ActiveAgent> active_agents(const traces::Action& a) {
  std::vector<ActiveAgent> out;
  for (ElemId y : a.cospan.y.agents()) {
    traces::View v = traces::view_direct(a.cospan, y);
    if (v.word.empty()) continue;
    if (v.word.size() != 1) throw BehaviourError("an action gave an agent a view of length " + std::to_string(v.word.size()));
    auto b = BasicLabel::from_object(v.word.front());
    if (!b) throw BehaviourError("view letter is not a basic label");
    out.push_back({y, v.origin, *b});
  }
  return out;
}

PositionedBehaviour residual_along_action(const BehaviourSystem& sys, const PositionedBehaviour& pb,
                                          const traces::Action& a, const std::map<ElemId, std::size_t>& choices) {
  if (!(a.cospan.x == pb.position)) throw BehaviourError("action does not start from the behaviour's position");
  PositionedBehaviour out;
  out.position = a.cospan.y;
  // Passive agents keep their ids.
  for (ElemId y : a.cospan.y.agents())
    if (auto it = pb.state.find(y); it != pb.state.end()) out.state[y] = it->second;
  for (const ActiveAgent& ag : active_agents(a)) {
    StateId from = pb.state.at(ag.origin);
    std::size_t card = sys.card(from, ag.label);
    if (card == 0) throw BehaviourError("action refused");
    auto it = choices.find(ag.final_agent);
    if (it == choices.end()) throw BehaviourError("no choice for agent " + std::to_string(ag.final_agent));
    out.state[ag.final_agent] = sys.restrict(from, ag.label, it->second);
  }
  if (out.state.size() != out.position.agents().size()) throw BehaviourError("a final agent has no state");
  return out;
}

// ---- back-translation ----

namespace {

bool valid_ident(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char ch : s)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '\'')) return false;
  return s != "tau" && s != "tick" && s != "new";
}

class Zeta {
 public:
  explicit Zeta(const BehaviourSystem& sys) : sys_(sys) {}

  pi::DefinitionEnv defs;

  pi::TermPtr root(StateId s) {
    prepare(s);
    return ref(s);
  }

 private:
  void prepare(StateId s) {
    std::vector<StateId> reach = sys_.reachable({s});
    // Tarjan's algorithm for the cyclic states.
    std::map<StateId, std::size_t> index, low;
    std::set<StateId> on_stack;
    std::vector<StateId> stack;
    std::size_t counter = 0;
    std::function<void(StateId)> strong = [&](StateId v) {
      index[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack.insert(v);
      for (const auto& [b, row] : sys_.at(v).rows)
        for (StateId w : row) {
          if (!index.count(w)) {
            strong(w);
            low[v] = std::min(low[v], low[w]);
          } else if (on_stack.count(w)) {
            low[v] = std::min(low[v], index[w]);
          }
        }
      if (low[v] != index[v]) return;
      std::vector<StateId> comp;
      StateId w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        comp.push_back(w);
      } while (w != v);
      bool cyclic = comp.size() > 1;
      if (!cyclic)
        for (const auto& [b, row] : sys_.at(v).rows)
          if (std::count(row.begin(), row.end(), v)) cyclic = true;
      if (cyclic)
        for (StateId c : comp) cyclic_.insert(c);
    };
    for (StateId v : reach)
      if (!index.count(v)) strong(v);

    std::vector<StateId> fresh;
    for (StateId v : reach) {
      if (!cyclic_.count(v) || def_of_.count(v)) continue;
      const State& st = sys_.at(v);
      std::string base = st.name.substr(0, st.name.find('@'));
      if (!valid_ident(base)) base = "Z";
      std::string name = base;
      for (unsigned k = 1; defs.find(name); ++k) name = base + "_" + std::to_string(k);
      pi::Definition d;
      d.name = name;
      for (unsigned i = 1; i <= st.arity; ++i) d.params.push_back("c" + std::to_string(i));
      d.body = pi::nil();
      def_of_[v] = defs.add(std::move(d));
      fresh.push_back(v);
    }
    for (StateId v : fresh) defs.set_body(def_of_.at(v), body(v));
  }

  pi::TermPtr ref(StateId s) {
    auto it = def_of_.find(s);
    if (it == def_of_.end()) return body(s);
    std::vector<pi::Ref> args;
    for (unsigned i = 0; i < sys_.at(s).arity; ++i) args.push_back(pi::Ref::free_chan(i));
    return pi::constant(it->second, std::move(args));
  }

  // The guarded sum over free channels 0..arity-1.
  pi::TermPtr body(StateId s) {
    const State& st = sys_.at(s);
    unsigned n = st.arity;
    std::vector<pi::Branch> bs;
    const FormalSum& ls = sys_.residual(s, BasicLabel::pil(n));
    const FormalSum& rs = sys_.residual(s, BasicLabel::pir(n));
    for (StateId l : ls)
      for (StateId r : rs) bs.push_back({pi::tau_guard(), pi::par(ref(l), ref(r))});
    for (const auto& [b, row] : st.rows)
      for (StateId t : row) {
        switch (b.kind) {
          case LabelKind::PiL:
          case LabelKind::PiR: break;
          case LabelKind::Tau: bs.push_back({pi::tau_guard(), ref(t)}); break;
          case LabelKind::Tick: bs.push_back({pi::tick_guard(), ref(t)}); break;
          case LabelKind::Nu: bs.push_back({pi::new_guard("x"), pi::close(ref(t), n)}); break;
          case LabelKind::Iota:
            bs.push_back({pi::in_guard(pi::Ref::free_chan(b.a - 1u), "x"), pi::close(ref(t), n)});
            break;
          case LabelKind::Out:
            bs.push_back({pi::out_guard(pi::Ref::free_chan(b.a - 1u), pi::Ref::free_chan(b.b - 1u)), ref(t)});
            break;
        }
      }
    return pi::sum(std::move(bs));
  }

  const BehaviourSystem& sys_;
  std::set<StateId> cyclic_;
  std::map<StateId, std::uint32_t> def_of_;
};

}  // namespace

ZetaResult zeta(const BehaviourSystem& sys, StateId s) {
  Zeta z(sys);
  ZetaResult r;
  r.term = z.root(s);
  r.defs = std::move(z.defs);
  return r;
}

pi::PiFile zeta_config(const BehaviourSystem& sys, const MixedBehaviour& m) {
  check_mixed(sys, m);
  Zeta z(sys);
  pi::PiFile f;
  f.config.gamma = m.gamma;
  for (Chan c : m.gamma) f.config.names[c] = "c" + std::to_string(c);
  for (const MixedItem& it : m.items) {
    std::map<Chan, Chan> sigma;
    for (std::size_t i = 0; i < it.sigma.size(); ++i) sigma[static_cast<Chan>(i)] = it.sigma[i];
    f.config.processes.push_back(pi::substitute(z.root(it.state), sigma));
  }
  f.defs = std::move(z.defs);
  return f;
}

// ---- text format ----

std::string print_system(const BehaviourSystem& sys, const std::vector<StateId>& roots) {
  std::ostringstream os;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const State& s = sys.at(static_cast<StateId>(i));
    os << "STATE " << s.name << " " << s.arity << "\n";
    for (const auto& [b, row] : s.rows) {
      if (row.empty()) continue;
      os << "ROW " << b.str() << " ->";
      for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : " ") << sys.at(row[k]).name;
      os << "\n";
    }
  }
  for (StateId r : roots) os << "ROOT " << sys.at(r).name << "\n";
  return os.str();
}

SystemFile parse_system(const std::string& text) {
  struct Line {
    std::size_t no;
    std::vector<std::string> words;
  };
  std::vector<Line> lines;
  std::istringstream is(text);
  std::string raw;
  for (std::size_t no = 1; std::getline(is, raw); ++no) {
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::istringstream ls(raw);
    Line l{no, {}};
    for (std::string w; ls >> w;) l.words.push_back(w);
    if (!l.words.empty()) lines.push_back(std::move(l));
  }
  auto fail = [](std::size_t no, const std::string& msg) -> BehaviourError {
    return BehaviourError("line " + std::to_string(no) + ": " + msg);
  };
  SystemFile f;
  for (const Line& l : lines) {
    if (l.words[0] != "STATE") continue;
    if (l.words.size() != 3) throw fail(l.no, "expected STATE name arity");
    State s;
    s.name = l.words[1];
    try {
      s.arity = static_cast<unsigned>(std::stoul(l.words[2]));
    } catch (const std::exception&) {
      throw fail(l.no, "bad arity");
    }
    try {
      f.sys.add(std::move(s));
    } catch (const BehaviourError& e) {
      throw fail(l.no, e.what());
    }
  }
  std::optional<StateId> cur;
  for (const Line& l : lines) {
    const std::string& kw = l.words[0];
    if (kw == "STATE") {
      cur = f.sys.find(l.words[1]);
    } else if (kw == "ROW") {
      if (!cur) throw fail(l.no, "ROW before any STATE");
      if (l.words.size() < 3 || l.words[2] != "->") throw fail(l.no, "expected ROW label -> targets");
      auto b = BasicLabel::parse(l.words[1]);
      if (!b) throw fail(l.no, "bad label '" + l.words[1] + "'");
      FormalSum& row = f.sys.at_mut(*cur).rows[*b];
      if (!row.empty()) throw fail(l.no, "duplicate row " + b->str());
      std::string targets;
      for (std::size_t i = 3; i < l.words.size(); ++i) targets += l.words[i];
      std::istringstream ts(targets);
      for (std::string t; std::getline(ts, t, ',');) {
        auto id = f.sys.find(t);
        if (!id) throw fail(l.no, "unknown state '" + t + "'");
        row.push_back(*id);
      }
      if (row.empty()) throw fail(l.no, "empty row");
    } else if (kw == "ROOT") {
      if (l.words.size() != 2) throw fail(l.no, "expected ROOT name");
      auto id = f.sys.find(l.words[1]);
      if (!id) throw fail(l.no, "unknown state '" + l.words[1] + "'");
      f.roots.push_back(*id);
    } else {
      throw fail(l.no, "unknown keyword '" + kw + "'");
    }
  }
  f.sys.validate();
  return f;
}

}  // namespace pipg::behaviours
