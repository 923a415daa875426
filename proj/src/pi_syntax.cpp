#include "pipg/pi_syntax.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "pipg/canon.hpp"

namespace pipg::pi {

// ---- construction ----

TermPtr nil() {
  static const TermPtr z = std::make_shared<const Term>();
  return z;
}

TermPtr sum(std::vector<Branch> branches) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Sum;
  t->branches = std::move(branches);
  return t;
}

TermPtr par(TermPtr l, TermPtr r) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Par;
  t->left = std::move(l);
  t->right = std::move(r);
  return t;
}

TermPtr constant(std::uint32_t id, std::vector<Ref> args) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Constant;
  t->constant = id;
  t->args = std::move(args);
  return t;
}

Guard tau_guard() { return Guard{GuardKind::Tau, {}, {}, {}}; }
Guard tick_guard() { return Guard{GuardKind::Tick, {}, {}, {}}; }
Guard new_guard(std::string hint) { return Guard{GuardKind::New, {}, {}, std::move(hint)}; }
Guard in_guard(Ref channel, std::string hint) { return Guard{GuardKind::In, channel, {}, std::move(hint)}; }
Guard out_guard(Ref channel, Ref payload) { return Guard{GuardKind::Out, channel, payload, {}}; }

TermPtr prefix(Guard g, TermPtr body) { return sum({Branch{std::move(g), std::move(body)}}); }

// ---- order ----

namespace {

int cmp_ref(const Ref& a, const Ref& b) {
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}

int cmp_guard(const Guard& a, const Guard& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  if (int c = cmp_ref(a.channel, b.channel)) return c;
  return cmp_ref(a.payload, b.payload);
}

}  // namespace

int compare(const TermPtr& a, const TermPtr& b) {
  if (a == b) return 0;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  switch (a->kind) {
    case TermKind::Sum: {
      if (a->branches.size() != b->branches.size()) return a->branches.size() < b->branches.size() ? -1 : 1;
      for (std::size_t i = 0; i < a->branches.size(); ++i) {
        if (int c = cmp_guard(a->branches[i].guard, b->branches[i].guard)) return c;
        if (int c = compare(a->branches[i].body, b->branches[i].body)) return c;
      }
      return 0;
    }
    case TermKind::Par:
      if (int c = compare(a->left, b->left)) return c;
      return compare(a->right, b->right);
    case TermKind::Constant:
      if (a->constant != b->constant) return a->constant < b->constant ? -1 : 1;
      if (a->args < b->args) return -1;
      if (b->args < a->args) return 1;
      return 0;
  }
  return 0;
}

// ---- definitions ----

std::uint32_t DefinitionEnv::add(Definition d) {
  auto id = static_cast<std::uint32_t>(defs_.size());
  index_[d.name] = id;
  defs_.push_back(std::move(d));
  return id;
}

const std::uint32_t* DefinitionEnv::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &it->second;
}

namespace {

// Maps free references through `f` (which receives the free channel and the
// binder depth) and shifts nothing else.
TermPtr map_refs(const TermPtr& t, const std::function<Ref(Ref, std::uint32_t)>& f, std::uint32_t depth) {
  switch (t->kind) {
    case TermKind::Sum: {
      if (t->branches.empty()) return t;
      std::vector<Branch> bs;
      bs.reserve(t->branches.size());
      for (const Branch& b : t->branches) {
        Guard g = b.guard;
        if (g.kind == GuardKind::In || g.kind == GuardKind::Out) g.channel = f(g.channel, depth);
        if (g.kind == GuardKind::Out) g.payload = f(g.payload, depth);
        bs.push_back(Branch{g, map_refs(b.body, f, depth + (g.binds() ? 1 : 0))});
      }
      return sum(std::move(bs));
    }
    case TermKind::Par:
      return par(map_refs(t->left, f, depth), map_refs(t->right, f, depth));
    case TermKind::Constant: {
      std::vector<Ref> args;
      args.reserve(t->args.size());
      for (const Ref& r : t->args) args.push_back(f(r, depth));
      return constant(t->constant, std::move(args));
    }
  }
  return t;
}

}  // namespace

TermPtr DefinitionEnv::unfold(std::uint32_t id, const std::vector<Ref>& args) const {
  const Definition& d = defs_.at(id);
  if (args.size() != d.params.size()) throw std::logic_error("constant arity mismatch for " + d.name);
  return map_refs(
      d.body,
      [&](Ref r, std::uint32_t depth) -> Ref {
        if (r.bound) return r;
        Ref a = args.at(r.index);
        if (a.bound) a.index += depth;
        return a;
      },
      0);
}

TermPtr DefinitionEnv::unfold_top(TermPtr t) const {
  std::size_t guard = 0;
  while (t->kind == TermKind::Constant) {
    t = unfold(t->constant, t->args);
    if (++guard > defs_.size() + 1) throw std::logic_error("unguarded recursion while unfolding");
  }
  return t;
}

// ---- substitution ----

std::vector<Chan> free_channels(const TermPtr& t) {
  std::set<Chan> out;
  map_refs(
      t,
      [&](Ref r, std::uint32_t) {
        if (!r.bound) out.insert(r.index);
        return r;
      },
      0);
  return {out.begin(), out.end()};
}

TermPtr substitute(const TermPtr& t, const std::map<Chan, Chan>& sigma) {
  return map_refs(
      t,
      [&](Ref r, std::uint32_t) {
        if (r.bound) return r;
        auto it = sigma.find(r.index);
        return it == sigma.end() ? r : Ref::free_chan(it->second);
      },
      0);
}

TermPtr open(const TermPtr& body, Chan c) {
  return map_refs(
      body,
      [&](Ref r, std::uint32_t depth) {
        if (!r.bound || r.index < depth) return r;
        if (r.index == depth) return Ref::free_chan(c);
        return Ref::bvar(r.index - 1);
      },
      0);
}

TermPtr close(const TermPtr& body, Chan c) {
  return map_refs(
      body,
      [&](Ref r, std::uint32_t depth) {
        if (r.bound) return r.index >= depth ? Ref::bvar(r.index + 1) : r;
        return r.index == c ? Ref::bvar(depth) : r;
      },
      0);
}

const char* label_name(SigmaLabel l) { return l == SigmaLabel::Tick ? "tick" : "tau"; }

// ---- configurations ----

bool Configuration::has(Chan c) const { return std::binary_search(gamma.begin(), gamma.end(), c); }

Chan Configuration::fresh() const {
  Chan c = 0;
  for (Chan g : gamma) {
    if (g != c) break;
    ++c;
  }
  return c;
}

std::string Configuration::name_of(Chan c) const {
  auto it = names.find(c);
  return it == names.end() ? "x" + std::to_string(c) : it->second;
}

bool same(const Configuration& a, const Configuration& b) {
  if (a.gamma != b.gamma || a.processes.size() != b.processes.size()) return false;
  auto less = [](const TermPtr& x, const TermPtr& y) { return compare(x, y) < 0; };
  auto pa = a.processes, pb = b.processes;
  std::sort(pa.begin(), pa.end(), less);
  std::sort(pb.begin(), pb.end(), less);
  for (std::size_t i = 0; i < pa.size(); ++i)
    if (!equal(pa[i], pb[i])) return false;
  return true;
}

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Heat: return "heat";
    case Rule::Tau: return "tau";
    case Rule::Tick: return "tick";
    case Rule::New: return "new";
    case Rule::Sync: return "sync";
  }
  return "?";
}

namespace {

std::string fresh_name(const Configuration& c, const std::string& hint) {
  std::set<std::string> taken;
  for (const auto& [k, v] : c.names) taken.insert(v);
  std::string n = hint.empty() ? "x" : hint;
  while (taken.count(n)) n += "'";
  return n;
}

Configuration replace_proc(const Configuration& c, std::size_t i, std::vector<TermPtr> with) {
  Configuration out;
  out.gamma = c.gamma;
  out.names = c.names;
  out.processes.reserve(c.processes.size() + with.size());
  for (std::size_t k = 0; k < c.processes.size(); ++k) {
    if (k == i) {
      for (auto& w : with) out.processes.push_back(w);
    } else {
      out.processes.push_back(c.processes[k]);
    }
  }
  return out;
}

}  // namespace

Configuration apply_rule(const Configuration& c, const ConfTransition& tr, const DefinitionEnv& defs) {
  if (tr.proc >= c.processes.size()) throw std::invalid_argument("redex index out of range");
  TermPtr p = defs.unfold_top(c.processes[tr.proc]);
  if (tr.rule == Rule::Heat) {
    if (p->kind != TermKind::Par) throw std::invalid_argument("heat on a non-parallel process");
    return replace_proc(c, tr.proc, {p->left, p->right});
  }
  if (p->kind != TermKind::Sum || tr.branch >= p->branches.size())
    throw std::invalid_argument("redex is not a guarded sum with that branch");
  const Branch& b = p->branches[tr.branch];
  switch (tr.rule) {
    case Rule::Tau:
      if (b.guard.kind != GuardKind::Tau) throw std::invalid_argument("not a tau guard");
      return replace_proc(c, tr.proc, {b.body});
    case Rule::Tick:
      if (b.guard.kind != GuardKind::Tick) throw std::invalid_argument("not a tick guard");
      return replace_proc(c, tr.proc, {b.body});
    case Rule::New: {
      if (b.guard.kind != GuardKind::New) throw std::invalid_argument("not a new guard");
      Chan f = c.fresh();
      Configuration out = replace_proc(c, tr.proc, {open(b.body, f)});
      out.names[f] = fresh_name(c, b.guard.hint);
      out.gamma.insert(std::lower_bound(out.gamma.begin(), out.gamma.end(), f), f);
      return out;
    }
    case Rule::Sync: {
      if (b.guard.kind != GuardKind::In) throw std::invalid_argument("not an input guard");
      if (tr.partner == tr.proc || tr.partner >= c.processes.size())
        throw std::invalid_argument("bad sync partner");
      TermPtr q = defs.unfold_top(c.processes[tr.partner]);
      if (q->kind != TermKind::Sum || tr.partner_branch >= q->branches.size())
        throw std::invalid_argument("partner is not a guarded sum with that branch");
      const Branch& ob = q->branches[tr.partner_branch];
      if (ob.guard.kind != GuardKind::Out || ob.guard.channel != b.guard.channel)
        throw std::invalid_argument("partner is not an output on the same channel");
      Configuration out;
      out.gamma = c.gamma;
      out.names = c.names;
      for (std::size_t k = 0; k < c.processes.size(); ++k) {
        if (k == tr.proc)
          out.processes.push_back(open(b.body, ob.guard.payload.index));
        else if (k == tr.partner)
          out.processes.push_back(ob.body);
        else
          out.processes.push_back(c.processes[k]);
      }
      return out;
    }
    case Rule::Heat:
      break;
  }
  throw std::invalid_argument("unknown rule");
}

std::vector<ConfTransition> conf_transitions(const Configuration& c, const DefinitionEnv& defs) {
  std::vector<ConfTransition> out;
  std::vector<TermPtr> top(c.processes.size());
  for (std::size_t i = 0; i < c.processes.size(); ++i) top[i] = defs.unfold_top(c.processes[i]);
  auto emit = [&](ConfTransition tr) {
    tr.target = apply_rule(c, tr, defs);
    out.push_back(std::move(tr));
  };
  for (std::size_t i = 0; i < top.size(); ++i) {
    const TermPtr& p = top[i];
    if (p->kind == TermKind::Par) {
      ConfTransition tr;
      tr.rule = Rule::Heat;
      tr.proc = i;
      emit(std::move(tr));
      continue;
    }
    for (std::size_t k = 0; k < p->branches.size(); ++k) {
      const Guard& g = p->branches[k].guard;
      ConfTransition tr;
      tr.proc = i;
      tr.branch = k;
      switch (g.kind) {
        case GuardKind::Tau: tr.rule = Rule::Tau; emit(std::move(tr)); break;
        case GuardKind::Tick: tr.rule = Rule::Tick; tr.label = SigmaLabel::Tick; emit(std::move(tr)); break;
        case GuardKind::New: tr.rule = Rule::New; emit(std::move(tr)); break;
        case GuardKind::Out: break;
        case GuardKind::In:
          for (std::size_t j = 0; j < top.size(); ++j) {
            if (j == i || top[j]->kind != TermKind::Sum) continue;
            for (std::size_t l = 0; l < top[j]->branches.size(); ++l) {
              const Guard& o = top[j]->branches[l].guard;
              if (o.kind != GuardKind::Out || o.channel != g.channel) continue;
              ConfTransition s;
              s.rule = Rule::Sync;
              s.proc = i;
              s.branch = k;
              s.partner = j;
              s.partner_branch = l;
              emit(std::move(s));
            }
          }
          break;
      }
    }
  }
  return out;
}

// ---- canonical forms ----

namespace {

enum : std::uint64_t { kSum = 1, kPar = 2, kConst = 3, kGuard = 10, kBound = 20 };

void tokenize_ref(const Ref& r, Item& out) {
  if (r.bound) {
    out.push_back(lit(kBound));
    out.push_back(lit(r.index));
  } else {
    out.push_back(chan_tok(r.index));
  }
}

void tokenize(const TermPtr& t, Item& out) {
  switch (t->kind) {
    case TermKind::Sum:
      out.push_back(lit(kSum));
      out.push_back(lit(t->branches.size()));
      for (const Branch& b : t->branches) {
        out.push_back(lit(kGuard + static_cast<std::uint64_t>(b.guard.kind)));
        if (b.guard.kind == GuardKind::In || b.guard.kind == GuardKind::Out) tokenize_ref(b.guard.channel, out);
        if (b.guard.kind == GuardKind::Out) tokenize_ref(b.guard.payload, out);
        tokenize(b.body, out);
      }
      break;
    case TermKind::Par:
      out.push_back(lit(kPar));
      tokenize(t->left, out);
      tokenize(t->right, out);
      break;
    case TermKind::Constant:
      out.push_back(lit(kConst));
      out.push_back(lit(t->constant));
      out.push_back(lit(t->args.size()));
      for (const Ref& r : t->args) tokenize_ref(r, out);
      break;
  }
}

}  // namespace

Item process_tokens(const TermPtr& t) {
  Item out;
  tokenize(t, out);
  return out;
}

Canonical canonicalize(const Configuration& c) {
  std::vector<Item> items(c.processes.size());
  for (std::size_t i = 0; i < c.processes.size(); ++i) tokenize(c.processes[i], items[i]);
  std::vector<std::uint64_t> chans(c.gamma.begin(), c.gamma.end());
  CanonResult r = canonical_order(items, chans);

  Canonical out;
  out.order = r.order;
  for (const auto& [o, n] : r.renaming) out.renaming[static_cast<Chan>(o)] = static_cast<Chan>(n);
  for (Chan g : c.gamma) {
    Chan n = out.renaming.at(g);
    out.config.gamma.push_back(n);
    out.config.names[n] = c.name_of(g);
  }
  std::sort(out.config.gamma.begin(), out.config.gamma.end());
  for (std::size_t idx : r.order) out.config.processes.push_back(substitute(c.processes[idx], out.renaming));
  out.key = key_string(r.key);
  return out;
}

Configuration join(const Configuration& a, const Configuration& b) {
  if (a.gamma != b.gamma) throw std::invalid_argument("configurations are not coherent (different channel sets)");
  Configuration out = a;
  out.processes.insert(out.processes.end(), b.processes.begin(), b.processes.end());
  return out;
}

}  // namespace pipg::pi
