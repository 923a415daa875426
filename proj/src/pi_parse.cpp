#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

#include "pipg/pi_syntax.hpp"

namespace pipg::pi {
namespace {

// ---- lexer ----

enum class Tok { Name, Zero, LParen, RParen, Lt, Gt, Dot, Plus, Bar, Comma, LBrack, RBrack, Semi, LBrace, RBrace, Define, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

std::vector<Token> lex(const std::string& s, std::size_t base) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char ch = s[i];
    if (ch == '#') {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    std::size_t at = base + i;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i + 1;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\'')) ++j;
      out.push_back({Tok::Name, s.substr(i, j - i), at});
      i = j;
      continue;
    }
    if (ch == ':' && i + 1 < s.size() && s[i + 1] == '=') {
      out.push_back({Tok::Define, ":=", at});
      i += 2;
      continue;
    }
    Tok k;
    switch (ch) {
      case '0': k = Tok::Zero; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '<': k = Tok::Lt; break;
      case '>': k = Tok::Gt; break;
      case '.': k = Tok::Dot; break;
      case '+': k = Tok::Plus; break;
      case '|': k = Tok::Bar; break;
      case ',': k = Tok::Comma; break;
      case '[': k = Tok::LBrack; break;
      case ']': k = Tok::RBrack; break;
      case ';': k = Tok::Semi; break;
      case '{': k = Tok::LBrace; break;
      case '}': k = Tok::RBrace; break;
      default: throw SyntaxError(std::string("unexpected character '") + ch + "'", at);
    }
    out.push_back({k, std::string(1, ch), at});
    ++i;
  }
  out.push_back({Tok::End, "", base + s.size()});
  return out;
}

bool reserved(const std::string& n) { return n == "tau" || n == "tick" || n == "new"; }

// ---- raw syntax (names unresolved) ----

struct Raw;
using RawPtr = std::shared_ptr<Raw>;

struct RawGuard {
  GuardKind kind = GuardKind::Tau;
  std::string chan, payload, bound;
  std::size_t offset = 0;
};

struct Raw {
  TermKind kind = TermKind::Sum;
  std::vector<std::pair<RawGuard, RawPtr>> branches;
  RawPtr left, right;
  std::string name;
  bool explicit_args = false;
  std::vector<std::string> args;
  std::size_t offset = 0;
  bool paren = false;  // parenthesised on input
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  Token expect(Tok k, const char* what) {
    if (!at(k)) throw SyntaxError(std::string("expected ") + what, peek().offset);
    return take();
  }
  std::string name(const char* what) {
    Token t = expect(Tok::Name, what);
    if (reserved(t.text)) throw SyntaxError("reserved word '" + t.text + "' used as a name", t.offset);
    return t.text;
  }

  RawPtr process() {
    RawPtr l = summation();
    while (at(Tok::Bar)) {
      take();
      RawPtr r = summation();
      auto p = std::make_shared<Raw>();
      p->kind = TermKind::Par;
      p->offset = l->offset;
      p->left = l;
      p->right = r;
      l = p;
    }
    return l;
  }

  bool guard_ahead() const {
    if (!at(Tok::Name)) return false;
    const std::string& t = peek().text;
    if (t == "tau" || t == "tick" || t == "new") return true;
    return peek(1).kind == Tok::LParen || peek(1).kind == Tok::Lt;
  }

  RawPtr summation() {
    std::size_t start = peek().offset;
    RawPtr first = summand();
    if (!at(Tok::Plus)) return first;
    auto s = std::make_shared<Raw>();
    s->kind = TermKind::Sum;
    s->offset = start;
    absorb(s, first, start);
    while (at(Tok::Plus)) {
      take();
      std::size_t off = peek().offset;
      absorb(s, summand(), off);
    }
    return s;
  }

  void absorb(const RawPtr& s, const RawPtr& operand, std::size_t off) {
    if (operand->kind != TermKind::Sum || operand->branches.empty())
      throw SyntaxError("'+' applied to a non-guarded operand", off);
    for (auto& b : operand->branches) s->branches.push_back(b);
  }

  RawPtr summand() {
    if (guard_ahead()) return prefixed();
    return atom();
  }

  RawPtr atom() {
    std::size_t off = peek().offset;
    if (at(Tok::Zero)) {
      take();
      auto z = std::make_shared<Raw>();
      z->offset = off;
      return z;
    }
    if (at(Tok::LParen)) {
      take();
      RawPtr p = process();
      expect(Tok::RParen, "')'");
      p->paren = true;
      return p;
    }
    if (at(Tok::Name)) {
      if (guard_ahead()) return prefixed();
      auto c = std::make_shared<Raw>();
      c->kind = TermKind::Constant;
      c->offset = off;
      c->name = name("constant name");
      if (at(Tok::LBrace)) {
        take();
        c->explicit_args = true;
        if (!at(Tok::RBrace)) {
          c->args.push_back(name("argument name"));
          while (at(Tok::Comma)) {
            take();
            c->args.push_back(name("argument name"));
          }
        }
        expect(Tok::RBrace, "'}'");
      }
      return c;
    }
    throw SyntaxError("expected a process", off);
  }

  RawPtr prefixed() {
    std::size_t off = peek().offset;
    RawGuard g;
    g.offset = off;
    Token t = take();
    if (t.text == "tau") {
      g.kind = GuardKind::Tau;
    } else if (t.text == "tick") {
      g.kind = GuardKind::Tick;
    } else if (t.text == "new") {
      g.kind = GuardKind::New;
      g.bound = name("bound name after 'new'");
    } else if (at(Tok::LParen)) {
      take();
      g.kind = GuardKind::In;
      g.chan = t.text;
      g.bound = name("bound name");
      expect(Tok::RParen, "')'");
    } else {
      expect(Tok::Lt, "'<'");
      g.kind = GuardKind::Out;
      g.chan = t.text;
      g.payload = name("payload name");
      expect(Tok::Gt, "'>'");
    }
    if (reserved(g.chan)) throw SyntaxError("reserved word used as a channel", off);
    expect(Tok::Dot, "'.'");
    RawPtr body = guard_ahead() ? prefixed() : atom();
    auto s = std::make_shared<Raw>();
    s->kind = TermKind::Sum;
    s->offset = off;
    s->branches.push_back({g, body});
    return s;
  }

  std::size_t pos_ = 0;
  std::vector<Token> toks_;
};

// ---- resolution ----

using ParamTable = std::map<std::string, std::vector<std::string>>;

void collect_free(const RawPtr& r, std::vector<std::string>& bound, const ParamTable& params,
                  std::set<std::string>& out) {
  auto use = [&](const std::string& n) {
    if (std::find(bound.begin(), bound.end(), n) == bound.end()) out.insert(n);
  };
  switch (r->kind) {
    case TermKind::Sum:
      for (auto& [g, body] : r->branches) {
        if (g.kind == GuardKind::In || g.kind == GuardKind::Out) use(g.chan);
        if (g.kind == GuardKind::Out) use(g.payload);
        if (!g.bound.empty()) bound.push_back(g.bound);
        collect_free(body, bound, params, out);
        if (!g.bound.empty()) bound.pop_back();
      }
      break;
    case TermKind::Par:
      collect_free(r->left, bound, params, out);
      collect_free(r->right, bound, params, out);
      break;
    case TermKind::Constant: {
      auto it = params.find(r->name);
      if (it == params.end()) throw ScopeError("undefined constant '" + r->name + "'");
      for (const auto& n : r->explicit_args ? r->args : it->second) use(n);
      break;
    }
  }
}

void collect_unguarded(const RawPtr& r, std::set<std::string>& out) {
  if (r->kind == TermKind::Constant) out.insert(r->name);
  if (r->kind == TermKind::Par) {
    collect_unguarded(r->left, out);
    collect_unguarded(r->right, out);
  }
}

struct Resolver {
  const DefinitionEnv& defs;
  std::map<std::string, Chan> free;  // names of free channels
  std::vector<std::string> binders;

  Ref ref(const std::string& n, std::size_t offset) const {
    for (std::size_t k = 0; k < binders.size(); ++k)
      if (binders[binders.size() - 1 - k] == n) return Ref::bvar(static_cast<std::uint32_t>(k));
    auto it = free.find(n);
    if (it == free.end()) throw ScopeError("unbound name '" + n + "' at offset " + std::to_string(offset));
    return Ref::free_chan(it->second);
  }

  TermPtr operator()(const RawPtr& r) {
    switch (r->kind) {
      case TermKind::Sum: {
        std::vector<Branch> bs;
        for (auto& [g, body] : r->branches) {
          Guard out;
          out.kind = g.kind;
          if (g.kind == GuardKind::In || g.kind == GuardKind::Out) out.channel = ref(g.chan, g.offset);
          if (g.kind == GuardKind::Out) out.payload = ref(g.payload, g.offset);
          out.hint = g.bound;
          if (!g.bound.empty()) binders.push_back(g.bound);
          TermPtr b = (*this)(body);
          if (!g.bound.empty()) binders.pop_back();
          bs.push_back(Branch{out, b});
        }
        return bs.empty() ? nil() : sum(std::move(bs));
      }
      case TermKind::Par:
        return par((*this)(r->left), (*this)(r->right));
      case TermKind::Constant: {
        const std::uint32_t* id = defs.find(r->name);
        if (!id) throw ScopeError("undefined constant '" + r->name + "'");
        const Definition& d = defs.at(*id);
        const auto& names = r->explicit_args ? r->args : d.params;
        if (names.size() != d.params.size())
          throw ScopeError("constant '" + r->name + "' expects " + std::to_string(d.params.size()) + " arguments");
        std::vector<Ref> args;
        for (const auto& n : names) args.push_back(ref(n, r->offset));
        return constant(*id, std::move(args));
      }
    }
    return nil();
  }
};

RawPtr parse_raw(const std::string& text, std::size_t base) {
  Parser p(lex(text, base));
  RawPtr r = p.process();
  if (!p.at(Tok::End)) throw SyntaxError("unexpected trailing input", p.peek().offset);
  return r;
}

struct RawDef {
  std::string name;
  bool explicit_params = false;
  std::vector<std::string> params;
  RawPtr body;
};

std::vector<std::pair<std::string, std::size_t>> split_lines(const std::string& text) {
  std::vector<std::pair<std::string, std::size_t>> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) nl = text.size();
    out.emplace_back(text.substr(start, nl - start), start);
    start = nl + 1;
  }
  return out;
}

bool blank(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

RawDef parse_def_line(const std::string& line, std::size_t base) {
  std::size_t eq = line.find(":=");
  if (eq == std::string::npos) throw SyntaxError("expected ':='", base + line.size());
  Parser head(lex(line.substr(0, eq), base));
  RawDef d;
  d.name = head.name("constant name");
  if (head.at(Tok::LBrace)) {
    head.take();
    d.explicit_params = true;
    if (!head.at(Tok::RBrace)) {
      d.params.push_back(head.name("parameter name"));
      while (head.at(Tok::Comma)) {
        head.take();
        d.params.push_back(head.name("parameter name"));
      }
    }
    head.expect(Tok::RBrace, "'}'");
  }
  if (!head.at(Tok::End)) throw SyntaxError("expected ':='", head.peek().offset);
  d.body = parse_raw(line.substr(eq + 2), base + eq + 2);
  return d;
}

void install(std::vector<RawDef> raw, DefinitionEnv& env) {
  ParamTable params;
  for (std::size_t i = 0; i < env.size(); ++i) params[env.at(static_cast<std::uint32_t>(i)).name] = env.at(static_cast<std::uint32_t>(i)).params;
  for (auto& d : raw) {
    if (params.count(d.name)) throw ScopeError("constant '" + d.name + "' defined twice");
    params[d.name] = d.params;
  }
  // Implicit parameters: least fixpoint of free names through constants.
  for (bool changed = true; changed;) {
    changed = false;
    for (auto& d : raw) {
      std::set<std::string> fv;
      std::vector<std::string> bound;
      collect_free(d.body, bound, params, fv);
      if (d.explicit_params) {
        for (const auto& n : fv)
          if (std::find(d.params.begin(), d.params.end(), n) == d.params.end())
            throw ScopeError("name '" + n + "' is free in '" + d.name + "' but not a parameter");
        continue;
      }
      std::vector<std::string> now(fv.begin(), fv.end());
      if (now != d.params) {
        d.params = now;
        params[d.name] = now;
        changed = true;
      }
    }
  }
  // Guardedness: no cycle through unguarded constant occurrences.
  std::map<std::string, std::set<std::string>> unguarded;
  for (auto& d : raw) collect_unguarded(d.body, unguarded[d.name]);
  std::map<std::string, int> state;
  std::function<void(const std::string&)> visit = [&](const std::string& n) {
    state[n] = 1;
    for (const auto& m : unguarded[n]) {
      if (state[m] == 1) throw ScopeError("unguarded constant '" + m + "'");
      if (state[m] == 0) visit(m);
    }
    state[n] = 2;
  };
  for (auto& d : raw)
    if (state[d.name] == 0) visit(d.name);

  std::vector<std::uint32_t> ids;
  for (auto& d : raw) ids.push_back(env.add(Definition{d.name, d.params, nil()}));
  for (std::size_t i = 0; i < raw.size(); ++i) {
    Resolver res{env, {}, {}};
    for (std::size_t k = 0; k < raw[i].params.size(); ++k) res.free[raw[i].params[k]] = static_cast<Chan>(k);
    env.set_body(ids[i], res(raw[i].body));
  }
}

Configuration parse_config_line(const std::string& line, std::size_t base, const DefinitionEnv& defs) {
  Parser p(lex(line, base));
  p.expect(Tok::LBrack, "'['");
  std::vector<std::string> gamma;
  if (!p.at(Tok::RBrack)) {
    gamma.push_back(p.name("channel name"));
    while (p.at(Tok::Comma)) {
      p.take();
      gamma.push_back(p.name("channel name"));
    }
  }
  p.expect(Tok::RBrack, "']'");
  Configuration c;
  Resolver res{defs, {}, {}};
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    if (res.free.count(gamma[i])) throw ScopeError("channel '" + gamma[i] + "' declared twice");
    res.free[gamma[i]] = static_cast<Chan>(i);
    c.gamma.push_back(static_cast<Chan>(i));
    c.names[static_cast<Chan>(i)] = gamma[i];
  }
  if (p.at(Tok::End)) return c;
  c.processes.push_back(res(p.process()));
  while (p.at(Tok::Semi)) {
    p.take();
    c.processes.push_back(res(p.process()));
  }
  if (!p.at(Tok::End)) throw SyntaxError("unexpected trailing input", p.peek().offset);
  return c;
}

}  // namespace

void parse_definitions(const std::string& text, DefinitionEnv& env) {
  std::vector<RawDef> raw;
  for (auto& [line, off] : split_lines(text))
    if (!blank(line)) raw.push_back(parse_def_line(line, off));
  install(std::move(raw), env);
}

TermPtr parse_process(const std::string& text, const std::vector<std::string>& gamma, const DefinitionEnv& defs) {
  Resolver res{defs, {}, {}};
  for (std::size_t i = 0; i < gamma.size(); ++i) res.free[gamma[i]] = static_cast<Chan>(i);
  return res(parse_raw(text, 0));
}

Configuration parse_configuration(const std::string& text, const DefinitionEnv& defs) {
  return parse_config_line(text, 0, defs);
}

PiFile parse_pi_file(const std::string& text) {
  PiFile out;
  std::vector<RawDef> raw;
  std::pair<std::string, std::size_t> config_line{"", 0};
  bool have_config = false;
  for (auto& [line, off] : split_lines(text)) {
    if (blank(line)) continue;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (line[first] == '[') {
      if (have_config) throw SyntaxError("more than one configuration line", off);
      config_line = {line, off};
      have_config = true;
    } else {
      raw.push_back(parse_def_line(line, off));
    }
  }
  if (!have_config) throw SyntaxError("missing configuration line", text.size());
  install(std::move(raw), out.defs);
  out.config = parse_config_line(config_line.first, config_line.second, out.defs);
  return out;
}

// ---- printing ----

namespace {

struct Printer {
  const std::map<Chan, std::string>& names;
  const DefinitionEnv& defs;
  std::vector<std::string> binders;
  std::set<std::string> taken;

  std::string ref(const Ref& r) const {
    if (r.bound) return binders.at(binders.size() - 1 - r.index);
    auto it = names.find(r.index);
    return it == names.end() ? "x" + std::to_string(r.index) : it->second;
  }

  std::string bind(const std::string& hint) {
    std::string n = hint.empty() ? "x" : hint;
    while (taken.count(n)) n += "'";
    binders.push_back(n);
    taken.insert(n);
    return n;
  }

  void unbind() {
    taken.erase(binders.back());
    binders.pop_back();
  }

  void guard(const Guard& g, std::ostream& os) {
    switch (g.kind) {
      case GuardKind::Tau: os << "tau"; break;
      case GuardKind::Tick: os << "tick"; break;
      case GuardKind::New: os << "new " << bind(g.hint); break;
      case GuardKind::In: {
        std::string c = ref(g.channel);
        os << c << "(" << bind(g.hint) << ")";
        break;
      }
      case GuardKind::Out: os << ref(g.channel) << "<" << ref(g.payload) << ">"; break;
    }
  }

  void branch(const Branch& b, std::ostream& os) {
    guard(b.guard, os);
    os << ".";
    cont(b.body, os);
    if (b.guard.binds()) unbind();
  }

  void cont(const TermPtr& t, std::ostream& os) {
    if (t->kind == TermKind::Sum && t->branches.size() == 1) {
      branch(t->branches[0], os);
    } else if (t->kind == TermKind::Sum && t->branches.empty()) {
      os << "0";
    } else if (t->kind == TermKind::Constant) {
      konst(t, os);
    } else {
      os << "(";
      proc(t, os);
      os << ")";
    }
  }

  void konst(const TermPtr& t, std::ostream& os) {
    const Definition& d = defs.at(t->constant);
    os << d.name;
    bool plain = true;
    for (std::size_t i = 0; i < t->args.size(); ++i)
      if (ref(t->args[i]) != d.params[i]) plain = false;
    if (plain) return;
    os << "{";
    for (std::size_t i = 0; i < t->args.size(); ++i) os << (i ? "," : "") << ref(t->args[i]);
    os << "}";
  }

  void proc(const TermPtr& t, std::ostream& os) {
    switch (t->kind) {
      case TermKind::Sum:
        if (t->branches.empty()) {
          os << "0";
          return;
        }
        for (std::size_t i = 0; i < t->branches.size(); ++i) {
          if (i) os << " + ";
          branch(t->branches[i], os);
        }
        return;
      case TermKind::Par:
        proc(t->left, os);
        os << " | ";
        if (t->right->kind == TermKind::Par) {
          os << "(";
          proc(t->right, os);
          os << ")";
        } else {
          proc(t->right, os);
        }
        return;
      case TermKind::Constant:
        konst(t, os);
        return;
    }
  }
};

}  // namespace

std::string print_process(const TermPtr& t, const std::map<Chan, std::string>& names, const DefinitionEnv& defs) {
  Printer p{names, defs, {}, {}};
  for (const auto& [c, n] : names) p.taken.insert(n);
  std::ostringstream os;
  p.proc(t, os);
  return os.str();
}

std::string print_configuration(const Configuration& c, const DefinitionEnv& defs) {
  std::map<Chan, std::string> names;
  for (Chan g : c.gamma) names[g] = c.name_of(g);
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < c.gamma.size(); ++i) os << (i ? "," : "") << names[c.gamma[i]];
  os << "]";
  for (std::size_t i = 0; i < c.processes.size(); ++i) os << (i ? " ; " : " ") << print_process(c.processes[i], names, defs);
  return os.str();
}

std::string print_definitions(const DefinitionEnv& defs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < defs.size(); ++i) {
    const Definition& d = defs.at(static_cast<std::uint32_t>(i));
    std::map<Chan, std::string> names;
    for (std::size_t k = 0; k < d.params.size(); ++k) names[static_cast<Chan>(k)] = d.params[k];
    os << d.name;
    // Explicit parameter lists keep printing stable under re-inference.
    if (!d.params.empty()) {
      os << "{";
      for (std::size_t k = 0; k < d.params.size(); ++k) os << (k ? "," : "") << d.params[k];
      os << "}";
    }
    os << " := " << print_process(d.body, names, defs) << "\n";
  }
  return os.str();
}

}  // namespace pipg::pi
