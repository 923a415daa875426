#include "pipg/presheaf.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace pipg::presheaf {

// ---- objects ----

int Object::dimension() const {
  switch (kind) {
    case Kind::Star: return 0;
    case Kind::Agent: return 1;
    case Kind::Fork: return 3;
    case Kind::Sync: return 4;
    default: return 2;
  }
}

bool Object::valid() const {
  switch (kind) {
    case Kind::Iota: return a >= 1 && a <= n;
    case Kind::Out: return c >= 1 && c <= m && d >= 1 && d <= m;
    case Kind::Sync: return a >= 1 && a <= n && c >= 1 && c <= m && d >= 1 && d <= m;
    default: return true;
  }
}

std::size_t Object::face_count() const {
  switch (kind) {
    case Kind::Star: return 0;
    case Kind::Agent: return n;
    default: return 2;
  }
}

Object Object::face_object(std::size_t k) const {
  switch (kind) {
    case Kind::Star: break;
    case Kind::Agent: return star();
    case Kind::PiL:
    case Kind::PiR:
    case Kind::Tick:
    case Kind::Tau: return agent(n);
    case Kind::Out: return agent(m);
    case Kind::Nu:
    case Kind::Iota: return k == kS ? agent(n + 1u) : agent(n);
    case Kind::Fork: return k == kL ? pil(n) : pir(n);
    case Kind::Sync: return k == kRho ? iota(n, a) : out(m, c, d);
  }
  throw std::logic_error("object has no faces");
}

std::string Object::face_name(std::size_t k) const {
  switch (kind) {
    case Kind::Agent: return "s" + std::to_string(k + 1);
    case Kind::Fork: return k == kL ? "l" : "r";
    case Kind::Sync: return k == kRho ? "rho" : "eps";
    default: return k == kS ? "s" : "t";
  }
}

std::string Object::tag() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Star: os << "*"; break;
    case Kind::Agent: os << "[" << n << "]"; break;
    case Kind::PiL: os << "piL:" << n; break;
    case Kind::PiR: os << "piR:" << n; break;
    case Kind::Fork: os << "fork:" << n; break;
    case Kind::Nu: os << "nu:" << n; break;
    case Kind::Tick: os << "tick:" << n; break;
    case Kind::Tau: os << "tau:" << n; break;
    case Kind::Iota: os << "in:" << n << "," << a; break;
    case Kind::Out: os << "out:" << m << "," << c << "," << d; break;
    case Kind::Sync: os << "sync:" << n << "," << a << "," << m << "," << c << "," << d; break;
  }
  return os.str();
}

namespace {

std::optional<std::vector<unsigned>> parse_nums(const std::string& s) {
  std::vector<unsigned> out;
  std::size_t i = 0;
  while (i <= s.size()) {
    std::size_t j = s.find(',', i);
    if (j == std::string::npos) j = s.size();
    std::string part = s.substr(i, j - i);
    if (part.empty() || part.size() > 5 || !std::all_of(part.begin(), part.end(), ::isdigit)) return std::nullopt;
    out.push_back(static_cast<unsigned>(std::stoul(part)));
    i = j + 1;
  }
  return out;
}

}  // namespace

std::optional<Object> Object::parse_tag(const std::string& s) {
  if (s == "*") return star();
  if (s.size() >= 3 && s.front() == '[' && s.back() == ']') {
    auto v = parse_nums(s.substr(1, s.size() - 2));
    if (!v || v->size() != 1) return std::nullopt;
    return agent((*v)[0]);
  }
  std::size_t colon = s.find(':');
  if (colon == std::string::npos) return std::nullopt;
  std::string head = s.substr(0, colon);
  auto v = parse_nums(s.substr(colon + 1));
  if (!v) return std::nullopt;
  auto one = [&](Object (*mk)(unsigned)) -> std::optional<Object> {
    if (v->size() != 1) return std::nullopt;
    return mk((*v)[0]);
  };
  std::optional<Object> o;
  if (head == "piL") o = one(pil);
  else if (head == "piR") o = one(pir);
  else if (head == "fork") o = one(fork);
  else if (head == "nu") o = one(nu);
  else if (head == "tick") o = one(tick);
  else if (head == "tau") o = one(tau);
  else if (head == "in" && v->size() == 2) o = iota((*v)[0], (*v)[1]);
  else if (head == "out" && v->size() == 3) o = out((*v)[0], (*v)[1], (*v)[2]);
  else if (head == "sync" && v->size() == 5) o = sync((*v)[0], (*v)[1], (*v)[2], (*v)[3], (*v)[4]);
  if (o && !o->valid()) return std::nullopt;
  return o;
}

// ---- presheaves ----

ElemId Presheaf::add(const Object& obj, std::vector<ElemId> faces) {
  ElemId id = next_id();
  elems_[id] = Element{obj, std::move(faces)};
  return id;
}

void Presheaf::put(ElemId id, const Object& obj, std::vector<ElemId> faces) {
  elems_[id] = Element{obj, std::move(faces)};
}

std::vector<ElemId> Presheaf::channels() const {
  std::vector<ElemId> out;
  for (const auto& [id, e] : elems_)
    if (e.obj.kind == Kind::Star) out.push_back(id);
  return out;
}

std::vector<ElemId> Presheaf::agents() const {
  std::vector<ElemId> out;
  for (const auto& [id, e] : elems_)
    if (e.obj.kind == Kind::Agent) out.push_back(id);
  return out;
}

std::vector<ElemId> Presheaf::of_dimension_at_least(int d) const {
  std::vector<ElemId> out;
  for (const auto& [id, e] : elems_)
    if (e.obj.dimension() >= d) out.push_back(id);
  return out;
}

std::string Violation::str() const {
  std::ostringstream os;
  os << "\"" << equation << "\" fails at element " << element << ": " << lhs << " vs " << rhs;
  return os.str();
}

std::vector<Violation> validate_presheaf(const Presheaf& u) {
  std::vector<Violation> out;
  auto typing = [&](ElemId id, const std::string& what) { out.push_back({"typing", id, what, ""}); };
  for (const auto& [id, e] : u.elements()) {
    if (!e.obj.valid()) typing(id, "invalid object " + e.obj.tag());
    if (e.faces.size() != e.obj.face_count()) {
      typing(id, "wrong number of faces");
      continue;
    }
    for (std::size_t k = 0; k < e.faces.size(); ++k) {
      if (!u.contains(e.faces[k])) {
        typing(id, "face " + e.obj.face_name(k) + " missing");
      } else if (u.at(e.faces[k]).obj != e.obj.face_object(k)) {
        typing(id, "face " + e.obj.face_name(k) + " has object " + u.at(e.faces[k]).obj.tag());
      }
    }
  }
  if (!out.empty()) return out;

  auto chan = [&](ElemId agent, unsigned i) { return u.face(agent, i - 1); };
  auto check = [&](const char* eq, ElemId id, ElemId l, ElemId r) {
    if (l != r) out.push_back({eq, id, std::to_string(l), std::to_string(r)});
  };
  for (const auto& [id, e] : u.elements()) {
    const Object& o = e.obj;
    switch (o.kind) {
      case Kind::PiL:
      case Kind::PiR:
      case Kind::Tick:
      case Kind::Tau:
      case Kind::Out:
      case Kind::Nu:
      case Kind::Iota: {
        unsigned n = o.kind == Kind::Out ? o.m : o.n;
        for (unsigned i = 1; i <= n; ++i)
          check("s∘s_i = t∘s_i", id, chan(e.faces[kS], i), chan(e.faces[kT], i));
        break;
      }
      case Kind::Fork:
        check("l∘t = r∘t", id, u.face(e.faces[kL], kT), u.face(e.faces[kR], kT));
        break;
      case Kind::Sync: {
        ElemId rho = e.faces[kRho], eps = e.faces[kEps];
        check("ρ∘t∘s_a = ε∘t∘s_c", id, chan(u.face(rho, kT), o.a), chan(u.face(eps, kT), o.c));
        check("ρ∘s∘s_{n+1} = ε∘s∘s_d", id, chan(u.face(rho, kS), o.n + 1u), chan(u.face(eps, kS), o.d));
        break;
      }
      default:
        break;
    }
  }
  return out;
}

int dimension(const Presheaf& u) {
  int d = 0;
  for (const auto& [id, e] : u.elements()) d = std::max(d, e.obj.dimension());
  return d;
}

bool is_position(const Presheaf& u) { return dimension(u) <= 1; }

bool is_natural(const Morphism& f, const Presheaf& src, const Presheaf& dst, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  for (const auto& [id, e] : src.elements()) {
    auto it = f.find(id);
    if (it == f.end()) return fail("element " + std::to_string(id) + " unmapped");
    if (!dst.contains(it->second)) return fail("image of " + std::to_string(id) + " missing");
    const Element& t = dst.at(it->second);
    if (t.obj != e.obj) return fail("object mismatch at " + std::to_string(id));
    for (std::size_t k = 0; k < e.faces.size(); ++k) {
      auto fk = f.find(e.faces[k]);
      if (fk == f.end() || fk->second != t.faces[k])
        return fail("generator " + e.obj.face_name(k) + " not preserved at " + std::to_string(id));
    }
  }
  for (const auto& [a, b] : f)
    if (!src.contains(a)) return fail("map defined outside its domain at " + std::to_string(a));
  return true;
}

bool is_one_injective(const Morphism& f, const Presheaf& src) {
  std::set<ElemId> seen;
  for (const auto& [id, e] : src.elements()) {
    if (e.obj.kind == Kind::Star) continue;
    if (!seen.insert(f.at(id)).second) return false;
  }
  return true;
}

bool is_injective(const Morphism& f) {
  std::set<ElemId> seen;
  for (const auto& [a, b] : f)
    if (!seen.insert(b).second) return false;
  return true;
}

Morphism compose(const Morphism& g, const Morphism& f) {
  Morphism out;
  for (const auto& [a, b] : f) out[a] = g.at(b);
  return out;
}

Morphism identity(const Presheaf& u) {
  Morphism out;
  for (const auto& [id, e] : u.elements()) out[id] = id;
  return out;
}

Morphism inverse(const Morphism& f) {
  Morphism out;
  for (const auto& [a, b] : f) out[b] = a;
  return out;
}

// ---- pushouts ----

Pushout pushout(const Presheaf& i, const Presheaf& a, const Presheaf& b, const Morphism& f, const Morphism& g,
                ElemId id_floor) {
  std::vector<std::pair<bool, ElemId>> nodes;
  std::map<ElemId, std::size_t> ia, ib;
  for (const auto& [id, e] : a.elements()) {
    ia[id] = nodes.size();
    nodes.push_back({false, id});
  }
  for (const auto& [id, e] : b.elements()) {
    ib[id] = nodes.size();
    nodes.push_back({true, id});
  }
  std::vector<std::size_t> parent(nodes.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [id, e] : i.elements()) {
    std::size_t x = find(ia.at(f.at(id))), y = find(ib.at(g.at(id)));
    if (x != y) parent[std::max(x, y)] = std::min(x, y);
  }
  // Class ids: least A id in the class, else fresh.
  std::map<std::size_t, ElemId> class_id;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (nodes[k].first) continue;
    std::size_t r = find(k);
    auto it = class_id.find(r);
    if (it == class_id.end() || nodes[k].second < it->second) class_id[r] = nodes[k].second;
  }
  ElemId next = std::max(a.next_id(), id_floor);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    std::size_t r = find(k);
    if (!class_id.count(r)) class_id[r] = next++;
  }
  Pushout po;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    ElemId cid = class_id.at(find(k));
    (nodes[k].first ? po.in_b : po.in_a)[nodes[k].second] = cid;
    po.members[cid].push_back(nodes[k]);
  }
  for (const auto& [cid, mem] : po.members) {
    auto [from_b, id] = mem.front();
    const Element& e = (from_b ? b : a).at(id);
    const Morphism& into = from_b ? po.in_b : po.in_a;
    std::vector<ElemId> faces;
    for (ElemId fc : e.faces) faces.push_back(into.at(fc));
    po.p.put(cid, e.obj, std::move(faces));
  }
  return po;
}

std::optional<Morphism> mediating(const Pushout& po, const Morphism& p, const Morphism& q) {
  Morphism out;
  for (const auto& [cid, mem] : po.members) {
    std::optional<ElemId> img;
    for (auto [from_b, id] : mem) {
      const Morphism& m = from_b ? q : p;
      auto it = m.find(id);
      if (it == m.end()) return std::nullopt;
      if (img && *img != it->second) return std::nullopt;
      img = it->second;
    }
    out[cid] = *img;
  }
  return out;
}

Interface interface_of(const Presheaf& u) {
  Interface out;
  for (ElemId c : u.channels()) {
    out.i.put(c, Object::star());
    out.inj[c] = c;
  }
  return out;
}

Presheaf restrict_to(const Presheaf& u, const std::set<ElemId>& ids) {
  Presheaf out;
  for (ElemId id : ids) {
    const Element& e = u.at(id);
    for (ElemId fc : e.faces)
      if (!ids.count(fc)) throw std::invalid_argument("subset not closed under faces at " + std::to_string(id));
    out.put(id, e.obj, e.faces);
  }
  return out;
}

Presheaf relabel(const Presheaf& u, const Morphism& ren) {
  Presheaf out;
  for (const auto& [id, e] : u.elements()) {
    std::vector<ElemId> faces;
    for (ElemId fc : e.faces) faces.push_back(ren.at(fc));
    out.put(ren.at(id), e.obj, std::move(faces));
  }
  if (out.size() != u.size()) throw std::invalid_argument("relabelling is not injective");
  return out;
}

// ---- representables ----

namespace {

// Adds a 2-dimensional element with its two agents over the given channels.
ElemId add_cell(Presheaf& y, const Object& o, const std::vector<ElemId>& final_ch,
                const std::vector<ElemId>& initial_ch) {
  ElemId t = y.add(Object::agent(static_cast<unsigned>(initial_ch.size())), initial_ch);
  ElemId s = y.add(Object::agent(static_cast<unsigned>(final_ch.size())), final_ch);
  return y.add(o, {s, t});
}

}  // namespace

Representable representable(const Object& o) {
  if (!o.valid()) throw std::invalid_argument("invalid object " + o.tag());
  Representable r;
  Presheaf& y = r.y;
  auto chans = [&](unsigned k) {
    std::vector<ElemId> v;
    for (unsigned i = 0; i < k; ++i) v.push_back(y.add(Object::star()));
    return v;
  };
  switch (o.kind) {
    case Kind::Star:
      r.top = y.add(o);
      break;
    case Kind::Agent:
      r.top = y.add(o, chans(o.n));
      break;
    case Kind::PiL:
    case Kind::PiR:
    case Kind::Tick:
    case Kind::Tau: {
      auto c = chans(o.n);
      r.top = add_cell(y, o, c, c);
      break;
    }
    case Kind::Out: {
      auto c = chans(o.m);
      r.top = add_cell(y, o, c, c);
      break;
    }
    case Kind::Nu:
    case Kind::Iota: {
      auto c = chans(o.n + 1u);
      std::vector<ElemId> init(c.begin(), c.end() - 1);
      r.top = add_cell(y, o, c, init);
      break;
    }
    case Kind::Fork: {
      auto c = chans(o.n);
      ElemId t = y.add(Object::agent(o.n), c);
      ElemId sl = y.add(Object::agent(o.n), c);
      ElemId sr = y.add(Object::agent(o.n), c);
      ElemId l = y.add(Object::pil(o.n), {sl, t});
      ElemId rr = y.add(Object::pir(o.n), {sr, t});
      r.top = y.add(o, {l, rr});
      break;
    }
    case Kind::Sync: {
      // Sender channels first, then the receiver's channels not identified
      // with the sender's.
      auto e = chans(o.m);
      std::vector<ElemId> rc(o.n + 1u);
      rc[o.a - 1u] = e[o.c - 1u];
      rc[o.n] = e[o.d - 1u];
      for (unsigned i = 0; i < o.n; ++i)
        if (i != o.a - 1u) rc[i] = y.add(Object::star());
      std::vector<ElemId> rinit(rc.begin(), rc.end() - 1);
      ElemId eps = add_cell(y, Object::out(o.m, o.c, o.d), e, e);
      ElemId rho = add_cell(y, Object::iota(o.n, o.a), rc, rinit);
      r.top = y.add(o, {rho, eps});
      break;
    }
  }
  return r;
}

Morphism yoneda_map(const Representable& r, const Presheaf& u, ElemId mu) {
  Morphism out;
  std::function<void(ElemId, ElemId)> go = [&](ElemId x, ElemId img) {
    auto it = out.find(x);
    if (it != out.end()) {
      if (it->second != img) throw std::logic_error("yoneda map is not well defined");
      return;
    }
    if (u.at(img).obj != r.y.at(x).obj) throw std::invalid_argument("yoneda map: object mismatch");
    out[x] = img;
    const Element& e = r.y.at(x);
    for (std::size_t k = 0; k < e.faces.size(); ++k) go(e.faces[k], u.face(img, k));
  };
  go(r.top, mu);
  return out;
}

// ---- isomorphism search ----

namespace {

using Signature = std::vector<std::pair<std::pair<Object, std::size_t>, std::size_t>>;

std::map<ElemId, Signature> signatures(const Presheaf& u) {
  std::map<ElemId, std::map<std::pair<Object, std::size_t>, std::size_t>> counts;
  for (const auto& [id, e] : u.elements()) {
    counts[id];
    for (std::size_t k = 0; k < e.faces.size(); ++k) counts[e.faces[k]][{e.obj, k}]++;
  }
  std::map<ElemId, Signature> out;
  for (auto& [id, m] : counts) out[id] = Signature(m.begin(), m.end());
  return out;
}

struct IsoSearch {
  const Presheaf& u;
  const Presheaf& v;
  std::map<ElemId, Signature> su, sv;
  std::map<ElemId, ElemId> fwd;
  std::set<ElemId> used;
  std::vector<ElemId> trail;
  std::vector<ElemId> order;
  std::map<std::pair<Object, Signature>, std::vector<ElemId>> buckets;
  std::size_t nodes = 0, cap;
  bool capped = false;

  bool bind(ElemId x, ElemId y) {
    auto it = fwd.find(x);
    if (it != fwd.end()) return it->second == y;
    if (used.count(y)) return false;
    if (u.at(x).obj != v.at(y).obj || su.at(x) != sv.at(y)) return false;
    fwd[x] = y;
    used.insert(y);
    trail.push_back(x);
    const auto& fx = u.at(x).faces;
    const auto& fy = v.at(y).faces;
    for (std::size_t k = 0; k < fx.size(); ++k)
      if (!bind(fx[k], fy[k])) return false;
    return true;
  }

  void undo(std::size_t mark) {
    while (trail.size() > mark) {
      ElemId x = trail.back();
      trail.pop_back();
      used.erase(fwd.at(x));
      fwd.erase(x);
    }
  }

  bool search(std::size_t pos) {
    while (pos < order.size() && fwd.count(order[pos])) ++pos;
    if (pos == order.size()) return true;
    if (++nodes > cap) {
      capped = true;
      return false;
    }
    ElemId x = order[pos];
    const auto& cands = buckets[{u.at(x).obj, su.at(x)}];
    for (ElemId y : cands) {
      if (used.count(y)) continue;
      std::size_t mark = trail.size();
      if (bind(x, y) && search(pos + 1)) return true;
      undo(mark);
      if (capped) return false;
    }
    return false;
  }
};

}  // namespace

IsoResult iso_check(const Presheaf& u, const Presheaf& v, const Morphism& fixed, std::size_t node_cap) {
  IsoResult res;
  if (u.size() != v.size()) return res;
  std::map<Object, std::size_t> cu, cv;
  for (const auto& [id, e] : u.elements()) cu[e.obj]++;
  for (const auto& [id, e] : v.elements()) cv[e.obj]++;
  if (cu != cv) return res;

  IsoSearch s{u, v, signatures(u), signatures(v), {}, {}, {}, {}, {}, 0, node_cap};
  std::map<std::pair<Object, Signature>, std::size_t> bu, bv;
  for (const auto& [id, e] : u.elements()) bu[{e.obj, s.su[id]}]++;
  for (const auto& [id, e] : v.elements()) {
    bv[{e.obj, s.sv[id]}]++;
    s.buckets[{e.obj, s.sv[id]}].push_back(id);
  }
  if (bu != bv) return res;
  for (const auto& [x, y] : fixed) {
    if (!u.contains(x) || !v.contains(y) || !s.bind(x, y)) return res;
  }
  for (const auto& [id, e] : u.elements()) s.order.push_back(id);
  std::stable_sort(s.order.begin(), s.order.end(),
                   [&](ElemId a, ElemId b) { return u.dim(a) > u.dim(b); });
  if (s.search(0)) {
    res.status = IsoStatus::Found;
    res.iso = s.fwd;
  } else if (s.capped) {
    res.status = IsoStatus::Inconclusive;
  }
  return res;
}

}  // namespace pipg::presheaf
