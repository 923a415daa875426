#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pipg::presheaf {

// Objects of the base category. Parameter fields by kind:
//   Agent, PiL, PiR, Fork, Nu, Tick, Tau: n
//   Iota: n, a          Out: m, c, d          Sync: n, a, m, c, d
// Channel positions (a, c, d) are 1-based.
enum class Kind : std::uint8_t { Star, Agent, PiL, PiR, Fork, Nu, Tick, Tau, Iota, Out, Sync };

struct Object {
  Kind kind = Kind::Star;
  std::uint16_t n = 0, a = 0, m = 0, c = 0, d = 0;

  static Object star() { return {}; }
  static Object agent(unsigned n) { return {Kind::Agent, u(n)}; }
  static Object pil(unsigned n) { return {Kind::PiL, u(n)}; }
  static Object pir(unsigned n) { return {Kind::PiR, u(n)}; }
  static Object fork(unsigned n) { return {Kind::Fork, u(n)}; }
  static Object nu(unsigned n) { return {Kind::Nu, u(n)}; }
  static Object tick(unsigned n) { return {Kind::Tick, u(n)}; }
  static Object tau(unsigned n) { return {Kind::Tau, u(n)}; }
  static Object iota(unsigned n, unsigned a) { return {Kind::Iota, u(n), u(a)}; }
  static Object out(unsigned m, unsigned c, unsigned d) { return {Kind::Out, 0, 0, u(m), u(c), u(d)}; }
  static Object sync(unsigned n, unsigned a, unsigned m, unsigned c, unsigned d) {
    return {Kind::Sync, u(n), u(a), u(m), u(c), u(d)};
  }

  auto operator<=>(const Object&) const = default;

  int dimension() const;
  bool valid() const;
  // Generators into this object, in face order. For 2-dimensional objects
  // face 0 is s (final agent) and face 1 is t (initial agent); for Fork l, r;
  // for Sync rho, eps; for Agent(n) s_1..s_n.
  std::size_t face_count() const;
  Object face_object(std::size_t k) const;
  std::string face_name(std::size_t k) const;
  std::string tag() const;
  static std::optional<Object> parse_tag(const std::string& s);

 private:
  static std::uint16_t u(unsigned v) { return static_cast<std::uint16_t>(v); }
};

constexpr std::size_t kS = 0, kT = 1, kL = 0, kR = 1, kRho = 0, kEps = 1;

using ElemId = std::uint32_t;

struct Element {
  Object obj;
  std::vector<ElemId> faces;
  bool operator==(const Element&) const = default;
};

class Presheaf {
 public:
  ElemId add(const Object& obj, std::vector<ElemId> faces = {});
  void put(ElemId id, const Object& obj, std::vector<ElemId> faces = {});
  void erase(ElemId id) { elems_.erase(id); }
  bool contains(ElemId id) const { return elems_.count(id) != 0; }
  const Element& at(ElemId id) const { return elems_.at(id); }
  Element& at_mut(ElemId id) { return elems_.at(id); }
  ElemId face(ElemId id, std::size_t k) const { return elems_.at(id).faces.at(k); }
  const std::map<ElemId, Element>& elements() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  ElemId next_id() const { return elems_.empty() ? 0 : elems_.rbegin()->first + 1; }

  std::vector<ElemId> channels() const;
  std::vector<ElemId> agents() const;
  std::vector<ElemId> of_dimension_at_least(int d) const;
  int dim(ElemId id) const { return at(id).obj.dimension(); }

  bool operator==(const Presheaf&) const = default;

 private:
  std::map<ElemId, Element> elems_;
};

using Morphism = std::map<ElemId, ElemId>;

struct Violation {
  std::string equation;
  ElemId element = 0;
  std::string lhs, rhs;
  std::string str() const;
};

// Typing constraints plus the four equation families.
std::vector<Violation> validate_presheaf(const Presheaf& u);
int dimension(const Presheaf& u);
bool is_position(const Presheaf& u);

// Total, object-preserving and commuting with every generator.
bool is_natural(const Morphism& f, const Presheaf& src, const Presheaf& dst, std::string* why = nullptr);
bool is_one_injective(const Morphism& f, const Presheaf& src);
bool is_injective(const Morphism& f);
Morphism compose(const Morphism& g, const Morphism& f);  // g after f
Morphism identity(const Presheaf& u);
Morphism inverse(const Morphism& f);

struct Pushout {
  Presheaf p;
  Morphism in_a, in_b;
  // Class representatives, for the mediating map.
  std::map<ElemId, std::vector<std::pair<bool, ElemId>>> members;  // p-id -> (from_b, id)
};

// Objectwise pushout of f: I -> A and g: I -> B. Ids of A are kept (the
// least one when A-elements are merged); B-only elements get fresh ids above
// max(A) (and above `id_floor`), in increasing order of their B id.
Pushout pushout(const Presheaf& i, const Presheaf& a, const Presheaf& b, const Morphism& f, const Morphism& g,
                ElemId id_floor = 0);
// The unique map P -> Q induced by the cocone (p, q), if the cocone commutes.
std::optional<Morphism> mediating(const Pushout& po, const Morphism& p, const Morphism& q);

struct Interface {
  Presheaf i;
  Morphism inj;
};
Interface interface_of(const Presheaf& u);

// The sub-presheaf on `ids`; throws if `ids` is not closed under faces.
Presheaf restrict_to(const Presheaf& u, const std::set<ElemId>& ids);
Presheaf relabel(const Presheaf& u, const Morphism& ren);

struct Representable {
  Presheaf y;
  ElemId top = 0;
};
// The representable presheaf y(o) = C(-, o).
Representable representable(const Object& o);
// The Yoneda map y(o) -> U sending the top element to `mu`.
Morphism yoneda_map(const Representable& r, const Presheaf& u, ElemId mu);

enum class IsoStatus { Found, None, Inconclusive };
struct IsoResult {
  IsoStatus status = IsoStatus::None;
  Morphism iso;
};
// Backtracking search for a natural isomorphism U -> V extending `fixed`.
IsoResult iso_check(const Presheaf& u, const Presheaf& v, const Morphism& fixed = {}, std::size_t node_cap = 2000000);

}  // namespace pipg::presheaf
