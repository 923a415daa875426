#include <doctest.h>

#include <numeric>

#include "helpers.hpp"
#include "pipg/presheaf.hpp"

using namespace pipg;
using namespace pipg::presheaf;

namespace {

std::vector<Object> small_objects() {
  std::vector<Object> out{Object::star()};
  for (unsigned n = 0; n <= 3; ++n) {
    out.push_back(Object::agent(n));
    out.push_back(Object::pil(n));
    out.push_back(Object::pir(n));
    out.push_back(Object::fork(n));
    out.push_back(Object::nu(n));
    out.push_back(Object::tick(n));
    out.push_back(Object::tau(n));
    for (unsigned a = 1; a <= n; ++a) out.push_back(Object::iota(n, a));
    for (unsigned c = 1; c <= n; ++c)
      for (unsigned d = 1; d <= n; ++d) out.push_back(Object::out(n, c, d));
  }
  for (unsigned n = 1; n <= 2; ++n)
    for (unsigned a = 1; a <= n; ++a)
      for (unsigned m = 1; m <= 3; ++m)
        for (unsigned c = 1; c <= m; ++c)
          for (unsigned d = 1; d <= m; ++d) out.push_back(Object::sync(n, a, m, c, d));
  return out;
}

std::size_t count_kind(const Presheaf& p, Kind k) {
  std::size_t n = 0;
  for (const auto& [id, e] : p.elements()) n += e.obj.kind == k;
  return n;
}

// The presheaf with one channel and one agent of each arity up to `top`.
Presheaf collapse_target(unsigned top) {
  Presheaf q;
  ElemId c = q.add(Object::star());
  for (unsigned n = 0; n <= top; ++n) q.add(Object::agent(n), std::vector<ElemId>(n, c));
  return q;
}

Morphism collapse_map(const Presheaf& src, const Presheaf& q) {
  Morphism f;
  for (const auto& [id, e] : src.elements()) {
    if (e.obj.kind == Kind::Star) {
      f[id] = q.channels().front();
    } else {
      for (ElemId a : q.agents())
        if (q.at(a).obj == e.obj) f[id] = a;
    }
  }
  return f;
}

}  // namespace

TEST_SUITE("presheaf") {
  TEST_CASE("object tags round-trip") {
    for (const Object& o : small_objects()) {
      auto back = Object::parse_tag(o.tag());
      REQUIRE(back);
      CHECK(*back == o);
    }
    CHECK_FALSE(Object::parse_tag("in:1,2"));
    CHECK_FALSE(Object::parse_tag("fork"));
  }

  TEST_CASE("representables validate") {
    for (const Object& o : small_objects()) {
      auto r = representable(o);
      CHECK_MESSAGE(validate_presheaf(r.y).empty(), o.tag());
      CHECK(dimension(r.y) == o.dimension());
    }
  }

  TEST_CASE("dimensions") {
    CHECK(dimension(representable(Object::agent(3)).y) == 1);
    CHECK(dimension(Presheaf{}) == 0);
    CHECK(dimension(representable(Object::sync(1, 1, 3, 2, 3)).y) == 4);
    CHECK(is_position(representable(Object::agent(3)).y));
    CHECK_FALSE(is_position(representable(Object::fork(1)).y));
  }

  TEST_CASE("the ternary-sender synchronisation has ten elements") {
    auto r = representable(Object::sync(1, 1, 3, 2, 3));
    CHECK(r.y.size() == 10);
    CHECK(r.y.channels().size() == 3);
    CHECK(r.y.agents().size() == 4);
    CHECK(count_kind(r.y, Kind::Iota) == 1);
    CHECK(count_kind(r.y, Kind::Out) == 1);
    CHECK(count_kind(r.y, Kind::Sync) == 1);
  }

  TEST_CASE("representable of a fork shares its channels") {
    auto r = representable(Object::fork(2));
    CHECK(r.y.channels().size() == 2);
    CHECK(r.y.agents().size() == 3);
    CHECK(r.y.size() == 8);
    CHECK(interface_of(representable(Object::agent(3)).y).i.size() == 3);
    CHECK(interface_of(Presheaf{}).i.empty());
  }

  TEST_CASE("a fork with mismatched initial agents is rejected") {
    Presheaf p = representable(Object::fork(1)).y;
    ElemId fork = representable(Object::fork(1)).top;
    ElemId r = p.face(fork, kR);
    ElemId c = p.channels().front();
    ElemId stray = p.add(Object::agent(1), {c});
    p.at_mut(r).faces[kT] = stray;
    auto v = validate_presheaf(p);
    REQUIRE_FALSE(v.empty());
    CHECK(v.front().equation == "l∘t = r∘t");
  }

  TEST_CASE("1-injectivity") {
    Presheaf two;
    ElemId a = two.add(Object::star()), b = two.add(Object::star());
    ElemId x = two.add(Object::agent(1), {a}), y = two.add(Object::agent(1), {b});
    Presheaf one;
    ElemId c = one.add(Object::star());
    ElemId x2 = one.add(Object::agent(1), {c}), y2 = one.add(Object::agent(1), {c});
    Morphism channels_merged{{a, c}, {b, c}, {x, x2}, {y, y2}};
    CHECK(is_natural(channels_merged, two, one));
    CHECK(is_one_injective(channels_merged, two));
    Morphism agents_merged{{a, c}, {b, c}, {x, x2}, {y, x2}};
    CHECK(is_natural(agents_merged, two, one));
    CHECK_FALSE(is_one_injective(agents_merged, two));
    CHECK(is_one_injective(identity(two), two));
  }

  TEST_CASE("1-injective maps compose") {
    auto rng = helpers::rng(11);
    for (int i = 0; i < 100; ++i) {
      Presheaf a = gen::random_position(rng, 3, 3, 2);
      // a -> b adds a fresh agent; b -> c merges two channels.
      Presheaf b = a;
      b.add(Object::agent(0));
      Morphism f = identity(a);
      auto chans = b.channels();
      if (chans.size() < 2) continue;
      Presheaf c;
      Morphism g;
      ElemId keep = chans.front(), gone = chans.back();
      for (const auto& [id, e] : b.elements()) {
        if (id == gone) continue;
        std::vector<ElemId> faces = e.faces;
        for (auto& fc : faces)
          if (fc == gone) fc = keep;
        c.put(id, e.obj, faces);
      }
      for (const auto& [id, e] : b.elements()) g[id] = id == gone ? keep : id;
      REQUIRE(is_natural(g, b, c));
      REQUIRE(is_one_injective(f, a));
      if (is_one_injective(g, b)) CHECK(is_one_injective(compose(g, f), a));
    }
  }

  TEST_CASE("restriction needs face-closed sets") {
    auto r = representable(Object::agent(2));
    CHECK_THROWS(restrict_to(r.y, {r.top}));
    std::set<ElemId> all;
    for (const auto& [id, e] : r.y.elements()) all.insert(id);
    CHECK(restrict_to(r.y, all) == r.y);
  }

  TEST_CASE("pushout along the identity copies the other leg") {
    auto rng = helpers::rng(12);
    for (int i = 0; i < 50; ++i) {
      Presheaf a = gen::random_position(rng, 3, 3, 2);
      Presheaf b = a;
      b.add(Object::agent(1), {a.channels().front()});
      auto po = pushout(a, a, b, identity(a), identity(a));
      CHECK(iso_check(po.p, b).status == IsoStatus::Found);
      CHECK(po.p.channels().size() == a.channels().size());
    }
  }

  TEST_CASE("channel count of a pushout along injective legs") {
    auto rng = helpers::rng(13);
    for (int i = 0; i < 20; ++i) {
      Presheaf a = gen::random_position(rng, 3, 4, 2);
      Presheaf b = gen::random_position(rng, 3, 4, 2);
      auto ca = a.channels(), cb = b.channels();
      std::size_t k = gen::below(rng, std::min(ca.size(), cb.size()) + 1);
      Presheaf iface;
      Morphism f, g;
      for (std::size_t j = 0; j < k; ++j) {
        ElemId id = iface.add(Object::star());
        f[id] = ca[j];
        g[id] = cb[cb.size() - 1 - j];
      }
      auto po = pushout(iface, a, b, f, g);
      CHECK(validate_presheaf(po.p).empty());
      CHECK(po.p.channels().size() == ca.size() + cb.size() - k);
      CHECK(po.p.agents().size() == a.agents().size() + b.agents().size());
    }
  }

  TEST_CASE("pushouts are universal") {
    auto rng = helpers::rng(14);
    for (int i = 0; i < 100; ++i) {
      Presheaf a = gen::random_position(rng, 3, 3, 2);
      Presheaf b = gen::random_position(rng, 3, 3, 2);
      Presheaf iface;
      Morphism f, g;
      auto ca = a.channels(), cb = b.channels();
      for (std::size_t j = 0; j < gen::below(rng, 3); ++j) {
        ElemId id = iface.add(Object::star());
        f[id] = ca[gen::below(rng, ca.size())];
        g[id] = cb[gen::below(rng, cb.size())];
      }
      auto po = pushout(iface, a, b, f, g);
      REQUIRE(is_natural(po.in_a, a, po.p));
      REQUIRE(is_natural(po.in_b, b, po.p));
      Presheaf q = collapse_target(2);
      Morphism p1 = collapse_map(a, q), p2 = collapse_map(b, q);
      auto med = mediating(po, p1, p2);
      REQUIRE(med);
      CHECK(is_natural(*med, po.p, q));
      CHECK(compose(*med, po.in_a) == p1);
      CHECK(compose(*med, po.in_b) == p2);
      // The legs are jointly surjective, so the mediating map is unique.
      std::set<ElemId> covered;
      for (const auto& [x, y] : po.in_a) covered.insert(y);
      for (const auto& [x, y] : po.in_b) covered.insert(y);
      CHECK(covered.size() == po.p.size());
    }
  }

  TEST_CASE("non-commuting cocones have no mediating map") {
    Presheaf a, b, iface;
    ElemId ca = a.add(Object::star()), cb = b.add(Object::star()), cb2 = b.add(Object::star());
    ElemId i = iface.add(Object::star());
    auto po = pushout(iface, a, b, {{i, ca}}, {{i, cb}});
    Presheaf q;
    ElemId q1 = q.add(Object::star()), q2 = q.add(Object::star());
    CHECK_FALSE(mediating(po, {{ca, q1}}, {{cb, q2}, {cb2, q2}}));
    CHECK(mediating(po, {{ca, q1}}, {{cb, q1}, {cb2, q2}}));
  }

  TEST_CASE("isomorphism search") {
    auto rng = helpers::rng(15);
    for (int i = 0; i < 50; ++i) {
      Presheaf u = representable(Object::sync(2, 1, 2, 2, 1)).y;
      Morphism ren;
      std::vector<ElemId> ids;
      for (const auto& [id, e] : u.elements()) ids.push_back(id);
      std::vector<ElemId> perm = ids;
      std::shuffle(perm.begin(), perm.end(), rng);
      for (std::size_t k = 0; k < ids.size(); ++k) ren[ids[k]] = perm[k] + 100;
      Presheaf v = relabel(u, ren);
      auto r = iso_check(u, v);
      REQUIRE(r.status == IsoStatus::Found);
      CHECK(is_natural(r.iso, u, v));
      CHECK(is_injective(r.iso));
    }
    CHECK(iso_check(representable(Object::agent(2)).y, representable(Object::agent(3)).y).status == IsoStatus::None);
    Presheaf big = collapse_target(0);
    for (int k = 0; k < 6; ++k) big.add(Object::agent(2), {0, 0});
    CHECK(iso_check(big, big, {}, 1).status == IsoStatus::Inconclusive);
  }
}
