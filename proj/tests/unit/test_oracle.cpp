#include <doctest.h>

#include "coherence.hpp"
#include "helpers.hpp"
#include "pipg/testing.hpp"

using namespace pipg;
using namespace pipg::testing;
using behaviours::BasicLabel;
using behaviours::BehaviourSystem;
using behaviours::PositionedBehaviour;
using behaviours::State;
using behaviours::StateId;
using presheaf::ElemId;
using presheaf::Object;

namespace {

StateId add_state(BehaviourSystem& sys, const std::string& name, unsigned arity,
                  std::map<BasicLabel, std::vector<StateId>> rows = {}) {
  State s;
  s.name = name;
  s.arity = arity;
  s.rows = std::move(rows);
  return sys.add(std::move(s));
}

struct SilentThenFork {
  BehaviourSystem sys;
  PositionedBehaviour pb;
  traces::TraceCospan w;
};

// A nullary agent with two silent successors, each of which forks once.
SilentThenFork silent_then_fork() {
  SilentThenFork f;
  StateId z = add_state(f.sys, "z", 0);
  StateId d1 = add_state(f.sys, "d1", 0, {{BasicLabel::pil(0), {z}}, {BasicLabel::pir(0), {z}}});
  StateId d2 = add_state(f.sys, "d2", 0, {{BasicLabel::pil(0), {z}}, {BasicLabel::pir(0), {z}}});
  StateId d = add_state(f.sys, "d", 0, {{BasicLabel::tau(0), {d1, d2}}});
  presheaf::Presheaf x;
  ElemId p = x.add(Object::agent(0));
  f.pb.position = x;
  f.pb.state[p] = d;
  auto a1 = traces::act_on(x, {Object::tau(0)}, {p});
  ElemId p1 = a1.cospan.y.agents().front();
  auto a2 = traces::act_on(a1.cospan.y, {Object::fork(0)}, {p1});
  f.w = traces::compose_traces(a1.cospan, a2.cospan);
  return f;
}

}  // namespace

TEST_SUITE("end formula") {
  TEST_CASE("silent choice then fork keeps only matching pairs") {
    SilentThenFork f = silent_then_fork();
    REQUIRE(traces::check_trace(f.w).length == 2);
    AcceptResult acc = accept_states(f.sys, f.pb, f.w);
    CHECK(acc.states.size() == 2);
    CHECK(psi_codomain_size(f.sys, f.pb, f.w) == 4);
    std::set<std::map<ElemId, std::vector<std::size_t>>> images;
    for (const auto& g : acc.states) images.insert(psi(f.w, g));
    CHECK(images.size() == acc.states.size());
    for (const auto& img : images) {
      REQUIRE(img.size() == 2);
      // Both final agents agree on the silent choice.
      CHECK(img.begin()->second.front() == std::next(img.begin())->second.front());
    }
  }

  TEST_CASE("occurrences of a two-step trace") {
    SilentThenFork f = silent_then_fork();
    auto occ = view_occurrences(f.w);
    // The initial agent, its silent avatar and the two forked agents.
    CHECK(occ.size() == 4);
    std::size_t longest = 0;
    for (const auto& o : occ) longest = std::max(longest, o.word.size());
    CHECK(longest == 2);
  }

  TEST_CASE("identity traces have exactly one global state") {
    auto rng = helpers::rng(51);
    for (int i = 0; i < 30; ++i) {
      BehaviourSystem sys;
      auto by = gen::random_system(rng, sys, 2, 2);
      auto pb = behaviours::a_section(sys, gen::random_mixed(rng, by, 3, 3, 2));
      auto w = traces::identity_trace(pb.position);
      auto acc = accept_states(sys, pb, w);
      CHECK(acc.states.size() == 1);
      CHECK(c_transition_exists(sys, pb, w, pb));
    }
  }

  TEST_CASE("single actions match the S branch choices") {
    auto rng = helpers::rng(52);
    for (int i = 0; i < 40; ++i) {
      BehaviourSystem sys;
      auto by = gen::random_system(rng, sys, 2, 2);
      auto pb = behaviours::a_section(sys, gen::random_mixed(rng, by, 2, 2, 2));
      for (const auto& a : traces::closed_world_actions_from(pb.position)) {
        auto s = s_successors_along(sys, pb, a);
        auto acc = accept_states(sys, pb, a.cospan);
        CHECK(acc.states.size() == s.size());
      }
    }
  }

  TEST_CASE("S paths and C transitions agree on short composites") {
    auto rng = helpers::rng(53);
    for (int i = 0; i < 15; ++i) {
      BehaviourSystem sys;
      auto by = gen::random_system(rng, sys, 2, 1);
      auto pb = behaviours::a_section(sys, gen::random_mixed(rng, by, 2, 2, 1));
      auto r = coherence::s_c_agreement(sys, pb, 40);
      CHECK_MESSAGE(r.ok, r.detail);
    }
  }

  TEST_CASE("the brute-force cap is enforced") {
    SilentThenFork f = silent_then_fork();
    CHECK_THROWS_AS(accept_states(f.sys, f.pb, f.w, 1), std::length_error);
    CHECK_THROWS(accept_states(f.sys, f.pb, traces::identity_trace(presheaf::Presheaf{})));
  }
}
