#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "pipg/pi_syntax.hpp"

using namespace pipg;
using namespace pipg::pi;

namespace {

std::vector<ConfTransition> steps(const PiFile& f) { return conf_transitions(f.config, f.defs); }

std::size_t count_rule(const std::vector<ConfTransition>& ts, Rule r) {
  return static_cast<std::size_t>(std::count_if(ts.begin(), ts.end(), [&](const auto& t) { return t.rule == r; }));
}

bool has_target(const std::vector<ConfTransition>& ts, Rule r, const Configuration& want) {
  return std::any_of(ts.begin(), ts.end(), [&](const auto& t) { return t.rule == r && same(t.target, want); });
}

}  // namespace

TEST_SUITE("parser") {
  TEST_CASE("unterminated input reports its offset") {
    try {
      parse_process("a(b", {"a"}, DefinitionEnv{});
      FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
      CHECK(e.offset() == 3);
    }
  }

  TEST_CASE("scope and guardedness errors") {
    CHECK_THROWS_AS(parse_process("b(x).0", {"a"}, DefinitionEnv{}), ScopeError);
    CHECK_THROWS_AS(helpers::file("X := X\n[a] X"), ScopeError);
    CHECK_THROWS_AS(helpers::file("X := Y | a(x).0\nY := X\n[a] X"), ScopeError);
    CHECK_THROWS_AS(parse_process("a(x).0 + (a(x).0 | 0)", {"a"}, DefinitionEnv{}), SyntaxError);
    CHECK_THROWS_AS(helpers::file("[a] tick(x).0"), SyntaxError);
    CHECK_THROWS(helpers::file("[a, a] 0"));
  }

  TEST_CASE("guarded recursion through parallel composition is accepted") {
    auto f = helpers::file("X := a(x).(X | x<x>.0)\n[a] X");
    CHECK(f.defs.size() == 1);
    CHECK(f.defs.at(0).params == std::vector<std::string>{"a"});
  }

  TEST_CASE("binders are nameless") {
    DefinitionEnv env;
    auto p = parse_process("a(x).x<a>.0", {"a"}, env);
    auto q = parse_process("a(y).y<a>.0", {"a"}, env);
    CHECK(equal(p, q));
    auto r = parse_process("a(y).a<y>.0", {"a"}, env);
    CHECK_FALSE(equal(p, r));
  }

  TEST_CASE("print then parse is the identity on random terms") {
    auto rng = helpers::rng(1);
    std::map<Chan, std::string> names{{0, "a"}, {1, "b"}, {2, "c"}};
    for (int i = 0; i < 300; ++i) {
      auto t = gen::random_process(rng, {0, 1, 2}, 4);
      std::string s = print_process(t, names, DefinitionEnv{});
      auto back = parse_process(s, {"a", "b", "c"}, DefinitionEnv{});
      REQUIRE_MESSAGE(equal(t, back), s);
      CHECK(print_process(back, names, DefinitionEnv{}) == s);
    }
  }

  TEST_CASE("files round-trip through the printer") {
    const char* text = "Loop := tau.Loop\nX := a(x).(X | x<x>.0)\n[a, b] Loop | X ; b<a>.tick.0";
    auto f = helpers::file(text);
    std::string printed = print_definitions(f.defs) + print_configuration(f.config, f.defs);
    auto g = helpers::file(printed);
    CHECK(print_definitions(g.defs) + print_configuration(g.config, g.defs) == printed);
    CHECK(same(f.config, g.config));
  }
}

TEST_SUITE("substitution") {
  TEST_CASE("open and close are inverse on fresh channels") {
    auto rng = helpers::rng(2);
    for (int i = 0; i < 200; ++i) {
      auto t = gen::random_process(rng, {0, 1}, 3);
      auto body = close(t, 1);
      CHECK(equal(open(body, 1), t));
      auto fc = free_channels(body);
      CHECK(std::find(fc.begin(), fc.end(), 1u) == fc.end());
    }
  }

  TEST_CASE("substitution does not capture") {
    DefinitionEnv env;
    auto p = parse_process("a(x).x<b>.0", {"a", "b"}, env);
    auto q = substitute(p, {{1, 0}});
    CHECK(equal(q, parse_process("a(x).x<a>.0", {"a", "b"}, env)));
  }
}

TEST_SUITE("reduction rules") {
  TEST_CASE("parallel composition heats into two processes") {
    auto f = helpers::file("[a] a(x).0 | a<a>.0");
    auto ts = steps(f);
    REQUIRE(count_rule(ts, Rule::Heat) == 1);
    CHECK(ts[0].label == SigmaLabel::Silent);
    CHECK(has_target(ts, Rule::Heat, parse_configuration("[a] a(x).0 ; a<a>.0", f.defs)));
    CHECK(count_rule(steps(helpers::file("[a] a(x).(0 | 0)")), Rule::Heat) == 0);
  }

  TEST_CASE("silent step") {
    auto f = helpers::file("[a] tau.a(x).0 + a<a>.0");
    auto ts = steps(f);
    REQUIRE(count_rule(ts, Rule::Tau) == 1);
    CHECK(has_target(ts, Rule::Tau, parse_configuration("[a] a(x).0", f.defs)));
    CHECK(count_rule(steps(helpers::file("[a] a(x).tau.0")), Rule::Tau) == 0);
  }

  TEST_CASE("tick") {
    auto f = helpers::file("[] tick.tau.0");
    auto ts = steps(f);
    REQUIRE(ts.size() == 1);
    CHECK(ts[0].rule == Rule::Tick);
    CHECK(ts[0].label == SigmaLabel::Tick);
    CHECK(same(ts[0].target, parse_configuration("[] tau.0", f.defs)));
    auto g = steps(helpers::file("[] tau.tick.0"));
    CHECK(count_rule(g, Rule::Tick) == 0);
  }

  TEST_CASE("restriction extends the channel set") {
    auto f = helpers::file("[a] new x.x<a>.0");
    auto ts = steps(f);
    REQUIRE(ts.size() == 1);
    CHECK(ts[0].rule == Rule::New);
    CHECK(ts[0].target.gamma == std::vector<Chan>{0, 1});
    CHECK(same(ts[0].target, parse_configuration("[a, x] x<a>.0", f.defs)));
    CHECK(count_rule(steps(helpers::file("[a] a(y).new x.0")), Rule::New) == 0);
  }

  TEST_CASE("fresh channels avoid gaps in the channel set") {
    Configuration c;
    c.gamma = {0, 2};
    CHECK(c.fresh() == 1);
    c.processes.push_back(prefix(new_guard(), nil()));
    auto ts = conf_transitions(c, DefinitionEnv{});
    REQUIRE(ts.size() == 1);
    CHECK(ts[0].target.gamma == std::vector<Chan>{0, 1, 2});
  }

  TEST_CASE("synchronisation substitutes the payload") {
    auto f = helpers::file("[a, b] a(x).x<b>.0 + tau.0 ; a<b>.tick.0 + b(z).0");
    auto ts = steps(f);
    REQUIRE(count_rule(ts, Rule::Sync) == 1);
    CHECK(has_target(ts, Rule::Sync, parse_configuration("[a, b] b<b>.0 ; tick.0", f.defs)));
    CHECK(count_rule(steps(helpers::file("[a, b] a(x).0 ; b<a>.0")), Rule::Sync) == 0);
    // A sum cannot synchronise with itself.
    CHECK(count_rule(steps(helpers::file("[a] a(x).0 + a<a>.0")), Rule::Sync) == 0);
  }

  TEST_CASE("every tagged transition re-derives") {
    auto f = helpers::file("X := a(x).(X | x<x>.0)\n[a, b] X ; a<b>.tick.0 ; tau.0 | new y.0");
    for (const auto& t : steps(f)) CHECK(same(apply_rule(f.config, t, f.defs), t.target));
  }

  TEST_CASE("frame: reductions ignore the rest of the multiset") {
    auto f = helpers::file("[a] tau.0 ; a(x).tau.0");
    auto ts = steps(f);
    REQUIRE(ts.size() == 1);
    CHECK(same(ts[0].target, parse_configuration("[a] 0 ; a(x).tau.0", f.defs)));
    // Nothing fires under a prefix.
    CHECK(steps(helpers::file("[a] a(x).(tau.0 | tick.0)")).empty());
  }

  TEST_CASE("frame closure on random configurations") {
    auto rng = helpers::rng(3);
    for (int round = 0; round < 200; ++round) {
      std::size_t g = 1 + gen::below(rng, 3);
      Configuration s1, s;
      for (Chan c = 0; c < g; ++c) s1.gamma.push_back(c);
      s.gamma = s1.gamma;
      for (std::size_t k = 0, n = 1 + gen::below(rng, 2); k < n; ++k)
        s1.processes.push_back(gen::random_process(rng, s1.gamma, 3));
      for (std::size_t k = 0, n = 1 + gen::below(rng, 2); k < n; ++k)
        s.processes.push_back(gen::random_process(rng, s.gamma, 3));
      DefinitionEnv env;
      Configuration whole = join(s1, s);
      auto big = conf_transitions(whole, env);
      auto small = conf_transitions(s1, env);
      for (const auto& t : small) {
        Configuration frame{t.target.gamma, s.processes, {}};
        Configuration want = join(t.target, frame);
        bool found = std::any_of(big.begin(), big.end(),
                                 [&](const auto& b) { return b.label == t.label && same(b.target, want); });
        REQUIRE_MESSAGE(found, print_configuration(whole, env));
      }
      CHECK(big.size() >= small.size() + conf_transitions(s, env).size());
    }
  }
}

TEST_SUITE("canonical forms") {
  TEST_CASE("canonicalisation is invariant under renaming and reordering") {
    auto rng = helpers::rng(4);
    for (int i = 0; i < 200; ++i) {
      Configuration c;
      c.gamma = {0, 1, 2};
      for (std::size_t k = 0, n = 1 + gen::below(rng, 3); k < n; ++k)
        c.processes.push_back(gen::random_process(rng, c.gamma, 3));
      std::map<Chan, Chan> perm{{0, 2}, {1, 0}, {2, 1}};
      Configuration d;
      d.gamma = c.gamma;
      for (auto it = c.processes.rbegin(); it != c.processes.rend(); ++it) d.processes.push_back(substitute(*it, perm));
      CHECK(canonicalize(c).key == canonicalize(d).key);
    }
  }

  TEST_CASE("canonicalisation separates different wirings") {
    DefinitionEnv env;
    auto k1 = canonicalize(parse_configuration("[a, b] a<b>.0", env)).key;
    auto k2 = canonicalize(parse_configuration("[a, b] b<a>.0", env)).key;
    auto k3 = canonicalize(parse_configuration("[a, b] a<a>.0", env)).key;
    CHECK(k1 == k2);
    CHECK(k1 != k3);
  }
}
