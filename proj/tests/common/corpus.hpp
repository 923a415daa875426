#pragma once

#include <string>
#include <vector>

namespace corpus {

struct Entry {
  std::string name;
  std::string text;
};

// Small configurations exercising every reduction rule.
inline const std::vector<Entry>& processes() {
  static const std::vector<Entry> all{
      {"coffee_p", "[a, b, c] a(x).b(y).0 + a(x).c(y).0"},
      {"coffee_q", "[a, b, c] a(x).(b(y).0 + c(y).0)"},
      {"p1", "[a, b] tau.0 + tau.(a(x).0 + tau.(b(x).0 + tau.0))"},
      {"p2", "[a, b] tau.0 + tau.(b(x).0 + tau.(a(x).0 + tau.0))"},
      {"q1", "Loop := tau.Loop\n[a] Loop | a(x).0"},
      {"q2", "[a] a(x).0"},
      {"q1_tested", "Loop := tau.Loop\n[a] Loop | a(x).0 ; a<a>.tick.0"},
      {"q2_tested", "[a] a(x).0 ; a<a>.tick.0"},
      {"nil", "[] 0"},
      {"tick", "[] tick.0"},
      {"fork", "[a, b] a(x).0 | b<a>.0"},
      {"nested_fork", "[a] (tau.0 | tick.0) | a(x).0"},
      {"fork_under_guard", "[a] tau.(a(x).0 | a<a>.0)"},
      {"new", "[a] new x.a<x>.0"},
      {"new_then_fork", "[a] new x.(x(y).0 | x<a>.tick.0)"},
      {"sync", "[a, b] a(x).x<b>.0 ; a<b>.tick.0"},
      {"sync_choice", "[a, b] a(x).0 + b(x).tick.0 ; a<b>.0 + b<a>.0"},
      {"scope_extrusion", "[a] new x.a<x>.x(y).tick.0 ; a(z).z<z>.0"},
      {"mobile_reply", "[a, b] a(r).r<r>.0 ; new k.a<k>.k(z).tick.0"},
      {"pinger", "Ping := a<b>.Ping + tick.0\n[a, b] Ping ; a(x).x(y).0"},
      {"ticking_loop", "Beat := tick.Beat + tau.0\n[] Beat"},
      {"replicator", "Rep := tau.(a<a>.0 | Rep)\n[a] Rep ; a(x).tick.0"},
      {"three_party", "[a, b, c] a(x).x<c>.0 ; b(y).y(z).tick.0 ; a<b>.0"},
  };
  return all;
}

}  // namespace corpus
