#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pipg/behaviours.hpp"
#include "pipg/pi_syntax.hpp"
#include "pipg/traces.hpp"

namespace pipg::gen {

using Rng = std::mt19937_64;

// PIPG_SEED if set, else `fallback`.
std::uint64_t seed_from_env(std::uint64_t fallback);

std::size_t below(Rng& rng, std::size_t n);  // uniform in [0, n)

// Agents with channels drawn from a pool of at most max_channels.
presheaf::Presheaf random_position(Rng& rng, std::size_t max_agents, std::size_t max_channels,
                                   std::size_t max_arity);

struct CompositeOptions {
  std::size_t max_length = 4;
  std::size_t max_agents = 3;   // of the final position
  std::size_t max_channels = 4;
  bool closed_world = false;
};
// A composite of random actions starting from x; returns the actions too.
traces::TraceCospan random_composite(Rng& rng, const presheaf::Presheaf& x, const CompositeOptions& opts,
                                     std::vector<traces::Action>* actions = nullptr);

// A random guarded process over free channels gamma; no constants.
pi::TermPtr random_process(Rng& rng, const std::vector<pi::Chan>& gamma, std::size_t depth);

// States of every arity up to max_arity (plus one for binders), with small
// random rows; returns the states grouped by arity.
std::vector<std::vector<behaviours::StateId>> random_system(Rng& rng, behaviours::BehaviourSystem& sys,
                                                            std::size_t per_arity, std::size_t max_arity);

behaviours::MixedBehaviour random_mixed(Rng& rng, const std::vector<std::vector<behaviours::StateId>>& by_arity,
                                        std::size_t max_gamma, std::size_t max_items, std::size_t max_arity);

}  // namespace pipg::gen
