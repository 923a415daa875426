#include "pipg/gen.hpp"

#include <cstdlib>
#include <string>

namespace pipg::gen {

using presheaf::ElemId;
using presheaf::Object;
using presheaf::Presheaf;

std::uint64_t seed_from_env(std::uint64_t fallback) {
  if (const char* s = std::getenv("PIPG_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
    }
  }
  return fallback;
}

std::size_t below(Rng& rng, std::size_t n) {
  if (n == 0) return 0;
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

Presheaf random_position(Rng& rng, std::size_t max_agents, std::size_t max_channels, std::size_t max_arity) {
  Presheaf p;
  std::size_t nc = 1 + below(rng, max_channels);
  std::vector<ElemId> chans;
  for (std::size_t i = 0; i < nc; ++i) chans.push_back(p.add(Object::star()));
  std::size_t na = 1 + below(rng, max_agents);
  for (std::size_t k = 0; k < na; ++k) {
    unsigned n = static_cast<unsigned>(below(rng, max_arity + 1));
    std::vector<ElemId> faces;
    for (unsigned i = 0; i < n; ++i) faces.push_back(chans[below(rng, nc)]);
    p.add(Object::agent(n), std::move(faces));
  }
  return p;
}

traces::TraceCospan random_composite(Rng& rng, const Presheaf& x, const CompositeOptions& opts,
                                     std::vector<traces::Action>* actions) {
  traces::TraceCospan acc = traces::identity_trace(x);
  std::size_t len = below(rng, opts.max_length + 1);
  for (std::size_t step = 0; step < len; ++step) {
    std::vector<traces::Action> cands =
        opts.closed_world ? traces::closed_world_actions_from(acc.y) : traces::all_actions_from(acc.y);
    std::vector<traces::Action> fit;
    for (auto& a : cands)
      if (a.cospan.y.agents().size() <= opts.max_agents && a.cospan.y.channels().size() <= opts.max_channels)
        fit.push_back(std::move(a));
    if (fit.empty()) break;
    traces::Action& a = fit[below(rng, fit.size())];
    acc = traces::compose_traces(acc, a.cospan);
    if (actions) actions->push_back(a);
  }
  return acc;
}

namespace {

pi::TermPtr process_at(Rng& rng, const std::vector<pi::Chan>& gamma, std::uint32_t bound, std::size_t depth) {
  if (depth == 0) return pi::nil();
  std::size_t refs = gamma.size() + bound;
  auto pick = [&]() {
    std::size_t k = below(rng, refs);
    return k < gamma.size() ? pi::Ref::free_chan(gamma[k]) : pi::Ref::bvar(static_cast<std::uint32_t>(k - gamma.size()));
  };
  if (below(rng, 5) == 0) return pi::par(process_at(rng, gamma, bound, depth - 1), process_at(rng, gamma, bound, depth - 1));
  std::size_t nb = below(rng, 3);
  std::vector<pi::Branch> branches;
  for (std::size_t i = 0; i < nb; ++i) {
    std::size_t kind = below(rng, refs ? 5 : 3);
    pi::Guard g;
    switch (kind) {
      case 0: g = pi::tau_guard(); break;
      case 1: g = pi::tick_guard(); break;
      case 2: g = pi::new_guard(); break;
      case 3: g = pi::in_guard(pick()); break;
      default: g = pi::out_guard(pick(), pick()); break;
    }
    std::uint32_t inner = bound + (g.binds() ? 1 : 0);
    branches.push_back({g, process_at(rng, gamma, inner, depth - 1)});
  }
  return pi::sum(std::move(branches));
}

}  // namespace

pi::TermPtr random_process(Rng& rng, const std::vector<pi::Chan>& gamma, std::size_t depth) {
  return process_at(rng, gamma, 0, depth);
}

std::vector<std::vector<behaviours::StateId>> random_system(Rng& rng, behaviours::BehaviourSystem& sys,
                                                            std::size_t per_arity, std::size_t max_arity) {
  using behaviours::BasicLabel;
  std::vector<std::vector<behaviours::StateId>> by_arity(max_arity + 1);
  for (unsigned n = 0; n <= max_arity; ++n)
    for (std::size_t k = 0; k < per_arity; ++k) {
      behaviours::State s;
      s.name = "q" + std::to_string(n) + "_" + std::to_string(k) + "_" + std::to_string(sys.size());
      s.arity = n;
      by_arity[n].push_back(sys.add(std::move(s)));
    }
  for (unsigned n = 0; n <= max_arity; ++n)
    for (behaviours::StateId id : by_arity[n]) {
      std::vector<BasicLabel> labels{BasicLabel::tau(n), BasicLabel::tick(n), BasicLabel::pil(n), BasicLabel::pir(n)};
      if (n < max_arity) {
        labels.push_back(BasicLabel::nu(n));
        for (unsigned a = 1; a <= n; ++a) labels.push_back(BasicLabel::iota(n, a));
      }
      for (unsigned a = 1; a <= n; ++a)
        for (unsigned b = 1; b <= n; ++b) labels.push_back(BasicLabel::out(n, a, b));
      std::size_t rows = below(rng, 4);
      auto& st = sys.at_mut(id);
      for (std::size_t r = 0; r < rows; ++r) {
        const BasicLabel& l = labels[below(rng, labels.size())];
        const auto& pool = by_arity[l.target_arity()];
        std::size_t width = 1 + below(rng, 2);
        for (std::size_t w = 0; w < width; ++w) st.rows[l].push_back(pool[below(rng, pool.size())]);
      }
    }
  return by_arity;
}

behaviours::MixedBehaviour random_mixed(Rng& rng, const std::vector<std::vector<behaviours::StateId>>& by_arity,
                                        std::size_t max_gamma, std::size_t max_items, std::size_t max_arity) {
  behaviours::MixedBehaviour m;
  std::size_t g = 1 + below(rng, max_gamma);
  for (std::size_t i = 0; i < g; ++i) m.gamma.push_back(static_cast<pi::Chan>(i));
  std::size_t top = std::min(max_arity, by_arity.size() - 1);
  std::size_t ni = 1 + below(rng, max_items);
  for (std::size_t k = 0; k < ni; ++k) {
    std::size_t n = below(rng, top + 1);
    if (by_arity[n].empty()) continue;
    behaviours::MixedItem it;
    it.state = by_arity[n][below(rng, by_arity[n].size())];
    for (std::size_t i = 0; i < n; ++i) it.sigma.push_back(m.gamma[below(rng, g)]);
    m.items.push_back(std::move(it));
  }
  return m;
}

}  // namespace pipg::gen
