#pragma once

#include <string>

#include "pipg/presheaf.hpp"
#include "pipg/traces.hpp"

namespace pipg::dot {

// The causal graph of u: channels as ellipses, agents as boxes, cores as
// diamonds.
std::string causal(const presheaf::Presheaf& u);
// The trace drawn with time flowing upwards, one rank per causal layer.
std::string diagram(const traces::TraceCospan& c);

}  // namespace pipg::dot
