#pragma once

#include <string>

#include "pipg/gen.hpp"
#include "pipg/pi_syntax.hpp"

namespace helpers {

inline pipg::pi::PiFile file(const std::string& text) { return pipg::pi::parse_pi_file(text); }

inline pipg::gen::Rng rng(std::uint64_t salt) { return pipg::gen::Rng(pipg::gen::seed_from_env(20240611) ^ salt); }

}  // namespace helpers
