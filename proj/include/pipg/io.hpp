#pragma once

#include <stdexcept>
#include <string>

#include "pipg/presheaf.hpp"
#include "pipg/traces.hpp"

namespace pipg::io {

class FormatError : public std::runtime_error {
 public:
  FormatError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what) {}
};

// PRESHEAF <name>
// CHANNELS id...
// AGENT id arity ch...
// ELEM tag id face=id...
// END
std::string print_presheaf(const presheaf::Presheaf& p, const std::string& name);

// Sections X, Y and U followed by the legs, one line per element:
// LEG S: tag y->u   and   LEG T: tag x->u.
// Missing legs default to the inclusions of X and Y into U.
std::string print_cospan(const traces::TraceCospan& c);
traces::TraceCospan parse_cospan(const std::string& text);

std::string read_file(const std::string& path);

}  // namespace pipg::io
