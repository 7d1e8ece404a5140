#pragma once

#include <iosfwd>

namespace dyadic::cli {

// Exit codes: 0 every verdict passed, 1 a verdict failed, 2 bad input.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace dyadic::cli
