#pragma once

#include <ostream>

namespace chordkit::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitPredictor = 3;
inline constexpr int kExitConfig = 64;

// Entry point of the `chordkit` tool. Verbs: render, chain, irradiance,
// estimate-light, gridsearch-rm, integrate, optimize, eval.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace chordkit::cli
