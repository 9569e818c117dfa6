#pragma once

#include <string_view>

namespace chordkit {

// Reads the CHORDKIT_LOG environment variable (trace, debug, info, warn,
// error, off). Default level is warn.
void init_logging();

void log_info(std::string_view message);
void log_warning(std::string_view message);
void log_debug(std::string_view message);

}  // namespace chordkit
