#pragma once

#include <string_view>

namespace scalelaw::log {

// Verbosity is read once from the SCALELAW_LOG environment variable:
// 0 = silent, 1 = warnings (default), 2 = info, 3 = debug.
int level();

void warn(std::string_view msg);
void info(std::string_view msg);
void debug(std::string_view msg);

}  // namespace scalelaw::log
