#include "scalelaw/log.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

namespace scalelaw::log {

int level() {
  static const int lvl = [] {
    const char* env = std::getenv("SCALELAW_LOG");
    if (!env || !*env) return 1;
    std::string s(env);
    if (s == "0" || s == "silent") return 0;
    if (s == "1" || s == "warn") return 1;
    if (s == "2" || s == "info") return 2;
    if (s == "3" || s == "debug") return 3;
    return 1;
  }();
  return lvl;
}

void warn(std::string_view msg) {
  if (level() >= 1) std::cerr << "[scalelaw warn] " << msg << "\n";
}

void info(std::string_view msg) {
  if (level() >= 2) std::cerr << "[scalelaw info] " << msg << "\n";
}

void debug(std::string_view msg) {
  if (level() >= 3) std::cerr << "[scalelaw debug] " << msg << "\n";
}

}  // namespace scalelaw::log
