#include "stagesim/log.hpp"

#include <cstdlib>
#include <iostream>

namespace stagesim {

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("STAGESIM_LOG");
    if (!env) return LogLevel::info;
    const std::string v(env);
    if (v == "quiet") return LogLevel::quiet;
    if (v == "debug") return LogLevel::debug;
    return LogLevel::info;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::info) std::cerr << "[stagesim] " << msg << "\n";
}

void log_warn(const std::string& msg) {
  if (log_level() >= LogLevel::info) {
    std::cerr << "[stagesim] warning: " << msg << "\n";
  }
}

void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::debug) {
    std::cerr << "[stagesim] debug: " << msg << "\n";
  }
}

}  // namespace stagesim
