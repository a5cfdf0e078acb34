// log.hpp
// Minimal stderr logger controlled by the STAGESIM_LOG environment variable
// (quiet | info | debug; default info).

#pragma once

#include <string>

namespace stagesim {

enum class LogLevel { quiet = 0, info = 1, debug = 2 };

LogLevel log_level();
void log_info(const std::string& msg);
void log_warn(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace stagesim
