#pragma once

#include <string>

namespace biostab {

enum class LogLevel { error = 0, info = 1, debug = 2 };

/// Level from the BIOSTAB_LOG environment variable (error|info|debug),
/// read once; defaults to error.
LogLevel log_level();

void log_error(const std::string& msg);
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace biostab
