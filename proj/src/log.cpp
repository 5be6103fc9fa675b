#include "biostab/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace biostab {

namespace {

std::mutex log_mutex;

LogLevel read_level() {
    const char* env = std::getenv("BIOSTAB_LOG");
    if (!env) return LogLevel::error;
    const std::string s(env);
    if (s == "debug") return LogLevel::debug;
    if (s == "info") return LogLevel::info;
    return LogLevel::error;
}

void emit(const char* tag, const std::string& msg) {
    std::lock_guard<std::mutex> lock(log_mutex);
    std::cerr << tag << msg << "\n";
}

}  // namespace

LogLevel log_level() {
    static const LogLevel level = read_level();
    return level;
}

void log_error(const std::string& msg) { emit("[biostab error] ", msg); }

void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::info) emit("[biostab] ", msg);
}

void log_debug(const std::string& msg) {
    if (log_level() >= LogLevel::debug) emit("[biostab debug] ", msg);
}

}  // namespace biostab
