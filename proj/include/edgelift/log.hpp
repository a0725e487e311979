#pragma once

#include <string>

namespace edgelift::log {

enum class Level : int { error = 0, warn = 1, info = 2, debug = 3 };

/// Current level, initialized once from the EDGELIFT_LOG environment
/// variable (error|warn|info|debug). Defaults to warn.
Level level();

void emit(Level lvl, const std::string& message);

inline void error(const std::string& m) { emit(Level::error, m); }
inline void warn(const std::string& m) { emit(Level::warn, m); }
inline void info(const std::string& m) { emit(Level::info, m); }
inline void debug(const std::string& m) { emit(Level::debug, m); }

}  // namespace edgelift::log
