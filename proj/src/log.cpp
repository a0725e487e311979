#include "edgelift/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace edgelift::log {

static Level parse_env() {
    const char* env = std::getenv("EDGELIFT_LOG");
    if (env == nullptr) return Level::warn;
    if (std::strcmp(env, "error") == 0) return Level::error;
    if (std::strcmp(env, "warn") == 0) return Level::warn;
    if (std::strcmp(env, "info") == 0) return Level::info;
    if (std::strcmp(env, "debug") == 0) return Level::debug;
    return Level::warn;
}

Level level() {
    static const Level lvl = parse_env();
    return lvl;
}

void emit(Level lvl, const std::string& message) {
    if (static_cast<int>(lvl) > static_cast<int>(level())) return;
    static const char* names[] = {"error", "warn", "info", "debug"};
    std::fprintf(stderr, "[edgelift][%s] %s\n", names[static_cast<int>(lvl)], message.c_str());
}

}  // namespace edgelift::log
