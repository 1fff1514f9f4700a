#include "isoplex/log.hpp"

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <mutex>

namespace isoplex {

bool log_enabled() {
    static const bool enabled = [] {
        const char* v = std::getenv("ISOPLEX_LOG");
        return v && *v && std::strcmp(v, "0") != 0;
    }();
    return enabled;
}

void log_line(const std::string& msg) {
    static std::mutex mu;
    std::lock_guard lock(mu);
    std::cerr << "[isoplex] " << msg << '\n';
}

}  // namespace isoplex
