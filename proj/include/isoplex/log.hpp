#pragma once

#include <sstream>
#include <string>

namespace isoplex {

/// Diagnostics go to stderr when ISOPLEX_LOG is set to anything but "" or "0".
bool log_enabled();

void log_line(const std::string& msg);

template <typename... Args>
void log(Args&&... args) {
    if (!log_enabled()) return;
    std::ostringstream os;
    (os << ... << args);
    log_line(os.str());
}

}  // namespace isoplex
