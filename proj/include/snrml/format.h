#pragma once

#include <charconv>
#include <string>

namespace snrml {

// Shortest round-trip decimal form, independent of any global locale.
inline std::string dtoa(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

}  // namespace snrml
