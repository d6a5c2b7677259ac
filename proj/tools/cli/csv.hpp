#pragma once

#include <charconv>
#include <string>

namespace lambdacav::cli {

// 17 significant digits via to_chars: locale-free, shortest round-trip safe,
// byte-identical across runs of the same build.
inline void append_number(std::string& out, double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v,
                             std::chars_format::general, 17);
    out.append(buf, res.ptr);
}

inline std::string format_number(double v) {
    std::string s;
    append_number(s, v);
    return s;
}

} // namespace lambdacav::cli
