#include "uqbench/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace uqbench {

std::string format_roundtrip(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string format_sig12(double x)
{
    if (!std::isfinite(x)) return format_roundtrip(x);
    if (x == 0.0) return "0";
    char buf[64];
    const int len = std::snprintf(buf, sizeof buf, "%.12g", x);
    std::string fixed(buf, static_cast<std::size_t>(len));
    std::string shortest = format_roundtrip(x);
    return shortest.size() < fixed.size() ? shortest : fixed;
}

} // namespace uqbench
