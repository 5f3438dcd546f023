#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace metrikos {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr double kDefaultRelTol = 1e-9;
inline constexpr double kReplayRelTol = 1e-12;

/// Relative comparison tolerance. All verdicts in the library are computed
/// with "strict up to tolerance" semantics: a < b holds when
/// a < b - rel*max(1,|b|), and a <= b holds when a <= b + rel*max(1,|b|).
struct Tolerance {
    double rel = kDefaultRelTol;

    double slack(double reference) const {
        return rel * std::max(1.0, std::fabs(reference));
    }
    bool lt_strict(double a, double b) const { return a < b - slack(b); }
    bool leq(double a, double b) const { return a <= b + slack(b); }
    bool geq(double a, double b) const { return a >= b - slack(b); }
    bool eq(double a, double b) const {
        return std::fabs(a - b) <= slack(std::fabs(a) > std::fabs(b) ? a : b);
    }
};

/// Malformed input: bad matrices, duplicate labels, schema violations,
/// invalid parameters. Maps to CLI exit code 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// DSL syntax error; carries the byte offset of the offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : std::runtime_error(msg), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Evaluation outside a function's real domain (ln of a non-positive value,
/// division by zero, ...) or a non-finite result.
class EvalError : public std::runtime_error {
public:
    explicit EvalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A certificate search exhausted its grid/bracket without finding a value.
class SearchError : public std::runtime_error {
public:
    explicit SearchError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Shortest decimal rendering that round-trips to the same double.
inline std::string format_number(double v) {
    if (v == 0.0) return "0";
    for (int prec = 1; prec <= 17; ++prec) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back = std::strtod(buf, nullptr);
        if (back == v) return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// FNV-1a over bytes, used for input digests in reports.
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ull) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string fnv1a64_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

}  // namespace metrikos
