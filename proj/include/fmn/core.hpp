#pragma once

// Shared numeric plumbing: extended exponents with the 1/inf = 0 convention,
// compensated summation (summation order is part of the determinism contract),
// a deterministic cross-platform RNG, integer powers, and 17-digit decimal
// formatting used by every serialized artifact.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fmn {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_inf(double e) { return std::isinf(e); }

// 1/e under the convention 1/inf = 0.
inline double inv_exp(double e) { return std::isinf(e) ? 0.0 : 1.0 / e; }

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// ---------------------------------------------------------------------------
// Compensated (Neumaier) summation
// ---------------------------------------------------------------------------

class KahanSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

template <class It, class F>
double sum_over(It first, It last, F&& f) {
    KahanSum s;
    for (; first != last; ++first) s.add(f(*first));
    return s.value();
}

// ---------------------------------------------------------------------------
// Integer powers by squaring (negative exponents via reciprocal).
// For the shipped scale bases (powers of two) these are bit-exact, which is
// what makes generation-index ties land deterministically.
// ---------------------------------------------------------------------------

inline double pow_int(double base, long long e) {
    if (e < 0) return 1.0 / pow_int(base, -e);
    double acc = 1.0, b = base;
    unsigned long long n = static_cast<unsigned long long>(e);
    while (n) {
        if (n & 1ULL) acc *= b;
        b *= b;
        n >>= 1ULL;
    }
    return acc;
}

// pow with the exponent conventions used by the norms: x^0 = 1 for any x >= 0.
inline double pow_n(double x, double e) {
    if (e == 0.0) return 1.0;
    return std::pow(x, e);
}

// ---------------------------------------------------------------------------
// Deterministic RNG: splitmix64 stream + uniform helpers built directly on
// the raw 64-bit draws so results do not depend on libstdc++ internals.
// ---------------------------------------------------------------------------

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n)
    std::uint64_t next_below(std::uint64_t n) { return n ? next_u64() % n : 0; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

private:
    std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Formatting: all serialized reals use 17 significant digits so artifacts
// round-trip exactly and reruns are byte-identical.
// ---------------------------------------------------------------------------

inline std::string fmt17(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_real(const std::string& s) {
    if (s == "inf" || s == "Inf" || s == "INF") return kInf;
    if (s == "-inf") return -kInf;
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("malformed real: " + s);
    return v;
}

// Glob matching ('*' and '?') for claim-id selection.
inline bool glob_match(const std::string& pat, const std::string& str) {
    std::size_t p = 0, s = 0, star = std::string::npos, mark = 0;
    while (s < str.size()) {
        if (p < pat.size() && (pat[p] == '?' || pat[p] == str[s])) {
            ++p, ++s;
        } else if (p < pat.size() && pat[p] == '*') {
            star = p++;
            mark = s;
        } else if (star != std::string::npos) {
            p = star + 1;
            s = ++mark;
        } else {
            return false;
        }
    }
    while (p < pat.size() && pat[p] == '*') ++p;
    return p == pat.size();
}

// log-spaced grid, inclusive endpoints
inline std::vector<double> log_grid(double lo, double hi, int n) {
    require(lo > 0 && hi >= lo && n >= 1, "log_grid: need 0 < lo <= hi, n >= 1");
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(n));
    if (n == 1) {
        g.push_back(lo);
        return g;
    }
    double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        g.push_back(std::exp(llo + (lhi - llo) * static_cast<double>(i) / (n - 1)));
    g.front() = lo;
    g.back() = hi;
    return g;
}

}  // namespace fmn
