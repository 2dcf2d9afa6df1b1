#pragma once

// Deterministic function corpus: indicators of balls and index blocks,
// truncated power profiles (the weak-Lebesgue-but-not-Lebesgue family),
// random step functions, and random point values. Every generator is a pure
// function of (spec, seed, space).

#include <sstream>

#include "fmn/function.hpp"
#include "fmn/models.hpp"

namespace fmn {

namespace detail {

inline SampledFunction power_profile(const PointSpace& s, double expo, std::string id) {
    PointId c = s.central_point();
    std::vector<double> v(s.size());
    double floor_d = s.min_spacing() > 0 ? s.min_spacing() : 1.0;
    for (PointId i = 0; i < s.size(); ++i) {
        double d = i == c ? 0.0 : s.dist(c, i);
        v[i] = std::pow(std::max(d, floor_d), -expo);
    }
    return SampledFunction::real(s, v, std::move(id));
}

inline SampledFunction random_step(const PointSpace& s, Rng& rng, std::string id) {
    std::vector<double> v(s.size(), 0.0);
    std::size_t nblocks = 2 + rng.next_below(5);
    for (std::size_t b = 0; b < nblocks; ++b) {
        std::size_t lo = rng.next_below(s.size());
        std::size_t len = 1 + rng.next_below(std::max<std::size_t>(s.size() / 4, 1));
        double level = rng.uniform(0.05, 5.0);
        for (std::size_t i = lo; i < std::min(lo + len, s.size()); ++i) v[i] = level;
    }
    return SampledFunction::real(s, v, std::move(id));
}

inline SampledFunction random_values(const PointSpace& s, Rng& rng, std::string id,
                                     bool complex_phase) {
    std::vector<std::complex<double>> v(s.size());
    for (auto& x : v) {
        if (rng.next_double() < 0.3) {
            x = 0.0;
            continue;
        }
        double mag = rng.uniform(0.05, 4.0);
        if (complex_phase) {
            double ph = rng.uniform(0, 6.283185307179586);
            x = std::polar(mag, ph);
        } else {
            x = mag;
        }
    }
    return SampledFunction(s, std::move(v), std::move(id));
}

}  // namespace detail

// spec strings: "zero" | "ball-indicator(r)" | "power(s)" |
// "random-step(k)" | "random-values(k)" | "complex-values(k)"
inline std::vector<SampledFunction> generate_corpus(const std::string& spec, std::uint64_t seed,
                                                    const PointSpace& s) {
    auto open = spec.find('(');
    std::string fname = open == std::string::npos ? spec : spec.substr(0, open);
    std::vector<double> args;
    if (open != std::string::npos) {
        auto close = spec.rfind(')');
        require(close != std::string::npos && close > open, "malformed corpus spec: " + spec);
        std::istringstream iss(spec.substr(open + 1, close - open - 1));
        std::string tok;
        while (std::getline(iss, tok, ',')) {
            tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
            if (!tok.empty()) args.push_back(parse_real(tok));
        }
    }
    auto arg = [&](std::size_t i, double dflt) { return i < args.size() ? args[i] : dflt; };
    Rng rng(seed ^ std::hash<std::string>{}(spec));
    std::vector<SampledFunction> out;

    if (fname == "zero") {
        out.push_back(SampledFunction::zero(s));
    } else if (fname == "ball-indicator") {
        double r = arg(0, std::max(s.min_spacing() * 2.0, s.boundary_radius() / 4.0));
        out.push_back(
            SampledFunction::indicator(s, s.ball(s.central_point(), r), spec));
    } else if (fname == "power") {
        out.push_back(detail::power_profile(s, arg(0, 0.5), spec));
    } else if (fname == "random-step") {
        auto k = static_cast<std::size_t>(arg(0, 1));
        for (std::size_t i = 0; i < k; ++i)
            out.push_back(detail::random_step(s, rng, spec + "#" + std::to_string(i)));
    } else if (fname == "random-values") {
        auto k = static_cast<std::size_t>(arg(0, 1));
        for (std::size_t i = 0; i < k; ++i)
            out.push_back(detail::random_values(s, rng, spec + "#" + std::to_string(i), false));
    } else if (fname == "complex-values") {
        auto k = static_cast<std::size_t>(arg(0, 1));
        for (std::size_t i = 0; i < k; ++i)
            out.push_back(detail::random_values(s, rng, spec + "#" + std::to_string(i), true));
    } else {
        throw std::invalid_argument("unknown corpus generator: " + fname);
    }
    return out;
}

// the standard mixed corpus used by the default configs
inline std::vector<SampledFunction> default_corpus(const PointSpace& s, std::uint64_t seed) {
    std::vector<SampledFunction> out;
    for (const char* spec : {"zero", "ball-indicator(4)", "power(0.5)", "random-step(4)",
                             "random-values(3)", "complex-values(2)"}) {
        auto part = generate_corpus(spec, seed, s);
        for (auto& f : part) out.push_back(std::move(f));
    }
    return out;
}

}  // namespace fmn
