#pragma once

// Builtin model spaces. The grids realize Ahlfors-regular behaviour, the
// squared-distance line exercises kappa > 1 code paths, and the weighted
// binary tree gives a non-coordinate metric.

#include <functional>
#include <sstream>

#include "fmn/space.hpp"

namespace fmn {

// n points 0, h, 2h, ..., weight h each: a finite slice of the real line.
inline PointSpace grid1d(std::size_t n, double h = 1.0) {
    require(n >= 1 && h > 0, "grid1d: need n >= 1, h > 0");
    std::vector<double> coords(n), w(n, h);
    for (std::size_t i = 0; i < n; ++i) coords[i] = static_cast<double>(i) * h;
    std::ostringstream name;
    name << "grid1d(" << n << "," << fmt17(h) << ")";
    return PointSpace::line(name.str(), std::move(coords), std::move(w), 1.0, 1.0);
}

// n x n planar grid, weight h^2 per point.
inline PointSpace grid2d(std::size_t n, double h = 1.0) {
    require(n >= 1 && h > 0, "grid2d: need n >= 1, h > 0");
    std::vector<double> coords;
    coords.reserve(n * n * 2);
    std::vector<double> w(n * n, h * h);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            coords.push_back(static_cast<double>(i) * h);
            coords.push_back(static_cast<double>(j) * h);
        }
    std::ostringstream name;
    name << "grid2d(" << n << "," << fmt17(h) << ")";
    return PointSpace::grid(name.str(), std::move(coords), 2, std::move(w), 1.0);
}

// Integer line with the squared distance d(x,y) = |x-y|^2; a quasi-metric
// with kappa = 2 (and provably not kappa = 1).
inline PointSpace sqline(std::size_t n) {
    require(n >= 1, "sqline: need n >= 1");
    std::vector<double> coords(n), w(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) coords[i] = static_cast<double>(i);
    std::ostringstream name;
    name << "sqline(" << n << ")";
    return PointSpace::line(name.str(), std::move(coords), std::move(w), 2.0, 2.0);
}

// Complete rooted tree with the unit-edge path metric (integer distances, so
// annuli at window scales are never empty) and point weights shrinking with
// depth. kappa = 1 (true metric).
inline PointSpace tree(int depth, int branching) {
    require(depth >= 0 && branching >= 2, "tree: need depth >= 0, branching >= 2");
    struct Node { int parent; int level; };
    std::vector<Node> nodes;
    nodes.push_back({-1, 0});
    std::size_t level_start = 0;
    for (int l = 1; l <= depth; ++l) {
        std::size_t level_end = nodes.size();
        for (std::size_t p = level_start; p < level_end; ++p)
            for (int b = 0; b < branching; ++b)
                nodes.push_back({static_cast<int>(p), l});
        level_start = level_end;
    }
    std::size_t n = nodes.size();
    require(n <= 4096, "tree: too many nodes for a dense model");

    // distance to root along the unique path (unit edges)
    std::vector<double> to_root(n, 0.0);
    for (std::size_t i = 1; i < n; ++i)
        to_root[i] = to_root[static_cast<std::size_t>(nodes[i].parent)] + 1.0;

    auto ancestor_chain = [&](std::size_t i) {
        std::vector<int> chain;
        int cur = static_cast<int>(i);
        while (cur >= 0) {
            chain.push_back(cur);
            cur = nodes[static_cast<std::size_t>(cur)].parent;
        }
        return chain;  // i ... root
    };

    std::vector<double> dmat(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto ci = ancestor_chain(i);
        std::vector<char> on_ci(n, 0);
        for (int a : ci) on_ci[static_cast<std::size_t>(a)] = 1;
        for (std::size_t j = i + 1; j < n; ++j) {
            int lca = static_cast<int>(j);
            while (!on_ci[static_cast<std::size_t>(lca)])
                lca = nodes[static_cast<std::size_t>(lca)].parent;
            double d = to_root[i] + to_root[j] - 2.0 * to_root[static_cast<std::size_t>(lca)];
            dmat[i * n + j] = dmat[j * n + i] = d;
        }
    }

    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = pow_int(1.0 / static_cast<double>(branching), nodes[i].level);

    std::ostringstream name;
    name << "tree(" << depth << "," << branching << ")";
    return PointSpace::matrix(name.str(), std::move(dmat), std::move(w), 1.0);
}

// "grid1d(256,1)" style generator dispatch used by configs and the CLI.
inline PointSpace generate_space(const std::string& spec) {
    auto open = spec.find('(');
    std::string fname = open == std::string::npos ? spec : spec.substr(0, open);
    std::vector<double> args;
    if (open != std::string::npos) {
        auto close = spec.rfind(')');
        require(close != std::string::npos && close > open, "malformed space spec: " + spec);
        std::string inner = spec.substr(open + 1, close - open - 1);
        std::istringstream iss(inner);
        std::string tok;
        while (std::getline(iss, tok, ',')) {
            tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
            if (!tok.empty()) args.push_back(parse_real(tok));
        }
    }
    auto arg = [&](std::size_t i, double dflt) { return i < args.size() ? args[i] : dflt; };
    if (fname == "grid1d") return grid1d(static_cast<std::size_t>(arg(0, 64)), arg(1, 1.0));
    if (fname == "grid2d") return grid2d(static_cast<std::size_t>(arg(0, 8)), arg(1, 1.0));
    if (fname == "sqline") return sqline(static_cast<std::size_t>(arg(0, 64)));
    if (fname == "tree")
        return tree(static_cast<int>(arg(0, 4)), static_cast<int>(arg(1, 2)));
    throw std::invalid_argument("unknown space generator: " + fname);
}

// Default estimation window for a space: interior radii clear of both the
// spacing floor and the boundary cap diam/(2 kappa w). Squared-metric lines
// need a higher floor before ratio-2 annuli contain lattice points at all
// (an integer gap inside [sqrt(r), sqrt(2r)) requires r >= (sqrt 2 - 1)^{-2}
// spacings).
inline RadiusWindow default_window(const PointSpace& s, double w = 2.0, int points = 16) {
    RadiusWindow win;
    double floor_factor = s.dpow() == 2.0 ? 6.0 : 1.0;
    win.r_min = std::max(s.min_spacing() * floor_factor, s.diam() * 1e-6);
    win.r_max = std::max(win.r_min, s.boundary_radius(w));
    win.points = points;
    return win;
}

}  // namespace fmn
