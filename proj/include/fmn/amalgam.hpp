#pragma once

// The central norms: the continuous amalgam norm at scale r, its discrete
// dyadic counterpart at a matched generation, the fractional mean norm
// (sup over a radius grid), and the Euclidean cube-partition cross-checks.

#include "fmn/dyadic.hpp"
#include "fmn/function.hpp"

namespace fmn {

struct NormParams {
    double q = 1.0;
    double alpha = 1.0;
    double p = 1.0;

    NormParams() = default;
    NormParams(double q_, double alpha_, double p_) : q(q_), alpha(alpha_), p(p_) {
        require(1.0 <= q && q <= alpha && alpha <= p, "exponents must satisfy 1 <= q <= alpha <= p");
    }

    double iq() const { return inv_exp(q); }
    double ia() const { return inv_exp(alpha); }
    double ip() const { return inv_exp(p); }

    std::string str() const {
        return "(" + fmt17(q) + "," + fmt17(alpha) + "," + fmt17(p) + ")";
    }
};

struct NormValue {
    double value = 0.0;
    double r = 0.0;            // scale used; for grid sups, the arg-max radius
    bool boundary_flag = false;  // r outside [min spacing, diam/(2 kappa w)]
};

namespace detail {

// local q-norm of |f|/scale over an index range or explicit ball
class LocalNorm {
public:
    LocalNorm(const SampledFunction& f, double q, double scale)
        : f_(&f), q_(q), scale_(scale > 0 ? scale : 1.0) {}

    double over_ball(PointId y, double r) const {
        const PointSpace& s = f_->space();
        if (s.is_line()) {
            auto [lo, hi] = s.ball_range(y, r);
            return over_range(lo, hi);
        }
        if (is_inf(q_)) {
            double best = 0.0;
            for (PointId x : s.ball(y, r)) best = std::max(best, f_->abs(x) / scale_);
            return best;
        }
        KahanSum acc;
        for (PointId x : s.ball(y, r))
            acc.add(std::pow(f_->abs(x) / scale_, q_) * s.weight(x));
        return std::pow(acc.value(), 1.0 / q_);
    }

    // line-mode: restrict to support points inside [lo, hi)
    double over_range(PointId lo, PointId hi) const {
        const auto& supp = f_->support();
        auto first = std::lower_bound(supp.begin(), supp.end(), lo);
        if (is_inf(q_)) {
            double best = 0.0;
            for (auto it = first; it != supp.end() && *it < hi; ++it)
                best = std::max(best, f_->abs(*it) / scale_);
            return best;
        }
        KahanSum acc;
        for (auto it = first; it != supp.end() && *it < hi; ++it)
            acc.add(std::pow(f_->abs(*it) / scale_, q_) * f_->space().weight(*it));
        return std::pow(acc.value(), 1.0 / q_);
    }

private:
    const SampledFunction* f_;
    double q_;
    double scale_;
};

// candidate centers y whose ball can meet the support of f
inline std::vector<std::pair<PointId, PointId>> candidate_ranges(const SampledFunction& f,
                                                                 double r) {
    const PointSpace& s = f.space();
    std::vector<std::pair<PointId, PointId>> ranges;
    for (PointId x : f.support()) {
        auto [lo, hi] = s.ball_range(x, r);
        if (!ranges.empty() && lo <= ranges.back().second) {
            ranges.back().second = std::max(ranges.back().second, hi);
        } else {
            ranges.emplace_back(lo, hi);
        }
    }
    return ranges;
}

}  // namespace detail

// _r||f||_{q,p,alpha}: the outer integral over ball centers is the exact
// weighted point sum. Values are normalized by max|f| so extreme magnitudes
// survive the outer power, and the result is rescaled at the end.
inline NormValue amalgam_norm_r(const SampledFunction& f, const NormParams& P, double r,
                                double window_w = 2.0) {
    require(r > 0, "amalgam norm: radius must be positive");
    const PointSpace& s = f.space();
    NormValue out;
    out.r = r;
    out.boundary_flag = !s.radius_in_window(r, window_w);
    double scale = f.max_abs();
    if (scale == 0.0) return out;

    detail::LocalNorm local(f, P.q, scale);
    double e_inf = P.ia() - P.iq();             // exponent at p = inf
    double e_fin = P.ia() - P.ip() - P.iq();    // exponent at p < inf

    bool sparse = s.is_line() && f.support().size() * 8 < s.size();
    if (is_inf(P.p)) {
        double best = 0.0;
        auto consider = [&](PointId y) {
            double m = s.ball_measure(y, r);
            best = std::max(best, pow_n(m, e_inf) * local.over_ball(y, r));
        };
        if (sparse) {
            for (auto [lo, hi] : detail::candidate_ranges(f, r))
                for (PointId y = lo; y < hi; ++y) consider(y);
        } else {
            for (PointId y = 0; y < s.size(); ++y) consider(y);
        }
        out.value = scale * best;
        return out;
    }

    KahanSum acc;
    auto consider = [&](PointId y) {
        double ln = local.over_ball(y, r);
        if (ln == 0.0) return;
        double m = s.ball_measure(y, r);
        acc.add(s.weight(y) * std::pow(pow_n(m, e_fin) * ln, P.p));
    };
    if (sparse) {
        for (auto [lo, hi] : detail::candidate_ranges(f, r))
            for (PointId y = lo; y < hi; ++y) consider(y);
    } else {
        for (PointId y = 0; y < s.size(); ++y) consider(y);
    }
    out.value = scale * std::pow(acc.value(), 1.0 / P.p);
    return out;
}

// Discrete counterpart over the cubes of one generation.
inline NormValue dyadic_norm(const SampledFunction& f, const NormParams& P,
                             const CubeSystem& sys, int k) {
    const CubeLevel& lev = sys.generation(k);
    NormValue out;
    out.r = lev.scale;
    double scale = f.max_abs();
    if (scale == 0.0) return out;

    double e = P.ia() - P.iq();
    auto bracket = [&](std::size_t j) {
        if (is_inf(P.q)) {
            double best = 0.0;
            for (PointId x : lev.members(j)) best = std::max(best, f.abs(x) / scale);
            return pow_n(lev.cube_measure[j], e) * best;
        }
        KahanSum acc;
        for (PointId x : lev.members(j))
            acc.add(std::pow(f.abs(x) / scale, P.q) * f.space().weight(x));
        return pow_n(lev.cube_measure[j], e) * std::pow(acc.value(), 1.0 / P.q);
    };

    if (is_inf(P.p)) {
        double best = 0.0;
        for (std::size_t j = 0; j < lev.count(); ++j) best = std::max(best, bracket(j));
        out.value = scale * best;
        return out;
    }
    KahanSum acc;
    for (std::size_t j = 0; j < lev.count(); ++j) {
        double b = bracket(j);
        if (b > 0) acc.add(std::pow(b, P.p));
    }
    out.value = scale * std::pow(acc.value(), 1.0 / P.p);
    return out;
}

// sup over a radius grid; a lower bound for the true sup over r > 0, reported
// with the arg-max radius.
inline NormValue fractional_mean_norm(const SampledFunction& f, const NormParams& P,
                                      const std::vector<double>& r_grid,
                                      double window_w = 2.0) {
    require(!r_grid.empty(), "fractional mean norm: empty radius grid");
    NormValue best = amalgam_norm_r(f, P, r_grid.front(), window_w);
    for (std::size_t i = 1; i < r_grid.size(); ++i) {
        NormValue v = amalgam_norm_r(f, P, r_grid[i], window_w);
        if (v.value > best.value) best = v;
    }
    return best;
}

// ---------------------------------------------------------------------------
// Euclidean cross-checks on declared grid models: half-open cube partition
// I_k^r = prod [k_j r, (k_j+1) r).
// ---------------------------------------------------------------------------

namespace detail {

// block id -> (q-norm accumulation) over the cube partition at scale r
template <class Fn>
void for_each_block(const SampledFunction& f, double r, Fn&& fn) {
    const PointSpace& s = f.space();
    require(s.dpow() == 1.0 && s.geometry() != SpaceGeometry::Matrix,
            "cube-partition norms need a declared grid model");
    std::map<std::array<long long, 2>, std::vector<PointId>> blocks;
    for (PointId i = 0; i < s.size(); ++i) {
        std::array<long long, 2> key = {0, 0};
        for (int d = 0; d < s.dim(); ++d)
            key[static_cast<std::size_t>(d)] =
                static_cast<long long>(std::floor(s.coord(i, d) / r));
        blocks[key].push_back(i);
    }
    for (auto& [key, pts] : blocks) fn(pts);
}

}  // namespace detail

// r^{n(1/alpha - 1/q)} ( sum_k ||f chi_{I_k^r}||_q^p )^{1/p}
inline NormValue euclidean_amalgam_norm(const SampledFunction& f, const NormParams& P,
                                        double r) {
    NormValue out;
    out.r = r;
    out.boundary_flag = !f.space().radius_in_window(r);
    double scale = f.max_abs();
    if (scale == 0.0) return out;
    const PointSpace& s = f.space();

    auto block_qnorm = [&](const std::vector<PointId>& pts) {
        if (is_inf(P.q)) {
            double best = 0.0;
            for (PointId i : pts) best = std::max(best, f.abs(i) / scale);
            return best;
        }
        KahanSum acc;
        for (PointId i : pts) acc.add(std::pow(f.abs(i) / scale, P.q) * s.weight(i));
        return std::pow(acc.value(), 1.0 / P.q);
    };

    double pre = pow_n(r, s.dim() * (P.ia() - P.iq()));
    if (is_inf(P.p)) {
        double best = 0.0;
        detail::for_each_block(f, r, [&](const std::vector<PointId>& pts) {
            best = std::max(best, block_qnorm(pts));
        });
        out.value = scale * pre * best;
        return out;
    }
    KahanSum acc;
    detail::for_each_block(f, r, [&](const std::vector<PointId>& pts) {
        double b = block_qnorm(pts);
        if (b > 0) acc.add(std::pow(b, P.p));
    });
    out.value = scale * pre * std::pow(acc.value(), 1.0 / P.p);
    return out;
}

// the alpha-free Wiener amalgam norm _r||f||_{q,p}
inline NormValue wiener_norm(const SampledFunction& f, double q, double p, double r) {
    require(q >= 1.0 && p >= 1.0, "wiener norm: need q, p >= 1");
    NormParams P;
    P.q = q;
    P.alpha = q;  // the prefactor exponent n(1/alpha - 1/q) vanishes
    P.p = p;
    return euclidean_amalgam_norm(f, P, r);
}

}  // namespace fmn
