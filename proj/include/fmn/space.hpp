#pragma once

// Finite quasi-metric measure spaces: ball queries, measure, boundary window,
// and the empirical geometric constants (doubling, reverse doubling, radial
// envelope) that every certificate downstream is priced in.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>

#include "fmn/core.hpp"

namespace fmn {

using PointId = std::uint32_t;

// Storage layouts. Line: sorted 1-D coordinates with d(x,y) = |x-y|^dpow
// (dpow 1 or 2); ball queries are binary searches and measures come from
// prefix sums, which is what makes 2^18-point runs cheap. Grid: k-dim
// coordinates, Euclidean metric, O(n) ball scans. Matrix: explicit distances.
enum class SpaceGeometry { Line, Grid, Matrix };

class PointSpace {
public:
    static PointSpace line(std::string name, std::vector<double> coords,
                           std::vector<double> weights, double dpow, double kappa) {
        PointSpace s;
        s.geom_ = SpaceGeometry::Line;
        s.name_ = std::move(name);
        s.dim_ = 1;
        s.dpow_ = dpow;
        s.coords_ = std::move(coords);
        s.w_ = std::move(weights);
        s.kappa_ = kappa;
        require(std::is_sorted(s.coords_.begin(), s.coords_.end()),
                "line space: coordinates must be sorted");
        s.finish();
        return s;
    }

    static PointSpace grid(std::string name, std::vector<double> coords, int dim,
                           std::vector<double> weights, double kappa) {
        PointSpace s;
        s.geom_ = SpaceGeometry::Grid;
        s.name_ = std::move(name);
        s.dim_ = dim;
        s.dpow_ = 1.0;
        s.coords_ = std::move(coords);
        s.w_ = std::move(weights);
        s.kappa_ = kappa;
        require(s.coords_.size() == s.w_.size() * static_cast<std::size_t>(dim),
                "grid space: coords size mismatch");
        s.finish();
        return s;
    }

    static PointSpace matrix(std::string name, std::vector<double> dmat,
                             std::vector<double> weights, double kappa) {
        PointSpace s;
        s.geom_ = SpaceGeometry::Matrix;
        s.name_ = std::move(name);
        s.dim_ = 1;
        s.dmat_ = std::move(dmat);
        s.w_ = std::move(weights);
        s.kappa_ = kappa;
        require(s.dmat_.size() == s.w_.size() * s.w_.size(),
                "matrix space: matrix size mismatch");
        s.finish();
        return s;
    }

    const std::string& name() const { return name_; }
    SpaceGeometry geometry() const { return geom_; }
    std::size_t size() const { return w_.size(); }
    int dim() const { return dim_; }
    double dpow() const { return dpow_; }
    double kappa() const { return kappa_; }
    double diam() const { return diam_; }
    double total_measure() const { return total_; }
    double min_spacing() const { return min_spacing_; }
    double weight(PointId i) const { return w_[i]; }
    const std::vector<double>& weights() const { return w_; }
    const std::vector<double>& coords() const { return coords_; }
    double coord(PointId i, int d) const { return coords_[static_cast<std::size_t>(i) * dim_ + d]; }

    double dist(PointId i, PointId j) const {
        switch (geom_) {
            case SpaceGeometry::Line: {
                double d = std::abs(coords_[i] - coords_[j]);
                return dpow_ == 2.0 ? d * d : d;
            }
            case SpaceGeometry::Grid: {
                double acc = 0.0;
                for (int d = 0; d < dim_; ++d) {
                    double t = coord(i, d) - coord(j, d);
                    acc += t * t;
                }
                return std::sqrt(acc);
            }
            default:
                return dmat_[static_cast<std::size_t>(i) * size() + j];
        }
    }

    bool is_line() const { return geom_ == SpaceGeometry::Line; }

    // Half-open index range [lo, hi) of the ball B(center, r) on a line space.
    // Membership is the strict predicate d < r; the binary-search bounds are
    // widened one ulp and trimmed back so exact ties are excluded.
    std::pair<PointId, PointId> ball_range(PointId center, double r) const {
        double cr = coord_radius(r);
        double c = coords_[center];
        auto lo = std::lower_bound(coords_.begin(), coords_.end(), c - cr * (1.0 + 1e-12));
        auto hi = std::upper_bound(coords_.begin(), coords_.end(), c + cr * (1.0 + 1e-12));
        auto li = static_cast<PointId>(lo - coords_.begin());
        auto hi_i = static_cast<PointId>(hi - coords_.begin());
        while (li < hi_i && !(metric_of_gap(std::abs(coords_[li] - c)) < r)) ++li;
        while (hi_i > li && !(metric_of_gap(std::abs(coords_[hi_i - 1] - c)) < r)) --hi_i;
        return {li, hi_i};
    }

    double measure_range(PointId lo, PointId hi) const { return wprefix_[hi] - wprefix_[lo]; }

    // B(center, r) = { y : d(center, y) < r }
    std::vector<PointId> ball(PointId center, double r) const {
        require(center < size(), "ball: unknown center");
        require(r > 0, "ball: radius must be positive");
        std::vector<PointId> out;
        if (is_line()) {
            auto [lo, hi] = ball_range(center, r);
            out.reserve(hi - lo);
            for (PointId i = lo; i < hi; ++i) out.push_back(i);
        } else {
            for (PointId i = 0; i < size(); ++i)
                if (dist(center, i) < r) out.push_back(i);
        }
        return out;
    }

    double ball_measure(PointId center, double r) const {
        if (is_line()) {
            auto [lo, hi] = ball_range(center, r);
            return measure_range(lo, hi);
        }
        KahanSum s;
        for (PointId i = 0; i < size(); ++i)
            if (dist(center, i) < r) s.add(w_[i]);
        return s.value();
    }

    std::size_t ball_count(PointId center, double r) const {
        if (is_line()) {
            auto [lo, hi] = ball_range(center, r);
            return hi - lo;
        }
        std::size_t c = 0;
        for (PointId i = 0; i < size(); ++i)
            if (dist(center, i) < r) ++c;
        return c;
    }

    double measure(const std::vector<PointId>& subset) const {
        KahanSum s;
        for (PointId i : subset) s.add(w_[i]);
        return s.value();
    }

    // Boundary window: radius-dependent estimates are trusted for
    // r <= diam / (2 kappa w); w = 2 unless a caller relaxes it.
    double boundary_radius(double w = 2.0) const { return diam_ / (2.0 * kappa_ * w); }

    bool radius_in_window(double r, double w = 2.0) const {
        return r >= min_spacing_ && r <= boundary_radius(w);
    }

    // A point is r-interior when its ball cannot be clipped by the edge of
    // the model. Coordinate spaces test the bounding box; matrix spaces
    // compare against the most central point's ball.
    bool interior(PointId x, double r) const {
        if (geom_ == SpaceGeometry::Matrix)
            return ball_count(x, r) >= ball_count(central_, r);
        double cr = coord_radius(r);
        for (int d = 0; d < dim_; ++d) {
            double c = coord(x, d);
            if (c - bbox_lo_[d] < cr || bbox_hi_[d] - c < cr) return false;
        }
        return true;
    }

    std::vector<PointId> interior_points(double r) const {
        std::vector<PointId> out;
        for (PointId i = 0; i < size(); ++i)
            if (interior(i, r)) out.push_back(i);
        return out;
    }

    PointId central_point() const { return central_; }

    // Quasi-triangle certificate: d(x,y) <= kappa (d(x,z) + d(z,y)).
    // Exhaustive up to max_exhaustive points, seeded triple sampling above.
    struct TriangleCert {
        bool ok = true;
        double worst_ratio = 0.0;  // max of d(x,y) / (d(x,z)+d(z,y))
        PointId x = 0, y = 0, z = 0;
        std::size_t checked = 0;
    };

    TriangleCert certify_quasi_triangle(std::size_t max_exhaustive = 1000,
                                        std::uint64_t seed = 1) const {
        TriangleCert cert;
        auto consider = [&](PointId x, PointId y, PointId z) {
            if (x == y || y == z || x == z) return;
            double den = dist(x, z) + dist(z, y);
            if (den <= 0) return;
            double ratio = dist(x, y) / den;
            ++cert.checked;
            if (ratio > cert.worst_ratio) {
                cert.worst_ratio = ratio;
                cert.x = x; cert.y = y; cert.z = z;
            }
        };
        std::size_t n = size();
        if (n <= max_exhaustive) {
            for (PointId x = 0; x < n; ++x)
                for (PointId y = static_cast<PointId>(x + 1); y < n; ++y)
                    for (PointId z = 0; z < n; ++z) consider(x, y, z);
        } else {
            Rng rng(seed);
            for (std::size_t i = 0; i < 200000; ++i)
                consider(static_cast<PointId>(rng.next_below(n)),
                         static_cast<PointId>(rng.next_below(n)),
                         static_cast<PointId>(rng.next_below(n)));
        }
        cert.ok = cert.worst_ratio <= kappa_ * (1.0 + 1e-12);
        return cert;
    }

private:
    double coord_radius(double r) const {
        return dpow_ == 2.0 ? std::sqrt(std::max(r, 0.0)) : r;
    }
    double metric_of_gap(double gap) const { return dpow_ == 2.0 ? gap * gap : gap; }

    void finish() {
        std::size_t n = w_.size();
        require(n >= 1, "space must contain at least one point");
        require(kappa_ >= 1.0, "kappa must be >= 1");
        for (double w : w_) require(w > 0 && std::isfinite(w), "weights must be positive finite");

        KahanSum tot;
        for (double w : w_) tot.add(w);
        total_ = tot.value();

        if (is_line()) {
            wprefix_.assign(n + 1, 0.0);
            for (std::size_t i = 0; i < n; ++i) wprefix_[i + 1] = wprefix_[i] + w_[i];
            diam_ = n > 1 ? metric_of_gap(coords_.back() - coords_.front()) : 0.0;
            min_spacing_ = kInf;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                double g = coords_[i + 1] - coords_[i];
                require(g > 0, "line space: duplicate coordinates");
                min_spacing_ = std::min(min_spacing_, metric_of_gap(g));
            }
        } else {
            diam_ = 0.0;
            min_spacing_ = kInf;
            for (PointId i = 0; i < n; ++i)
                for (PointId j = static_cast<PointId>(i + 1); j < n; ++j) {
                    double d = dist(i, j);
                    require(d > 0, "distinct points must have positive distance");
                    diam_ = std::max(diam_, d);
                    min_spacing_ = std::min(min_spacing_, d);
                }
        }
        if (!std::isfinite(min_spacing_)) min_spacing_ = 0.0;  // single point

        if (geom_ != SpaceGeometry::Matrix) {
            bbox_lo_.assign(dim_, kInf);
            bbox_hi_.assign(dim_, -kInf);
            for (PointId i = 0; i < n; ++i)
                for (int d = 0; d < dim_; ++d) {
                    bbox_lo_[d] = std::min(bbox_lo_[d], coord(i, d));
                    bbox_hi_[d] = std::max(bbox_hi_[d], coord(i, d));
                }
        }

        central_ = 0;
        if (geom_ == SpaceGeometry::Matrix) {
            double best = kInf;
            for (PointId i = 0; i < n; ++i) {
                double ecc = 0.0;
                for (PointId j = 0; j < n; ++j) ecc = std::max(ecc, dist(i, j));
                if (ecc < best) { best = ecc; central_ = i; }
            }
        } else if (is_line()) {
            central_ = static_cast<PointId>(n / 2);
        }
    }

    SpaceGeometry geom_ = SpaceGeometry::Matrix;
    std::string name_;
    int dim_ = 1;
    double dpow_ = 1.0;
    std::vector<double> coords_;
    std::vector<double> dmat_;
    std::vector<double> w_;
    std::vector<double> wprefix_;
    std::vector<double> bbox_lo_, bbox_hi_;
    double kappa_ = 1.0;
    double diam_ = 0.0;
    double total_ = 0.0;
    double min_spacing_ = 0.0;
    PointId central_ = 0;
};

// ---------------------------------------------------------------------------
// Geometric constants
// ---------------------------------------------------------------------------

struct RadiusWindow {
    double r_min = 0.0;
    double r_max = 0.0;
    int points = 16;  // log-spaced sample radii within [r_min, r_max]

    std::vector<double> radii() const {
        require(r_min > 0 && r_max >= r_min, "radius window must satisfy 0 < r_min <= r_max");
        if (r_min == r_max) return {r_min};
        return log_grid(r_min, r_max, points);
    }
};

struct SamplePolicy {
    std::size_t exhaustive_limit = 1000;  // centers scanned exhaustively below this size
    std::size_t sample_size = 256;        // seeded center sample above
    std::uint64_t seed = 1;
    bool interior_only = false;

    std::vector<PointId> centers(const PointSpace& s, double r_for_interior = 0.0) const {
        std::vector<PointId> out;
        if (s.size() <= exhaustive_limit) {
            for (PointId i = 0; i < s.size(); ++i) out.push_back(i);
        } else {
            Rng rng(seed);
            for (std::size_t i = 0; i < sample_size; ++i)
                out.push_back(static_cast<PointId>(rng.next_below(s.size())));
            std::sort(out.begin(), out.end());
            out.erase(std::unique(out.begin(), out.end()), out.end());
        }
        if (interior_only && r_for_interior > 0) {
            std::vector<PointId> filt;
            for (PointId i : out)
                if (s.interior(i, r_for_interior)) filt.push_back(i);
            if (!filt.empty()) return filt;
        }
        return out;
    }
};

struct PhiFit {
    std::vector<double> radii;
    std::vector<double> phi;   // nondecreasing mean ball measure
    double a = 1.0, b = 1.0;   // envelope  a phi(r) <= mu(B(x,r)) <= b phi(r)
    double a0 = 0.0, b0 = 0.0; // phi(r) in [a0 r^D, b0 r^delta] for r <= 1
    double a1 = 0.0, b1 = 0.0; // phi(r) in [a1 r^delta, b1 r^D] for r >= 1
    double loglog_slope = 0.0; // least-squares slope of log phi vs log r

    double eval(double r) const {
        // step interpolation: envelope certificates are grid statements
        auto it = std::upper_bound(radii.begin(), radii.end(), r);
        if (it == radii.begin()) return phi.front();
        return phi[static_cast<std::size_t>(it - radii.begin()) - 1];
    }
};

struct GeometryConstants {
    double kappa = 1.0;
    double c_prime_mu = 1.0;  // smallest doubling constant found
    double d_mu = 0.0;        // doubling order log2(c_prime_mu)
    double c_mu = 1.0;        // c_prime_mu (2 kappa)^d_mu
    double doubling_slack = 0.0;

    bool reverse_ok = false;
    bool reverse_degenerate = false;
    std::string reverse_note;
    double c_tilde_mu = 0.0;
    double delta_mu = 0.0;

    std::optional<PhiFit> phi;

    RadiusWindow window;
};

// Doubling fit: c' = max mu(B(x,2r)) / mu(B(x,r)) over sampled (x, r), then
// raised if needed so the ball-ratio certificate holds with nonnegative slack
// on every sampled nested pair: mu(B1)/mu(B2) <= c (2 kappa r1/r2)^{log2 c}.
inline GeometryConstants estimate_doubling(const PointSpace& s, const RadiusWindow& window,
                                           const SamplePolicy& pol = {}) {
    GeometryConstants g;
    g.kappa = s.kappa();
    g.window = window;
    auto radii = window.radii();

    double cp = 1.0;
    for (double r : radii) {
        for (PointId x : pol.centers(s, pol.interior_only ? 2.0 * r : 0.0)) {
            double m1 = s.ball_measure(x, r);
            double m2 = s.ball_measure(x, 2.0 * r);
            if (m1 > 0) cp = std::max(cp, m2 / m1);
        }
    }

    // enforce the nested-pair certificate: smallest c with
    // c (2 kappa A)^{log2 c} >= ratio is ratio^{ln 2 / ln(2 kappa A)}
    auto centers = pol.centers(s);
    for (double r1 : radii)
        for (double r2 : radii) {
            if (r2 > r1) continue;
            double ratio_r = r1 / r2;
            for (PointId x : centers) {
                double m2 = s.ball_measure(x, r2);
                double m1 = s.ball_measure(x, r1);
                if (m2 <= 0 || m1 <= m2 * 1.0000000001) continue;
                double need = std::exp(std::log(m1 / m2) * std::log(2.0) /
                                       std::log(2.0 * s.kappa() * ratio_r));
                cp = std::max(cp, need);
            }
        }

    // one-ulp-scale inflation keeps the binding pair's slack nonnegative in
    // floating point; the degenerate all-singleton case stays exactly 1
    if (cp > 1.0) cp *= 1.0 + 1e-12;
    g.c_prime_mu = cp;
    g.d_mu = std::log2(cp);
    g.c_mu = cp * std::pow(2.0 * s.kappa(), g.d_mu);

    // worst certificate slack over the sampled pairs (>= 0 by construction)
    double worst = kInf;
    for (double r1 : radii)
        for (double r2 : radii) {
            if (r2 > r1) continue;
            for (PointId x : centers) {
                double m2 = s.ball_measure(x, r2);
                double m1 = s.ball_measure(x, r1);
                if (m2 <= 0) continue;
                worst = std::min(worst, g.c_mu * pow_n(r1 / r2, g.d_mu) - m1 / m2);
            }
        }
    g.doubling_slack = std::isfinite(worst) ? worst : 0.0;
    return g;
}

// Reverse doubling: fit (c_tilde, delta) with mu(B1)/mu(B2) >= c_tilde
// (r1/r2)^delta on sampled same-center nested pairs. delta is the largest
// exponent feasible with c_tilde = 1 over well-separated pairs; c_tilde then
// absorbs the rest. The annulus hypothesis is checked first and a violation
// is reported, not thrown.
inline void estimate_reverse_doubling(const PointSpace& s, const RadiusWindow& window,
                                      GeometryConstants& g, const SamplePolicy& pol = {}) {
    auto radii = window.radii();
    if (radii.size() == 1) {
        g.reverse_degenerate = true;
        g.reverse_ok = true;
        g.c_tilde_mu = 1.0;
        g.delta_mu = 0.0;
        g.reverse_note = "degenerate window r_min = r_max: any exponent certifies vacuously";
        return;
    }

    // annulus nonemptiness on the window: for sampled x and well-separated
    // window radii r < R the ball must keep growing unless it already covers
    // the whole model
    auto centers = pol.centers(s);
    for (PointId x : centers)
        for (std::size_t i = 0; i < radii.size(); ++i)
            for (std::size_t j = 0; j < i; ++j) {
                double R = radii[i], r = radii[j];
                if (R / r < 2.0) continue;
                std::size_t cR = s.ball_count(x, R);
                if (cR == s.ball_count(x, r) && cR < s.size()) {
                    g.reverse_ok = false;
                    g.reverse_note = "annulus B(x,R) \\ B(x,r) empty for x=" + std::to_string(x) +
                                     " r=" + fmt17(r) + " R=" + fmt17(R);
                    return;
                }
            }

    SamplePolicy interior_pol = pol;
    interior_pol.interior_only = true;
    double delta = kInf;
    for (std::size_t i = 0; i < radii.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) {
            double r1 = radii[i], r2 = radii[j];
            if (r1 / r2 < 2.0) continue;  // well-separated pairs set the slope
            for (PointId x : interior_pol.centers(s, r1)) {
                double m2 = s.ball_measure(x, r2);
                double m1 = s.ball_measure(x, r1);
                if (m2 <= 0) continue;
                delta = std::min(delta, std::log(m1 / m2) / std::log(r1 / r2));
            }
        }
    if (!std::isfinite(delta)) delta = 0.0;
    delta = std::max(delta, 0.0);

    double ct = 1.0;
    for (std::size_t i = 0; i < radii.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double r1 = radii[i], r2 = radii[j];
            for (PointId x : centers) {
                double m2 = s.ball_measure(x, r2);
                double m1 = s.ball_measure(x, r1);
                if (m2 <= 0) continue;
                ct = std::min(ct, (m1 / m2) / pow_n(r1 / r2, delta));
            }
        }

    g.reverse_ok = true;
    g.c_tilde_mu = ct;
    g.delta_mu = delta;
}

// Radial envelope phi(r) = mean_x mu(B(x,r)), monotonized, with the
// multiplicative envelope (a, b) and the power envelopes (a0,b0,a1,b1)
// derived against the fitted (d_mu, delta_mu).
inline PhiFit fit_phi(const PointSpace& s, const std::vector<double>& radius_grid,
                      const GeometryConstants& g, const SamplePolicy& pol = {}) {
    require(!radius_grid.empty(), "fit_phi: empty radius grid");
    PhiFit fit;
    fit.radii = radius_grid;
    std::sort(fit.radii.begin(), fit.radii.end());

    for (double r : fit.radii) {
        auto centers = pol.centers(s, pol.interior_only ? r : 0.0);
        KahanSum mean;
        for (PointId x : centers) mean.add(s.ball_measure(x, r));
        fit.phi.push_back(mean.value() / static_cast<double>(centers.size()));
    }
    for (std::size_t i = 1; i < fit.phi.size(); ++i)
        fit.phi[i] = std::max(fit.phi[i], fit.phi[i - 1]);

    double a = kInf, b = 0.0;
    for (std::size_t i = 0; i < fit.radii.size(); ++i) {
        auto centers = pol.centers(s, pol.interior_only ? fit.radii[i] : 0.0);
        for (PointId x : centers) {
            double m = s.ball_measure(x, fit.radii[i]);
            if (fit.phi[i] > 0) {
                a = std::min(a, m / fit.phi[i]);
                b = std::max(b, m / fit.phi[i]);
            }
        }
    }
    fit.a = std::isfinite(a) ? a : 1.0;
    fit.b = b > 0 ? b : 1.0;

    double a0 = kInf, b0 = 0.0, a1 = kInf, b1 = 0.0;
    for (std::size_t i = 0; i < fit.radii.size(); ++i) {
        double r = fit.radii[i], ph = fit.phi[i];
        if (ph <= 0) continue;
        if (r <= 1.0) {
            a0 = std::min(a0, ph / pow_n(r, g.d_mu));
            b0 = std::max(b0, ph / pow_n(r, g.delta_mu));
        }
        if (r >= 1.0) {
            a1 = std::min(a1, ph / pow_n(r, g.delta_mu));
            b1 = std::max(b1, ph / pow_n(r, g.d_mu));
        }
    }
    fit.a0 = std::isfinite(a0) ? a0 : 0.0;
    fit.b0 = b0;
    fit.a1 = std::isfinite(a1) ? a1 : 0.0;
    fit.b1 = b1;

    // log-log least squares for the dimension-trend reports
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < fit.radii.size(); ++i) {
        if (fit.phi[i] <= 0) continue;
        double x = std::log(fit.radii[i]), y = std::log(fit.phi[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++cnt;
    }
    if (cnt >= 2 && sxx * cnt - sx * sx > 0)
        fit.loglog_slope = (sxy * cnt - sx * sy) / (sxx * cnt - sx * sx);
    return fit;
}

inline GeometryConstants fit_geometry(const PointSpace& s, const RadiusWindow& window,
                                      const SamplePolicy& pol = {}) {
    GeometryConstants g = estimate_doubling(s, window, pol);
    estimate_reverse_doubling(s, window, g, pol);
    g.phi = fit_phi(s, window.radii(), g, pol);
    return g;
}

}  // namespace fmn
