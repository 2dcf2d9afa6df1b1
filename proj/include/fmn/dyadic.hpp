#pragma once

// Nested cube systems on a point space: the scale-rho hierarchy with inner
// and outer ball certificates (rho > 1) and the Christ-style variant
// (rho < 1) whose achieved constants are reported rather than prescribed.
//
// Construction is net-based and deterministic: per generation a greedy
// maximal separated net in point-id order (coarser nets are subsets of finer
// ones), nearest-center assignment with ties to the lower center id, and
// nesting enforced by reassigning each finer cube wholly into the coarser
// cube containing its center. Invariants are certified afterwards, never
// assumed.

#include <span>

#include "fmn/constants.hpp"
#include "fmn/space.hpp"

namespace fmn {

struct CubeConstructionError : std::runtime_error {
    CubeConstructionError(const std::string& what, int gen, std::size_t cube, PointId point)
        : std::runtime_error(what), generation(gen), cube_index(cube), witness_point(point) {}
    int generation;
    std::size_t cube_index;
    PointId witness_point;
};

struct CubeLevel {
    int k = 0;         // generation index
    double scale = 0;  // rho^k
    std::vector<PointId> center;
    std::vector<std::uint32_t> off;      // CSR offsets into perm, size count()+1
    std::vector<PointId> perm;           // member points grouped by cube
    std::vector<std::uint32_t> cube_of;  // point -> cube index
    std::vector<std::uint32_t> parent;   // cube -> cube index in next coarser level
    std::vector<double> cube_measure;

    std::size_t count() const { return center.size(); }
    std::span<const PointId> members(std::size_t j) const {
        return {perm.data() + off[j], perm.data() + off[j + 1]};
    }
};

static constexpr std::uint32_t kNoParent = 0xffffffffu;

class CubeSystem {
public:
    const PointSpace& space() const { return *space_; }
    double rho() const { return rho_; }
    double separation_multiplier() const { return sep_mult_; }
    int k_finest() const { return levels_.front().k; }
    int k_coarsest() const { return levels_.back().k; }
    std::size_t level_count() const { return levels_.size(); }
    const CubeLevel& level(std::size_t i) const { return levels_[i]; }

    bool has_generation(int k) const {
        return rho_ > 1.0 ? (k >= k_finest() && k <= k_coarsest())
                          : (k <= k_finest() && k >= k_coarsest());
    }

    // generation k -> internal level index (levels are stored finest first)
    const CubeLevel& generation(int k) const {
        require(has_generation(k), "generation " + std::to_string(k) + " not built");
        std::size_t i = rho_ > 1.0 ? static_cast<std::size_t>(k - k_finest())
                                   : static_cast<std::size_t>(k_finest() - k);
        return levels_[i];
    }

    // T^k_r(x) = { i : E^k_i meets B(x, r) }
    std::vector<std::uint32_t> neighbor_T(int k, double r, PointId x) const {
        const CubeLevel& lev = generation(k);
        std::vector<std::uint32_t> out;
        if (space_->is_line() && line_contiguous_) {
            auto [lo, hi] = space_->ball_range(x, r);
            if (lo >= hi) return out;
            std::uint32_t a = lev.cube_of[lo], b = lev.cube_of[hi - 1];
            for (std::uint32_t i = a; i <= b; ++i) out.push_back(i);
            return out;
        }
        std::vector<char> seen(lev.count(), 0);
        for (PointId y : space_->ball(x, r)) seen[lev.cube_of[y]] = 1;
        for (std::uint32_t i = 0; i < lev.count(); ++i)
            if (seen[i]) out.push_back(i);
        return out;
    }

    // S^k_r(j) = union of T^k_r(y) over y in the cube
    std::vector<std::uint32_t> neighbor_S(int k, double r, std::uint32_t j) const {
        const CubeLevel& lev = generation(k);
        if (space_->is_line() && line_contiguous_) {
            PointId first = lev.perm[lev.off[j]];
            PointId last = lev.perm[lev.off[j + 1] - 1];
            auto [lo, _hi] = space_->ball_range(first, r);
            auto [_lo, hi] = space_->ball_range(last, r);
            (void)_hi;
            (void)_lo;
            std::vector<std::uint32_t> out;
            std::uint32_t a = lev.cube_of[lo], b = lev.cube_of[hi - 1];
            for (std::uint32_t i = a; i <= b; ++i) out.push_back(i);
            return out;
        }
        std::vector<char> seen(lev.count(), 0);
        for (PointId y : lev.members(j))
            for (PointId z : space_->ball(y, r)) seen[lev.cube_of[z]] = 1;
        std::vector<std::uint32_t> out;
        for (std::uint32_t i = 0; i < lev.count(); ++i)
            if (seen[i]) out.push_back(i);
        return out;
    }

protected:
    void build(const PointSpace& s, const std::vector<int>& gens,
               const std::vector<double>& scales, double sep_mult) {
        space_ = &s;
        sep_mult_ = sep_mult;
        std::size_t n = s.size();
        std::size_t L = scales.size();

        // greedy maximal separated nets, coarsest first, nested downwards
        std::vector<std::vector<PointId>> nets(L);
        for (std::size_t i = L; i-- > 0;) {
            const std::vector<PointId>& seed = (i + 1 < L) ? nets[i + 1] : nets[i];
            nets[i] = greedy_net(s, sep_mult * scales[i], (i + 1 < L) ? &seed : nullptr);
        }

        levels_.resize(L);
        std::vector<std::uint32_t> prev_assign;
        for (std::size_t i = 0; i < L; ++i) {
            CubeLevel& lev = levels_[i];
            lev.k = gens[i];
            lev.scale = scales[i];
            lev.center = nets[i];

            std::vector<std::uint32_t> vor = nearest_center(s, nets[i]);
            if (i == 0) {
                lev.cube_of = vor;
            } else {
                // nesting: a point's cube is the one holding its finer center
                std::vector<std::uint32_t> lift(levels_[i - 1].count());
                for (std::size_t c = 0; c < lift.size(); ++c)
                    lift[c] = vor[levels_[i - 1].center[c]];
                levels_[i - 1].parent = lift;
                lev.cube_of.resize(n);
                for (std::size_t y = 0; y < n; ++y)
                    lev.cube_of[y] = lift[prev_assign[y]];
            }
            prev_assign = lev.cube_of;
            fill_csr(s, lev);
        }
        levels_.back().parent.assign(levels_.back().count(), kNoParent);

        if (s.is_line()) {
            line_contiguous_ = true;
            for (const auto& lev : levels_)
                for (std::size_t j = 0; j + 1 < lev.count() && line_contiguous_; ++j)
                    if (lev.perm[lev.off[j + 1] - 1] > lev.perm[lev.off[j + 1]])
                        line_contiguous_ = false;
        }
    }

    static std::vector<PointId> greedy_net(const PointSpace& s, double sigma,
                                           const std::vector<PointId>* seed) {
        std::size_t n = s.size();
        std::vector<PointId> net;
        if (s.is_line()) {
            std::vector<double> seed_coords;
            if (seed)
                for (PointId p : *seed) seed_coords.push_back(s.coords()[p]);
            std::sort(seed_coords.begin(), seed_coords.end());
            double last_added = -kInf;
            bool have_added = false;
            std::vector<char> in_seed(n, 0);
            if (seed)
                for (PointId p : *seed) in_seed[p] = 1;
            for (PointId p = 0; p < n; ++p) {
                if (in_seed[p]) {
                    net.push_back(p);
                    have_added = true;
                    last_added = s.coords()[p];
                    continue;
                }
                double c = s.coords()[p];
                double best = kInf;
                if (have_added) best = std::min(best, c - last_added);
                if (!seed_coords.empty()) {
                    auto it = std::lower_bound(seed_coords.begin(), seed_coords.end(), c);
                    if (it != seed_coords.end()) best = std::min(best, *it - c);
                    if (it != seed_coords.begin()) best = std::min(best, c - *(it - 1));
                }
                double gap = best == kInf ? kInf : best;
                double metric_gap =
                    s.dpow() == 2.0 ? gap * gap : gap;  // line metric is |dx|^dpow
                if (metric_gap >= sigma) {
                    net.push_back(p);
                    have_added = true;
                    last_added = c;
                }
            }
            std::sort(net.begin(), net.end());
            return net;
        }
        std::vector<char> in_net(n, 0);
        if (seed)
            for (PointId p : *seed) {
                net.push_back(p);
                in_net[p] = 1;
            }
        for (PointId p = 0; p < n; ++p) {
            if (in_net[p]) continue;
            bool ok = true;
            for (PointId q : net)
                if (s.dist(p, q) < sigma) {
                    ok = false;
                    break;
                }
            if (ok) {
                net.push_back(p);
                in_net[p] = 1;
            }
        }
        std::sort(net.begin(), net.end());
        return net;
    }

    // nearest net center per point; ties resolved to the lower center id
    static std::vector<std::uint32_t> nearest_center(const PointSpace& s,
                                                     const std::vector<PointId>& net) {
        std::size_t n = s.size();
        std::vector<std::uint32_t> out(n, 0);
        if (net.size() == 1) return out;
        if (s.is_line()) {
            // net ids ascending means net coords ascending
            std::size_t c = 0;
            for (PointId p = 0; p < n; ++p) {
                while (c + 1 < net.size() && s.coords()[net[c + 1]] <= s.coords()[p]) ++c;
                std::uint32_t best = static_cast<std::uint32_t>(c);
                if (c + 1 < net.size()) {
                    double dl = s.coords()[p] - s.coords()[net[c]];
                    double dr = s.coords()[net[c + 1]] - s.coords()[p];
                    if (dr < dl) best = static_cast<std::uint32_t>(c + 1);
                }
                out[p] = best;
            }
            return out;
        }
        for (PointId p = 0; p < n; ++p) {
            double bd = kInf;
            std::uint32_t bi = 0;
            for (std::uint32_t i = 0; i < net.size(); ++i) {
                double d = s.dist(p, net[i]);
                if (d < bd) {
                    bd = d;
                    bi = i;
                }
            }
            out[p] = bi;
        }
        return out;
    }

    static void fill_csr(const PointSpace& s, CubeLevel& lev) {
        std::size_t n = s.size(), m = lev.center.size();
        lev.off.assign(m + 1, 0);
        for (std::uint32_t c : lev.cube_of) ++lev.off[c + 1];
        for (std::size_t j = 0; j < m; ++j) lev.off[j + 1] += lev.off[j];
        lev.perm.resize(n);
        std::vector<std::uint32_t> cursor(lev.off.begin(), lev.off.end() - 1);
        for (PointId p = 0; p < n; ++p) lev.perm[cursor[lev.cube_of[p]]++] = p;
        lev.cube_measure.resize(m);
        for (std::size_t j = 0; j < m; ++j) {
            KahanSum acc;
            for (PointId p : lev.members(j)) acc.add(s.weight(p));
            lev.cube_measure[j] = acc.value();
        }
    }

    const PointSpace* space_ = nullptr;
    double rho_ = 0.0;
    double sep_mult_ = 1.0;
    bool line_contiguous_ = false;
    std::vector<CubeLevel> levels_;
};

// ---------------------------------------------------------------------------
// Scale-rho system (rho > 1): generations m (finest) upward until one cube
// covers the space. Certified invariants:
//   (ii)  B(x_j, rho^k) cap X  subset  E_j  subset  B(x_j, rho^{k+1})
//   (iii) each generation partitions the point set
//   (iv)  nesting across generations is a forest
// ---------------------------------------------------------------------------

class DyadicSystem : public CubeSystem {
public:
    static double default_rho(double kappa) { return 8.0 * pow_int(kappa, 5); }

    DyadicSystem(const PointSpace& s, int m, double rho = 0.0) {
        rho_ = rho > 0 ? rho : default_rho(s.kappa());
        require(rho_ > 1.0, "dyadic system needs rho > 1");
        double sep = 4.0 * s.kappa() * s.kappa();
        require(rho_ >= sep, "dyadic system needs rho >= 4 kappa^2");

        std::vector<int> gens;
        std::vector<double> scales;
        int k = m;
        for (;;) {
            gens.push_back(k);
            scales.push_back(pow_int(rho_, k));
            if (sep * scales.back() > s.diam() || gens.size() > 64) break;
            ++k;
        }
        build(s, gens, scales, sep);
        require(levels_.back().count() == 1, "top generation must be a single cube");
        certify();
    }

    int m() const { return k_finest(); }

    // per-generation cube counts N_k
    std::vector<std::size_t> generation_sizes() const {
        std::vector<std::size_t> out;
        for (const auto& lev : levels_) out.push_back(lev.count());
        return out;
    }

    void certify() const {
        for (const auto& lev : levels_) {
            // (iii): partition
            std::size_t covered = 0;
            KahanSum mass;
            for (std::size_t j = 0; j < lev.count(); ++j) {
                covered += lev.members(j).size();
                mass.add(lev.cube_measure[j]);
                if (lev.members(j).empty())
                    throw CubeConstructionError("empty cube", lev.k, j, 0);
            }
            if (covered != space_->size())
                throw CubeConstructionError("generation does not cover the space", lev.k, 0, 0);
            if (std::abs(mass.value() - space_->total_measure()) >
                1e-12 * space_->total_measure())
                throw CubeConstructionError("partition measure drift", lev.k, 0, 0);

            // (ii) inner and outer
            for (std::size_t j = 0; j < lev.count(); ++j) {
                PointId c = lev.center[j];
                for (PointId y : space_->ball(c, lev.scale))
                    if (lev.cube_of[y] != j)
                        throw CubeConstructionError("inner ball escapes cube", lev.k, j, y);
                for (PointId y : lev.members(j))
                    if (!(space_->dist(c, y) < lev.scale * rho_))
                        throw CubeConstructionError("member outside outer ball", lev.k, j, y);
            }
        }
        // (iv): nesting is a forest
        for (std::size_t i = 0; i + 1 < levels_.size(); ++i) {
            const auto& fine = levels_[i];
            const auto& coarse = levels_[i + 1];
            for (PointId y = 0; y < space_->size(); ++y)
                if (fine.parent[fine.cube_of[y]] != coarse.cube_of[y])
                    throw CubeConstructionError("nesting violated", fine.k, fine.cube_of[y], y);
        }
    }
};

// ---------------------------------------------------------------------------
// Christ-style system (rho in (0,1)): generations k_min (coarsest) to k_max
// (finest). Constants are achieved, not prescribed: c1 = max diam(Q)/rho^k,
// c0 = min dist(center, complement)/rho^k, and the small-boundary pair
// (c2, eta) is fitted on a t-grid and reported.
// ---------------------------------------------------------------------------

class ChristSystem : public CubeSystem {
public:
    ChristSystem(const PointSpace& s, double rho = 0.0, int k_min = 0, int k_max = 0,
                 bool auto_range = true) {
        double kap = s.kappa();
        rho_ = rho > 0 ? rho : std::min(0.5, 1.0 / (2.0 * kap * kap));
        require(rho_ > 0 && rho_ < 1, "christ system needs rho in (0,1)");
        require(kap * rho_ < 1.0, "christ system needs kappa * rho < 1");
        double sep = (1.0 - kap * rho_) / (4.0 * kap * kap);

        if (auto_range) {
            k_min = 0;
            while (sep * pow_int(rho_, k_min) <= s.diam() && k_min > -60) --k_min;
            k_max = 1;
            while (sep * pow_int(rho_, k_max) >= s.min_spacing() && k_max < 60) ++k_max;
        }
        require(k_min <= k_max, "christ system: empty generation range");

        std::vector<int> gens;
        std::vector<double> scales;
        for (int k = k_max; k >= k_min; --k) {  // finest first
            gens.push_back(k);
            scales.push_back(pow_int(rho_, k));
        }
        build(s, gens, scales, sep);
        fit_achieved_constants();
        if (s.size() <= 4096) fit_boundary();
    }

    double c0() const { return c0_; }
    double c1() const { return c1_; }
    double c2() const { return c2_; }
    double eta() const { return eta_; }

    double cube_diameter(const CubeLevel& lev, std::size_t j) const {
        auto mem = lev.members(j);
        if (space_->is_line() && line_contiguous_)
            return space_->dist(mem.front(), mem.back());
        double d = 0.0;
        for (std::size_t a = 0; a < mem.size(); ++a)
            for (std::size_t b = a + 1; b < mem.size(); ++b)
                d = std::max(d, space_->dist(mem[a], mem[b]));
        return d;
    }

    // distance from the cube's center to the complement of the cube
    double center_to_complement(const CubeLevel& lev, std::size_t j) const {
        if (lev.count() == 1) return kInf;
        PointId c = lev.center[j];
        if (space_->is_line() && line_contiguous_) {
            double best = kInf;
            if (lev.off[j] > 0) best = std::min(best, space_->dist(c, lev.perm[lev.off[j] - 1]));
            if (lev.off[j + 1] < space_->size())
                best = std::min(best, space_->dist(c, lev.perm[lev.off[j + 1]]));
            return best;
        }
        double best = kInf;
        for (PointId y = 0; y < space_->size(); ++y)
            if (lev.cube_of[y] != j) best = std::min(best, space_->dist(c, y));
        return best;
    }

    // boundary-band fit: mu({x in Q : d(x, complement) <= t rho^k}) <= c2 t^eta mu(Q).
    // The slope is fitted on the informative regime only: cubes large enough
    // to resolve the band and band fractions strictly between 0 and 1; the
    // envelope constant c2 then covers every observation.
    void fit_boundary(std::vector<double> t_grid = {}) {
        if (t_grid.empty()) t_grid = log_grid(c1_ / 32.0, c1_ / 2.0, 8);
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::size_t cnt = 0;
        std::vector<std::pair<double, double>> pts;  // (t, ratio)
        for (const auto& lev : levels_) {
            if (lev.count() <= 1) continue;
            for (std::size_t j = 0; j < lev.count(); ++j) {
                bool resolved = lev.members(j).size() >= 8;
                for (double t : t_grid) {
                    KahanSum band;
                    for (PointId y : lev.members(j))
                        if (boundary_distance(lev, j, y) <= t * lev.scale)
                            band.add(space_->weight(y));
                    double ratio = band.value() / lev.cube_measure[j];
                    if (ratio <= 0) continue;
                    pts.emplace_back(t, ratio);
                    if (resolved && ratio < 1.0 && t * lev.scale >= space_->min_spacing()) {
                        double lx = std::log(t), ly = std::log(ratio);
                        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
                        ++cnt;
                    }
                }
            }
        }
        if (cnt >= 2 && sxx * cnt - sx * sx > 0)
            eta_ = std::max(0.0, (sxy * cnt - sx * sy) / (sxx * cnt - sx * sx));
        else
            eta_ = 0.0;
        c2_ = 1.0;
        for (auto& [t, ratio] : pts) c2_ = std::max(c2_, ratio / pow_n(t, eta_));
    }

private:
    double boundary_distance(const CubeLevel& lev, std::size_t j, PointId y) const {
        if (space_->is_line() && line_contiguous_) {
            double best = kInf;
            if (lev.off[j] > 0) best = std::min(best, space_->dist(y, lev.perm[lev.off[j] - 1]));
            if (lev.off[j + 1] < space_->size())
                best = std::min(best, space_->dist(y, lev.perm[lev.off[j + 1]]));
            return best;
        }
        double best = kInf;
        for (PointId z = 0; z < space_->size(); ++z)
            if (lev.cube_of[z] != j) best = std::min(best, space_->dist(y, z));
        return best;
    }

    void fit_achieved_constants() {
        c1_ = 0.0;
        c0_ = kInf;
        for (const auto& lev : levels_) {
            for (std::size_t j = 0; j < lev.count(); ++j) {
                c1_ = std::max(c1_, cube_diameter(lev, j) / lev.scale);
                double d = center_to_complement(lev, j);
                if (std::isfinite(d)) c0_ = std::min(c0_, d / lev.scale);
            }
        }
        if (!std::isfinite(c0_)) c0_ = 1.0;  // single-cube system
        if (c1_ == 0.0) c1_ = c0_;           // all-singleton degenerate case
    }

    double c0_ = 0.0, c1_ = 0.0, c2_ = 0.0, eta_ = 0.0;
};

// ---------------------------------------------------------------------------
// Generation index m_r: the unique integer with
//   rho^{m_r + 1} <= r / (2 kappa) < rho^{m_r + 2},
// located by integer search over exact integer powers so that boundary radii
// land on the left inequality.
// ---------------------------------------------------------------------------

inline int generation_index(double r, double rho, double kappa) {
    require(r > 0 && rho > 1.0 && kappa >= 1.0, "generation_index: bad arguments");
    double t = r / (2.0 * kappa);
    int m = static_cast<int>(std::floor(std::log(t) / std::log(rho))) - 1;
    while (pow_int(rho, m + 1) > t) --m;
    while (pow_int(rho, m + 2) <= t) ++m;
    return m;
}

// ---------------------------------------------------------------------------
// Measure-comparability certificate at one (generation, radius)
// ---------------------------------------------------------------------------

struct ComparabilityReport {
    bool pass = true;
    double n1 = 0, n2 = 0;
    double worst_slack_ball = kInf;  // min over (j, y) of N1 mu(E_j) - mu(B(y,r))
    double worst_slack_cube = kInf;  // min over (j, i in S(j)) of N2 mu(E_j) - mu(E_i)
    std::size_t cases = 0;
};

inline ComparabilityReport certify_measure_comparability(const CubeSystem& sys, int k, double r,
                                                         const GeometryConstants& g,
                                                         const ConstantOverrides& ovr = {}) {
    const CubeLevel& lev = sys.generation(k);
    const PointSpace& s = sys.space();
    auto nc = cardinality_constants(k, r, g, sys.rho(), s.kappa(), ovr);
    ComparabilityReport rep;
    rep.n1 = nc.n1;
    rep.n2 = nc.n2;
    for (std::size_t j = 0; j < lev.count(); ++j) {
        for (PointId y : lev.members(j)) {
            double slack = nc.n1 * lev.cube_measure[j] - s.ball_measure(y, r);
            rep.worst_slack_ball = std::min(rep.worst_slack_ball, slack);
            ++rep.cases;
        }
        for (std::uint32_t i : sys.neighbor_S(k, r, static_cast<std::uint32_t>(j))) {
            double slack = nc.n2 * lev.cube_measure[j] - lev.cube_measure[i];
            rep.worst_slack_cube = std::min(rep.worst_slack_cube, slack);
            ++rep.cases;
        }
    }
    rep.pass = rep.worst_slack_ball >= 0.0 && rep.worst_slack_cube >= 0.0;
    return rep;
}

}  // namespace fmn
