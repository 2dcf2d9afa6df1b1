#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "fmn/dyadic.hpp"
#include "fmn/models.hpp"

using namespace fmn;

TEST_CASE("generation index solves the defining inequality") {
    REQUIRE(generation_index(16.0, 8.0, 1.0) == 0);   // 8^1 <= 8 < 8^2
    REQUIRE(generation_index(1.0, 8.0, 1.0) == -2);   // 8^-1 <= 0.5 < 8^0
    REQUIRE(generation_index(2.0 * 1.0 * 64.0, 8.0, 1.0) == 1);  // r = 2 kappa rho^2 exactly

    // the defining inequality holds for random inputs
    Rng rng(3);
    for (int t = 0; t < 200; ++t) {
        double rho = 2.0 + rng.uniform(0, 20);
        double kappa = 1.0 + rng.uniform(0, 2);
        double r = std::exp(rng.uniform(-8, 8));
        int m = generation_index(r, rho, kappa);
        REQUIRE(pow_int(rho, m + 1) <= r / (2 * kappa));
        REQUIRE(r / (2 * kappa) < pow_int(rho, m + 2));
    }
}

TEST_CASE("generation index monotonicity") {
    for (double rho : {4.0, 8.0, 256.0}) {
        double prev_r = -1000;
        for (double r = 0.5; r < 5000; r *= 1.7) {
            int mr = generation_index(r, rho, 1.0);
            if (prev_r > -999) REQUIRE(mr >= prev_r);
            prev_r = mr;
        }
        // nonincreasing in kappa
        for (double r : {3.0, 17.0, 120.0}) {
            int prev = 1 << 20;
            for (double kap = 1.0; kap <= 4.0; kap += 0.5) {
                int m = generation_index(r, rho, kap);
                REQUIRE(m <= prev);
                prev = m;
            }
        }
    }
}

TEST_CASE("scale-rho system on the 64-point grid") {
    auto s = grid1d(64, 1.0);
    DyadicSystem sys(s, -1);
    REQUIRE(sys.rho() == 8.0);
    sys.certify();  // throws on any invariant violation

    // generation 0: member counts bounded by the outer ball size 2 rho + 1
    const auto& g0 = sys.generation(0);
    for (std::size_t j = 0; j < g0.count(); ++j)
        REQUIRE(g0.members(j).size() <= 2 * 8 + 1);

    // nesting across every generation pair, exhaustively
    for (int k1 = sys.k_finest(); k1 <= sys.k_coarsest(); ++k1)
        for (int k2 = k1 + 1; k2 <= sys.k_coarsest(); ++k2) {
            const auto& fine = sys.generation(k1);
            const auto& coarse = sys.generation(k2);
            for (PointId y = 0; y < s.size(); ++y) {
                // the coarse cube containing y contains the whole fine cube
                auto mem = fine.members(fine.cube_of[y]);
                for (PointId z : mem) REQUIRE(coarse.cube_of[z] == coarse.cube_of[y]);
            }
        }
}

TEST_CASE("single-point space has one cube per generation") {
    auto s = grid1d(1, 1.0);
    DyadicSystem sys(s, 0);
    for (std::size_t i = 0; i < sys.level_count(); ++i) {
        REQUIRE(sys.level(i).count() == 1);
        REQUIRE(sys.level(i).members(0).size() == 1);
    }
}

TEST_CASE("scale-rho systems certify on all shipped models") {
    DyadicSystem(grid1d(256, 1.0), -2).certify();
    DyadicSystem(grid2d(16, 1.0), -2).certify();
    DyadicSystem(sqline(64), -2).certify();
    DyadicSystem(tree(4, 2), -3).certify();
}

TEST_CASE("neighbor sets on a singleton generation") {
    auto s = grid1d(64, 1.0);
    DyadicSystem sys(s, -1);
    // generation -1 has scale 1/8: singleton cubes on the unit grid
    const auto& lev = sys.generation(-1);
    REQUIRE(lev.count() == 64);

    // r below the gap to any other cube
    auto t_small = sys.neighbor_T(-1, 0.5, 30);
    REQUIRE(t_small.size() == 1);
    REQUIRE(lev.center[t_small[0]] == 30);

    // r = 2.5 at an interior point: five singleton cubes meet the ball
    REQUIRE(sys.neighbor_T(-1, 2.5, 30).size() == 5);

    auto s_small = sys.neighbor_S(-1, 0.5, 30);
    REQUIRE(s_small == std::vector<std::uint32_t>{30});
}

TEST_CASE("neighbor_S symmetry holds exhaustively on the 64-point grid") {
    auto s = grid1d(64, 1.0);
    DyadicSystem sys(s, -1);
    for (int k : {-1, 0}) {
        const auto& lev = sys.generation(k);
        for (double r : {1.5, 4.0, 11.0}) {
            std::vector<std::set<std::uint32_t>> S(lev.count());
            for (std::uint32_t j = 0; j < lev.count(); ++j) {
                auto v = sys.neighbor_S(k, r, j);
                S[j] = std::set<std::uint32_t>(v.begin(), v.end());
            }
            for (std::uint32_t j = 0; j < lev.count(); ++j)
                for (std::uint32_t i : S[j]) REQUIRE(S[i].count(j) == 1);
        }
    }
}

TEST_CASE("neighbor sets agree with a brute-force scan") {
    auto s = sqline(64);
    DyadicSystem sys(s, -2);
    for (int k = sys.k_finest(); k <= sys.k_coarsest(); ++k) {
        const auto& lev = sys.generation(k);
        for (double r : {2.0, 40.0, 300.0}) {
            for (PointId x = 0; x < s.size(); x += 7) {
                std::set<std::uint32_t> expect;
                for (PointId y : s.ball(x, r)) expect.insert(lev.cube_of[y]);
                auto got = sys.neighbor_T(k, r, x);
                REQUIRE(std::set<std::uint32_t>(got.begin(), got.end()) == expect);
            }
        }
    }
}

TEST_CASE("cardinality constants: formulas and uniform domination") {
    GeometryConstants g;
    g.kappa = 1.0;
    g.c_prime_mu = 2.0;
    g.d_mu = 1.0;
    g.c_mu = 4.0;

    auto c = cardinality_constants(0, 8.0, g, 8.0, 1.0);
    REQUIRE(c.n1 == Catch::Approx(64.0).epsilon(1e-14));  // 4 (8 + 8)

    GeometryConstants flat = g;
    flat.d_mu = 0.0;
    auto c0 = cardinality_constants(2, 5.0, flat, 8.0, 1.0);
    REQUIRE(c0.n1 == flat.c_mu);
    REQUIRE(c0.n2 == flat.c_mu);
    REQUIRE(c0.n3 == flat.c_mu * flat.c_mu);

    // N_i(m_r, r) <= N_i* whenever 2 kappa rho^{m_r+1} <= r
    for (double kappa : {1.0, 2.0}) {
        double rho = 8.0 * pow_int(kappa, 5);
        GeometryConstants gg;
        gg.kappa = kappa;
        gg.c_prime_mu = 2.7;
        gg.d_mu = std::log2(2.7);
        gg.c_mu = 2.7 * std::pow(2 * kappa, gg.d_mu);
        auto star = cardinality_constants_uniform(gg, rho, kappa);
        for (double r = 0.3; r < 1e6; r *= 1.9) {
            int mr = generation_index(r, rho, kappa);
            REQUIRE(2 * kappa * pow_int(rho, mr + 1) <= r);
            auto ci = cardinality_constants(mr, r, gg, rho, kappa);
            REQUIRE(ci.n1 <= star.n1 * (1 + 1e-12));
            REQUIRE(ci.n2 <= star.n2 * (1 + 1e-12));
            REQUIRE(ci.n3 <= star.n3 * (1 + 1e-12));
        }
    }
}

TEST_CASE("cardinality certificates #T <= N2 and #S <= N3") {
    for (auto* sp : {"grid1d(256,1)", "sqline(64)"}) {
        auto s = generate_space(sp);
        auto g = fit_geometry(s, default_window(s));
        DyadicSystem sys(s, -2);
        for (double r : log_grid(std::max(1.0, s.min_spacing()), s.boundary_radius(), 5)) {
            int mr = generation_index(r, sys.rho(), s.kappa());
            for (int k = std::max(mr, sys.k_finest());
                 k <= std::min(mr + 2, sys.k_coarsest()); ++k) {
                auto nc = cardinality_constants(k, r, g, sys.rho(), s.kappa());
                const auto& lev = sys.generation(k);
                for (PointId x = 0; x < s.size(); x += 5)
                    REQUIRE(static_cast<double>(sys.neighbor_T(k, r, x).size()) <= nc.n2);
                for (std::uint32_t j = 0; j < lev.count(); ++j)
                    REQUIRE(static_cast<double>(sys.neighbor_S(k, r, j).size()) <= nc.n3);
            }
        }
    }
}

TEST_CASE("measure comparability certificate") {
    auto s = grid1d(256, 1.0);
    auto g = fit_geometry(s, default_window(s));
    DyadicSystem sys(s, -2);
    for (double r : {4.0, 16.0, 60.0}) {
        int k = generation_index(r, sys.rho(), s.kappa());
        if (!sys.has_generation(k)) continue;
        auto rep = certify_measure_comparability(sys, k, r, g);
        REQUIRE(rep.pass);
        REQUIRE(rep.worst_slack_ball >= 0.0);
        REQUIRE(rep.worst_slack_cube >= 0.0);
    }

    // kappa = 2 model exercises the kappa > 1 constants
    auto sq = sqline(64);
    auto gq = fit_geometry(sq, default_window(sq));
    DyadicSystem sysq(sq, -2);
    for (double r : {16.0, 120.0, 400.0}) {
        int k = generation_index(r, sysq.rho(), sq.kappa());
        if (!sysq.has_generation(k)) continue;
        auto rep = certify_measure_comparability(sysq, k, r, gq);
        REQUIRE(rep.pass);
    }

    // singleton generation with r below the spacing: S(j) = {j} and the
    // cube bound is tight within each class
    DyadicSystem fine(s, -2);
    auto rep = certify_measure_comparability(fine, -2, 0.5, g);
    REQUIRE(rep.pass);
}

TEST_CASE("christ system on the 1-D grid") {
    auto s = grid1d(256, 1.0);
    ChristSystem chr(s);
    REQUIRE(chr.rho() == 0.5);
    REQUIRE(chr.c0() > 0.0);
    REQUIRE(chr.c1() < kInf);

    // partitions and nesting
    for (std::size_t i = 0; i < chr.level_count(); ++i) {
        const auto& lev = chr.level(i);
        std::size_t covered = 0;
        for (std::size_t j = 0; j < lev.count(); ++j) covered += lev.members(j).size();
        REQUIRE(covered == s.size());
    }
    for (std::size_t i = 0; i + 1 < chr.level_count(); ++i) {
        const auto& fine = chr.level(i);
        const auto& coarse = chr.level(i + 1);
        for (PointId y = 0; y < s.size(); ++y)
            REQUIRE(fine.parent[fine.cube_of[y]] == coarse.cube_of[y]);
    }

    // diameter and inner-ball achieved constants hold by construction
    for (std::size_t i = 0; i < chr.level_count(); ++i) {
        const auto& lev = chr.level(i);
        for (std::size_t j = 0; j < lev.count(); ++j) {
            REQUIRE(chr.cube_diameter(lev, j) <= chr.c1() * lev.scale * (1 + 1e-12));
            for (PointId y : s.ball(lev.center[j], chr.c0() * lev.scale * (1 - 1e-12)))
                REQUIRE(lev.cube_of[y] == j);
        }
    }

    // generations below the spacing are singletons; the nesting invariant
    // is then trivial
    const auto& finest = chr.level(0);
    REQUIRE(finest.count() == s.size());

    // boundary fit: eta near 1 on an interval-cube system
    REQUIRE(chr.eta() == Catch::Approx(1.0).margin(0.3));
    REQUIRE(chr.c2() >= 1.0);
}

TEST_CASE("christ system respects a requested generation range") {
    auto s = grid1d(1 << 12, 1.0);
    int N = 3;
    int k_min = -(1 << N) - 1;  // -9
    ChristSystem chr(s, 0.5, k_min, N, false);
    REQUIRE(chr.has_generation(k_min));
    REQUIRE(chr.has_generation(N));
    REQUIRE(chr.generation(k_min).count() >= 2);
}
