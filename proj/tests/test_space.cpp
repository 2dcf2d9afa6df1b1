#include <catch2/catch_amalgamated.hpp>

#include "fmn/models.hpp"
#include "fmn/space.hpp"

using namespace fmn;

namespace {

// independent oracle: direct distance scan
std::vector<PointId> ball_by_scan(const PointSpace& s, PointId c, double r) {
    std::vector<PointId> out;
    for (PointId i = 0; i < s.size(); ++i)
        if (s.dist(c, i) < r) out.push_back(i);
    return out;
}

PointSpace random_cloud(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = rng.uniform(0, 10);
        ys[i] = rng.uniform(0, 10);
    }
    std::vector<double> dmat(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            dmat[i * n + j] = std::hypot(xs[i] - xs[j], ys[i] - ys[j]);
    return PointSpace::matrix("cloud", std::move(dmat), std::vector<double>(n, 1.0), 1.0);
}

}  // namespace

TEST_CASE("ball queries on the 4-point unit line") {
    auto s = grid1d(4, 1.0);

    auto b = s.ball(1, 1.5);
    REQUIRE(b == std::vector<PointId>{0, 1, 2});

    // r at or below the smallest positive distance leaves only the center
    auto tiny = s.ball(2, 1.0);
    REQUIRE(tiny == std::vector<PointId>{2});
    REQUIRE(s.ball(2, 0.5) == std::vector<PointId>{2});

    REQUIRE_THROWS_AS(s.ball(9, 1.0), std::invalid_argument);
}

TEST_CASE("ball membership matches a direct scan and is monotone in r") {
    auto s = random_cloud(50, 42);
    Rng rng(7);
    for (int t = 0; t < 40; ++t) {
        auto x = static_cast<PointId>(rng.next_below(s.size()));
        double r = rng.uniform(0.05, 12.0);
        double R = r + rng.uniform(0.0, 5.0);
        auto br = s.ball(x, r);
        REQUIRE(br == ball_by_scan(s, x, r));
        auto bR = s.ball(x, R);
        REQUIRE(std::includes(bR.begin(), bR.end(), br.begin(), br.end()));
        REQUIRE(std::find(br.begin(), br.end(), x) != br.end());
    }
}

TEST_CASE("line-mode balls agree with scans including squared metric ties") {
    auto s = sqline(64);
    Rng rng(11);
    for (int t = 0; t < 60; ++t) {
        auto x = static_cast<PointId>(rng.next_below(s.size()));
        double r = rng.uniform(0.5, 900.0);
        REQUIRE(s.ball(x, r) == ball_by_scan(s, x, r));
    }
    // exact tie: d(10, 13) = 9 must be excluded from B(10, 9)
    auto b = s.ball(10, 9.0);
    REQUIRE(std::find(b.begin(), b.end(), PointId{13}) == b.end());
    REQUIRE(std::find(b.begin(), b.end(), PointId{12}) != b.end());
}

TEST_CASE("measure is additive and empty-set measure is zero") {
    auto s = grid1d(4, 1.0);
    REQUIRE(s.measure({}) == 0.0);
    REQUIRE(s.measure({0, 2}) == 2.0);

    auto cloud = random_cloud(30, 3);
    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
        std::vector<PointId> A, B;
        for (PointId i = 0; i < cloud.size(); ++i) {
            if (rng.next_double() < 0.4) A.push_back(i);
            if (rng.next_double() < 0.4) B.push_back(i);
        }
        std::vector<PointId> U, I;
        std::set_union(A.begin(), A.end(), B.begin(), B.end(), std::back_inserter(U));
        std::set_intersection(A.begin(), A.end(), B.begin(), B.end(), std::back_inserter(I));
        double lhs = cloud.measure(U) + cloud.measure(I);
        double rhs = cloud.measure(A) + cloud.measure(B);
        REQUIRE(lhs == Catch::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("1-D interior ball cardinality has the exact combinatorial form") {
    auto s = grid1d(256, 1.0);
    double h = 1.0;
    for (double r : {1.5, 3.0, 7.25, 16.0, 40.0}) {
        for (PointId x = 64; x < 192; ++x) {
            REQUIRE(s.interior(x, r));
            std::size_t expect =
                2 * static_cast<std::size_t>(std::floor((r - 1e-9) / h)) + 1;
            REQUIRE(s.ball_count(x, r) == expect);
        }
    }
}

TEST_CASE("quasi-triangle certificates") {
    REQUIRE(grid1d(64).certify_quasi_triangle().ok);
    REQUIRE(grid2d(8).certify_quasi_triangle().ok);
    REQUIRE(tree(3, 2).certify_quasi_triangle().ok);

    auto sq = sqline(64);
    auto cert = sq.certify_quasi_triangle();
    REQUIRE(cert.ok);  // kappa = 2
    REQUIRE(cert.worst_ratio > 1.0);
    REQUIRE(cert.worst_ratio <= 2.0 + 1e-12);
}

TEST_CASE("doubling estimate on the 1-D grid") {
    auto s = grid1d(256, 1.0);
    RadiusWindow win{4.0, s.boundary_radius() / 2.0, 12};
    SamplePolicy pol;
    pol.interior_only = true;
    auto g = estimate_doubling(s, win, pol);

    REQUIRE(g.c_prime_mu == Catch::Approx(2.0).margin(0.4));
    REQUIRE(g.d_mu == Catch::Approx(1.0).margin(0.2));
    REQUIRE(g.c_mu == Catch::Approx(g.c_prime_mu * std::pow(2.0, g.d_mu)).epsilon(1e-12));
    REQUIRE(g.doubling_slack >= 0.0);
}

TEST_CASE("doubling estimate on the 2-D grid") {
    auto s = grid2d(32, 1.0);
    RadiusWindow win{4.0, s.boundary_radius() / 2.0, 10};
    SamplePolicy pol;
    pol.interior_only = true;
    auto g = estimate_doubling(s, win, pol);
    REQUIRE(g.d_mu == Catch::Approx(2.0).margin(0.4));
}

TEST_CASE("degenerate doubling window with sub-spacing radius") {
    auto s = grid1d(64, 1.0);
    RadiusWindow win{0.25, 0.25, 1};  // 2r = 0.5 below spacing: B(x,2r) = {x}
    auto g = estimate_doubling(s, win);
    REQUIRE(g.c_prime_mu == 1.0);
    REQUIRE(g.d_mu == 0.0);

    RadiusWindow bad{0.0, 1.0, 4};
    REQUIRE_THROWS_AS(estimate_doubling(s, bad), std::invalid_argument);
}

TEST_CASE("reverse doubling on the 1-D grid") {
    auto s = grid1d(256, 1.0);
    RadiusWindow win{4.0, s.boundary_radius() / 2.0, 12};
    auto g = fit_geometry(s, win);
    REQUIRE(g.reverse_ok);
    REQUIRE_FALSE(g.reverse_degenerate);
    REQUIRE(g.delta_mu == Catch::Approx(1.0).margin(0.2));
    REQUIRE(g.delta_mu <= g.d_mu + 1e-12);
    REQUIRE(g.c_tilde_mu > 0.0);

    // certificate holds on sampled nested pairs by construction
    for (double r1 : win.radii())
        for (double r2 : win.radii()) {
            if (r2 > r1) continue;
            for (PointId x = 0; x < s.size(); x += 17) {
                double m1 = s.ball_measure(x, r1), m2 = s.ball_measure(x, r2);
                REQUIRE(m1 / m2 >= g.c_tilde_mu * std::pow(r1 / r2, g.delta_mu) - 1e-9);
            }
        }
}

TEST_CASE("reverse doubling flags an empty annulus instead of crashing") {
    // main grid plus one isolated far cluster
    std::vector<double> coords;
    for (int i = 0; i < 40; ++i) coords.push_back(i);
    for (int i = 0; i < 5; ++i) coords.push_back(4000.0 + i);
    std::vector<double> w(coords.size(), 1.0);
    auto s = PointSpace::line("cluster", std::move(coords), std::move(w), 1.0, 1.0);

    GeometryConstants g = estimate_doubling(s, RadiusWindow{50.0, 400.0, 6});
    estimate_reverse_doubling(s, RadiusWindow{50.0, 400.0, 6}, g);
    REQUIRE_FALSE(g.reverse_ok);
    REQUIRE(g.reverse_note.find("annulus") != std::string::npos);
}

TEST_CASE("reverse doubling degenerate single-radius window") {
    auto s = grid1d(64, 1.0);
    GeometryConstants g = estimate_doubling(s, RadiusWindow{4.0, 4.0, 1});
    estimate_reverse_doubling(s, RadiusWindow{4.0, 4.0, 1}, g);
    REQUIRE(g.reverse_degenerate);
}

TEST_CASE("phi envelope on the 1-D grid interior window") {
    auto s = grid1d(256, 1.0);
    RadiusWindow win{4.0, s.boundary_radius() / 2.0, 10};
    SamplePolicy pol;
    pol.interior_only = true;
    auto g = estimate_doubling(s, win, pol);
    estimate_reverse_doubling(s, win, g, pol);

    auto fit = fit_phi(s, win.radii(), g, pol);
    REQUIRE(fit.b / fit.a <= 2.0 + 1e-12);
    for (std::size_t i = 0; i + 1 < fit.phi.size(); ++i)
        REQUIRE(fit.phi[i] <= fit.phi[i + 1]);
}

TEST_CASE("phi on a single-point space is trivial") {
    auto s = grid1d(1, 1.0);
    GeometryConstants g;
    auto fit = fit_phi(s, {0.5, 1.0, 2.0}, g);
    REQUIRE(fit.a == 1.0);
    REQUIRE(fit.b == 1.0);
}

TEST_CASE("phi log-log slope on the 2-D grid is near 2") {
    auto s = grid2d(32, 1.0);
    RadiusWindow win{4.0, s.boundary_radius() / 2.0, 10};
    SamplePolicy pol;
    pol.interior_only = true;
    auto g = estimate_doubling(s, win, pol);
    estimate_reverse_doubling(s, win, g, pol);
    auto fit = fit_phi(s, win.radii(), g, pol);
    REQUIRE(fit.loglog_slope >= 1.6);
    REQUIRE(fit.loglog_slope <= 2.4);
}

TEST_CASE("generate_space dispatch") {
    REQUIRE(generate_space("grid1d(4,1)").size() == 4);
    REQUIRE(generate_space("grid2d(8,1)").size() == 64);
    REQUIRE(generate_space("sqline(64)").kappa() == 2.0);
    REQUIRE(generate_space("tree(3,2)").size() == 15);
    REQUIRE_THROWS_AS(generate_space("moebius(3)"), std::invalid_argument);
}

TEST_CASE("exhaustive invariants on every shipped model below 1000 points") {
    for (auto* spec : {"grid1d(256,1)", "sqline(64)", "grid2d(16,1)", "tree(3,2)"}) {
        auto s = generate_space(spec);
        REQUIRE(s.size() <= 1000);
        auto cert = s.certify_quasi_triangle();
        INFO(spec);
        REQUIRE(cert.ok);

        // ball monotonicity in r, exhaustively over centers and radius pairs
        auto radii = log_grid(std::max(s.min_spacing() / 2.0, s.diam() * 1e-6),
                              s.diam() * 1.1, 8);
        for (PointId x = 0; x < s.size(); ++x) {
            std::size_t prev = 0;
            for (double r : radii) {
                auto b = s.ball(x, r);
                REQUIRE(b.size() >= prev);
                prev = b.size();
                for (PointId y : b) REQUIRE(s.dist(x, y) < r);
            }
        }
    }
}
