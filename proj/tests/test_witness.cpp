#include <catch2/catch_amalgamated.hpp>

#include "fmn/witness.hpp"

using namespace fmn;

namespace {
struct WitnessFixture {
    PointSpace s;
    GeometryConstants geo;
    ChristSystem christ;
    WitnessFixture(std::size_t n, int N, double h = 1.0)
        : s(grid1d(n, h)),
          geo(fit_geometry(s, default_window(s),
                           [] {
                               SamplePolicy p;
                               p.interior_only = true;
                               return p;
                           }())),
          christ(witness_christ(s, N)) {}
};
}  // namespace

TEST_CASE("single-stage witness is one cube with finite norms") {
    WitnessFixture fx(1 << 12, 3);
    auto [f, plan] = build_witness(fx.s, fx.christ, fx.geo, 1, 1);
    REQUIRE(plan.stages[1].complete);
    REQUIRE(f.support().size() == plan.stage_sets[1].size());
    REQUIRE(plan.m == Catch::Approx(fx.s.measure(plan.stage_sets[1])));
    // indicator: the weak quasinorm is mu(E)^{1/alpha} exactly
    double m = plan.m;
    REQUIRE(lorentz_quasinorm(f, 2.0, kInf) == Catch::Approx(std::sqrt(m)).epsilon(1e-13));
    REQUIRE(std::isfinite(fractional_mean_norm(f, NormParams(1, 2, 4),
                                               log_grid(1.0, fx.s.boundary_radius(), 8))
                              .value));
}

TEST_CASE("witness stages hit their measure brackets") {
    WitnessFixture fx(1 << 12, 3);
    auto [f, plan] = build_witness(fx.s, fx.christ, fx.geo, 1, 3);
    REQUIRE(plan.all_complete);
    REQUIRE(plan.stage1_lower <= plan.m * (1 + 1e-12));
    REQUIRE(plan.m <= plan.stage1_upper * (1 + 1e-12));
    for (int n = 1; n <= 3; ++n) {
        const auto& st = plan.stages[static_cast<std::size_t>(n)];
        REQUIRE(st.complete);
        REQUIRE(st.achieved >= plan.m);
        REQUIRE(st.achieved < plan.m + st.bracket_width);
        if (n >= 2) {
            REQUIRE(st.min_separation > st.separation_threshold);
            REQUIRE(st.max_proximity < pow_int(fx.christ.rho(), n));
        }
    }
    // stage sets are pairwise disjoint
    for (int a = 1; a <= 3; ++a)
        for (int b = a + 1; b <= 3; ++b) {
            std::vector<PointId> inter;
            std::set_intersection(plan.stage_sets[a].begin(), plan.stage_sets[a].end(),
                                  plan.stage_sets[b].begin(), plan.stage_sets[b].end(),
                                  std::back_inserter(inter));
            REQUIRE(inter.empty());
        }
}

TEST_CASE("witness reports the maximal feasible stage when the space is too small") {
    auto s = grid1d(256, 1.0);
    SamplePolicy pol;
    pol.interior_only = true;
    auto geo = fit_geometry(s, default_window(s), pol);
    // stage 4 needs scale 2^17, far beyond this diameter
    auto christ = witness_christ(s, 4);
    try {
        build_witness(s, christ, geo, 1, 4);
        FAIL("expected a structured witness failure");
    } catch (const WitnessError& e) {
        REQUIRE(e.max_feasible < 4);
        REQUIRE(e.max_feasible >= 2);  // scale 2^9 = 512 also exceeds diam 255
    }
}

TEST_CASE("witness certificate on a 4096-point grid, stages 1..3") {
    WitnessFixture fx(1 << 12, 3);
    auto [f, plan] = build_witness(fx.s, fx.christ, fx.geo, 1, 3);
    auto grid = log_grid(0.5, fx.s.boundary_radius(), 16);
    auto cert = certify_witness(fx.s, fx.christ, fx.geo, plan, NormParams(1, 2, 4), grid);
    REQUIRE(cert.brackets_ok);
    REQUIRE(cert.separation_ok);
    REQUIRE(cert.norms_bounded);
    REQUIRE(cert.weak_growth);
    REQUIRE(cert.trend_decreasing);
    REQUIRE(cert.pass);
    REQUIRE(cert.shape_exponent ==
            Catch::Approx(fx.geo.d_mu * (0.5 - 1.0) + fx.geo.delta_mu * (1.0 - 0.25)));
    REQUIRE(cert.worst_stage_slack >= 0.0);

    // weak quasinorms grow like the accumulated measure
    for (std::size_t i = 1; i < cert.weak_quasinorms.size(); ++i)
        REQUIRE(cert.weak_quasinorms[i] > cert.weak_quasinorms[i - 1]);
}

TEST_CASE("ball-disjointness radius at every feasible stage") {
    WitnessFixture fx(1 << 12, 3);
    auto [f, plan] = build_witness(fx.s, fx.christ, fx.geo, 1, 3);
    for (int n = 2; n <= 3; ++n) {
        auto rep = separation_ball_disjointness(fx.s, fx.christ, plan, n);
        REQUIRE(rep.positive);
        REQUIRE(rep.pass);
    }
}

TEST_CASE("multi-cube stages on a fine grid still satisfy disjointness") {
    // spacing 0.02 makes generation-n cubes hold several points, so stages
    // need more than one cube to reach the target measure
    auto s = grid1d(6000, 0.02);
    SamplePolicy pol;
    pol.interior_only = true;
    auto geo = fit_geometry(s, default_window(s), pol);
    auto christ = witness_christ(s, 2);
    auto [f, plan] = build_witness(s, christ, geo, 1, 2);
    REQUIRE(plan.stages[2].complete);
    if (plan.stages[2].fine_cubes.size() >= 2) {
        auto rep = separation_ball_disjointness(s, christ, plan, 2);
        REQUIRE(rep.positive);
        REQUIRE(rep.pass);
        REQUIRE(rep.checked > 0);
    }
}
