#include <catch2/catch_amalgamated.hpp>

#include "fmn/function.hpp"
#include "fmn/models.hpp"

using namespace fmn;

namespace {
const PointSpace& line4() {
    static PointSpace s = grid1d(4, 1.0);
    return s;
}
SampledFunction f3102() { return SampledFunction::real(line4(), {3, 1, 0, 2}); }
}  // namespace

TEST_CASE("lebesgue norms on the 4-point line") {
    auto z = SampledFunction::zero(line4());
    for (double p : {1.0, 2.0, 4.0, kInf}) REQUIRE(lebesgue_norm(z, p) == 0.0);

    auto f = f3102();
    REQUIRE(lebesgue_norm(f, 2.0) == Catch::Approx(std::sqrt(14.0)).epsilon(1e-14));
    REQUIRE(lebesgue_norm(f, kInf) == 3.0);

    // tiny values survive the power path
    std::vector<double> tiny(4, 0.0);
    tiny[1] = 1e-300;
    auto g = SampledFunction::real(line4(), tiny);
    REQUIRE(lebesgue_norm(g, 4.0) > 0.0);
}

TEST_CASE("distribution function") {
    auto f = f3102();
    REQUIRE(distribution(f, 1.5) == 2.0);
    REQUIRE(distribution(f, 3.0) == 0.0);
    REQUIRE(distribution(f, 5.0) == 0.0);

    double prev = kInf;
    for (double a = 0.1; a < 4.0; a += 0.1) {
        double cur = distribution(f, a);
        REQUIRE(cur <= prev);
        prev = cur;
    }
}

TEST_CASE("decreasing rearrangement") {
    auto f = f3102();
    REQUIRE(decreasing_rearrangement(f, 2.5) == 1.0);
    REQUIRE(decreasing_rearrangement(f, 4.0) == 0.0);
    REQUIRE(decreasing_rearrangement(f, 5.0) == 0.0);
    REQUIRE(decreasing_rearrangement(f, 0.5) == 3.0);  // just below the first jump

    Rearrangement re(f);
    double prev = kInf;
    for (double t = 0.05; t < 5.0; t += 0.05) {
        double cur = re.f_star(t);
        REQUIRE(cur <= prev);
        prev = cur;
    }
}

TEST_CASE("average rearrangement") {
    auto f = f3102();
    REQUIRE(average_rearrangement(f, 2.0) == Catch::Approx(2.5).epsilon(1e-14));

    auto c = SampledFunction::real(line4(), {2.5, 2.5, 2.5, 2.5});
    for (double t : {0.5, 1.0, 3.0, 4.0})
        REQUIRE(average_rearrangement(c, t) == Catch::Approx(2.5).epsilon(1e-14));

    Rearrangement re(f);
    for (double t = 0.05; t < 5.0; t += 0.05) REQUIRE(re.f_star_avg(t) >= re.f_star(t) - 1e-15);
    double prev = kInf;
    for (double t = 0.05; t < 5.0; t += 0.05) {
        double cur = re.f_star_avg(t);
        REQUIRE(cur <= prev + 1e-15);
        prev = cur;
    }
}

TEST_CASE("weak Lorentz identity sup_t t^{1/p} f_* = sup_a a lambda^{1/p}") {
    auto s = grid1d(64, 0.5);
    Rng rng(99);
    for (int trial = 0; trial < 12; ++trial) {
        std::vector<double> v(s.size());
        for (auto& x : v) x = rng.next_double() < 0.2 ? 0.0 : rng.uniform(0, 5);
        auto f = SampledFunction::real(s, v);
        for (double p : {1.0, 1.5, 2.0, 4.0}) {
            LorentzEvaluator ev(f);
            double lhs = ev.quasinorm(p, kInf);
            double rhs = ev.weak_from_lambda(p);
            if (lhs == 0.0)
                REQUIRE(rhs == 0.0);
            else
                REQUIRE(std::abs(lhs - rhs) <= 1e-12 * (lhs + rhs));
        }
    }
}

TEST_CASE("indicator quasinorm is m^{1/p}") {
    auto s = grid1d(64, 0.5);
    auto f = SampledFunction::indicator(s, {3, 4, 5, 10});
    double m = 4 * 0.5;
    for (double p : {1.0, 2.0, 4.0})
        REQUIRE(lorentz_quasinorm(f, p, kInf) ==
                Catch::Approx(std::pow(m, 1.0 / p)).epsilon(1e-14));
    REQUIRE(lorentz_quasinorm(SampledFunction::zero(s), 2.0, 3.0) == 0.0);
    REQUIRE(lorentz_norm(SampledFunction::zero(s), 2.0, 3.0) == 0.0);
}

TEST_CASE("||f||*_{p,p} recovers the Lebesgue norm") {
    auto s = grid1d(32, 1.0);
    Rng rng(5);
    std::vector<double> v(s.size());
    for (auto& x : v) x = rng.uniform(0, 3);
    auto f = SampledFunction::real(s, v);
    for (double p : {1.0, 2.0, 3.5}) {
        double a = lorentz_quasinorm(f, p, p);
        double b = lebesgue_norm(f, p);
        REQUIRE(std::abs(a - b) <= 1e-10 * (a + b));
    }
}

TEST_CASE("layer cake equals the direct sum") {
    auto s = grid1d(48, 0.25);
    Rng rng(17);
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<double> v(s.size());
        for (auto& x : v) x = rng.next_double() < 0.3 ? 0.0 : rng.uniform(0, 7);
        auto f = SampledFunction::real(s, v);
        for (double p : {1.0, 2.0, 4.0}) {
            double a = layer_cake_pnorm(f, p);
            double b = lebesgue_norm(f, p);
            REQUIRE(std::abs(a - b) <= 1e-10 * (a + b + 1e-300));
        }
    }
}

TEST_CASE("norms are absolutely homogeneous") {
    auto s = grid1d(32, 1.0);
    Rng rng(23);
    std::vector<std::complex<double>> v(s.size());
    for (auto& x : v) x = std::complex<double>(rng.uniform(-2, 2), rng.uniform(-1, 1));
    SampledFunction f(s, v);
    std::complex<double> c(-3.0, 4.0);  // |c| = 5
    auto g = f.scaled(c);
    for (double p : {1.0, 2.0, kInf}) {
        REQUIRE(lebesgue_norm(g, p) == Catch::Approx(5.0 * lebesgue_norm(f, p)).epsilon(1e-12));
    }
    REQUIRE(lorentz_quasinorm(g, 2.0, 3.0) ==
            Catch::Approx(5.0 * lorentz_quasinorm(f, 2.0, 3.0)).epsilon(1e-12));
    REQUIRE(lorentz_norm(g, 2.0, 3.0) ==
            Catch::Approx(5.0 * lorentz_norm(f, 2.0, 3.0)).epsilon(1e-12));
}

TEST_CASE("averaged Lorentz norm dominates the quasinorm and obeys the triangle") {
    auto s = grid1d(40, 1.0);
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> v(s.size()), w(s.size());
        for (auto& x : v) x = rng.next_double() < 0.25 ? 0.0 : rng.uniform(0, 4);
        for (auto& x : w) x = rng.next_double() < 0.25 ? 0.0 : rng.uniform(0, 4);
        auto f = SampledFunction::real(s, v);
        auto g = SampledFunction::real(s, w);
        auto fg = f.plus(g);
        for (double p : {1.5, 2.0, 4.0}) {
            for (double q : {1.0, 2.0, kInf}) {
                double nf = lorentz_norm(f, p, q);
                double ng = lorentz_norm(g, p, q);
                double nfg = lorentz_norm(fg, p, q);
                REQUIRE(nfg <= (nf + ng) * (1.0 + 1e-10));
                // f^*-based norm dominates the f_*-based quasinorm
                REQUIRE(lorentz_quasinorm(f, p, q) <= nf * (1.0 + 1e-10));
            }
        }
    }
}

TEST_CASE("infinite and degenerate Lorentz indices") {
    auto s = grid1d(8, 1.0);
    auto f = SampledFunction::real(s, {1, 2, 0, 0, 1, 0, 0, 3});
    REQUIRE(lorentz_quasinorm(f, kInf, kInf) == 3.0);  // reduces to sup
    REQUIRE(std::isinf(lorentz_quasinorm(f, kInf, 2.0)));
    REQUIRE(std::isinf(lorentz_norm(f, 1.0, 2.0)));  // averaged tail not integrable
    REQUIRE(lorentz_norm(f, 1.0, kInf) ==
            Catch::Approx(lebesgue_norm(f, 1.0)).epsilon(1e-12));
}

TEST_CASE("power profile on the grid populates weak-L^a beyond L^a") {
    // f(x) = |x - x0|^{-1/a} truncated: ||f||*_{a,inf} stays bounded while
    // ||f||_a grows like log n
    double alpha = 2.0;
    double prev_leb = 0.0;
    for (std::size_t n : {64u, 256u, 1024u}) {
        auto s = grid1d(n, 1.0);
        std::vector<double> v(n);
        auto c = static_cast<double>(n / 2);
        for (std::size_t i = 0; i < n; ++i) {
            double d = std::abs(static_cast<double>(i) - c);
            v[i] = d == 0.0 ? 1.0 : std::pow(d, -1.0 / alpha);
        }
        auto f = SampledFunction::real(s, v);
        REQUIRE(lorentz_quasinorm(f, alpha, kInf) < 3.0);
        double leb = lebesgue_norm(f, alpha);
        REQUIRE(leb > prev_leb);
        prev_leb = leb;
    }
}
