#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "paths.hpp"
#include "rng.hpp"

using namespace abe;

namespace {

GaussianDiag g1(double mean, double var) { return GaussianDiag({mean}, {var}); }

PathSpec pair_geo() {
    return PathSpec::geometric(g1(0.0, 1.0),
                               UnnormalizedModel::simply_unnormalized(g1(0.0, 2.0)));
}

std::vector<double> random_point(Rng& rng, std::size_t dim, double scale) {
    std::vector<double> x(dim);
    for (auto& xi : x) xi = scale * rng.normal();
    return x;
}

} // namespace

TEST_CASE("schedule weights: endpoints and monotonicity") {
    for (Schedule s : {Schedule::vanilla(), Schedule::oracle(0.3),
                       Schedule::oracle(7.0), Schedule::oracle_trig(0.3),
                       Schedule::oracle_trig(7.0)}) {
        CHECK(s.weight(0.0) == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(s.weight(1.0) == doctest::Approx(1.0).epsilon(1e-15));
        double prev = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            const double w = s.weight(i / 1000.0);
            CHECK(w >= prev - 1e-12);
            CHECK(w >= -1e-12);
            CHECK(w <= 1.0 + 1e-12);
            prev = w;
        }
    }
    CHECK_THROWS_AS(Schedule::oracle(0.0), Error);
    CHECK_THROWS_AS(Schedule::oracle_trig(-1.0), Error);
}

TEST_CASE("geometric log density: endpoints and hand value") {
    PathSpec spec = pair_geo();
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        auto x = random_point(rng, 1, 3.0);
        CHECK(geometric_log_f(spec, 0.0, x) ==
              doctest::Approx(log_density(spec.p0, x)).epsilon(1e-12));
        CHECK(geometric_log_f(spec, 1.0, x) ==
              doctest::Approx(log_density_unnorm(spec.f1, x)).epsilon(1e-12));
    }
    const std::vector<double> one{1.0};
    const double expected =
        0.5 * (-0.5 - 0.5 * std::log(2.0 * std::numbers::pi)) + 0.5 * (-0.25);
    CHECK(geometric_log_f(spec, 0.5, one) == doctest::Approx(expected).epsilon(1e-12));
    CHECK_THROWS_AS(geometric_log_f(spec, 1.5, one), Error);
}

TEST_CASE("geometric gaussian point: interpolated parameters and log Z") {
    PathSpec spec = pair_geo();
    auto [p_start, z_start] = geometric_gaussian_point(spec, 0.0);
    CHECK(p_start.var[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(z_start == doctest::Approx(0.0).epsilon(1e-12));

    auto [p_end, z_end] = geometric_gaussian_point(spec, 1.0);
    CHECK(p_end.var[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(z_end == doctest::Approx(log_partition(spec.f1.theta)).epsilon(1e-12));

    auto [p_mid, z_mid] = geometric_gaussian_point(spec, 0.5);
    CHECK(p_mid.var[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    (void)z_mid;
}

TEST_CASE("geometric log Z matches the interpolated-parameter identity") {
    // log Z_t = logZ(theta_t) - (1-t) logZ(theta_0) + t log_scale
    GaussianDiag p0({0.2}, {0.9});
    UnnormalizedModel f1 = UnnormalizedModel::simply_unnormalized(g1(-0.5, 1.8));
    f1.log_scale = 0.7;
    PathSpec spec = PathSpec::geometric(p0, f1);
    for (double t : {0.0, 0.25, 0.6, 1.0}) {
        auto [g, log_zt] = geometric_gaussian_point(spec, t);
        // consistency: f_t(x) / p_t(x) must equal Z_t at an arbitrary point
        const std::vector<double> x{0.4};
        const double ratio = geometric_log_f(spec, t, x) - log_density(g, x);
        CHECK(ratio == doctest::Approx(log_zt).epsilon(1e-10));
    }
}

TEST_CASE("arithmetic point: Table-2 weights") {
    // vanilla with Z1 = 1 (normalized target): w_tilde = t
    PathSpec vanilla = PathSpec::arithmetic(
        g1(0.0, 1.0), UnnormalizedModel::normalized(g1(0.0, 2.0)),
        Schedule::vanilla());
    for (double t : {0.0, 0.1, 0.5, 0.9, 1.0})
        CHECK(arithmetic_point(vanilla, t).w_norm ==
              doctest::Approx(t).epsilon(1e-12));

    // oracle with the exact z1: w_tilde = t
    UnnormalizedModel target = UnnormalizedModel::simply_unnormalized(g1(0.0, 2.0));
    const double z1 = std::exp(target.true_log_z());
    PathSpec oracle = PathSpec::arithmetic(g1(0.0, 1.0), target,
                                           Schedule::oracle(z1));
    for (int i = 0; i <= 100; ++i) {
        const double t = i / 100.0;
        CHECK(arithmetic_point(oracle, t).w_norm ==
              doctest::Approx(t).epsilon(0).scale(1).epsilon(1e-12));
    }

    // oracle-trig with the exact z1: w_tilde = sin^2(pi t / 2)
    PathSpec trig = PathSpec::arithmetic(g1(0.0, 1.0), target,
                                         Schedule::oracle_trig(z1));
    CHECK(arithmetic_point(trig, 0.5).w_norm == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("arithmetic-vanilla weight identity recovers Z1") {
    UnnormalizedModel target = UnnormalizedModel::simply_unnormalized(g1(0.3, 0.5));
    const double z1 = std::exp(target.true_log_z());
    PathSpec spec = PathSpec::arithmetic(g1(0.0, 1.0), target, Schedule::vanilla());
    for (double t : {0.05, 0.3, 0.5, 0.77, 0.95}) {
        const double w = arithmetic_point(spec, t).w_norm;
        CHECK(w * (1.0 - t) / (t * (1.0 - w)) ==
              doctest::Approx(z1).epsilon(1e-12));
    }
}

TEST_CASE("q-mean density: q = 1 equals arithmetic, endpoints exact") {
    GaussianDiag p0 = g1(0.0, 1.0);
    UnnormalizedModel f1 = UnnormalizedModel::simply_unnormalized(g1(0.4, 2.2));
    PathSpec qm = PathSpec::q_mean(p0, f1, 1.0);
    PathSpec arith = PathSpec::arithmetic(p0, f1, Schedule::vanilla());
    PathGrid agrid = discretize(arith, 4);
    Rng rng(17);
    for (int i = 0; i < 20; ++i) {
        auto x = random_point(rng, 1, 3.0);
        for (std::size_t k = 0; k < agrid.points.size(); ++k) {
            const double t = agrid.times[k];
            CHECK(qmean_log_f(qm, t, x) ==
                  doctest::Approx(agrid.points[k].log_f(x)).epsilon(1e-12));
        }
        CHECK(qmean_log_f(qm, 0.0, x) ==
              doctest::Approx(log_density(p0, x)).epsilon(1e-12));
    }

    // identical endpoints: the path is flat for any q
    PathSpec flat = PathSpec::q_mean(p0, UnnormalizedModel::normalized(p0), 0.5);
    auto x = random_point(rng, 1, 1.0);
    CHECK(qmean_log_f(flat, 0.5, x) ==
          doctest::Approx(log_density(p0, x)).epsilon(1e-10));

    CHECK_THROWS_AS(PathSpec::q_mean(p0, f1, 0.0), Error);
    CHECK_THROWS_AS(PathSpec::q_mean(p0, f1, 1.5), Error);
}

TEST_CASE("optimal path: endpoints and weight closure") {
    PathSpec spec = PathSpec::optimal(
        g1(0.0, 1.0), UnnormalizedModel::simply_unnormalized(g1(0.0, 2.0)));
    OptimalPoint start = optimal_point(spec, 0.0);
    CHECK(start.a == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(start.b == doctest::Approx(0.0).epsilon(0).scale(1).epsilon(1e-12));
    OptimalPoint end = optimal_point(spec, 1.0);
    CHECK(end.a == doctest::Approx(0.0).epsilon(0).scale(1).epsilon(1e-12));
    CHECK(end.b == doctest::Approx(1.0).epsilon(1e-12));

    for (int i = 0; i <= 100; ++i) {
        const double t = i / 100.0;
        OptimalPoint pt = optimal_point(spec, t);
        double total = 0.0;
        for (const auto& c : pt.density.components()) {
            CHECK(c.weight >= -1e-12);
            total += c.weight;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("alpha_h values") {
    GaussianDiag p = g1(0.0, 1.0);
    CHECK(alpha_h(p, p) == doctest::Approx(0.0).epsilon(0).scale(1).epsilon(1e-12));
    // widely separated pair pushes alpha toward pi/4
    CHECK(alpha_h(g1(-30.0, 0.01), g1(30.0, 0.01)) ==
          doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-6));
    // N(0,1) vs N(0,2): DH2 = 1 - 2^{1/4}/sqrt(1.5)
    const double dh2 = 1.0 - std::pow(2.0, 0.25) / std::sqrt(1.5);
    const double expected = std::atan(std::sqrt(dh2 / (2.0 - dh2)));
    CHECK(alpha_h(g1(0.0, 1.0), g1(0.0, 2.0)) ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(alpha_h(g1(0.0, 1.0), g1(0.0, 2.0)) ==
          doctest::Approx(0.1207430).epsilon(1e-5));
}

TEST_CASE("discretize: uniform times, samplers, K=1 grid") {
    PathSpec spec = pair_geo();
    PathGrid grid = discretize(spec, 9);
    REQUIRE(grid.points.size() == 10);
    for (int k = 0; k <= 9; ++k)
        CHECK(grid.times[k] == doctest::Approx(k / 9.0).epsilon(1e-15));

    // geometric grid points are the interpolated Gaussians
    for (int k = 0; k <= 9; ++k) {
        auto [g, log_zt] = geometric_gaussian_point(spec, grid.times[k]);
        const auto& comp = grid.points[k].normalized().components();
        REQUIRE(comp.size() == 1);
        CHECK(comp[0].gaussian.var[0] == doctest::Approx(g.var[0]).epsilon(1e-12));
        CHECK(grid.points[k].log_zt() == doctest::Approx(log_zt).epsilon(1e-12));
    }

    PathGrid binary = discretize(spec, 1);
    REQUIRE(binary.points.size() == 2);
    CHECK(binary.times[0] == 0.0);
    CHECK(binary.times[1] == 1.0);

    CHECK_THROWS_AS(discretize(spec, 0), Error);
}

TEST_CASE("q-mean grids refuse to sample for q in (0,1)") {
    PathSpec qm = PathSpec::q_mean(
        g1(0.0, 1.0), UnnormalizedModel::simply_unnormalized(g1(0.0, 2.0)), 0.5);
    PathGrid grid = discretize(qm, 3);
    CHECK_FALSE(grid.points[1].can_sample());
    Rng rng(1);
    CHECK_THROWS_AS(grid.points[1].sample(10, rng), Error);
    // density evaluation still works
    const std::vector<double> x{0.3};
    CHECK(std::isfinite(grid.points[1].log_f(x)));
}

TEST_CASE("endpoint exactness for every path kind") {
    GaussianDiag p0 = g1(0.1, 1.0);
    UnnormalizedModel f1 = UnnormalizedModel::simply_unnormalized(g1(-0.4, 1.7));
    std::vector<PathSpec> specs;
    specs.push_back(PathSpec::geometric(p0, f1));
    specs.push_back(PathSpec::arithmetic(p0, f1, Schedule::vanilla()));
    specs.push_back(PathSpec::arithmetic(p0, f1, Schedule::oracle(2.0)));
    specs.push_back(PathSpec::q_mean(p0, f1, 0.7));
    specs.push_back(PathSpec::optimal(p0, f1));

    Rng rng(23);
    for (const PathSpec& spec : specs) {
        PathGrid grid = discretize(spec, 4);
        double offset0 = 0.0, offset1 = 0.0;
        for (int i = 0; i < 20; ++i) {
            auto x = random_point(rng, 1, 2.5);
            // t = 0: equality with the proposal density
            CHECK(grid.points.front().log_f(x) ==
                  doctest::Approx(log_density(p0, x)).epsilon(1e-10));
            // t = 1: equality with f1 up to a constant (exactly equal for
            // geometric and arithmetic paths; proportional for optimal)
            const double diff =
                grid.points.back().log_f(x) - log_density_unnorm(f1, x);
            if (i == 0) {
                offset1 = diff;
                offset0 = 0.0;
            }
            CHECK(diff == doctest::Approx(offset1).epsilon(0).scale(1).epsilon(1e-10));
            (void)offset0;
        }
        if (spec.kind == PathKind::geometric || spec.kind == PathKind::arithmetic ||
            spec.kind == PathKind::q_mean) {
            auto x = random_point(rng, 1, 2.5);
            CHECK(grid.points.back().log_f(x) ==
                  doctest::Approx(log_density_unnorm(f1, x)).epsilon(1e-10));
        }
    }
}

TEST_CASE("grid samplers reproduce mixture moments") {
    GaussianDiag p0 = g1(0.0, 1.0);
    UnnormalizedModel f1 = UnnormalizedModel::simply_unnormalized(g1(1.5, 0.5));
    std::vector<PathSpec> specs;
    specs.push_back(PathSpec::geometric(p0, f1));
    specs.push_back(PathSpec::arithmetic(p0, f1, Schedule::vanilla()));
    specs.push_back(PathSpec::optimal(p0, f1));

    const std::size_t n = 100000;
    std::uint64_t seed = 1000;
    for (const PathSpec& spec : specs) {
        PathGrid grid = discretize(spec, 2);
        for (const GridPoint& gp : grid.points) {
            const Density& d = gp.normalized();
            Rng rng(seed++);
            const auto xs = d.sample(n, rng);
            double s1 = 0.0, s2 = 0.0;
            for (double x : xs) {
                s1 += x;
                s2 += x * x;
            }
            const double mean_emp = s1 / n;
            const double var_emp = s2 / n - mean_emp * mean_emp;
            const double mean_true = d.mean_of_dim(0);
            const double var_true = d.var_of_dim(0);
            // CLT bounds at five sigma; fourth moment from the components
            double m4 = 0.0;
            for (const auto& c : d.components()) {
                const double mu = c.gaussian.mean[0] - mean_true;
                const double v = c.gaussian.var[0];
                m4 += c.weight *
                      (mu * mu * mu * mu + 6.0 * mu * mu * v + 3.0 * v * v);
            }
            const double sd_mean = std::sqrt(var_true / n);
            const double sd_var =
                std::sqrt(std::max(0.0, m4 - var_true * var_true) / n);
            CHECK(std::abs(mean_emp - mean_true) < 5.0 * sd_mean);
            CHECK(std::abs(var_emp - var_true) < 5.0 * sd_var);
        }
    }
}

TEST_CASE("identical-seed grid sampling is bit-identical") {
    PathSpec spec = pair_geo();
    PathGrid grid = discretize(spec, 3);
    Rng a(5), b(5);
    CHECK(grid.points[2].sample(500, a) == grid.points[2].sample(500, b));
}
