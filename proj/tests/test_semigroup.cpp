#include "paracontrol/harness.hpp"
#include "paracontrol/semigroup.hpp"
#include "test_util.hpp"

#include <doctest.h>

using namespace paracontrol;
using testutil::random_field;

TEST_SUITE("semigroup")
{
    TEST_CASE("psi values")
    {
        const StableSymbol s(1.5, 1, {{Eigen::Vector2d(1, 0), 0.5}, {Eigen::Vector2d(-1, 0), 0.5}});
        CHECK(psi(s, {2, 0}) == doctest::Approx(2.828427124746190).epsilon(1e-14));
        CHECK(psi(s, {0, 0}) == 0.0);
        CHECK(psi(s, {-3, 0}) == psi(s, {3, 0}));
        for (double alpha : {0.7, 1.5, 2.0}) {
            const StableSymbol lap = StableSymbol::fractional_laplacian(alpha);
            for (int k : {1, 2, 5, -7})
                CHECK(psi(lap, {k, 0}) == doctest::Approx(std::pow(2.0 * std::numbers::pi * std::abs(k), alpha)).epsilon(1e-13));
            CHECK(psi(lap, {6, 0}) == doctest::Approx(std::pow(2.0, alpha) * psi(lap, {3, 0})).epsilon(1e-13));
        }
        const StableSymbol lap2 = StableSymbol::fractional_laplacian(1.8, 2, 64);
        for (Frequency k : {Frequency{1, 0}, Frequency{3, 4}, Frequency{-2, 5}}) {
            const double r = std::hypot(double(k[0]), double(k[1]));
            CHECK(psi(lap2, k) == doctest::Approx(std::pow(2.0 * std::numbers::pi * r, 1.8)).epsilon(2e-3));
        }
        CHECK(psi(lap2, {2, 4}) == doctest::Approx(std::pow(2.0, 1.8) * psi(lap2, {1, 2})).epsilon(1e-13));
    }

    TEST_CASE("symbol validation")
    {
        CHECK_THROWS(StableSymbol(2.5, 1, {{Eigen::Vector2d(1, 0), 1.0}, {Eigen::Vector2d(-1, 0), 1.0}}));
        CHECK_THROWS(StableSymbol(1.5, 1, {{Eigen::Vector2d(1, 0), 1.0}}));
        CHECK_THROWS(StableSymbol(1.5, 2, {{Eigen::Vector2d(1, 0), 1.0}, {Eigen::Vector2d(-1, 0), 1.0}}));
        CHECK_THROWS(StableSymbol(1.5, 1, {{Eigen::Vector2d(1, 0), 1.0}, {Eigen::Vector2d(-1, 0), 2.0}}));
    }

    TEST_CASE("generator and semigroup")
    {
        FourierGrid g(64);
        const MultiplierCache cache(StableSymbol::fractional_laplacian(1.7), g);
        CHECK(cache.psi()(0) == 0.0);
        CHECK(cache.lower_constant() > 0.0);
        const PeriodicField one = PeriodicField::constant(g, 1.0);
        CHECK(apply_generator(cache, one).coeffs().abs().maxCoeff() == 0.0);
        const PeriodicField e5 = PeriodicField::fourier_mode(g, {5, 0});
        CHECK(std::abs(apply_generator(cache, e5).coeff({5, 0}) - cache.psi()(5)) < 1e-9);
        CHECK(std::abs(semigroup_apply(cache, 0.01, e5).coeff({5, 0}) - std::exp(-0.01 * cache.psi()(5))) < 1e-15);

        std::mt19937_64 rng(11);
        const PeriodicField u = random_field(g, rng);
        CHECK(testutil::max_abs_diff(semigroup_apply(cache, 0.0, u), u) == 0.0);
        const PeriodicField a = semigroup_apply(cache, 0.003, semigroup_apply(cache, 0.002, u));
        const PeriodicField b = semigroup_apply(cache, 0.005, u);
        CHECK(testutil::max_abs_diff(a, b) <= 1e-14 * u.coeffs().abs().maxCoeff());
        CHECK(semigroup_apply(cache, 0.3, u).coeffs()(0, 0) == u.coeffs()(0, 0));
        const PeriodicField lp = apply_generator(cache, semigroup_apply(cache, 0.001, u));
        const PeriodicField pl = semigroup_apply(cache, 0.001, apply_generator(cache, u));
        CHECK(testutil::max_abs_diff(lp, pl) <= 1e-12 * pl.coeffs().abs().maxCoeff());
        CHECK_THROWS(semigroup_apply(cache, -1.0, u));
        CHECK_THROWS(apply_generator(cache, random_field(FourierGrid(32), rng)));
    }

    TEST_CASE("jt closed forms")
    {
        FourierGrid g(32);
        const MultiplierCache cache(StableSymbol::fractional_laplacian(1.5), g);
        const double T = 0.8;
        const auto times = uniform_times(T, 16);
        const PeriodicField e0 = PeriodicField::constant(g, 1.0);
        const PeriodicField e3 = PeriodicField::fourier_mode(g, {3, 0});
        const TimeField v0 = TimeField::constant(times, e0);
        const TimeField v3 = TimeField::constant(times, e3);
        const double p3 = cache.psi()(3);
        for (double t : {0.0, 0.25, 0.33, 0.8}) {
            CHECK(jt_apply(cache, v0, t).coeff({0, 0}).real() == doctest::Approx(T - t).epsilon(1e-13));
            CHECK(std::abs(jt_apply(cache, v3, t).coeff({3, 0}) - (1.0 - std::exp(-(T - t) * p3)) / p3) < 1e-15);
        }
        CHECK(jt_apply(cache, v3, T).coeffs().abs().maxCoeff() == 0.0);
        CHECK_THROWS(jt_apply(cache, v3, 0.9));

        // integrand r e_3, exact for piecewise-linear quadrature
        std::vector<PeriodicField> lin;
        for (double r : times)
            lin.push_back(r * e3);
        const TimeField vl(times, lin);
        const TimeField all = jt_apply_all(cache, vl);
        for (double t : {0.0, 0.4, 0.61}) {
            const double a = p3, e = std::exp(-a * (T - t));
            const double exact = (t - T * e) / a + (1.0 - e) / (a * a);
            CHECK(std::abs(jt_apply(cache, vl, t).coeff({3, 0}) - exact) < 1e-14);
        }
        CHECK(std::abs(all[5].coeff({3, 0}) - jt_apply(cache, vl, times[5]).coeff({3, 0})) < 1e-16);
    }

    TEST_CASE("commutators")
    {
        FourierGrid g(64);
        const MultiplierCache cache(StableSymbol::fractional_laplacian(1.8), g);
        std::mt19937_64 rng(12);
        const auto times = uniform_times(1.0, 8);
        std::vector<PeriodicField> hv;
        for (std::size_t i = 0; i < times.size(); ++i)
            hv.push_back(random_field(g, rng));
        const TimeField h(times, hv);
        const TimeField one = TimeField::constant(times, PeriodicField::constant(g, 1.0));
        const TimeField c = commutator_jt(cache, one, h);
        CHECK(time_sup_norm(c) <= 1e-12 * time_sup_norm(h));
        const TimeField zero = TimeField::constant(times, PeriodicField(g));
        CHECK(time_sup_norm(commutator_jt(cache, h, zero)) == 0.0);

        const PeriodicField u = random_field(g, rng), v = random_field(g, rng);
        CHECK(sup_norm(commutator_semigroup(cache, 0.0, u, v)) <= 1e-12);
        CHECK(sup_norm(commutator_semigroup(cache, 0.01, PeriodicField::constant(g, 1.0), v)) <= 1e-12);
        CHECK(sup_norm(commutator_semigroup(cache, 0.01, u, v)) > 1e-6);
    }

    TEST_CASE("lacunary input has a flat Besov profile")
    {
        for (int n : {64, 1024}) {
            FourierGrid g(n);
            const PeriodicField f = lacunary_field(g, -0.4);
            const Eigen::ArrayXd b = block_sup_norms(f);
            CHECK(b(0) == 0.0);
            for (int j = 0; j <= g.max_block(); ++j)
                CHECK(b(j + 1) == doctest::Approx(std::pow(2.0, 0.4 * j)).epsilon(1e-12));
            CHECK(besov_norm(f, -0.4) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }

    TEST_CASE("schauder probe slopes")
    {
        SchauderSettings s;
        s.N = 256;
        const auto probes = schauder_probe(s);
        REQUIRE(probes.size() == 6);
        for (const auto& p : probes) {
            CAPTURE(p.name);
            CHECK(p.params.size() == 17);
            CHECK(std::abs(p.fit.slope - p.target) <= 0.05);
        }
        s.beta = 0.3;
        CHECK(schauder_probe(s).size() == 5);
        s.t_max = s.t_min;
        CHECK_THROWS(schauder_probe(s));
    }
}
