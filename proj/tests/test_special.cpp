#include <doctest.h>

#include <cmath>
#include <random>

#include "lagcz/quadrature.hpp"
#include "lagcz/special.hpp"
#include "support/oracles.hpp"

using namespace lagcz;

TEST_SUITE("special") {

TEST_CASE("scaled Bessel function reproduces reference values") {
    CHECK(bessel_i_scaled(0.0, 0.0) == 1.0);
    CHECK(bessel_i_scaled(0.7, 0.0) == 0.0);
    // e^{-1} sqrt(2/pi) sinh(1), half-integer closed form
    CHECK(oracles::rel_err(bessel_i_scaled(0.5, 1.0), 0.344951313888244626) < 1e-13);
    // high-precision references across both evaluation regimes
    const struct {
        double nu, z, want;
    } tab[] = {
        {-0.9, 0.5, 0.36474206808398787},    {-0.5, 3.0, 0.23090036256424203},
        {0.0, 10.0, 0.127833337163428607},   {0.25, 3.0, 0.239364234676765469},
        {1.0, 25.0, 0.078576113319292772},   {2.5, 120.0, 0.0355154111361216815},
        {5.0, 200.0, 0.0265128848097189382}, {3.0, 700.0, 0.0149845866617194387},
        {-0.99, 40.0, 0.0624979715467962162}, {7.5, 33.0, 0.0294514642155755765},
        {0.1, 1e-8, 0.155437685938664518},
    };
    for (const auto& r : tab) CHECK(oracles::rel_err(bessel_i_scaled(r.nu, r.z), r.want) < 1e-12);
}

TEST_CASE("scaled Bessel matches the ascending-series oracle") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double nu = -1.0 + 1e-3 + 7.0 * unif(rng);
        const double z = std::exp(std::log(1e-3) + std::log(300.0 / 1e-3) * unif(rng));
        const double want = oracles::bessel_series_reference(nu, z);
        CHECK(oracles::rel_err(bessel_i_scaled(nu, z), want) < 1e-12);
    }
}

TEST_CASE("scaled Bessel is positive and satisfies the three-term recurrence") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 3000; ++i) {
        const double nu = -1.0 + 1e-9 + (7.0 - 1e-9) * unif(rng);
        const double z = std::exp(std::log(1e-3) + std::log(200.0 / 1e-3) * unif(rng));
        const double v0 = bessel_i_scaled(nu, z);
        CHECK(v0 > 0.0);
        const double rhs =
            2.0 * (nu + 1.0) / z * bessel_i_scaled(nu + 1.0, z) + bessel_i_scaled(nu + 2.0, z);
        worst = std::max(worst, oracles::rel_err(rhs, v0));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("scaled Bessel rejects invalid arguments") {
    CHECK_THROWS_AS(bessel_i_scaled(-1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(bessel_i_scaled(-1.5, 1.0), std::domain_error);
    CHECK_THROWS_AS(bessel_i_scaled(0.5, -0.1), std::domain_error);
}

TEST_CASE("Laguerre polynomial recurrence seeds and oracle agreement") {
    CHECK(laguerre_poly(0, 0.3, 5.0) == 1.0);
    CHECK(laguerre_poly(1, 0.3, 5.0) == doctest::Approx(1.0 + 0.3 - 5.0).epsilon(1e-15));
    CHECK(oracles::rel_err(laguerre_poly(5, 0.7, 2.3),
                           oracles::laguerre_binomial_sum(5, 0.7, 2.3)) < 1e-13);
    for (int k : {3, 8, 17}) {
        for (double a : {-0.9, -0.25, 1.5}) {
            for (double u : {0.1, 2.0, 9.5}) {
                CHECK(oracles::rel_err(laguerre_poly(k, a, u),
                                       oracles::laguerre_binomial_sum(k, a, u)) < 1e-11);
            }
        }
    }
    CHECK_THROWS_AS(laguerre_poly(2, -1.0, 1.0), std::domain_error);
}

TEST_CASE("Laguerre functions are orthonormal in L2(dmu)") {
    // oracle: adaptive quadrature of the inner products, independent of any
    // projection machinery
    for (double a : {-0.9, -0.5, 0.0, 2.5}) {
        double worst = 0.0;
        for (int k = 0; k <= 10; ++k) {
            for (int j = k; j <= 10; ++j) {
                auto f = [&](double x) {
                    return laguerre_fn_1d(k, a, x * x) * laguerre_fn_1d(j, a, x * x) *
                           std::pow(x, 2.0 * a + 1.0);
                };
                const double got = adaptive_integrate(f, 0.0, 16.0, 1e-10);
                worst = std::max(worst, std::fabs(got - (k == j ? 1.0 : 0.0)));
            }
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("lowest Laguerre function value is fixed by the normalization integral") {
    CHECK(oracles::rel_err(laguerre_fn(MultiIndex{0}, AlphaIndex{0.0}, PointRd{1.0}),
                           0.857763884960706796) < 1e-14);
}

TEST_CASE("two-dimensional Gram deviates from identity below 1e-7") {
    const AlphaIndex alpha{-0.9, 2.5};
    // entries factor through coordinates; assemble the d = 2 Gram from 1-d blocks
    double gram1[2][7][7];
    for (int c = 0; c < 2; ++c) {
        for (int k = 0; k <= 6; ++k) {
            for (int j = 0; j <= 6; ++j) {
                auto f = [&](double x) {
                    return laguerre_fn_1d(k, alpha[c], x * x) * laguerre_fn_1d(j, alpha[c], x * x) *
                           std::pow(x, 2.0 * alpha[c] + 1.0);
                };
                gram1[c][k][j] = adaptive_integrate(f, 0.0, 16.0, 1e-10);
            }
        }
    }
    double worst = 0.0;
    for (int k1 = 0; k1 <= 6; ++k1)
        for (int k2 = 0; k1 + k2 <= 6; ++k2)
            for (int j1 = 0; j1 <= 6; ++j1)
                for (int j2 = 0; j1 + j2 <= 6; ++j2) {
                    const double got = gram1[0][k1][j1] * gram1[1][k2][j2];
                    const double want = (k1 == j1 && k2 == j2) ? 1.0 : 0.0;
                    worst = std::max(worst, std::fabs(got - want));
                }
    CHECK(worst < 1e-7);
}

TEST_CASE("Laguerre functions satisfy the eigenvalue identity") {
    // second-order finite differences of -Delta + |x|^2 - sum (2a_i+1)/x_i d_i
    for (const AlphaIndex& alpha : {AlphaIndex{-0.75}, AlphaIndex{0.5, 1.0}}) {
        const int d = alpha.dim();
        std::vector<int> kc(static_cast<std::size_t>(d), 0);
        kc[0] = 2;
        if (d > 1) kc[static_cast<std::size_t>(1)] = 1;
        const MultiIndex k(kc);
        const double lam = laguerre_eigenvalue(k, alpha);
        for (double base : {0.8, 1.4}) {
            const PointRd x{std::vector<double>(static_cast<std::size_t>(d), base)};
            const double fx = laguerre_fn(k, alpha, x);
            double lhs = x.sq_norm() * fx;
            for (int i = 0; i < d; ++i) {
                const double h = 1e-4;
                auto at = [&](double xi) {
                    std::vector<double> c = x.coords();
                    c[static_cast<std::size_t>(i)] = xi;
                    return laguerre_fn(k, alpha, PointRd(c));
                };
                const double fp = at(x[i] + h), fm = at(x[i] - h);
                lhs += -(fp - 2.0 * fx + fm) / (h * h) -
                       (2.0 * alpha[i] + 1.0) / x[i] * (fp - fm) / (2.0 * h);
            }
            CHECK(oracles::rel_err(lhs, lam * fx) < 1e-4);
        }
    }
}

TEST_CASE("iterated Laguerre derivative against finite-difference oracles") {
    // delta annihilates the lowest mode
    CHECK(delta_laguerre_fn(MultiIndex{0}, AlphaIndex{0.3}, PointRd{1.1}, MultiIndex{1}) == 0.0);

    // first order vs (d/dx + x) applied to laguerre_fn
    {
        const AlphaIndex a{0.5};
        auto f = [&](double x) { return laguerre_fn(MultiIndex{3}, a, PointRd{x}); };
        const double want = oracles::d1(f, 1.2, 1e-5) + 1.2 * f(1.2);
        const double got = delta_laguerre_fn(MultiIndex{3}, a, PointRd{1.2}, MultiIndex{1});
        CHECK(oracles::rel_err(got, want) < 1e-6);
    }
    // second order vs nested finite-difference delta
    {
        const AlphaIndex a{-0.7};
        auto f = [&](double x) { return laguerre_fn(MultiIndex{2}, a, PointRd{x}); };
        auto df = [&](double x) { return oracles::d1(f, x, 1e-4) + x * f(x); };
        const double want = oracles::d1(df, 0.8, 1e-4) + 0.8 * df(0.8);
        const double got = delta_laguerre_fn(MultiIndex{2}, a, PointRd{0.8}, MultiIndex{2});
        CHECK(oracles::rel_err(got, want) < 1e-4);
    }
    CHECK_THROWS_AS(delta_laguerre_fn(MultiIndex{1, 0}, AlphaIndex{0.5}, PointRd{1.0},
                                      MultiIndex{1, 0}),
                    std::invalid_argument);
}

TEST_CASE("derivative-composition partition sets") {
    const auto p1 = faa_partitions(1);
    REQUIRE(p1.size() == 1);
    CHECK(p1[0] == std::vector<int>{1});
    const auto p2 = faa_partitions(2);
    REQUIRE(p2.size() == 2);
    const bool has20 = p2[0] == std::vector<int>{2, 0} || p2[1] == std::vector<int>{2, 0};
    const bool has01 = p2[0] == std::vector<int>{0, 1} || p2[1] == std::vector<int>{0, 1};
    CHECK(has20);
    CHECK(has01);
    CHECK(faa_partitions(6).size() == 11);
    for (int n = 1; n <= 12; ++n) {
        const auto parts = faa_partitions(n);
        CHECK(static_cast<int>(parts.size()) == oracles::count_weighted_tuples(n));
        for (const auto& p : parts) {
            int weight = 0;
            for (int i = 0; i < n; ++i) weight += (i + 1) * p[static_cast<std::size_t>(i)];
            CHECK(weight == n);
        }
    }
    CHECK_THROWS_AS(faa_partitions(0), std::domain_error);
}

TEST_CASE("derivative composition reproduces chain-rule cases") {
    // linear inner function: all higher inner derivatives vanish
    const double x = 0.43;
    std::vector<double> g{std::exp(2.0 * x), std::exp(2.0 * x), std::exp(2.0 * x),
                          std::exp(2.0 * x)};
    std::vector<double> f{2.0, 0.0, 0.0};
    CHECK(oracles::rel_err(compose_derivative(g, f, 3), 8.0 * std::exp(2.0 * x)) < 1e-14);
    CHECK(compose_derivative(g, f, 1) == doctest::Approx(2.0 * std::exp(2.0 * x)));

    // g = exp, f = sin at x = 0.7, N = 4 vs the finite-difference oracle
    {
        const double x0 = 0.7;
        const double ef = std::exp(std::sin(x0));
        std::vector<double> gd(5, ef);
        std::vector<double> fd{std::cos(x0), -std::sin(x0), -std::cos(x0), std::sin(x0)};
        const double got = compose_derivative(gd, fd, 4);
        const double want = oracles::dn([](double v) { return std::exp(std::sin(v)); }, x0, 4);
        CHECK(oracles::rel_err(got, want) < 1e-5);
    }
    CHECK_THROWS_AS(compose_derivative(std::vector<double>{1.0}, std::vector<double>{1.0}, 2),
                    std::invalid_argument);
}

TEST_CASE("derivative composition agrees with nested differences on random pairs") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unif(0.3, 1.1);
    for (int rep = 0; rep < 4; ++rep) {
        const double x0 = unif(rng);
        const double c = 0.5 + unif(rng);
        // g(y) = exp(c y), f(x) = cos x: all derivative lists in closed form
        auto whole = [c](double v) { return std::exp(c * std::cos(v)); };
        for (int N = 1; N <= 5; ++N) {
            std::vector<double> gd(static_cast<std::size_t>(N + 1));
            for (int j = 0; j <= N; ++j)
                gd[static_cast<std::size_t>(j)] = std::pow(c, j) * std::exp(c * std::cos(x0));
            std::vector<double> fd(static_cast<std::size_t>(N));
            for (int j = 1; j <= N; ++j) {
                switch (j % 4) {
                    case 0: fd[static_cast<std::size_t>(j - 1)] = std::cos(x0); break;
                    case 1: fd[static_cast<std::size_t>(j - 1)] = -std::sin(x0); break;
                    case 2: fd[static_cast<std::size_t>(j - 1)] = -std::cos(x0); break;
                    default: fd[static_cast<std::size_t>(j - 1)] = std::sin(x0); break;
                }
            }
            const double got = compose_derivative(gd, fd, N);
            const double want = oracles::dn(whole, x0, N);
            CHECK(oracles::rel_err(got, want) < 1e-4);
        }
    }
}

}  // TEST_SUITE
