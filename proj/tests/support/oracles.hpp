#ifndef LAGCZ_TEST_ORACLES_HPP
#define LAGCZ_TEST_ORACLES_HPP

// Test-side oracles, kept independent of the library paths they check.

#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

// Central difference with two Richardson levels, h = 1e-4 max(1, |x|).
inline double d1(const std::function<double(double)>& f, double x,
                 double h0 = 0.0) {
    const double h = h0 > 0 ? h0 : 1e-4 * std::max(1.0, std::fabs(x));
    auto diff = [&](double hh) { return (f(x + hh) - f(x - hh)) / (2.0 * hh); };
    const double a = diff(h), b = diff(0.5 * h), c = diff(0.25 * h);
    const double r1 = (4.0 * b - a) / 3.0;
    const double r2 = (4.0 * c - b) / 3.0;
    return (16.0 * r2 - r1) / 15.0;
}

// Nested first derivatives for higher orders.
inline double dn(const std::function<double(double)>& f, double x, int order,
                 double h = 0.05) {
    if (order == 0) return f(x);
    auto g = [&](double v) { return dn(f, v, order - 1, h); };
    const double a = (g(x + h) - g(x - h)) / (2.0 * h);
    const double b = (g(x + 0.5 * h) - g(x - 0.5 * h)) / h;
    return (4.0 * b - a) / 3.0;
}

// Generalized Laguerre polynomial by the explicit binomial-coefficient sum
// sum_j (-1)^j C(k+a, k-j) u^j / j!  -- the direct-definition oracle.
inline double laguerre_binomial_sum(int k, double a, double u) {
    double total = 0.0;
    for (int j = 0; j <= k; ++j) {
        // C(k+a, k-j) = Gamma(k+a+1) / (Gamma(a+j+1) (k-j)!)
        const double logc = std::lgamma(k + a + 1.0) - std::lgamma(a + j + 1.0) -
                            std::lgamma(k - j + 1.0);
        const double term = std::exp(logc - std::lgamma(j + 1.0)) * std::pow(u, j);
        total += (j % 2 == 0 ? term : -term);
    }
    return total;
}

// Ascending-series scaled Bessel, written independently of the library
// implementation (plain term loop, no rescaling tricks; valid for z <~ 600).
inline double bessel_series_reference(double nu, double z) {
    const double q = 0.25 * z * z;
    double term = 1.0, sum = 1.0;
    for (int m = 0; m < 10000; ++m) {
        term *= q / ((m + 1.0) * (nu + m + 1.0));
        sum += term;
        if (term < 1e-19 * sum) break;
    }
    return std::exp(nu * std::log(0.5 * z) - std::lgamma(nu + 1.0) - z) * sum;
}

// Brute-force enumeration of all tuples (p_1..p_N) with p_i <= N checked
// against p_1 + 2 p_2 + ... + N p_N = N.
inline int count_weighted_tuples(int N) {
    std::vector<int> p(static_cast<std::size_t>(N), 0);
    int count = 0;
    for (;;) {
        int weight = 0;
        for (int i = 0; i < N; ++i) weight += (i + 1) * p[static_cast<std::size_t>(i)];
        if (weight == N) ++count;
        int i = 0;
        for (; i < N; ++i) {
            if (++p[static_cast<std::size_t>(i)] <= N && (i + 1) * p[static_cast<std::size_t>(i)] <= N) break;
            p[static_cast<std::size_t>(i)] = 0;
        }
        if (i == N) return count;
    }
}

inline double rel_err(double got, double want) {
    return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

}  // namespace oracles

#endif
