#include "lagcz/measure.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lagcz/quadrature.hpp"

namespace lagcz {

namespace {

// int_a^b u^{2 alpha + 1} du over (a, b) clipped to (0, inf); the exponent
// 2 alpha + 2 is positive for alpha > -1, so the antiderivative extends to 0.
double segment_mass(double a2p1, double lo, double hi) {
    lo = std::max(lo, 0.0);
    if (hi <= lo) return 0.0;
    const double p = a2p1 + 1.0;
    return (std::pow(hi, p) - std::pow(lo, p)) / p;
}

// Measure of the k-dimensional ball section of radius r around the first k
// coordinates of x, integrating coordinates [0, k).
double section_measure(const AlphaIndex& alpha, const PointRd& x, int k, double r, double abs_tol) {
    const double xi = x[k - 1];
    const double a2p1 = 2.0 * alpha[k - 1] + 1.0;
    if (k == 1) return segment_mass(a2p1, xi - r, xi + r);
    const double lo = std::max(xi - r, 0.0);
    const double hi = xi + r;
    if (hi <= lo) return 0.0;
    auto f = [&](double u) {
        const double h2 = r * r - (u - xi) * (u - xi);
        if (h2 <= 0.0) return 0.0;
        return std::pow(u, a2p1) * section_measure(alpha, x, k - 1, std::sqrt(h2), abs_tol * 0.1);
    };
    return adaptive_integrate(f, lo, hi, abs_tol);
}

}  // namespace

double mu_density(const AlphaIndex& alpha, const PointRd& x) {
    require_same_dim(alpha.dim(), x.dim(), "mu_density");
    double prod = 1.0;
    for (int i = 0; i < alpha.dim(); ++i) prod *= std::pow(x[i], 2.0 * alpha[i] + 1.0);
    return prod;
}

double ball_measure(const AlphaIndex& alpha, const BallSpec& ball, double tol) {
    require_same_dim(alpha.dim(), ball.center.dim(), "ball_measure");
    const int d = alpha.dim();
    if (d > 3)
        throw std::domain_error("ball_measure: quadrature mode supports d <= 3; use ball_measure_mc");
    if (!(tol > 0.0)) throw std::domain_error("ball_measure: tol must be > 0");
    // The comparison quantity gives the right scale for an absolute target.
    const double scale = ball_measure_comparable(alpha, ball);
    return section_measure(alpha, ball.center, d, ball.radius, tol * scale);
}

McEstimate ball_measure_mc(const AlphaIndex& alpha, const BallSpec& ball, std::int64_t n_samples,
                           std::uint64_t seed) {
    require_same_dim(alpha.dim(), ball.center.dim(), "ball_measure_mc");
    if (n_samples < 2) throw std::domain_error("ball_measure_mc: need at least 2 samples");
    const int d = alpha.dim();
    const PointRd& x = ball.center;
    const double r = ball.radius;
    std::vector<double> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
    double box_vol = 1.0;
    for (int i = 0; i < d; ++i) {
        lo[static_cast<std::size_t>(i)] = std::max(x[i] - r, 0.0);
        hi[static_cast<std::size_t>(i)] = x[i] + r;
        box_vol *= hi[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)];
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double sum = 0.0, sum_sq = 0.0;
    std::vector<double> u(static_cast<std::size_t>(d));
    for (std::int64_t s = 0; s < n_samples; ++s) {
        double dist2 = 0.0;
        double density = 1.0;
        for (int i = 0; i < d; ++i) {
            const std::size_t ii = static_cast<std::size_t>(i);
            u[ii] = lo[ii] + (hi[ii] - lo[ii]) * unif(rng);
            dist2 += (u[ii] - x[i]) * (u[ii] - x[i]);
            density *= std::pow(u[ii], 2.0 * alpha[i] + 1.0);
        }
        const double val = (dist2 < r * r) ? density * box_vol : 0.0;
        sum += val;
        sum_sq += val * val;
    }
    const double n = static_cast<double>(n_samples);
    const double mean = sum / n;
    const double var = std::max(sum_sq / n - mean * mean, 0.0);
    return {mean, std::sqrt(var / n), seed, n_samples};
}

double ball_measure_comparable(const AlphaIndex& alpha, const BallSpec& ball) {
    require_same_dim(alpha.dim(), ball.center.dim(), "ball_measure_comparable");
    const double r = ball.radius;
    double v = std::pow(r, alpha.dim());
    for (int i = 0; i < alpha.dim(); ++i)
        v *= std::pow(ball.center[i] + r, 2.0 * alpha[i] + 1.0);
    return v;
}

}  // namespace lagcz
