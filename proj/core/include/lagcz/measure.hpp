#ifndef LAGCZ_MEASURE_HPP
#define LAGCZ_MEASURE_HPP

#include <cstdint>

#include "lagcz/types.hpp"

namespace lagcz {

// Euclidean ball B(x, r) intersected with R_+^d.
struct BallSpec {
    PointRd center;
    double radius;
    BallSpec(PointRd c, double r) : center(std::move(c)), radius(r) {
        if (!(r > 0.0)) throw std::domain_error("BallSpec: radius must be > 0");
    }
};

// Density of mu_alpha: prod_i x_i^{2 alpha_i + 1}.
double mu_density(const AlphaIndex& alpha, const PointRd& x);

// mu_alpha(B(x, r) \cap R_+^d) by iterated one-dimensional integration with
// analytic section bounds (d <= 3). The innermost slice uses the closed-form
// antiderivative u^{2a+2}/(2a+2), so density exponents in (-1, 0) are handled
// exactly at the singular face. Relative error target tol.
double ball_measure(const AlphaIndex& alpha, const BallSpec& ball, double tol);

struct McEstimate {
    double value;
    double std_error;
    std::uint64_t seed;
    std::int64_t n_samples;
};

// Monte Carlo mu_alpha(B): uniform proposal in the bounding box, reweighted
// by the density. Deterministic per (seed, n_samples); any d.
McEstimate ball_measure_mc(const AlphaIndex& alpha, const BallSpec& ball, std::int64_t n_samples,
                           std::uint64_t seed);

// Two-sided comparison quantity r^d prod_i (x_i + r)^{2 alpha_i + 1}, which is
// equivalent to mu_alpha(B(x, r)) up to dimensional constants.
double ball_measure_comparable(const AlphaIndex& alpha, const BallSpec& ball);

}  // namespace lagcz

#endif
