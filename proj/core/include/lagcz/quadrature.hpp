#ifndef LAGCZ_QUADRATURE_HPP
#define LAGCZ_QUADRATURE_HPP

#include <functional>
#include <span>
#include <vector>

#include "lagcz/types.hpp"

namespace lagcz {

enum class QuadDomain {
    pi_measure,  // measure with density (1-s^2)^{nu-1/2} / (sqrt(pi) 2^nu Gamma(nu+1/2)) on [-1,1]
    t_weighted,  // integral against t^{W-1} dt on (t_min, t_max)
    laguerre,    // weight u^a e^{-u} on (0, inf)
    generic      // plain Lebesgue measure on (a, b)
};

struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    QuadDomain domain = QuadDomain::generic;
    double param = 0.0;  // nu, W, or Laguerre parameter, depending on domain
    double lo = 0.0;
    double hi = 0.0;
    bool atomic = false;

    double total_weight() const {
        double s = 0;
        for (double w : weights) s += w;
        return s;
    }
    template <class F>
    double apply(F&& f) const {
        double s = 0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }
};

// Tensor product of one-dimensional rules, one factor per coordinate.
struct ProductRule {
    std::vector<QuadRule> factors;
    int dim() const noexcept { return static_cast<int>(factors.size()); }
};

// Gauss rule for the normalized measure with density
// (1-s^2)^{nu-1/2} ds / (sqrt(pi) 2^nu Gamma(nu+1/2)) on [-1,1], exact for
// polynomials of degree <= 2 n_nodes - 1. Weights sum to 1/(2^nu Gamma(nu+1)).
// At nu = -1/2 the measure degenerates to two atoms at +-1 of weight
// 1/sqrt(2 pi) each and the atomic rule is returned regardless of n_nodes.
// Orders below -1/2 are rejected: the integral representation of I_nu fails
// there and callers must shift the order first.
QuadRule pi_measure_rule(double nu, int n_nodes);

// Gauss-Legendre rule on (a, b).
QuadRule gauss_legendre_rule(int n, double a, double b);

// Gauss rule for the weight u^a e^{-u} on (0, inf); weights sum to Gamma(a+1).
QuadRule gauss_laguerre_rule(double a, int n);

// Composite rule approximating integrals against t^{W-1} dt over
// (t_min, t_max): n_panels geometrically spaced panels, 8-point Gauss each,
// with the weight folded into the returned quadrature weights.
QuadRule t_weighted_grid(double W, double t_min, double t_max, int n_panels);

// Evaluation of the integral representation e^{-z} z^nu int e^{-z s} dPi_nu(s)
// by the supplied pi_measure rule; converges to bessel_i_scaled(nu, z).
double schlafli_bessel(double nu, double z, const QuadRule& rule);

// Adaptive quadrature of f over (a, b) with target absolute error tol.
// Panels are bisected until local error estimates pass; if the target cannot
// be certified, throws convergence_error carrying the best estimate and the
// achieved tolerance.
double adaptive_integrate(const std::function<double(double)>& f, double a, double b, double tol);

// Tensor-product quadrature sum_j (prod_i w_{i,j_i}) f(s_j) over all node
// combinations of the factors.
double product_apply(const ProductRule& rule, const std::function<double(std::span<const double>)>& f);

// log( sum_j (prod_i w_{i,j_i}) exp(log_f(s_j)) ) evaluated with on-line
// rescaling, for integrands spanning hundreds of orders of magnitude.
// All weights must be positive.
double product_log_sum_exp(const ProductRule& rule,
                           const std::function<double(std::span<const double>)>& log_f);

}  // namespace lagcz

#endif
