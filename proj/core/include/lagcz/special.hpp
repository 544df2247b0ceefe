#ifndef LAGCZ_SPECIAL_HPP
#define LAGCZ_SPECIAL_HPP

#include <span>
#include <vector>

#include "lagcz/types.hpp"

namespace lagcz {

// Exponentially scaled modified Bessel function of the first kind,
// e^{-z} I_nu(z), for nu > -1 and z >= 0. Ascending series for small z
// or large order, Hankel-type asymptotic expansion otherwise; strictly
// positive for z > 0 and accurate to ~1e-13 relative on z in [0, 700].
double bessel_i_scaled(double nu, double z);

// Generalized Laguerre polynomial L_k^a(u), a > -1, by the stable
// three-term recurrence.
double laguerre_poly(int k, double a, double u);

// Orthonormal Laguerre function of convolution type,
//   l_k^alpha(x) = prod_i c_{k_i}^{alpha_i} L_{k_i}^{alpha_i}(x_i^2) e^{-x_i^2/2},
//   c_k^a = (2 k! / Gamma(k+a+1))^{1/2}.
// The family {l_k^alpha} is orthonormal in L^2(dmu_alpha) and satisfies
// the eigenvalue identity with eigenvalue 4|k| + 2|alpha| + 2d.
double laguerre_fn(const MultiIndex& k, const AlphaIndex& alpha, const PointRd& x);

// One-dimensional building block of laguerre_fn: c_k^a L_k^a(u) e^{-u/2}
// evaluated at u (so l_k^a(x) = laguerre_fn_1d(k, a, x*x)). Stable for
// large u because the Gaussian factor rides along the recurrence.
double laguerre_fn_1d(int k, double a, double u);

// All values laguerre_fn_1d(k, a, u) for k = 0..k_max from one recurrence sweep.
std::vector<double> laguerre_fn_1d_all(int k_max, double a, double u);

// Iterated Laguerre derivative delta^n l_k^alpha(x), where delta_{x_i} =
// d/dx_i + x_i acts coordinate-wise through the closed-form identity
// delta l_k^a = -2x c_k^a L_{k-1}^{a+1}(x^2) e^{-x^2/2} (zero for k = 0).
double delta_laguerre_fn(const MultiIndex& k, const AlphaIndex& alpha, const PointRd& x,
                         const MultiIndex& n);

// Eigenvalue 4|k| + 2|alpha| + 2d of the Laguerre operator on l_k^alpha.
double laguerre_eigenvalue(const MultiIndex& k, const AlphaIndex& alpha);

// All tuples (p_1, ..., p_N) of nonnegative integers with
// p_1 + 2 p_2 + ... + N p_N = N. Their count equals the number of
// integer partitions of N.
std::vector<std::vector<int>> faa_partitions(int N);

// N-th derivative of a composition g(f(x)) from the derivative lists
//   g_derivs[j] = g^{(j)}(f(x)),  j = 0..N   (length >= N+1)
//   f_derivs[j-1] = f^{(j)}(x),   j = 1..N   (length >= N),
// combined over faa_partitions(N) with coefficients
// N! / (p_1! ... p_N! (1!)^{p_1} ... (N!)^{p_N}).
double compose_derivative(std::span<const double> g_derivs, std::span<const double> f_derivs,
                          int N);

}  // namespace lagcz

#endif
