#ifndef LAGCZ_OPERATORS_HPP
#define LAGCZ_OPERATORS_HPP

#include <complex>
#include <functional>
#include <variant>
#include <vector>

#include "lagcz/kernels.hpp"
#include "lagcz/quadrature.hpp"
#include "lagcz/types.hpp"

namespace lagcz {

// All multi-indices k with |k| <= k_max in d coordinates, graded
// lexicographic (shell by shell).
std::vector<MultiIndex> spectral_index_set(int d, int k_max);

// Truncated table of Fourier-Laguerre coefficients <f, l_k> for |k| <= k_max.
// Coefficients may be complex (imaginary-power multipliers produce them).
struct SpectralVector {
    AlphaIndex alpha;
    int k_max;
    std::vector<MultiIndex> index;  // spectral_index_set(alpha.dim(), k_max)
    std::vector<std::complex<double>> coeff;

    double norm() const;                          // l^2 of the coefficients
    double last_shell_norm() const;               // tail indicator |k| = k_max
    static SpectralVector zero(AlphaIndex alpha, int k_max);
    static SpectralVector unit(AlphaIndex alpha, int k_max, const MultiIndex& k);
};

// Tensor Gauss rule exact for the weight x^{2 alpha + 1} e^{-x^2} after the
// substitution u = x^2; makes the discrete Gram of {l_k : |k| <= k_max} the
// identity up to round-off.
ProductRule projection_rule(const AlphaIndex& alpha, int k_max);

struct ProjectionResult {
    SpectralVector v;
    double residual;  // L^2(dmu) remainder of f minus its truncated expansion
};

// Fourier-Laguerre analysis of f against the rule above.
ProjectionResult project(const std::function<double(const PointRd&)>& f, const AlphaIndex& alpha,
                         int k_max, const ProductRule& rule);

// Analysis of a compactly supported f (d = 1) by quadrature over its support
// interval; resolves sharply localized inputs that the global rule cannot.
SpectralVector project_on_interval(const std::function<double(double)>& f,
                                   const AlphaIndex& alpha, int k_max, double lo, double hi,
                                   int nodes = 160);

// Smooth bump supported exactly on (lo, hi); vanishes to all orders at the ends.
double compact_bump(double x, double lo, double hi);

// Pointwise synthesis sum_k c_k l_k(x).
std::complex<double> synthesize(const SpectralVector& v, const PointRd& x);

// Heat semigroup on coefficients: c_k -> e^{-t lambda_k} c_k (t >= 0).
SpectralVector heat_apply(const SpectralVector& v, double t);

// Maximal function sup_t |T_t f(x)| over {0} union the grid nodes; the t = 0
// limit equals f(x) itself and realizes the supremum for monotone profiles.
double maximal_apply(const SpectralVector& v, const PointRd& x, const QuadRule& t_grid);

// Riesz transform of order n: sum_k lambda_k^{-|n|/2} c_k delta^n l_k(x).
std::complex<double> riesz_apply(const SpectralVector& v, const MultiIndex& n, const PointRd& x);

// Square function: L^2(t^{|n|+2m-1} dt) norm in t of d_t^m delta^n T_t f(x),
// evaluated on the supplied t-weighted rule (its weight W must match |n|+2m).
double gfun_apply(const SpectralVector& v, const MultiIndex& n, int m, const PointRd& x,
                  const QuadRule& t_rule);

// Spectral multiplier symbols m(z), evaluated lazily at the eigenvalues.
struct LaplaceSymbol {
    std::function<std::complex<double>(double)> psi;  // bounded on (0, inf)
    double psi_sup;
};
struct StieltjesSymbol {
    NuMeasure nu;
};
struct ExplicitSymbol {
    std::function<std::complex<double>(double)> m;
};
struct MultiplierSymbol {
    std::variant<LaplaceSymbol, StieltjesSymbol, ExplicitSymbol> kind;

    static MultiplierSymbol laplace(std::function<std::complex<double>(double)> psi, double sup);
    static MultiplierSymbol stieltjes(NuMeasure nu);
    static MultiplierSymbol explicit_fn(std::function<std::complex<double>(double)> m);
};

// m(z): z int_0^inf e^{-tz} psi(t) dt for the Laplace kind (adaptive quadrature
// over log t), atom sums plus density quadrature for the Stieltjes kind.
std::complex<double> multiplier_symbol_value(const MultiplierSymbol& sym, double z);

// Laplace symbol psi(t) = t^{-i gamma} / |Gamma(1 - i gamma)|, whose transform
// is the imaginary power (Gamma(1-i gamma)/|Gamma(1-i gamma)|) z^{i gamma};
// |m| = 1 on the whole spectrum. Uses |Gamma(1+iy)|^2 = pi y / sinh(pi y).
MultiplierSymbol imaginary_power_symbol(double gamma);

// Coefficient-wise application c_k -> m(lambda_k) c_k. Stieltjes symbols are
// admissibility-checked against v's alpha before use.
SpectralVector multiplier_apply(const SpectralVector& v, const MultiplierSymbol& sym);

// Operator norm of the truncated Riesz transform on span{l_k : |k| <= k_max},
// from the largest eigenvalue of its Gram matrix.
double riesz_operator_norm(const AlphaIndex& alpha, const MultiIndex& n, int k_max);

}  // namespace lagcz

#endif
