#ifndef LAGCZ_KERNELS_HPP
#define LAGCZ_KERNELS_HPP

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lagcz/quadrature.hpp"
#include "lagcz/types.hpp"

namespace lagcz {

// The time change zeta = tanh t, t = (1/2) log((1+zeta)/(1-zeta)) used by the
// integral representation of the heat kernel.
struct ZetaTime {
    double t;
    double zeta;
};
ZetaTime zeta_of_t(double t);
ZetaTime t_of_zeta(double zeta);

// q_{+-}(x, y, s) = |x|^2 + |y|^2 +- 2 sum_i x_i y_i s_i, s in [-1,1]^d.
struct QForms {
    double q_plus;
    double q_minus;
};
QForms q_forms(const PointRd& x, const PointRd& y, std::span<const double> s);

// log Exp(zeta, q) = -q_+/(4 zeta) - zeta q_-/4.
inline double log_exp_qform(double zeta, const QForms& q) {
    return -q.q_plus / (4.0 * zeta) - zeta * q.q_minus / 4.0;
}

// Building blocks of the pointwise bounds: Psi_{+-}^j = x_j +- y_j s_j and
// Phi_{+-}^j = y_j +- x_j s_j.
inline double psi_pm(const PointRd& x, const PointRd& y, std::span<const double> s, int j, int sign) {
    return x[j] + sign * y[j] * s[static_cast<std::size_t>(j)];
}
inline double phi_pm(const PointRd& x, const PointRd& y, std::span<const double> s, int j, int sign) {
    return y[j] + sign * x[j] * s[static_cast<std::size_t>(j)];
}

// ---------------------------------------------------------------------------
// Heat kernel representations
// ---------------------------------------------------------------------------

// Closed form: (sinh 2t)^{-d} exp(-coth(2t)(|x|^2+|y|^2)/2)
//              prod_i (x_i y_i)^{-alpha_i} I_{alpha_i}(x_i y_i / sinh 2t),
// assembled in the log domain with the scaled Bessel function so that the
// Bessel argument cancels against the Gaussian exponent.
double heat_kernel_closed(const AlphaIndex& alpha, double t, const PointRd& x, const PointRd& y);
double heat_kernel_closed_log(const AlphaIndex& alpha, double t, const PointRd& x, const PointRd& y);

// Truncated eigenfunction series sum_{|k| <= k_max} e^{-t lambda_k} l_k(x) l_k(y)
// together with a geometric estimate of the dropped tail.
struct SpectralValue {
    double value;
    double tail_estimate;
    double max_term;  // largest single contribution; max_term/|value| gauges cancellation
};
SpectralValue heat_kernel_spectral(const AlphaIndex& alpha, double t, const PointRd& x,
                                   const PointRd& y, int k_max);
// Throws convergence_error (carrying the partial sum) when the tail estimate
// exceeds tol * |value|.
double heat_kernel_spectral_checked(const AlphaIndex& alpha, double t, const PointRd& x,
                                    const PointRd& y, int k_max, double tol);

// Integral representation over [-1,1]^d.
//   split:  the 2^d-component representation obtained by shifting every
//           coordinate order by 1 or 2 through the Bessel recurrence; valid
//           for all alpha in (-1, inf)^d.
//   direct: the single-component representation against the product measure
//           of order alpha itself; requires alpha in [-1/2, inf)^d.
enum class SchlafliForm { split, direct };
std::vector<ProductRule> schlafli_rules(const AlphaIndex& alpha, int nodes_per_dim,
                                        SchlafliForm form = SchlafliForm::split);
double heat_kernel_schlafli(const AlphaIndex& alpha, double t, const PointRd& x, const PointRd& y,
                            const std::vector<ProductRule>& rules,
                            SchlafliForm form = SchlafliForm::split);
double heat_kernel_schlafli(const AlphaIndex& alpha, double t, const PointRd& x, const PointRd& y,
                            int nodes_per_dim, SchlafliForm form = SchlafliForm::split);

// Poisson kernel by subordination: int_0^inf G_{t^2/(4u)}(x,y) e^{-u}/sqrt(pi u) du.
double poisson_kernel(const AlphaIndex& alpha, double t, const PointRd& x, const PointRd& y);
SpectralValue poisson_kernel_spectral(const AlphaIndex& alpha, double t, const PointRd& x,
                                      const PointRd& y, int k_max);

// d_t^m delta_x^n G_t(x, y). Analytic for m + |n| <= 1 (differentiating the
// closed form through the Bessel derivative identity); Richardson finite
// differences stacked on the analytic first order otherwise. Supported for
// |n| + 2m <= 4.
double kernel_derivative(const AlphaIndex& alpha, double t, const PointRd& x, const PointRd& y,
                         const MultiIndex& n, int m);

// Riesz transform kernel Gamma(|n|/2)^{-1} int_0^inf delta_x^n G_t(x,y) t^{|n|/2-1} dt,
// |n| > 0, x != y. The substitution u = t^{|n|/2} removes the endpoint
// singularity of the time weight before adaptive integration.
double riesz_kernel(const AlphaIndex& alpha, const MultiIndex& n, const PointRd& x,
                    const PointRd& y);

// ---------------------------------------------------------------------------
// Multiplier data
// ---------------------------------------------------------------------------

// Measure nu on (0, inf) with atoms and an optionally tabulated density,
// admissible when int e^{-t(2d+2|alpha|)} d|nu|(t) is finite.
struct NuMeasure {
    struct Atom {
        double t;
        std::complex<double> weight;
    };
    std::vector<Atom> atoms;
    std::vector<double> density_t;                   // strictly increasing grid, optional
    std::vector<std::complex<double>> density_v;     // density values on density_t

    // int e^{-t(2d+2|alpha|)} d|nu|(t); throws std::domain_error naming the
    // admissibility condition when the measure is unusable.
    double admissibility_integral(const AlphaIndex& alpha) const;
    void validate(const AlphaIndex& alpha) const;
};

// Kernel of a Laplace-transform-type multiplier: -int_0^inf psi(t) d_t G_t(x,y) dt
// for bounded psi.
std::complex<double> laplace_kernel(const AlphaIndex& alpha,
                                    const std::function<std::complex<double>(double)>& psi,
                                    const PointRd& x, const PointRd& y);

// Kernel of a Laplace-Stieltjes-type multiplier: int_0^inf G_t(x,y) dnu(t).
std::complex<double> stieltjes_kernel(const AlphaIndex& alpha, const NuMeasure& nu,
                                      const PointRd& x, const PointRd& y);

// ---------------------------------------------------------------------------
// Kernel families and their Banach-norm evaluators
// ---------------------------------------------------------------------------

struct HeatMaxFamily {};
struct RieszFamily {
    MultiIndex n;  // |n| > 0
};
struct SquareFamily {
    MultiIndex n;
    int m;  // |n| + m > 0
};
struct LaplaceFamily {
    std::function<std::complex<double>(double)> psi;
    double psi_sup;  // a-priori bound on |psi|; never estimated internally
};
struct StieltjesFamily {
    NuMeasure nu;
};

enum class BanachTag { sup_t, l2_t_weighted, scalar };

struct KernelSpec {
    std::variant<HeatMaxFamily, RieszFamily, SquareFamily, LaplaceFamily, StieltjesFamily> family;

    BanachTag banach_tag() const;
    bool scalar_valued() const { return banach_tag() == BanachTag::scalar; }
    double t_weight() const;  // W = |n| + 2m for the square-function family
    std::string name() const;

    static KernelSpec heat_max();
    static KernelSpec riesz(MultiIndex n);
    static KernelSpec square_fn(MultiIndex n, int m);
    static KernelSpec laplace_mult(std::function<std::complex<double>(double)> psi, double psi_sup);
    static KernelSpec stieltjes_mult(NuMeasure nu);
};

// ||K(x,y)||_B for the spec's family: sup over an adaptively refined log
// t-grid (heat_max), the L^2(t^{W-1}dt) quadrature norm (square_fn), or the
// modulus of the scalar kernel (riesz and both multiplier families).
double banach_norm(const KernelSpec& spec, const AlphaIndex& alpha, const PointRd& x,
                   const PointRd& y);

// ||K(x,y) - K(x',y)||_B (side == x_side, `moved` = x') or
// ||K(x,y) - K(x,y')||_B (side == y_side, `moved` = y'), with the difference
// taken inside the Banach norm.
enum class Side { x_side, y_side };
double banach_diff_norm(const KernelSpec& spec, const AlphaIndex& alpha, const PointRd& x,
                        const PointRd& y, const PointRd& moved, Side side);

}  // namespace lagcz

#endif
