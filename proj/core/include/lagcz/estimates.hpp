#ifndef LAGCZ_ESTIMATES_HPP
#define LAGCZ_ESTIMATES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lagcz/kernels.hpp"
#include "lagcz/measure.hpp"
#include "lagcz/types.hpp"

namespace lagcz {

// ---------------------------------------------------------------------------
// Pointwise ratios against the homogeneous-type bounds
// ---------------------------------------------------------------------------

// ||K(x,y)||_B * mu_alpha(B(x, |x-y|)); bounded iff the growth estimate holds.
double growth_ratio(const KernelSpec& spec, const AlphaIndex& alpha, const PointRd& x,
                    const PointRd& y);

// ||K(x,y) - K(x',y)||_B divided by (|x-x'|/|x-y|) / mu_alpha(B(x, |x-y|));
// requires |x-y| > 2|x-x'|. The y-side analogue mirrors the roles.
double smoothness_ratio_x(const KernelSpec& spec, const AlphaIndex& alpha, const PointRd& x,
                          const PointRd& x_prime, const PointRd& y);
double smoothness_ratio_y(const KernelSpec& spec, const AlphaIndex& alpha, const PointRd& x,
                          const PointRd& y, const PointRd& y_prime);

// |grad_{x,y} K| * |x-y| * mu_alpha(B(x, |x-y|)) for scalar-valued families,
// with the gradient taken by Richardson finite differences of the kernel.
double gradient_ratio(const KernelSpec& spec, const AlphaIndex& alpha, const PointRd& x,
                      const PointRd& y);

// ---------------------------------------------------------------------------
// Sweep configuration and reports
// ---------------------------------------------------------------------------

struct SweepConfig {
    int schema_version = 1;
    std::vector<std::vector<double>> alphas{{-0.9}, {-0.5}, {0.0}, {2.5}, {-0.9, 1.5}};
    std::vector<std::string> families{"heat_max", "riesz", "square", "laplace", "stieltjes"};
    std::vector<double> base_coords{0.1, 0.5, 2.0};
    int near_diag_levels = 1;      // refinement depth reported on top of the base grid
    int pi_nodes = 64;             // nodes per coordinate for measure-on-[-1,1] rules
    double refine_growth_limit = 0.10;
    std::uint64_t seed = 20260810;
    int threads = 0;               // 0 = hardware concurrency

    // Strict parse: unknown keys are errors, schema_version must match.
    static SweepConfig from_json_text(const std::string& text);
    std::string to_json() const;
};

// Grid of evaluation pairs: separated base pairs plus near-diagonal shells
// |x - y| in {1e-1, 1e-2, ...} shrinking one decade per refinement level.
std::vector<std::pair<PointRd, PointRd>> sweep_pairs(const std::vector<double>& base_coords,
                                                     int dim, int level);

struct KindStat {
    std::string kind;  // "growth", "smooth_x", "smooth_y", "gradient"
    double sup_base = 0.0;
    double sup_refined = 0.0;
    double delta_rel = 0.0;
    std::vector<double> worst_x, worst_y;
    bool stable = true;
};

struct FamilyReport {
    std::string family;
    std::string alpha_label;
    std::vector<KindStat> kinds;
    bool stable = true;
};

struct RatioSample {
    std::string family;
    std::string alpha_label;
    std::vector<double> x, y;
    std::string kind;
    int level = 0;
    double value = 0.0;
};

struct EstimateReport {
    SweepConfig config;
    std::vector<FamilyReport> families;
    std::vector<RatioSample> samples;
    bool all_stable = true;

    std::string to_json() const;
    std::string to_csv() const;  // RFC-4180, header row
};

EstimateReport run_sweep(const SweepConfig& config);

// Kernel family named in a sweep config, instantiated for dimension d with
// the default parameters (first-order Riesz / square, psi = e^{-t}, one atom).
KernelSpec family_by_name(const std::string& name, int d);

// ---------------------------------------------------------------------------
// Quantitative integral-bound checks
// ---------------------------------------------------------------------------

struct BoundCheckReport {
    std::string name;
    double sup_base = 0.0;
    double sup_refined = 0.0;
    double delta_rel = 0.0;
    bool finite = true;
    bool stable = true;
    std::vector<std::pair<std::string, double>> details;
    std::string to_json() const;
};

// sup over (x,y) of (x+y)^{2 xi} [int q_+^{-(d+|alpha|+|xi|)} dPi_{alpha+xi+kappa}]
// * mu_alpha(B(x,|x-y|)), together with the companion ratio carrying exponent
// d+|alpha|+|xi|+1/2 and an extra factor |x-y|. Hypothesis:
// xi, kappa >= 0 and alpha+xi+kappa in [-1/2, inf)^d.
BoundCheckReport pi_qform_growth_check(const AlphaIndex& alpha, const std::vector<double>& xi,
                                       const std::vector<double>& kappa, int pi_nodes = 64);

// sup over A > B > 0 of [int dPi_{a+b}(s) / (A - B s)^{a+1/2+lam}] * A^{a+1/2} (A-B)^lam,
// a >= -1/2, b >= 0, lam > 0; the grid pushes B/A -> 1.
BoundCheckReport pi_rational_bound_check(double a, double b, double lam, int pi_nodes = 64);

// int_0^1 (log((1+z)/(1-z)))^M (1-z^2)^{b-1} z^{-a-M} e^{-T/z} dz, a > 1, b > 0.
double log_weight_tail_integral(double a, double b, int M, double T);
// sup over T in [1e-3, 1e3] of T^{a-1} times the integral above.
BoundCheckReport log_weight_tail_check(double a, double b, int M);

// Weighted time-profile bound: with D = d+|alpha|+2|eps| and
//   p_u(x,y,z) = (1-z^2)^D z^{-D+|th|/2+|rh|/2-W/p-u/2} x^{2 eps - th} y^{2 eps - rh}
//                int Exp(z, q)^C dPi_{alpha+1+eps},
// sup over (x,y) of ||p_u(x,y,z(t))||_{L^p(t^{W-1}dt)} |x-y|^u mu_alpha(B(x,|x-y|)).
// p may be 1, 2 or infinity; th <= 2 eps and rh <= 2 eps componentwise.
BoundCheckReport profile_norm_bound_check(const AlphaIndex& alpha, const MultiIndex& eps,
                                          const MultiIndex& th, const MultiIndex& rh, double u,
                                          double p, double W, double C, int pi_nodes = 64);

// ---------------------------------------------------------------------------
// Report formatting helpers (shared with the CLI)
// ---------------------------------------------------------------------------

// Full-precision scientific form, 17 significant digits.
std::string fmt_full(double v);
// RFC-4180 field quoting.
std::string csv_quote(const std::string& s);
std::string point_label(const std::vector<double>& coords);

}  // namespace lagcz

#endif
