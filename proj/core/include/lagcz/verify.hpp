#ifndef LAGCZ_VERIFY_HPP
#define LAGCZ_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "lagcz/types.hpp"

namespace lagcz {

struct CheckResult {
    std::string name;
    double tolerance;
    double achieved;
    bool pass;
};

struct VerifyOptions {
    AlphaIndex alpha{-0.75};
    std::uint64_t seed = 20260810;
    int n_recurrence = 2000;
    long n_samples = 100000;   // pointwise inequality sampling
    double bessel_fault = 0.0; // test fixture: scales one recurrence term to force a failure
    int threads = 0;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_pass = true;
    std::string to_json() const;
};

// Identity suite: representation agreement, integral representation of the
// scaled Bessel function, three-term recurrence, orthonormality, eigenvalue
// identity, semigroup composition, subordination, derivative-composition
// formula, and the sampled pointwise inequalities.
VerifyReport run_verify(const VerifyOptions& opt);

// ---------------------------------------------------------------------------
// Sampled inequality checks, exposed for the acceptance suite
// ---------------------------------------------------------------------------

struct PointwiseSampleReport {
    long n = 0;
    long violations_component_bound = 0;  // |Psi|, |Phi| <= sqrt(q)
    long violations_exp_bound = 0;        // (Aq)^b e^{-cAq} <= (b/(ce))^b
    double exp_bound_sampled_sup = 0.0;   // should approach the analytic max
    double exp_bound_analytic_max = 0.0;
    double sup_plus_ratio = 0.0;          // (|Psi_+|+|Phi_+|)^b Exp^c / zeta^{b/2}
    double sup_minus_ratio = 0.0;         // (|Psi_-|+|Phi_-|)^b Exp^c zeta^{b/2}
    double sup_coord_ratio = 0.0;         // x_j^b Exp^c zeta^{b/2}
};
PointwiseSampleReport sample_qform_pointwise(std::uint64_t seed, long n, int dim);

struct ShiftSampleReport {
    long n = 0;
    long violations = 0;  // quarter/fourfold comparability under |x-y| > 2|x-z|
};
ShiftSampleReport sample_qform_shift(std::uint64_t seed, long n, int dim);

struct BallShiftReport {
    long n = 0;
    double sup_ratio = 0.0;  // max of r and 1/r over the sample set
};
BallShiftReport sample_ball_shift(const AlphaIndex& alpha, std::uint64_t seed, long n);

}  // namespace lagcz

#endif
