#include "lagcz/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lagcz {

namespace {

// Ascending series sum_m (z/2)^{nu+2m} / (m! Gamma(nu+m+1)), scaled by e^{-z}.
// All terms are positive, so there is no cancellation; the running sum is
// rescaled on the fly so that arguments up to z ~ 700 and beyond stay finite.
double bessel_series_scaled(double nu, double z) {
    const double q = 0.25 * z * z;
    double sum = 1.0;
    double term = 1.0;
    double log_shift = 0.0;
    for (int m = 0; m < 100000; ++m) {
        term *= q / ((m + 1.0) * (nu + m + 1.0));
        sum += term;
        if (term < 1e-18 * sum) break;
        if (sum > 1e280) {
            sum *= 1e-280;
            term *= 1e-280;
            log_shift += 280.0 * std::log(10.0);
        }
    }
    const double log_pref = nu * std::log(0.5 * z) - std::lgamma(nu + 1.0) - z + log_shift;
    return std::exp(log_pref) * sum;
}

// Hankel asymptotic expansion: e^{-z} I_nu(z) ~ (2 pi z)^{-1/2} sum_k (-1)^k a_k(nu)/z^k
// with a_k(nu) = prod_{j=1..k} (4 nu^2 - (2j-1)^2) / (k! 8^k). The exponentially
// small reflection term is below 1e-27 for z >= 32 and is dropped.
double bessel_asymptotic_scaled(double nu, double z) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    double smallest = 1.0;
    for (int k = 1; k <= 80; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu - odd * odd) / (8.0 * k * z);
        const double mag = std::fabs(term);
        if (mag > smallest) break;  // the expansion started to diverge
        smallest = mag;
        sum += term;
        if (mag < 1e-17 * std::fabs(sum)) break;
    }
    return sum / std::sqrt(2.0 * M_PI * z);
}

constexpr int kFactorialMax = 24;

double factorial(int n) {
    static const auto table = [] {
        std::array<double, kFactorialMax + 1> f{};
        f[0] = 1.0;
        for (int i = 1; i <= kFactorialMax; ++i) f[i] = f[i - 1] * i;
        return f;
    }();
    return table[static_cast<std::size_t>(n)];
}

// Term of the iterated-delta expansion: coef * x^xpow * L_deg^{ord}(x^2) e^{-x^2/2}.
struct DeltaTerm {
    double coef;
    int xpow;
    int deg;
    double ord;
};

// delta (x^p L_m^b(x^2) e^{-x^2/2}) = p x^{p-1} L_m^b(x^2) e^{-x^2/2}
//                                     - 2 x^{p+1} L_{m-1}^{b+1}(x^2) e^{-x^2/2}
std::vector<DeltaTerm> apply_delta(const std::vector<DeltaTerm>& terms) {
    std::vector<DeltaTerm> out;
    out.reserve(2 * terms.size());
    for (const DeltaTerm& t : terms) {
        if (t.xpow >= 1) out.push_back({t.coef * t.xpow, t.xpow - 1, t.deg, t.ord});
        if (t.deg >= 1) out.push_back({-2.0 * t.coef, t.xpow + 1, t.deg - 1, t.ord + 1.0});
    }
    return out;
}

// delta^n applied to the 1-d orthonormal Laguerre function, evaluated at x.
double delta_laguerre_1d(int k, double a, double x, int n) {
    if (n == 0) return laguerre_fn_1d(k, a, x * x);
    std::vector<DeltaTerm> terms{{1.0, 0, k, a}};
    for (int j = 0; j < n; ++j) terms = apply_delta(terms);
    if (terms.empty()) return 0.0;
    const double u = x * x;
    const double log_norm = 0.5 * (std::log(2.0) + std::lgamma(k + 1.0) - std::lgamma(k + a + 1.0));
    const double norm = std::exp(log_norm - 0.5 * u);
    double sum = 0.0;
    for (const DeltaTerm& t : terms)
        sum += t.coef * std::pow(x, t.xpow) * laguerre_poly(t.deg, t.ord, u);
    return norm * sum;
}

void enumerate_partitions(int i, int remaining, std::vector<int>& cur,
                          std::vector<std::vector<int>>& out) {
    if (i == 0) {
        if (remaining == 0) out.push_back(cur);
        return;
    }
    // p_i may take any value with i * p_i <= remaining; i == 1 is forced.
    if (i == 1) {
        cur[0] = remaining;
        out.push_back(cur);
        cur[0] = 0;
        return;
    }
    for (int p = 0; i * p <= remaining; ++p) {
        cur[static_cast<std::size_t>(i - 1)] = p;
        enumerate_partitions(i - 1, remaining - i * p, cur, out);
    }
    cur[static_cast<std::size_t>(i - 1)] = 0;
}

}  // namespace

double bessel_i_scaled(double nu, double z) {
    if (!(nu > -1.0)) throw std::domain_error("bessel_i_scaled: order must be > -1");
    if (z < 0.0 || !std::isfinite(z)) throw std::domain_error("bessel_i_scaled: argument must be >= 0 and finite");
    if (z == 0.0) {
        if (nu == 0.0) return 1.0;
        return nu > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    // The asymptotic expansion needs z comfortably beyond 4 nu^2 / (8 z) < 1;
    // otherwise the series (valid everywhere) is both accurate and overflow-safe.
    if (z <= 32.0 || nu * nu > 1.6 * z) return bessel_series_scaled(nu, z);
    return bessel_asymptotic_scaled(nu, z);
}

double laguerre_poly(int k, double a, double u) {
    if (k < 0) throw std::domain_error("laguerre_poly: degree must be >= 0");
    if (!(a > -1.0)) throw std::domain_error("laguerre_poly: parameter must be > -1");
    if (k == 0) return 1.0;
    double pm1 = 1.0;
    double p = 1.0 + a - u;
    for (int m = 1; m < k; ++m) {
        const double next = ((2.0 * m + 1.0 + a - u) * p - (m + a) * pm1) / (m + 1.0);
        pm1 = p;
        p = next;
    }
    return p;
}

double laguerre_fn_1d(int k, double a, double u) {
    if (k < 0) throw std::domain_error("laguerre_fn_1d: degree must be >= 0");
    if (!(a > -1.0)) throw std::domain_error("laguerre_fn_1d: parameter must be > -1");
    // Recurrence on the normalized functions c_k^a L_k^a(u) e^{-u/2}; the
    // normalization keeps every iterate O(1) on the oscillatory range.
    double p = std::exp(0.5 * (std::log(2.0) - std::lgamma(a + 1.0)) - 0.5 * u);
    if (k == 0) return p;
    double pm1 = 0.0;
    for (int m = 0; m < k; ++m) {
        const double next =
            ((2.0 * m + 1.0 + a - u) * p - std::sqrt(m * (m + a)) * pm1) /
            std::sqrt((m + 1.0) * (m + 1.0 + a));
        pm1 = p;
        p = next;
    }
    return p;
}

std::vector<double> laguerre_fn_1d_all(int k_max, double a, double u) {
    if (k_max < 0) throw std::domain_error("laguerre_fn_1d_all: k_max must be >= 0");
    if (!(a > -1.0)) throw std::domain_error("laguerre_fn_1d_all: parameter must be > -1");
    std::vector<double> out(static_cast<std::size_t>(k_max + 1));
    double p = std::exp(0.5 * (std::log(2.0) - std::lgamma(a + 1.0)) - 0.5 * u);
    out[0] = p;
    double pm1 = 0.0;
    for (int m = 0; m < k_max; ++m) {
        const double next =
            ((2.0 * m + 1.0 + a - u) * p - std::sqrt(m * (m + a)) * pm1) /
            std::sqrt((m + 1.0) * (m + 1.0 + a));
        pm1 = p;
        p = next;
        out[static_cast<std::size_t>(m + 1)] = p;
    }
    return out;
}

double laguerre_fn(const MultiIndex& k, const AlphaIndex& alpha, const PointRd& x) {
    require_same_dim(k.dim(), alpha.dim(), "laguerre_fn");
    require_same_dim(x.dim(), alpha.dim(), "laguerre_fn");
    double prod = 1.0;
    for (int i = 0; i < alpha.dim(); ++i) prod *= laguerre_fn_1d(k[i], alpha[i], x[i] * x[i]);
    return prod;
}

double delta_laguerre_fn(const MultiIndex& k, const AlphaIndex& alpha, const PointRd& x,
                         const MultiIndex& n) {
    require_same_dim(k.dim(), alpha.dim(), "delta_laguerre_fn");
    require_same_dim(x.dim(), alpha.dim(), "delta_laguerre_fn");
    require_same_dim(n.dim(), alpha.dim(), "delta_laguerre_fn");
    double prod = 1.0;
    for (int i = 0; i < alpha.dim(); ++i) {
        prod *= delta_laguerre_1d(k[i], alpha[i], x[i], n[i]);
        if (prod == 0.0) return 0.0;
    }
    return prod;
}

double laguerre_eigenvalue(const MultiIndex& k, const AlphaIndex& alpha) {
    require_same_dim(k.dim(), alpha.dim(), "laguerre_eigenvalue");
    return 4.0 * k.order() + 2.0 * alpha.total() + 2.0 * alpha.dim();
}

std::vector<std::vector<int>> faa_partitions(int N) {
    if (N < 1) throw std::domain_error("faa_partitions: N must be >= 1");
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(N), 0);
    enumerate_partitions(N, N, cur, out);
    return out;
}

double compose_derivative(std::span<const double> g_derivs, std::span<const double> f_derivs,
                          int N) {
    if (N < 1) throw std::domain_error("compose_derivative: N must be >= 1");
    if (N > kFactorialMax) throw std::domain_error("compose_derivative: order too large");
    if (static_cast<int>(g_derivs.size()) < N + 1)
        throw std::invalid_argument("compose_derivative: need g^(j) for j = 0..N");
    if (static_cast<int>(f_derivs.size()) < N)
        throw std::invalid_argument("compose_derivative: need f^(j) for j = 1..N");
    double total = 0.0;
    for (const std::vector<int>& p : faa_partitions(N)) {
        double coef = factorial(N);
        int g_order = 0;
        double prod = 1.0;
        for (int i = 1; i <= N; ++i) {
            const int pi = p[static_cast<std::size_t>(i - 1)];
            if (pi == 0) continue;
            g_order += pi;
            coef /= factorial(pi) * std::pow(factorial(i), pi);
            prod *= std::pow(f_derivs[static_cast<std::size_t>(i - 1)], pi);
        }
        total += coef * g_derivs[static_cast<std::size_t>(g_order)] * prod;
    }
    return total;
}

}  // namespace lagcz
