#include "lagcz/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lagcz/special.hpp"

namespace lagcz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Hyperbolic helpers that stay finite for large t (sinh 2t overflows doubles
// at t ~ 177, and log-space assembly needs them much earlier).
struct HypGeom {
    double log_sh;   // log sinh 2t
    double inv_sh;   // 1 / sinh 2t
    double cth;      // coth 2t
};

HypGeom hyp_geometry(double t) {
    if (t > 18.0) {
        const double e4 = std::exp(-4.0 * t);
        const double log_sh = 2.0 * t - M_LN2 + std::log1p(-e4);
        return {log_sh, std::exp(-log_sh), (1.0 + e4) / (1.0 - e4)};
    }
    const double sh = std::sinh(2.0 * t);
    return {std::log(sh), 1.0 / sh, std::cosh(2.0 * t) / sh};
}

// log(1 - zeta^2) with zeta = tanh t, i.e. -2 log cosh t, stable for all t.
double log_one_minus_zeta_sq(double t) {
    return 2.0 * (M_LN2 - t - std::log1p(std::exp(-2.0 * t)));
}

double require_positive_time(double t, const char* who) {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error(std::string(who) + ": t must be > 0");
    return t;
}

// Scaled-Bessel ratio I_{a+1}(u) / I_a(u); tends to 0 as u -> 0 (a > -1).
double bessel_ratio(double a, double u) {
    if (u <= 0.0) return 0.0;
    return bessel_i_scaled(a + 1.0, u) / bessel_i_scaled(a, u);
}

double step_toward_zero(double x, double h) { return std::min(h, 0.25 * x); }

// Centered first derivative with one Richardson extrapolation level.
template <class F>
double d1_richardson(F&& f, double x0, double h) {
    const double d_h = (f(x0 + h) - f(x0 - h)) / (2.0 * h);
    const double d_h2 = (f(x0 + 0.5 * h) - f(x0 - 0.5 * h)) / h;
    return (4.0 * d_h2 - d_h) / 3.0;
}

double delta_n_closed(const AlphaIndex& alpha, double t, const PointRd& x, const PointRd& y,
                      const MultiIndex& n);

// Analytic delta_{x_j} G = G (x_j (1 - coth 2t) + y_j / sinh 2t * I_{a+1}/I_a).
double analytic_delta1(const AlphaIndex& alpha, double t, const PointRd& x, const PointRd& y,
                       int j) {
    const HypGeom g = hyp_geometry(t);
    const double G = heat_kernel_closed(alpha, t, x, y);
    const double u = x[j] * y[j] * g.inv_sh;
    return G * (x[j] * (1.0 - g.cth) + y[j] * g.inv_sh * bessel_ratio(alpha[j], u));
}

// Analytic d_t G via logarithmic differentiation of the closed form.
double analytic_dt(const AlphaIndex& alpha, double t, const PointRd& x, const PointRd& y) {
    const HypGeom g = hyp_geometry(t);
    const double G = heat_kernel_closed(alpha, t, x, y);
    const double S = x.sq_norm() + y.sq_norm();
    double bessel_part = 0.0;
    for (int i = 0; i < alpha.dim(); ++i) {
        const double u = x[i] * y[i] * g.inv_sh;
        bessel_part += u * bessel_ratio(alpha[i], u) + alpha[i];
    }
    return G * (-2.0 * alpha.dim() * g.cth + S * g.inv_sh * g.inv_sh - 2.0 * g.cth * bessel_part);
}

// delta_x^n G with the first order analytic and higher coordinate orders
// peeled off by Richardson differences of the level below.
double delta_n_closed(const AlphaIndex& alpha, double t, const PointRd& x, const PointRd& y,
                      const MultiIndex& n) {
    const int total = n.order();
    if (total == 0) return heat_kernel_closed(alpha, t, x, y);
    if (total == 1) {
        for (int j = 0; j < n.dim(); ++j)
            if (n[j] == 1) return analytic_delta1(alpha, t, x, y, j);
    }
    int j = 0;
    while (n[j] == 0) ++j;
    std::vector<int> rest = n.components();
    rest[static_cast<std::size_t>(j)] -= 1;
    const MultiIndex n_rest(rest);
    auto f = [&](double xj) {
        std::vector<double> c = x.coords();
        c[static_cast<std::size_t>(j)] = xj;
        return delta_n_closed(alpha, t, PointRd(c), y, n_rest);
    };
    const double h = step_toward_zero(x[j], 1e-4 * std::max(1.0, x[j]));
    return d1_richardson(f, x[j], h) + x[j] * f(x[j]);
}

double l1_on_rule(const QuadRule& rule, const std::function<double(double)>& f) {
    double s = 0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::fabs(f(rule.nodes[i]));
    return s;
}

// Default time window: everything outside is below e^{-42} of the peak.
double default_t_hi(const AlphaIndex& alpha) {
    const double lam0 = 2.0 * alpha.total() + 2.0 * alpha.dim();
    return std::max(20.0, 45.0 / lam0);
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    const double step = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
    return g;
}

void require_off_diagonal(const PointRd& x, const PointRd& y, const char* who) {
    if (dist(x, y) == 0.0) throw std::domain_error(std::string(who) + ": x and y must differ");
}

// sup over a log t-grid with one golden-section refinement around the argmax.
double sup_over_t(const std::function<double(double)>& f, double t_lo, double t_hi, int n_grid) {
    const std::vector<double> grid = log_grid(t_lo, t_hi, n_grid);
    double best = -kInf;
    int arg = 0;
    for (int i = 0; i < n_grid; ++i) {
        const double v = f(grid[static_cast<std::size_t>(i)]);
        if (v > best) {
            best = v;
            arg = i;
        }
    }
    double a = std::log(grid[static_cast<std::size_t>(std::max(0, arg - 1))]);
    double b = std::log(grid[static_cast<std::size_t>(std::min(n_grid - 1, arg + 1))]);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(std::exp(c)), fd = f(std::exp(d));
    for (int it = 0; it < 48 && b - a > 1e-12; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(std::exp(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(std::exp(d));
        }
        best = std::max(best, std::max(fc, fd));
    }
    return best;
}

}  // namespace

ZetaTime zeta_of_t(double t) {
    require_positive_time(t, "zeta_of_t");
    double z = std::tanh(t);
    // tanh saturates to 1.0 in binary64 near t ~ 19; clamp into the open
    // interval so the pair stays usable downstream.
    if (z >= 1.0) z = std::nextafter(1.0, 0.0);
    return {t, z};
}

ZetaTime t_of_zeta(double zeta) {
    if (!(zeta > 0.0) || !(zeta < 1.0))
        throw std::domain_error("t_of_zeta: zeta must lie in (0, 1)");
    return {std::atanh(zeta), zeta};
}

QForms q_forms(const PointRd& x, const PointRd& y, std::span<const double> s) {
    require_same_dim(x.dim(), y.dim(), "q_forms");
    require_same_dim(x.dim(), static_cast<int>(s.size()), "q_forms");
    double cross = 0.0;
    for (int i = 0; i < x.dim(); ++i) {
        const double si = s[static_cast<std::size_t>(i)];
        if (std::fabs(si) > 1.0) throw std::domain_error("q_forms: s components must lie in [-1, 1]");
        cross += x[i] * y[i] * si;
    }
    const double base = x.sq_norm() + y.sq_norm();
    return {base + 2.0 * cross, base - 2.0 * cross};
}

double heat_kernel_closed_log(const AlphaIndex& alpha, double t, const PointRd& x,
                              const PointRd& y) {
    require_same_dim(alpha.dim(), x.dim(), "heat_kernel_closed");
    require_same_dim(alpha.dim(), y.dim(), "heat_kernel_closed");
    require_positive_time(t, "heat_kernel_closed");
    const int d = alpha.dim();
    const HypGeom g = hyp_geometry(t);
    const double S = x.sq_norm() + y.sq_norm();
    double cross = 0.0;
    for (int i = 0; i < d; ++i) cross += x[i] * y[i];
    // -coth(2t) S / 2 + sum_i u_i, assembled as one difference so the small-t
    // cancellation happens between exactly representable pieces.
    double lg = -d * g.log_sh - 0.5 * S * g.cth + cross * g.inv_sh;
    for (int i = 0; i < d; ++i) {
        const double u = x[i] * y[i] * g.inv_sh;
        if (u > 1e-10) {
            lg += -alpha[i] * std::log(x[i] * y[i]) + std::log(bessel_i_scaled(alpha[i], u));
        } else {
            // small-argument limit (u/2)^a / Gamma(a+1) of the Bessel factor
            lg += -alpha[i] * (g.log_sh + M_LN2) - std::lgamma(alpha[i] + 1.0);
        }
    }
    return lg;
}

double heat_kernel_closed(const AlphaIndex& alpha, double t, const PointRd& x, const PointRd& y) {
    return std::exp(heat_kernel_closed_log(alpha, t, x, y));
}

SpectralValue heat_kernel_spectral(const AlphaIndex& alpha, double t, const PointRd& x,
                                   const PointRd& y, int k_max) {
    require_same_dim(alpha.dim(), x.dim(), "heat_kernel_spectral");
    require_same_dim(alpha.dim(), y.dim(), "heat_kernel_spectral");
    require_positive_time(t, "heat_kernel_spectral");
    if (k_max < 0) throw std::domain_error("heat_kernel_spectral: k_max must be >= 0");
    const int d = alpha.dim();
    // shell[s] = sum_{|k| = s} prod_i l_{k_i}(x_i) l_{k_i}(y_i), formed by a
    // truncated polynomial product of the per-coordinate sequences.
    std::vector<double> shell;
    for (int i = 0; i < d; ++i) {
        const std::vector<double> px = laguerre_fn_1d_all(k_max, alpha[i], x[i] * x[i]);
        const std::vector<double> py = laguerre_fn_1d_all(k_max, alpha[i], y[i] * y[i]);
        std::vector<double> p(static_cast<std::size_t>(k_max + 1));
        for (int k = 0; k <= k_max; ++k)
            p[static_cast<std::size_t>(k)] =
                px[static_cast<std::size_t>(k)] * py[static_cast<std::size_t>(k)];
        if (i == 0) {
            shell = std::move(p);
        } else {
            std::vector<double> next(static_cast<std::size_t>(k_max + 1), 0.0);
            for (int a = 0; a <= k_max; ++a)
                for (int b = 0; a + b <= k_max; ++b)
                    next[static_cast<std::size_t>(a + b)] +=
                        shell[static_cast<std::size_t>(a)] * p[static_cast<std::size_t>(b)];
            shell = std::move(next);
        }
    }
    const double lam0 = 2.0 * alpha.total() + 2.0 * d;
    double value = 0.0;
    double max_term = 0.0;
    for (int s = k_max; s >= 0; --s) {  // smallest contributions first
        const double c = std::exp(-t * (4.0 * s + lam0)) * shell[static_cast<std::size_t>(s)];
        value += c;
        max_term = std::max(max_term, std::fabs(c));
    }
    const double last = std::fabs(std::exp(-t * (4.0 * k_max + lam0)) *
                                  shell[static_cast<std::size_t>(k_max)]);
    const double r = std::exp(-4.0 * t);
    return {value, last * r / (1.0 - r), max_term};
}

double heat_kernel_spectral_checked(const AlphaIndex& alpha, double t, const PointRd& x,
                                    const PointRd& y, int k_max, double tol) {
    const SpectralValue v = heat_kernel_spectral(alpha, t, x, y, k_max);
    if (!(v.tail_estimate <= tol * std::fabs(v.value)))
        throw convergence_error("heat_kernel_spectral: truncation estimate exceeds tolerance",
                                v.value, v.tail_estimate / std::fabs(v.value));
    return v.value;
}

std::vector<ProductRule> schlafli_rules(const AlphaIndex& alpha, int nodes_per_dim,
                                        SchlafliForm form) {
    const int d = alpha.dim();
    std::vector<ProductRule> rules;
    if (form == SchlafliForm::direct) {
        for (int i = 0; i < d; ++i)
            if (alpha[i] < -0.5)
                throw std::domain_error(
                    "schlafli_rules: the single-component form needs alpha >= -1/2; use the split form");
        ProductRule r;
        for (int i = 0; i < d; ++i) r.factors.push_back(pi_measure_rule(alpha[i], nodes_per_dim));
        rules.push_back(std::move(r));
        return rules;
    }
    for (int eps = 0; eps < (1 << d); ++eps) {
        ProductRule r;
        for (int i = 0; i < d; ++i) {
            const int ei = (eps >> i) & 1;
            r.factors.push_back(pi_measure_rule(alpha[i] + 1.0 + ei, nodes_per_dim));
        }
        rules.push_back(std::move(r));
    }
    return rules;
}

double heat_kernel_schlafli(const AlphaIndex& alpha, double t, const PointRd& x, const PointRd& y,
                            const std::vector<ProductRule>& rules, SchlafliForm form) {
    require_same_dim(alpha.dim(), x.dim(), "heat_kernel_schlafli");
    require_same_dim(alpha.dim(), y.dim(), "heat_kernel_schlafli");
    require_positive_time(t, "heat_kernel_schlafli");
    const int d = alpha.dim();
    const double zeta = zeta_of_t(t).zeta;
    const double log_ratio = log_one_minus_zeta_sq(t) - std::log(2.0 * zeta);
    auto log_exp_at = [&](std::span<const double> s) {
        return log_exp_qform(zeta, q_forms(x, y, s));
    };
    if (form == SchlafliForm::direct) {
        if (rules.size() != 1) throw std::invalid_argument("heat_kernel_schlafli: expected one rule");
        const double D = d + alpha.total();
        return std::exp(D * log_ratio + product_log_sum_exp(rules[0], log_exp_at));
    }
    if (rules.size() != (1u << d))
        throw std::invalid_argument("heat_kernel_schlafli: expected 2^d rules");
    double total = 0.0;
    for (int eps = 0; eps < (1 << d); ++eps) {
        int eps_order = 0;
        double log_pref = 0.0;
        for (int i = 0; i < d; ++i) {
            if ((eps >> i) & 1) {
                eps_order += 1;
                log_pref += 2.0 * std::log(x[i] * y[i]);
            } else {
                log_pref += std::log(2.0 * (alpha[i] + 1.0));
            }
        }
        const double D = d + alpha.total() + 2.0 * eps_order;
        const double lse = product_log_sum_exp(rules[static_cast<std::size_t>(eps)], log_exp_at);
        total += std::exp(log_pref + D * log_ratio + lse);
    }
    return total;
}

double heat_kernel_schlafli(const AlphaIndex& alpha, double t, const PointRd& x, const PointRd& y,
                            int nodes_per_dim, SchlafliForm form) {
    return heat_kernel_schlafli(alpha, t, x, y, schlafli_rules(alpha, nodes_per_dim, form), form);
}

double poisson_kernel(const AlphaIndex& alpha, double t, const PointRd& x, const PointRd& y) {
    require_positive_time(t, "poisson_kernel");
    // u = v^2 removes the 1/sqrt(u) endpoint weight: 2/sqrt(pi) int G_{t^2/(4v^2)} e^{-v^2} dv.
    auto f = [&](double v) {
        if (v <= 0.0) return 0.0;
        const double tv = t * t / (4.0 * v * v);
        const double lg = heat_kernel_closed_log(alpha, tv, x, y) - v * v;
        return std::exp(lg);
    };
    QuadRule coarse = gauss_legendre_rule(64, 0.0, 12.0);
    const double scale = l1_on_rule(coarse, f);
    const double tol = std::max(1e-300, 1e-10 * scale);
    return 2.0 / std::sqrt(M_PI) * adaptive_integrate(f, 0.0, 12.0, tol);
}

SpectralValue poisson_kernel_spectral(const AlphaIndex& alpha, double t, const PointRd& x,
                                      const PointRd& y, int k_max) {
    require_positive_time(t, "poisson_kernel_spectral");
    const int d = alpha.dim();
    std::vector<double> shell;
    for (int i = 0; i < d; ++i) {
        const std::vector<double> px = laguerre_fn_1d_all(k_max, alpha[i], x[i] * x[i]);
        const std::vector<double> py = laguerre_fn_1d_all(k_max, alpha[i], y[i] * y[i]);
        std::vector<double> p(static_cast<std::size_t>(k_max + 1));
        for (int k = 0; k <= k_max; ++k)
            p[static_cast<std::size_t>(k)] =
                px[static_cast<std::size_t>(k)] * py[static_cast<std::size_t>(k)];
        if (i == 0) {
            shell = std::move(p);
        } else {
            std::vector<double> next(static_cast<std::size_t>(k_max + 1), 0.0);
            for (int a = 0; a <= k_max; ++a)
                for (int b = 0; a + b <= k_max; ++b)
                    next[static_cast<std::size_t>(a + b)] +=
                        shell[static_cast<std::size_t>(a)] * p[static_cast<std::size_t>(b)];
            shell = std::move(next);
        }
    }
    const double lam0 = 2.0 * alpha.total() + 2.0 * d;
    double value = 0.0;
    double max_term = 0.0;
    for (int s = k_max; s >= 0; --s) {
        const double c =
            std::exp(-t * std::sqrt(4.0 * s + lam0)) * shell[static_cast<std::size_t>(s)];
        value += c;
        max_term = std::max(max_term, std::fabs(c));
    }
    const double last = std::fabs(std::exp(-t * std::sqrt(4.0 * k_max + lam0)) *
                                  shell[static_cast<std::size_t>(k_max)]);
    const double gap = std::sqrt(4.0 * (k_max + 1) + lam0) - std::sqrt(4.0 * k_max + lam0);
    const double r = std::exp(-t * gap);
    return {value, last * r / (1.0 - r), max_term};
}

double kernel_derivative(const AlphaIndex& alpha, double t, const PointRd& x, const PointRd& y,
                         const MultiIndex& n, int m) {
    require_same_dim(alpha.dim(), n.dim(), "kernel_derivative");
    require_positive_time(t, "kernel_derivative");
    if (m < 0 || n.order() + 2 * m > 4)
        throw std::domain_error("kernel_derivative: supported orders satisfy |n| + 2m <= 4");
    if (m == 0) return delta_n_closed(alpha, t, x, y, n);
    if (m == 1 && n.order() == 0) return analytic_dt(alpha, t, x, y);
    auto f = [&](double tt) { return kernel_derivative(alpha, tt, x, y, n, m - 1); };
    const double h = std::min(0.02 * std::max(t, 0.05), 0.25 * t);
    return d1_richardson(f, t, h);
}

double riesz_kernel(const AlphaIndex& alpha, const MultiIndex& n, const PointRd& x,
                    const PointRd& y) {
    require_same_dim(alpha.dim(), n.dim(), "riesz_kernel");
    const int nn = n.order();
    if (nn < 1) throw std::domain_error("riesz_kernel: |n| must be > 0");
    require_off_diagonal(x, y, "riesz_kernel");
    const double t_hi = default_t_hi(alpha);
    const double U = std::pow(t_hi, 0.5 * nn);
    auto g = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double t = std::pow(u, 2.0 / nn);
        return kernel_derivative(alpha, t, x, y, n, 0);
    };
    const double scale = l1_on_rule(gauss_legendre_rule(48, 0.0, U), g);
    const double tol = std::max(1e-300, 1e-9 * scale);
    const double integral = adaptive_integrate(g, 0.0, U, tol);
    return (2.0 / nn) * integral / std::tgamma(0.5 * nn);
}

double NuMeasure::admissibility_integral(const AlphaIndex& alpha) const {
    const double s0 = 2.0 * alpha.dim() + 2.0 * alpha.total();
    double total = 0.0;
    for (const Atom& a : atoms) {
        if (!(a.t > 0.0) || !std::isfinite(a.t) || !std::isfinite(std::abs(a.weight)))
            throw std::domain_error(
                "NuMeasure: admissibility requires atoms at finite t > 0 with finite weights "
                "(int exp(-t(2d+2|alpha|)) d|nu| must be finite)");
        total += std::abs(a.weight) * std::exp(-a.t * s0);
    }
    if (!density_t.empty()) {
        if (density_t.size() != density_v.size() || density_t.size() < 2)
            throw std::domain_error("NuMeasure: density needs matching t/value tables of size >= 2");
        for (std::size_t j = 0; j + 1 < density_t.size(); ++j) {
            if (!(density_t[j] > 0.0) || !(density_t[j + 1] > density_t[j]))
                throw std::domain_error("NuMeasure: density grid must be positive and increasing");
            const double f0 = std::abs(density_v[j]) * std::exp(-density_t[j] * s0);
            const double f1 = std::abs(density_v[j + 1]) * std::exp(-density_t[j + 1] * s0);
            total += 0.5 * (f0 + f1) * (density_t[j + 1] - density_t[j]);
        }
    }
    if (!std::isfinite(total))
        throw std::domain_error(
            "NuMeasure: admissibility integral int exp(-t(2d+2|alpha|)) d|nu|(t) is not finite");
    return total;
}

void NuMeasure::validate(const AlphaIndex& alpha) const { (void)admissibility_integral(alpha); }

std::complex<double> laplace_kernel(const AlphaIndex& alpha,
                                    const std::function<std::complex<double>(double)>& psi,
                                    const PointRd& x, const PointRd& y) {
    require_off_diagonal(x, y, "laplace_kernel");
    const double delta2 = dist(x, y) * dist(x, y);
    const double t_lo = std::min(1e-7, delta2 / 170.0);
    const double t_hi = default_t_hi(alpha);
    // Integrate over tau = log t; the integrand vanishes at both ends.
    auto value_at = [&](double tau) {
        const double t = std::exp(tau);
        return -psi(t) * analytic_dt(alpha, t, x, y) * t;
    };
    const double lo = std::log(t_lo), hi = std::log(t_hi);
    auto re = [&](double tau) { return value_at(tau).real(); };
    auto im = [&](double tau) { return value_at(tau).imag(); };
    const double scale =
        l1_on_rule(gauss_legendre_rule(64, lo, hi), re) + l1_on_rule(gauss_legendre_rule(64, lo, hi), im);
    const double tol = std::max(1e-300, 1e-10 * scale);
    return {adaptive_integrate(re, lo, hi, tol), adaptive_integrate(im, lo, hi, tol)};
}

std::complex<double> stieltjes_kernel(const AlphaIndex& alpha, const NuMeasure& nu,
                                      const PointRd& x, const PointRd& y) {
    nu.validate(alpha);
    std::complex<double> total = 0.0;
    for (const NuMeasure::Atom& a : nu.atoms) total += a.weight * heat_kernel_closed(alpha, a.t, x, y);
    for (std::size_t j = 0; j + 1 < nu.density_t.size(); ++j) {
        const std::complex<double> f0 = nu.density_v[j] * heat_kernel_closed(alpha, nu.density_t[j], x, y);
        const std::complex<double> f1 =
            nu.density_v[j + 1] * heat_kernel_closed(alpha, nu.density_t[j + 1], x, y);
        total += 0.5 * (f0 + f1) * (nu.density_t[j + 1] - nu.density_t[j]);
    }
    return total;
}

BanachTag KernelSpec::banach_tag() const {
    if (std::holds_alternative<HeatMaxFamily>(family)) return BanachTag::sup_t;
    if (std::holds_alternative<SquareFamily>(family)) return BanachTag::l2_t_weighted;
    return BanachTag::scalar;
}

double KernelSpec::t_weight() const {
    if (const auto* sq = std::get_if<SquareFamily>(&family)) return sq->n.order() + 2.0 * sq->m;
    throw std::logic_error("KernelSpec::t_weight: only the square-function family carries a weight");
}

std::string KernelSpec::name() const {
    if (std::holds_alternative<HeatMaxFamily>(family)) return "heat_max";
    if (const auto* r = std::get_if<RieszFamily>(&family)) {
        std::string s = "riesz[";
        for (int i = 0; i < r->n.dim(); ++i) s += (i ? "," : "") + std::to_string(r->n[i]);
        return s + "]";
    }
    if (const auto* q = std::get_if<SquareFamily>(&family)) {
        std::string s = "square[";
        for (int i = 0; i < q->n.dim(); ++i) s += (i ? "," : "") + std::to_string(q->n[i]);
        return s + ";m=" + std::to_string(q->m) + "]";
    }
    if (std::holds_alternative<LaplaceFamily>(family)) return "laplace_mult";
    return "stieltjes_mult";
}

KernelSpec KernelSpec::heat_max() { return {HeatMaxFamily{}}; }
KernelSpec KernelSpec::riesz(MultiIndex n) {
    if (n.order() < 1) throw std::domain_error("KernelSpec::riesz: |n| must be > 0");
    return {RieszFamily{std::move(n)}};
}
KernelSpec KernelSpec::square_fn(MultiIndex n, int m) {
    if (n.order() + m < 1) throw std::domain_error("KernelSpec::square_fn: need |n| + m > 0");
    return {SquareFamily{std::move(n), m}};
}
KernelSpec KernelSpec::laplace_mult(std::function<std::complex<double>(double)> psi, double psi_sup) {
    return {LaplaceFamily{std::move(psi), psi_sup}};
}
KernelSpec KernelSpec::stieltjes_mult(NuMeasure nu) { return {StieltjesFamily{std::move(nu)}}; }

namespace {

double heat_max_norm(const AlphaIndex& alpha, const PointRd& x, const PointRd& y) {
    const double delta2 = dist(x, y) * dist(x, y);
    const double t_lo = std::min(1e-4, delta2 / 50.0);
    auto f = [&](double t) { return heat_kernel_closed(alpha, t, x, y); };
    return sup_over_t(f, t_lo, default_t_hi(alpha), 200);
}

double square_norm(const AlphaIndex& alpha, const SquareFamily& fam, const PointRd& x,
                   const PointRd& y) {
    const double W = fam.n.order() + 2.0 * fam.m;
    const double delta2 = dist(x, y) * dist(x, y);
    const double t_lo = std::min(1e-6, delta2 / 160.0);
    const QuadRule rule = t_weighted_grid(W, t_lo, default_t_hi(alpha), 48);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double k = kernel_derivative(alpha, rule.nodes[i], x, y, fam.n, fam.m);
        s += rule.weights[i] * k * k;
    }
    return std::sqrt(s);
}

}  // namespace

double banach_norm(const KernelSpec& spec, const AlphaIndex& alpha, const PointRd& x,
                   const PointRd& y) {
    require_off_diagonal(x, y, "banach_norm");
    return std::visit(
        [&](const auto& fam) -> double {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, HeatMaxFamily>) {
                return heat_max_norm(alpha, x, y);
            } else if constexpr (std::is_same_v<T, RieszFamily>) {
                return std::fabs(riesz_kernel(alpha, fam.n, x, y));
            } else if constexpr (std::is_same_v<T, SquareFamily>) {
                return square_norm(alpha, fam, x, y);
            } else if constexpr (std::is_same_v<T, LaplaceFamily>) {
                return std::abs(laplace_kernel(alpha, fam.psi, x, y));
            } else {
                return std::abs(stieltjes_kernel(alpha, fam.nu, x, y));
            }
        },
        spec.family);
}

double banach_diff_norm(const KernelSpec& spec, const AlphaIndex& alpha, const PointRd& x,
                        const PointRd& y, const PointRd& moved, Side side) {
    require_off_diagonal(x, y, "banach_diff_norm");
    const PointRd& x2 = (side == Side::x_side) ? moved : x;
    const PointRd& y2 = (side == Side::y_side) ? moved : y;
    return std::visit(
        [&](const auto& fam) -> double {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, HeatMaxFamily>) {
                const double delta2 = dist(x, y) * dist(x, y);
                const double t_lo = std::min(1e-4, delta2 / 50.0);
                auto f = [&](double t) {
                    return std::fabs(heat_kernel_closed(alpha, t, x, y) -
                                     heat_kernel_closed(alpha, t, x2, y2));
                };
                return sup_over_t(f, t_lo, default_t_hi(alpha), 400);
            } else if constexpr (std::is_same_v<T, RieszFamily>) {
                return std::fabs(riesz_kernel(alpha, fam.n, x, y) - riesz_kernel(alpha, fam.n, x2, y2));
            } else if constexpr (std::is_same_v<T, SquareFamily>) {
                const double W = fam.n.order() + 2.0 * fam.m;
                const double delta2 = dist(x, y) * dist(x, y);
                const double t_lo = std::min(1e-6, delta2 / 160.0);
                const QuadRule rule = t_weighted_grid(W, t_lo, default_t_hi(alpha), 48);
                double s = 0.0;
                for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                    const double diff = kernel_derivative(alpha, rule.nodes[i], x, y, fam.n, fam.m) -
                                        kernel_derivative(alpha, rule.nodes[i], x2, y2, fam.n, fam.m);
                    s += rule.weights[i] * diff * diff;
                }
                return std::sqrt(s);
            } else if constexpr (std::is_same_v<T, LaplaceFamily>) {
                return std::abs(laplace_kernel(alpha, fam.psi, x, y) -
                                laplace_kernel(alpha, fam.psi, x2, y2));
            } else {
                return std::abs(stieltjes_kernel(alpha, fam.nu, x, y) -
                                stieltjes_kernel(alpha, fam.nu, x2, y2));
            }
        },
        spec.family);
}

}  // namespace lagcz
