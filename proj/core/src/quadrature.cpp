#include "lagcz/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "lagcz/special.hpp"

namespace lagcz {

namespace {

// Golub-Welsch: nodes are the eigenvalues of the symmetric Jacobi matrix of
// the three-term recurrence, weights are total_mass * (first eigenvector
// component)^2.
QuadRule golub_welsch(const std::vector<double>& diag, const std::vector<double>& offdiag,
                      double total_mass) {
    const int n = static_cast<int>(diag.size());
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        J(i, i) = diag[static_cast<std::size_t>(i)];
        if (i + 1 < n) {
            J(i, i + 1) = offdiag[static_cast<std::size_t>(i)];
            J(i + 1, i) = offdiag[static_cast<std::size_t>(i)];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    QuadRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        rule.nodes[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        rule.weights[static_cast<std::size_t>(i)] = total_mass * v0 * v0;
    }
    return rule;
}

// Recurrence coefficients for the symmetric Jacobi weight (1-x^2)^lambda:
// beta_n = n (n + 2 lambda) / ((2n + 2 lambda + 1)(2n + 2 lambda - 1)), a_n = 0.
QuadRule gauss_gegenbauer(double lambda, int n, double total_mass) {
    std::vector<double> diag(static_cast<std::size_t>(n), 0.0);
    std::vector<double> off(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
    for (int m = 1; m < n; ++m) {
        const double beta =
            m * (m + 2.0 * lambda) / ((2.0 * m + 2.0 * lambda + 1.0) * (2.0 * m + 2.0 * lambda - 1.0));
        off[static_cast<std::size_t>(m - 1)] = std::sqrt(beta);
    }
    return golub_welsch(diag, off, total_mass);
}

}  // namespace

QuadRule pi_measure_rule(double nu, int n_nodes) {
    if (nu < -0.5)
        throw std::domain_error(
            "pi_measure_rule: order must be >= -1/2 (shift the order before integrating)");
    QuadRule rule;
    if (nu == -0.5) {
        // Two unit point masses at -1 and 1, divided by sqrt(2 pi).
        rule.nodes = {-1.0, 1.0};
        rule.weights = {1.0 / std::sqrt(2.0 * M_PI), 1.0 / std::sqrt(2.0 * M_PI)};
        rule.atomic = true;
    } else {
        if (n_nodes < 1) throw std::domain_error("pi_measure_rule: need at least one node");
        const double mass = std::exp(-nu * std::log(2.0) - std::lgamma(nu + 1.0));
        rule = gauss_gegenbauer(nu - 0.5, n_nodes, mass);
    }
    rule.domain = QuadDomain::pi_measure;
    rule.param = nu;
    rule.lo = -1.0;
    rule.hi = 1.0;
    return rule;
}

QuadRule gauss_legendre_rule(int n, double a, double b) {
    if (n < 1) throw std::domain_error("gauss_legendre_rule: need at least one node");
    if (!(b > a)) throw std::domain_error("gauss_legendre_rule: empty interval");
    QuadRule rule = gauss_gegenbauer(0.0, n, 2.0);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        rule.nodes[i] = mid + half * rule.nodes[i];
        rule.weights[i] *= half;
    }
    rule.domain = QuadDomain::generic;
    rule.lo = a;
    rule.hi = b;
    return rule;
}

QuadRule gauss_laguerre_rule(double a, int n) {
    if (!(a > -1.0)) throw std::domain_error("gauss_laguerre_rule: parameter must be > -1");
    if (n < 1) throw std::domain_error("gauss_laguerre_rule: need at least one node");
    std::vector<double> diag(static_cast<std::size_t>(n));
    std::vector<double> off(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
    for (int m = 0; m < n; ++m) {
        diag[static_cast<std::size_t>(m)] = 2.0 * m + a + 1.0;
        if (m + 1 < n) off[static_cast<std::size_t>(m)] = std::sqrt((m + 1.0) * (m + 1.0 + a));
    }
    QuadRule rule = golub_welsch(diag, off, std::exp(std::lgamma(a + 1.0)));
    // Eigenvector-based weights carry absolute noise ~ eps^2 * mass, useless
    // for the exponentially small tail. Recompute through the Christoffel
    // function: w_i e^{u_i} = 2 / sum_k psi_k(u_i)^2 with the normalized
    // recurrence, which is accurate in a relative sense at every node.
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double u = rule.nodes[i];
        const std::vector<double> psi = laguerre_fn_1d_all(n - 1, a, u);
        double chr = 0.0;
        for (double v : psi) chr += v * v;
        rule.weights[i] = 2.0 / chr * std::exp(-u);
    }
    rule.domain = QuadDomain::laguerre;
    rule.param = a;
    rule.lo = 0.0;
    rule.hi = std::numeric_limits<double>::infinity();
    return rule;
}

QuadRule t_weighted_grid(double W, double t_min, double t_max, int n_panels) {
    if (!(t_min > 0.0)) throw std::domain_error("t_weighted_grid: t_min must be > 0");
    if (!(t_max > t_min)) throw std::domain_error("t_weighted_grid: need t_max > t_min");
    if (n_panels < 8) throw std::domain_error("t_weighted_grid: need at least 8 panels");
    constexpr int kPointsPerPanel = 8;
    QuadRule rule;
    rule.nodes.reserve(static_cast<std::size_t>(n_panels * kPointsPerPanel));
    rule.weights.reserve(static_cast<std::size_t>(n_panels * kPointsPerPanel));
    const double ratio = std::pow(t_max / t_min, 1.0 / n_panels);
    double lo = t_min;
    for (int p = 0; p < n_panels; ++p) {
        const double hi = (p + 1 == n_panels) ? t_max : lo * ratio;
        QuadRule panel = gauss_legendre_rule(kPointsPerPanel, lo, hi);
        for (std::size_t i = 0; i < panel.nodes.size(); ++i) {
            const double t = panel.nodes[i];
            rule.nodes.push_back(t);
            rule.weights.push_back(panel.weights[i] * std::pow(t, W - 1.0));
        }
        lo = hi;
    }
    rule.domain = QuadDomain::t_weighted;
    rule.param = W;
    rule.lo = t_min;
    rule.hi = t_max;
    return rule;
}

double schlafli_bessel(double nu, double z, const QuadRule& rule) {
    if (rule.domain != QuadDomain::pi_measure || rule.param != nu)
        throw std::invalid_argument("schlafli_bessel: rule does not match the requested order");
    if (!(z > 0.0)) throw std::domain_error("schlafli_bessel: argument must be > 0");
    // e^{-z} z^nu int e^{-z s} dPi(s) = z^nu sum_i w_i e^{-z (1 + s_i)};
    // the exponent is <= 0 throughout, so the sum cannot overflow.
    double s = 0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        s += rule.weights[i] * std::exp(-z * (1.0 + rule.nodes[i]));
    return std::pow(z, nu) * s;
}

double adaptive_integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (!(tol > 0.0)) throw std::domain_error("adaptive_integrate: tol must be > 0");
    using boost::math::quadrature::gauss_kronrod;
    double error = 0.0;
    double best = gauss_kronrod<double, 15>::integrate(f, a, b, 18, 1e-12, &error);
    if (error <= tol) return best;
    // Endpoint singularities stall geometric bisection; the double-exponential
    // rule converges through integrable endpoint blow-up.
    try {
        boost::math::quadrature::tanh_sinh<double> ts(15);
        double rel_err = 0.0, l1 = 0.0;
        std::size_t levels = 0;
        const double v = ts.integrate(f, a, b, 1e-13, &rel_err, &l1, &levels);
        const double abs_err = rel_err * std::max(l1, std::fabs(v));
        if (abs_err <= tol) return v;
        if (abs_err < error) {
            best = v;
            error = abs_err;
        }
    } catch (...) {
        // fall through with the bisection estimate
    }
    {
        double err2 = 0.0;
        const double v = gauss_kronrod<double, 15>::integrate(f, a, b, 21, 1e-15, &err2);
        if (err2 <= tol) return v;
        if (err2 < error) {
            best = v;
            error = err2;
        }
    }
    throw convergence_error("adaptive_integrate: could not reach requested tolerance", best, error);
}

namespace {

template <class Visit>
void visit_product_nodes(const ProductRule& rule, Visit&& visit) {
    const int d = rule.dim();
    if (d == 0) throw std::invalid_argument("product rule with no factors");
    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    std::vector<double> s(static_cast<std::size_t>(d));
    for (;;) {
        double w = 1.0;
        for (int i = 0; i < d; ++i) {
            const auto& f = rule.factors[static_cast<std::size_t>(i)];
            s[static_cast<std::size_t>(i)] = f.nodes[idx[static_cast<std::size_t>(i)]];
            w *= f.weights[idx[static_cast<std::size_t>(i)]];
        }
        visit(std::span<const double>(s), w);
        int i = 0;
        for (; i < d; ++i) {
            auto& k = idx[static_cast<std::size_t>(i)];
            if (++k < rule.factors[static_cast<std::size_t>(i)].nodes.size()) break;
            k = 0;
        }
        if (i == d) return;
    }
}

}  // namespace

double product_apply(const ProductRule& rule,
                     const std::function<double(std::span<const double>)>& f) {
    double sum = 0.0;
    visit_product_nodes(rule, [&](std::span<const double> s, double w) { sum += w * f(s); });
    return sum;
}

double product_log_sum_exp(const ProductRule& rule,
                           const std::function<double(std::span<const double>)>& log_f) {
    double m = -std::numeric_limits<double>::infinity();
    double acc = 0.0;
    visit_product_nodes(rule, [&](std::span<const double> s, double w) {
        const double e = log_f(s) + std::log(w);
        if (e <= m) {
            acc += std::exp(e - m);
        } else {
            acc = acc * std::exp(m - e) + 1.0;
            m = e;
        }
    });
    return m + std::log(acc);
}

}  // namespace lagcz
