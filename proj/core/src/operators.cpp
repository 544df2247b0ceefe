#include "lagcz/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "lagcz/special.hpp"

namespace lagcz {

namespace {

void append_indices(int d, int k_max, std::vector<int>& cur, std::vector<MultiIndex>& out) {
    if (static_cast<int>(cur.size()) == d) {
        out.emplace_back(cur);
        return;
    }
    int used = 0;
    for (int c : cur) used += c;
    for (int k = 0; k <= k_max - used; ++k) {
        cur.push_back(k);
        append_indices(d, k_max, cur, out);
        cur.pop_back();
    }
}

// Evaluation nodes and effective weights of the projection rule: the factor
// rule holds Gauss nodes u_i for u^a e^{-u}; integration against dmu needs
// x = sqrt(u) and weight e^{u} v_i / 2 per coordinate.
struct ProjectionGrid {
    std::vector<std::vector<double>> x;  // per coordinate
    std::vector<std::vector<double>> w;
};

ProjectionGrid projection_grid(const ProductRule& rule) {
    ProjectionGrid g;
    for (const QuadRule& f : rule.factors) {
        if (f.domain != QuadDomain::laguerre)
            throw std::invalid_argument("project: expected Gauss rules for the weight u^a e^{-u}");
        const int n = static_cast<int>(f.nodes.size());
        std::vector<double> xs, ws;
        xs.reserve(f.nodes.size());
        ws.reserve(f.nodes.size());
        for (std::size_t i = 0; i < f.nodes.size(); ++i) {
            const double u = f.nodes[i];
            xs.push_back(std::sqrt(u));
            // effective weight w_i e^{u_i} straight from the Christoffel sum;
            // no exp round trip, stable out to the extreme tail nodes
            const std::vector<double> psi = laguerre_fn_1d_all(n - 1, f.param, u);
            double chr = 0.0;
            for (double v : psi) chr += v * v;
            ws.push_back(0.5 * 2.0 / chr);
        }
        g.x.push_back(std::move(xs));
        g.w.push_back(std::move(ws));
    }
    return g;
}

double lambda_of(const MultiIndex& k, const AlphaIndex& alpha) {
    return laguerre_eigenvalue(k, alpha);
}

}  // namespace

std::vector<MultiIndex> spectral_index_set(int d, int k_max) {
    if (d < 1 || k_max < 0) throw std::domain_error("spectral_index_set: need d >= 1, k_max >= 0");
    std::vector<MultiIndex> out;
    std::vector<int> cur;
    append_indices(d, k_max, cur, out);
    std::stable_sort(out.begin(), out.end(),
                     [](const MultiIndex& a, const MultiIndex& b) { return a.order() < b.order(); });
    return out;
}

double SpectralVector::norm() const {
    double s = 0;
    for (const auto& c : coeff) s += std::norm(c);
    return std::sqrt(s);
}

double SpectralVector::last_shell_norm() const {
    double s = 0;
    for (std::size_t i = 0; i < index.size(); ++i)
        if (index[i].order() == k_max) s += std::norm(coeff[i]);
    return std::sqrt(s);
}

SpectralVector SpectralVector::zero(AlphaIndex alpha, int k_max) {
    std::vector<MultiIndex> idx = spectral_index_set(alpha.dim(), k_max);
    std::vector<std::complex<double>> c(idx.size(), 0.0);
    return {std::move(alpha), k_max, std::move(idx), std::move(c)};
}

SpectralVector SpectralVector::unit(AlphaIndex alpha, int k_max, const MultiIndex& k) {
    SpectralVector v = zero(std::move(alpha), k_max);
    for (std::size_t i = 0; i < v.index.size(); ++i)
        if (v.index[i] == k) {
            v.coeff[i] = 1.0;
            return v;
        }
    throw std::invalid_argument("SpectralVector::unit: index outside the truncation");
}

ProductRule projection_rule(const AlphaIndex& alpha, int k_max) {
    // Exactness for the discrete Gram needs k_max + 1 nodes; the margin keeps
    // projections of smooth non-polynomial inputs accurate as well.
    const int n = k_max + 24;
    ProductRule rule;
    for (int i = 0; i < alpha.dim(); ++i) rule.factors.push_back(gauss_laguerre_rule(alpha[i], n));
    return rule;
}

ProjectionResult project(const std::function<double(const PointRd&)>& f, const AlphaIndex& alpha,
                         int k_max, const ProductRule& rule) {
    require_same_dim(alpha.dim(), rule.dim(), "project");
    const int d = alpha.dim();
    const ProjectionGrid grid = projection_grid(rule);
    SpectralVector v = SpectralVector::zero(alpha, k_max);

    // Tabulate the normalized Laguerre functions once per coordinate/node.
    // tables[i][node][k] = l_k^{alpha_i}(x_node).
    std::vector<std::vector<std::vector<double>>> tables(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        for (double xv : grid.x[static_cast<std::size_t>(i)])
            tables[static_cast<std::size_t>(i)].push_back(
                laguerre_fn_1d_all(k_max, alpha[i], xv * xv));

    // Odometer over the tensor grid; accumulate every coefficient in one pass.
    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    std::vector<double> xc(static_cast<std::size_t>(d));
    double f_norm_sq = 0.0;
    for (;;) {
        double w = 1.0;
        for (int i = 0; i < d; ++i) {
            xc[static_cast<std::size_t>(i)] = grid.x[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
            w *= grid.w[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
        }
        const double fv = f(PointRd(xc));
        f_norm_sq += w * fv * fv;
        for (std::size_t j = 0; j < v.index.size(); ++j) {
            double lk = 1.0;
            for (int i = 0; i < d; ++i)
                lk *= tables[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]]
                            [static_cast<std::size_t>(v.index[j][i])];
            v.coeff[j] += w * fv * lk;
        }
        int i = 0;
        for (; i < d; ++i) {
            auto& k = idx[static_cast<std::size_t>(i)];
            if (++k < grid.x[static_cast<std::size_t>(i)].size()) break;
            k = 0;
        }
        if (i == d) break;
    }
    double coeff_sq = 0.0;
    for (const auto& c : v.coeff) coeff_sq += std::norm(c);
    const double res_sq = std::max(f_norm_sq - coeff_sq, 0.0);
    return {std::move(v), std::sqrt(res_sq)};
}

SpectralVector project_on_interval(const std::function<double(double)>& f,
                                   const AlphaIndex& alpha, int k_max, double lo, double hi,
                                   int nodes) {
    if (alpha.dim() != 1)
        throw std::domain_error("project_on_interval: one-dimensional supports only");
    if (!(lo > 0.0) || !(hi > lo))
        throw std::domain_error("project_on_interval: need 0 < lo < hi");
    SpectralVector v = SpectralVector::zero(alpha, k_max);
    const QuadRule rule = gauss_legendre_rule(nodes, lo, hi);
    const double a = alpha[0];
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double x = rule.nodes[j];
        const double w = rule.weights[j] * f(x) * std::pow(x, 2.0 * a + 1.0);
        if (w == 0.0) continue;
        const std::vector<double> tab = laguerre_fn_1d_all(k_max, a, x * x);
        for (int k = 0; k <= k_max; ++k) v.coeff[static_cast<std::size_t>(k)] += w * tab[static_cast<std::size_t>(k)];
    }
    return v;
}

double compact_bump(double x, double lo, double hi) {
    if (x <= lo || x >= hi) return 0.0;
    const double span = hi - lo;
    return std::exp(-span * span * 0.25 / ((x - lo) * (hi - x)));
}

std::complex<double> synthesize(const SpectralVector& v, const PointRd& x) {
    require_same_dim(v.alpha.dim(), x.dim(), "synthesize");
    const int d = v.alpha.dim();
    std::vector<std::vector<double>> table(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        table[static_cast<std::size_t>(i)] = laguerre_fn_1d_all(v.k_max, v.alpha[i], x[i] * x[i]);
    std::complex<double> s = 0.0;
    for (std::size_t j = 0; j < v.index.size(); ++j) {
        double lk = 1.0;
        for (int i = 0; i < d; ++i)
            lk *= table[static_cast<std::size_t>(i)][static_cast<std::size_t>(v.index[j][i])];
        s += v.coeff[j] * lk;
    }
    return s;
}

SpectralVector heat_apply(const SpectralVector& v, double t) {
    if (t < 0.0) throw std::domain_error("heat_apply: t must be >= 0");
    SpectralVector out = v;
    for (std::size_t j = 0; j < out.index.size(); ++j)
        out.coeff[j] *= std::exp(-t * lambda_of(out.index[j], out.alpha));
    return out;
}

double maximal_apply(const SpectralVector& v, const PointRd& x, const QuadRule& t_grid) {
    double best = std::abs(synthesize(v, x));  // t = 0 limit
    for (double t : t_grid.nodes) {
        if (!(t > 0.0)) continue;
        best = std::max(best, std::abs(synthesize(heat_apply(v, t), x)));
    }
    return best;
}

std::complex<double> riesz_apply(const SpectralVector& v, const MultiIndex& n, const PointRd& x) {
    if (n.order() < 1) throw std::domain_error("riesz_apply: |n| must be > 0");
    std::complex<double> s = 0.0;
    const double p = -0.5 * n.order();
    for (std::size_t j = 0; j < v.index.size(); ++j) {
        if (v.coeff[j] == 0.0) continue;
        const double lam = lambda_of(v.index[j], v.alpha);
        s += std::pow(lam, p) * v.coeff[j] * delta_laguerre_fn(v.index[j], v.alpha, x, n);
    }
    return s;
}

double gfun_apply(const SpectralVector& v, const MultiIndex& n, int m, const PointRd& x,
                  const QuadRule& t_rule) {
    if (n.order() + m < 1) throw std::domain_error("gfun_apply: need |n| + m > 0");
    if (t_rule.domain != QuadDomain::t_weighted || t_rule.param != n.order() + 2.0 * m)
        throw std::invalid_argument("gfun_apply: rule weight must equal |n| + 2m");
    // Cache delta^n l_k(x) once per index.
    std::vector<std::complex<double>> amp(v.index.size());
    std::vector<double> lam(v.index.size());
    for (std::size_t j = 0; j < v.index.size(); ++j) {
        lam[j] = lambda_of(v.index[j], v.alpha);
        amp[j] = v.coeff[j] * delta_laguerre_fn(v.index[j], v.alpha, x, n) *
                 std::pow(-lam[j], static_cast<double>(m));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < t_rule.nodes.size(); ++i) {
        const double t = t_rule.nodes[i];
        std::complex<double> val = 0.0;
        for (std::size_t j = 0; j < v.index.size(); ++j)
            val += amp[j] * std::exp(-t * lam[j]);
        s += t_rule.weights[i] * std::norm(val);
    }
    return std::sqrt(s);
}

MultiplierSymbol MultiplierSymbol::laplace(std::function<std::complex<double>(double)> psi,
                                           double sup) {
    return {LaplaceSymbol{std::move(psi), sup}};
}

MultiplierSymbol imaginary_power_symbol(double gamma) {
    if (gamma == 0.0)
        return MultiplierSymbol::laplace([](double) { return std::complex<double>(1.0, 0.0); }, 1.0);
    const double abs_gamma = std::sqrt(M_PI * gamma / std::sinh(M_PI * gamma));
    return MultiplierSymbol::laplace(
        [gamma, abs_gamma](double t) {
            return std::exp(std::complex<double>(0.0, -gamma * std::log(t))) / abs_gamma;
        },
        1.0 / abs_gamma);
}
MultiplierSymbol MultiplierSymbol::stieltjes(NuMeasure nu) { return {StieltjesSymbol{std::move(nu)}}; }
MultiplierSymbol MultiplierSymbol::explicit_fn(std::function<std::complex<double>(double)> m) {
    return {ExplicitSymbol{std::move(m)}};
}

std::complex<double> multiplier_symbol_value(const MultiplierSymbol& sym, double z) {
    if (!(z > 0.0)) throw std::domain_error("multiplier_symbol_value: z must be > 0");
    return std::visit(
        [&](const auto& k) -> std::complex<double> {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, LaplaceSymbol>) {
                // z int_0^inf e^{-tz} psi(t) dt over tau = log t; the change of
                // variable keeps oscillatory psi (imaginary powers) mild.
                const double lo = std::log(1e-14 / z);
                const double hi = std::log(746.0 / z);
                auto re = [&](double tau) {
                    const double t = std::exp(tau);
                    return (z * std::exp(-t * z) * t * k.psi(t)).real();
                };
                auto im = [&](double tau) {
                    const double t = std::exp(tau);
                    return (z * std::exp(-t * z) * t * k.psi(t)).imag();
                };
                const double tol = 1e-12 * std::max(1.0, k.psi_sup);
                return {adaptive_integrate(re, lo, hi, tol), adaptive_integrate(im, lo, hi, tol)};
            } else if constexpr (std::is_same_v<T, StieltjesSymbol>) {
                std::complex<double> s = 0.0;
                for (const NuMeasure::Atom& a : k.nu.atoms) s += a.weight * std::exp(-a.t * z);
                for (std::size_t j = 0; j + 1 < k.nu.density_t.size(); ++j) {
                    const std::complex<double> f0 = k.nu.density_v[j] * std::exp(-k.nu.density_t[j] * z);
                    const std::complex<double> f1 =
                        k.nu.density_v[j + 1] * std::exp(-k.nu.density_t[j + 1] * z);
                    s += 0.5 * (f0 + f1) * (k.nu.density_t[j + 1] - k.nu.density_t[j]);
                }
                return s;
            } else {
                return k.m(z);
            }
        },
        sym.kind);
}

SpectralVector multiplier_apply(const SpectralVector& v, const MultiplierSymbol& sym) {
    if (const auto* st = std::get_if<StieltjesSymbol>(&sym.kind)) st->nu.validate(v.alpha);
    SpectralVector out = v;
    // The symbol depends on k only through the eigenvalue; cache per shell.
    std::vector<std::complex<double>> by_shell(static_cast<std::size_t>(v.k_max + 1));
    std::vector<bool> have(static_cast<std::size_t>(v.k_max + 1), false);
    for (std::size_t j = 0; j < out.index.size(); ++j) {
        const int s = out.index[j].order();
        if (!have[static_cast<std::size_t>(s)]) {
            by_shell[static_cast<std::size_t>(s)] =
                multiplier_symbol_value(sym, lambda_of(out.index[j], out.alpha));
            have[static_cast<std::size_t>(s)] = true;
        }
        out.coeff[j] *= by_shell[static_cast<std::size_t>(s)];
    }
    return out;
}

double riesz_operator_norm(const AlphaIndex& alpha, const MultiIndex& n, int k_max) {
    if (n.order() < 1) throw std::domain_error("riesz_operator_norm: |n| must be > 0");
    const std::vector<MultiIndex> idx = spectral_index_set(alpha.dim(), k_max);
    const int d = alpha.dim();
    const ProductRule rule = projection_rule(alpha, k_max + n.order() + 2);
    const ProjectionGrid grid = projection_grid(rule);

    // tabulate delta^n l_k at all grid points
    const std::size_t n_idx = idx.size();
    std::vector<std::size_t> sizes(static_cast<std::size_t>(d));
    std::size_t n_nodes = 1;
    for (int i = 0; i < d; ++i) {
        sizes[static_cast<std::size_t>(i)] = grid.x[static_cast<std::size_t>(i)].size();
        n_nodes *= sizes[static_cast<std::size_t>(i)];
    }
    Eigen::MatrixXd vals(static_cast<Eigen::Index>(n_nodes), static_cast<Eigen::Index>(n_idx));
    Eigen::VectorXd wts(static_cast<Eigen::Index>(n_nodes));
    std::vector<std::size_t> c(static_cast<std::size_t>(d), 0);
    std::vector<double> xc(static_cast<std::size_t>(d));
    for (std::size_t node = 0; node < n_nodes; ++node) {
        double w = 1.0;
        for (int i = 0; i < d; ++i) {
            xc[static_cast<std::size_t>(i)] = grid.x[static_cast<std::size_t>(i)][c[static_cast<std::size_t>(i)]];
            w *= grid.w[static_cast<std::size_t>(i)][c[static_cast<std::size_t>(i)]];
        }
        wts(static_cast<Eigen::Index>(node)) = w;
        const PointRd xp(xc);
        for (std::size_t j = 0; j < n_idx; ++j) {
            const double lam = lambda_of(idx[j], alpha);
            vals(static_cast<Eigen::Index>(node), static_cast<Eigen::Index>(j)) =
                std::pow(lam, -0.5 * n.order()) * delta_laguerre_fn(idx[j], alpha, xp, n);
        }
        int i = 0;
        for (; i < d; ++i) {
            auto& k = c[static_cast<std::size_t>(i)];
            if (++k < sizes[static_cast<std::size_t>(i)]) break;
            k = 0;
        }
        if (i == d) break;
    }
    // Gram matrix <R l_j, R l_k>_{dmu}; operator norm on the truncation is the
    // square root of its largest eigenvalue (the domain basis is orthonormal).
    Eigen::MatrixXd gram = vals.transpose() * wts.asDiagonal() * vals;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace lagcz
