#include "lagcz/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "lagcz/detail/parallel.hpp"
#include "lagcz/quadrature.hpp"

namespace lagcz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

PointRd shift_coord(const PointRd& p, int j, double delta) {
    std::vector<double> c = p.coords();
    c[static_cast<std::size_t>(j)] += delta;
    return PointRd(c);
}

double ball_mu(const AlphaIndex& alpha, const PointRd& x, double r) {
    return ball_measure(alpha, BallSpec(x, r), 1e-6);
}

// Richardson finite-difference gradient of a scalar kernel in all 2d
// coordinates of (x, y).
template <class K>
double fd_gradient_norm(K&& kernel, const PointRd& x, const PointRd& y) {
    const int d = x.dim();
    double sum_sq = 0.0;
    auto d1 = [](auto&& f, double v, double h) {
        const double a = (f(v + h) - f(v - h)) / (2.0 * h);
        const double b = (f(v + 0.5 * h) - f(v - 0.5 * h)) / h;
        return (4.0 * b - a) / 3.0;
    };
    const double scale = std::max(1e-5, 1e-4 * dist(x, y));
    for (int j = 0; j < d; ++j) {
        const double h = std::min(scale * std::max(1.0, x[j]), 0.25 * x[j]);
        auto fx = [&](double v) { return kernel(shift_coord(x, j, v - x[j]), y); };
        const double g = d1(fx, x[j], h);
        sum_sq += g * g;
    }
    for (int j = 0; j < d; ++j) {
        const double h = std::min(scale * std::max(1.0, y[j]), 0.25 * y[j]);
        auto fy = [&](double v) { return kernel(x, shift_coord(y, j, v - y[j])); };
        const double g = d1(fy, y[j], h);
        sum_sq += g * g;
    }
    return std::sqrt(sum_sq);
}

std::function<double(const PointRd&, const PointRd&)> scalar_kernel(const KernelSpec& spec,
                                                                    const AlphaIndex& alpha) {
    if (const auto* r = std::get_if<RieszFamily>(&spec.family)) {
        const MultiIndex n = r->n;
        return [&alpha, n](const PointRd& a, const PointRd& b) { return riesz_kernel(alpha, n, a, b); };
    }
    if (const auto* l = std::get_if<LaplaceFamily>(&spec.family)) {
        auto psi = l->psi;
        return [&alpha, psi](const PointRd& a, const PointRd& b) {
            return laplace_kernel(alpha, psi, a, b).real();
        };
    }
    if (const auto* s = std::get_if<StieltjesFamily>(&spec.family)) {
        const NuMeasure nu = s->nu;
        return [&alpha, nu](const PointRd& a, const PointRd& b) {
            return stieltjes_kernel(alpha, nu, a, b).real();
        };
    }
    throw std::invalid_argument("gradient_ratio: family is not scalar-valued");
}

struct PairJob {
    PointRd x, y;
    int level;  // smallest refinement level containing this pair
};

std::vector<PairJob> build_pairs(const std::vector<double>& base_coords, int dim, int max_level) {
    std::vector<PairJob> jobs;
    std::vector<PointRd> base;
    if (dim == 1) {
        for (double c : base_coords) base.push_back(PointRd{std::vector<double>{c}});
    } else if (dim == 2) {
        for (double c : base_coords) base.push_back(PointRd{std::vector<double>{c, c}});
        base.push_back(PointRd{std::vector<double>{base_coords.front(), base_coords.back()}});
        base.push_back(PointRd{std::vector<double>{base_coords.back(), base_coords.front()}});
    } else {
        throw std::domain_error("sweep grids support d <= 2");
    }
    for (std::size_t i = 0; i < base.size(); ++i)
        for (std::size_t j = i + 1; j < base.size(); ++j)
            jobs.push_back({base[i], base[j], 0});
    // Near-diagonal shells: approach each base point along fixed directions,
    // one decade closer per refinement level.
    std::vector<std::vector<double>> dirs;
    if (dim == 1) {
        dirs = {{1.0}, {-1.0}};
    } else {
        const double s = 1.0 / std::sqrt(2.0);
        dirs = {{1.0, 0.0}, {0.0, 1.0}, {s, s}};
    }
    for (int level = 0; level <= max_level; ++level) {
        std::vector<double> shells;
        if (level == 0) shells = {1e-1, 1e-2};
        else shells = {std::pow(10.0, -(level + 2))};
        for (const PointRd& x : base) {
            for (const auto& dir : dirs) {
                for (double delta : shells) {
                    std::vector<double> yc = x.coords();
                    bool ok = true;
                    for (int i = 0; i < dim; ++i) {
                        yc[static_cast<std::size_t>(i)] += delta * dir[static_cast<std::size_t>(i)];
                        if (!(yc[static_cast<std::size_t>(i)] > 0.0)) ok = false;
                    }
                    if (ok) jobs.push_back({x, PointRd(yc), level});
                }
            }
        }
    }
    return jobs;
}

const char* kKinds[] = {"growth", "smooth_x", "smooth_y", "gradient"};

}  // namespace

double growth_ratio(const KernelSpec& spec, const AlphaIndex& alpha, const PointRd& x,
                    const PointRd& y) {
    const double delta = dist(x, y);
    if (delta == 0.0) throw std::domain_error("growth_ratio: x and y must differ");
    return banach_norm(spec, alpha, x, y) * ball_mu(alpha, x, delta);
}

double smoothness_ratio_x(const KernelSpec& spec, const AlphaIndex& alpha, const PointRd& x,
                          const PointRd& x_prime, const PointRd& y) {
    const double delta = dist(x, y);
    const double step = dist(x, x_prime);
    if (!(delta > 2.0 * step))
        throw std::domain_error("smoothness_ratio_x: requires |x-y| > 2|x-x'|");
    if (step == 0.0) return 0.0;
    const double diff = banach_diff_norm(spec, alpha, x, y, x_prime, Side::x_side);
    return diff * delta * ball_mu(alpha, x, delta) / step;
}

double smoothness_ratio_y(const KernelSpec& spec, const AlphaIndex& alpha, const PointRd& x,
                          const PointRd& y, const PointRd& y_prime) {
    const double delta = dist(x, y);
    const double step = dist(y, y_prime);
    if (!(delta > 2.0 * step))
        throw std::domain_error("smoothness_ratio_y: requires |x-y| > 2|y-y'|");
    if (step == 0.0) return 0.0;
    const double diff = banach_diff_norm(spec, alpha, x, y, y_prime, Side::y_side);
    return diff * delta * ball_mu(alpha, x, delta) / step;
}

double gradient_ratio(const KernelSpec& spec, const AlphaIndex& alpha, const PointRd& x,
                      const PointRd& y) {
    const double delta = dist(x, y);
    if (delta == 0.0) throw std::domain_error("gradient_ratio: x and y must differ");
    auto k = scalar_kernel(spec, alpha);
    return fd_gradient_norm(k, x, y) * delta * ball_mu(alpha, x, delta);
}

std::vector<std::pair<PointRd, PointRd>> sweep_pairs(const std::vector<double>& base_coords,
                                                     int dim, int level) {
    std::vector<std::pair<PointRd, PointRd>> out;
    for (const PairJob& j : build_pairs(base_coords, dim, level))
        out.emplace_back(j.x, j.y);
    return out;
}

KernelSpec family_by_name(const std::string& name, int d) {
    if (name == "heat_max") return KernelSpec::heat_max();
    if (name == "riesz") return KernelSpec::riesz(MultiIndex::unit(d, 0));
    if (name == "square") return KernelSpec::square_fn(MultiIndex::unit(d, 0), 0);
    if (name == "laplace")
        return KernelSpec::laplace_mult([](double t) { return std::complex<double>(std::exp(-t), 0.0); },
                                        1.0);
    if (name == "stieltjes") {
        NuMeasure nu;
        nu.atoms.push_back({0.7, 1.0});
        return KernelSpec::stieltjes_mult(std::move(nu));
    }
    throw std::invalid_argument("unknown kernel family: " + name);
}

SweepConfig SweepConfig::from_json_text(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("sweep config: expected a JSON object");
    SweepConfig c;
    for (const auto& [key, value] : j.items()) {
        if (key == "schema_version") {
            if (!value.is_number_integer() || value.get<int>() != 1)
                throw std::invalid_argument("sweep config: unsupported schema_version");
            c.schema_version = value.get<int>();
        } else if (key == "alphas") {
            c.alphas.clear();
            for (const auto& a : value) c.alphas.push_back(a.get<std::vector<double>>());
        } else if (key == "families") {
            c.families = value.get<std::vector<std::string>>();
        } else if (key == "base_coords") {
            c.base_coords = value.get<std::vector<double>>();
        } else if (key == "near_diag_levels") {
            c.near_diag_levels = value.get<int>();
        } else if (key == "pi_nodes") {
            c.pi_nodes = value.get<int>();
        } else if (key == "refine_growth_limit") {
            c.refine_growth_limit = value.get<double>();
        } else if (key == "seed") {
            c.seed = value.get<std::uint64_t>();
        } else if (key == "threads") {
            c.threads = value.get<int>();
        } else {
            throw std::invalid_argument("sweep config: unknown key '" + key + "'");
        }
    }
    if (c.families.empty()) throw std::invalid_argument("sweep config: family list is empty");
    if (c.alphas.empty()) throw std::invalid_argument("sweep config: alpha list is empty");
    for (const auto& a : c.alphas) (void)AlphaIndex(a);  // validate early
    return c;
}

std::string SweepConfig::to_json() const {
    std::ostringstream os;
    os << "{\n  \"schema_version\": " << schema_version << ",\n  \"alphas\": [";
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        os << (i ? ", " : "") << "[";
        for (std::size_t k = 0; k < alphas[i].size(); ++k)
            os << (k ? ", " : "") << fmt_full(alphas[i][k]);
        os << "]";
    }
    os << "],\n  \"families\": [";
    for (std::size_t i = 0; i < families.size(); ++i)
        os << (i ? ", " : "") << '"' << families[i] << '"';
    os << "],\n  \"base_coords\": [";
    for (std::size_t i = 0; i < base_coords.size(); ++i)
        os << (i ? ", " : "") << fmt_full(base_coords[i]);
    os << "],\n  \"near_diag_levels\": " << near_diag_levels
       << ",\n  \"pi_nodes\": " << pi_nodes
       << ",\n  \"refine_growth_limit\": " << fmt_full(refine_growth_limit)
       << ",\n  \"seed\": " << seed << ",\n  \"threads\": " << threads << "\n}";
    return os.str();
}

namespace {

struct CellResult {
    FamilyReport report;
    std::vector<RatioSample> samples;
};

CellResult run_cell(const SweepConfig& cfg, const std::string& family_name,
                    const std::vector<double>& alpha_raw) {
    const AlphaIndex alpha(alpha_raw);
    const int d = alpha.dim();
    const KernelSpec spec = family_by_name(family_name, d);
    const std::string alpha_label = point_label(alpha_raw);
    const std::vector<PairJob> jobs = build_pairs(cfg.base_coords, d, cfg.near_diag_levels);

    CellResult out;
    out.report.family = family_name;
    out.report.alpha_label = alpha_label;

    struct Acc {
        double sup_base = 0, sup_ref = 0;
        std::vector<double> wx, wy;
    };
    Acc acc[4];
    const bool has_gradient = spec.scalar_valued();

    for (const PairJob& job : jobs) {
        const double delta = dist(job.x, job.y);
        const double step = 0.25 * delta;
        const PointRd xp = shift_coord(job.x, 0, step);
        const PointRd yp = shift_coord(job.y, 0, step);
        double vals[4];
        vals[0] = growth_ratio(spec, alpha, job.x, job.y);
        vals[1] = smoothness_ratio_x(spec, alpha, job.x, xp, job.y);
        vals[2] = smoothness_ratio_y(spec, alpha, job.x, job.y, yp);
        vals[3] = has_gradient ? gradient_ratio(spec, alpha, job.x, job.y)
                               : std::numeric_limits<double>::quiet_NaN();
        for (int k = 0; k < 4; ++k) {
            if (k == 3 && !has_gradient) {
                out.samples.push_back(
                    {family_name, alpha_label, job.x.coords(), job.y.coords(), kKinds[k], job.level,
                     std::numeric_limits<double>::quiet_NaN()});
                continue;
            }
            out.samples.push_back({family_name, alpha_label, job.x.coords(), job.y.coords(),
                                   kKinds[k], job.level, vals[k]});
            if (job.level == 0) acc[k].sup_base = std::max(acc[k].sup_base, vals[k]);
            if (vals[k] >= acc[k].sup_ref) {
                acc[k].sup_ref = vals[k];
                acc[k].wx = job.x.coords();
                acc[k].wy = job.y.coords();
            }
        }
    }

    out.report.stable = true;
    for (int k = 0; k < 4; ++k) {
        if (k == 3 && !has_gradient) continue;
        KindStat s;
        s.kind = kKinds[k];
        s.sup_base = acc[k].sup_base;
        s.sup_refined = acc[k].sup_ref;
        s.delta_rel = acc[k].sup_base > 0 ? (acc[k].sup_ref - acc[k].sup_base) / acc[k].sup_base : 0.0;
        s.worst_x = acc[k].wx;
        s.worst_y = acc[k].wy;
        s.stable = std::isfinite(s.sup_refined) && s.delta_rel < cfg.refine_growth_limit;
        out.report.stable = out.report.stable && s.stable;
        out.report.kinds.push_back(std::move(s));
    }
    return out;
}

}  // namespace

EstimateReport run_sweep(const SweepConfig& config) {
    struct Cell {
        std::string family;
        std::vector<double> alpha;
    };
    std::vector<Cell> cells;
    for (const auto& f : config.families)
        for (const auto& a : config.alphas) cells.push_back({f, a});

    std::vector<CellResult> results(cells.size());
    detail::parallel_for(cells.size(), config.threads, [&](std::size_t i) {
        results[i] = run_cell(config, cells[i].family, cells[i].alpha);
    });

    EstimateReport report;
    report.config = config;
    report.all_stable = true;
    for (auto& r : results) {
        report.all_stable = report.all_stable && r.report.stable;
        report.families.push_back(std::move(r.report));
        for (auto& s : r.samples) report.samples.push_back(std::move(s));
    }
    return report;
}

std::string EstimateReport::to_json() const {
    std::ostringstream os;
    os << "{\n\"schema_version\": 1,\n\"config\": " << config.to_json() << ",\n\"families\": [\n";
    for (std::size_t i = 0; i < families.size(); ++i) {
        const FamilyReport& f = families[i];
        os << "  {\"family\": \"" << f.family << "\", \"alpha\": \"" << f.alpha_label
           << "\", \"stable\": " << (f.stable ? "true" : "false") << ", \"kinds\": [";
        for (std::size_t k = 0; k < f.kinds.size(); ++k) {
            const KindStat& s = f.kinds[k];
            os << (k ? ", " : "") << "{\"kind\": \"" << s.kind << "\", \"sup\": " << fmt_full(s.sup_base)
               << ", \"sup_refined\": " << fmt_full(s.sup_refined)
               << ", \"delta_rel\": " << fmt_full(s.delta_rel) << ", \"worst_x\": \""
               << point_label(s.worst_x) << "\", \"worst_y\": \"" << point_label(s.worst_y)
               << "\", \"stable\": " << (s.stable ? "true" : "false") << "}";
        }
        os << "]}" << (i + 1 < families.size() ? "," : "") << "\n";
    }
    os << "],\n\"all_stable\": " << (all_stable ? "true" : "false") << "\n}\n";
    return os.str();
}

std::string EstimateReport::to_csv() const {
    std::ostringstream os;
    os << "family,alpha,x,y,kind,level,value\r\n";
    for (const RatioSample& s : samples) {
        os << csv_quote(s.family) << ',' << csv_quote(s.alpha_label) << ','
           << csv_quote(point_label(s.x)) << ',' << csv_quote(point_label(s.y)) << ','
           << csv_quote(s.kind) << ',' << s.level << ',';
        if (std::isfinite(s.value)) os << fmt_full(s.value);
        os << "\r\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Integral-bound checks
// ---------------------------------------------------------------------------

namespace {

struct SupTracker {
    double sup = 0.0;
    void add(double v) { sup = std::max(sup, v); }
};

BoundCheckReport finish_report(std::string name, double sup_base, double sup_ref) {
    BoundCheckReport r;
    r.name = std::move(name);
    r.sup_base = sup_base;
    r.sup_refined = sup_ref;
    r.delta_rel = sup_base > 0 ? (sup_ref - sup_base) / sup_base : 0.0;
    r.finite = std::isfinite(sup_base) && std::isfinite(sup_ref);
    r.stable = r.finite && r.delta_rel < 0.10;
    return r;
}

}  // namespace

BoundCheckReport pi_qform_growth_check(const AlphaIndex& alpha, const std::vector<double>& xi,
                                       const std::vector<double>& kappa, int pi_nodes) {
    const int d = alpha.dim();
    require_same_dim(d, static_cast<int>(xi.size()), "pi_qform_growth_check");
    require_same_dim(d, static_cast<int>(kappa.size()), "pi_qform_growth_check");
    double xi_total = 0.0;
    for (int i = 0; i < d; ++i) {
        if (xi[static_cast<std::size_t>(i)] < 0.0 || kappa[static_cast<std::size_t>(i)] < 0.0)
            throw std::domain_error("pi_qform_growth_check: xi and kappa must be >= 0");
        if (alpha[i] + xi[static_cast<std::size_t>(i)] + kappa[static_cast<std::size_t>(i)] < -0.5)
            throw std::domain_error(
                "pi_qform_growth_check: hypothesis alpha + xi + kappa >= -1/2 violated");
        xi_total += xi[static_cast<std::size_t>(i)];
    }
    const double p1 = d + alpha.total() + xi_total;
    const double p2 = p1 + 0.5;

    auto run_level = [&](int level, int nodes, SupTracker& t1, SupTracker& t2) {
        ProductRule rule;
        for (int i = 0; i < d; ++i)
            rule.factors.push_back(pi_measure_rule(
                alpha[i] + xi[static_cast<std::size_t>(i)] + kappa[static_cast<std::size_t>(i)], nodes));
        for (const auto& [x, y] : sweep_pairs({0.1, 0.5, 2.0}, d, level)) {
            const double delta = dist(x, y);
            double front = 1.0;
            for (int i = 0; i < d; ++i)
                front *= std::pow(x[i] + y[i], 2.0 * xi[static_cast<std::size_t>(i)]);
            const double i1 = product_apply(rule, [&](std::span<const double> s) {
                return std::pow(q_forms(x, y, s).q_plus, -p1);
            });
            const double i2 = product_apply(rule, [&](std::span<const double> s) {
                return std::pow(q_forms(x, y, s).q_plus, -p2);
            });
            const double mu = ball_mu(alpha, x, delta);
            t1.add(front * i1 * mu);
            t2.add(front * i2 * delta * mu);
        }
    };
    SupTracker b1, b2, r1, r2;
    run_level(0, pi_nodes, b1, b2);
    run_level(1, 2 * pi_nodes, r1, r2);
    BoundCheckReport rep = finish_report("pi_qform_growth", b1.sup, std::max(r1.sup, b1.sup));
    const double comp_base = b2.sup;
    const double comp_ref = std::max(r2.sup, b2.sup);
    rep.details.emplace_back("companion_sup", comp_base);
    rep.details.emplace_back("companion_sup_refined", comp_ref);
    rep.finite = rep.finite && std::isfinite(comp_ref);
    rep.stable = rep.stable && (comp_base <= 0 || (comp_ref - comp_base) / comp_base < 0.10);
    return rep;
}

BoundCheckReport pi_rational_bound_check(double a, double b, double lam, int pi_nodes) {
    if (a < -0.5 || b < 0.0 || !(lam > 0.0))
        throw std::domain_error("pi_rational_bound_check: need a >= -1/2, b >= 0, lambda > 0");
    auto run_level = [&](int level, SupTracker& t) {
        const QuadRule rule = pi_measure_rule(a + b, level == 0 ? pi_nodes : 2 * pi_nodes);
        const int nA = level == 0 ? 7 : 13;
        std::vector<double> fracs{0.1, 0.3, 0.6, 0.9, 0.99, 0.999};
        if (level > 0) fracs.push_back(0.9999);
        for (int i = 0; i < nA; ++i) {
            const double A = std::pow(10.0, 2.0 * i / (nA - 1));  // [1, 100]
            for (double f : fracs) {
                const double B = f * A;
                const double integral = rule.apply(
                    [&](double s) { return std::pow(A - B * s, -(a + 0.5 + lam)); });
                t.add(integral * std::pow(A, a + 0.5) * std::pow(A - B, lam));
            }
        }
    };
    SupTracker base, ref;
    run_level(0, base);
    run_level(1, ref);
    return finish_report("pi_rational_bound", base.sup, std::max(base.sup, ref.sup));
}

double log_weight_tail_integral(double a, double b, int M, double T) {
    if (!(a > 1.0) || !(b > 0.0)) throw std::domain_error("log_weight_tail: need a > 1, b > 0");
    if (!(T > 0.0)) throw std::domain_error("log_weight_tail: need T > 0");
    // Substituting u = T/z turns the z -> 0 boundary layer into a plain
    // exponential tail: integral = T^{1-a-M} int_T^inf h(u) du with
    // h(u) = Log(T/u)^M (1 - (T/u)^2)^{b-1} u^{a+M-2} e^{-u}.
    auto h = [&](double u) {
        if (u <= T) return 0.0;
        const double z = T / u;
        double lg = (a + M - 2.0) * std::log(u) - u + (b - 1.0) * std::log1p(-z * z);
        double v = std::exp(lg);
        if (M != 0) v *= std::pow(std::log((1.0 + z) / (1.0 - z)), M);
        return std::isfinite(v) ? v : 0.0;
    };
    const double u_hi = T + 60.0 + 40.0 * std::max(a + M, 2.0);
    double scale = 0.0;
    for (int i = 1; i < 400; ++i) {
        const double u = T + (u_hi - T) * i / 400.0;
        scale = std::max(scale, std::fabs(h(u)));
    }
    if (scale == 0.0) return 0.0;
    const double tol = std::max(1e-300, 1e-10 * scale * std::min(u_hi - T, 10.0));
    return std::pow(T, 1.0 - a - M) * adaptive_integrate(h, T, u_hi, tol);
}

BoundCheckReport log_weight_tail_check(double a, double b, int M) {
    auto run_level = [&](int level, SupTracker& t) {
        const int n = level == 0 ? 13 : 25;
        for (int i = 0; i < n; ++i) {
            const double T = std::pow(10.0, -3.0 + 6.0 * i / (n - 1));  // [1e-3, 1e3]
            t.add(std::pow(T, a - 1.0) * log_weight_tail_integral(a, b, M, T));
        }
    };
    SupTracker base, ref;
    run_level(0, base);
    run_level(1, ref);
    return finish_report("log_weight_tail", base.sup, std::max(base.sup, ref.sup));
}

BoundCheckReport profile_norm_bound_check(const AlphaIndex& alpha, const MultiIndex& eps,
                                          const MultiIndex& th, const MultiIndex& rh, double u,
                                          double p, double W, double C, int pi_nodes) {
    const int d = alpha.dim();
    require_same_dim(d, eps.dim(), "profile_norm_bound_check");
    require_same_dim(d, th.dim(), "profile_norm_bound_check");
    require_same_dim(d, rh.dim(), "profile_norm_bound_check");
    for (int i = 0; i < d; ++i) {
        if (eps[i] < 0 || eps[i] > 1)
            throw std::domain_error("profile_norm_bound_check: eps must lie in {0,1}^d");
        if (th[i] > 2 * eps[i] || rh[i] > 2 * eps[i])
            throw std::domain_error("profile_norm_bound_check: need th <= 2 eps and rh <= 2 eps");
    }
    if (!(u >= 0.0) || !(C > 0.0))
        throw std::domain_error("profile_norm_bound_check: need u >= 0 and C > 0");
    const bool p_inf = std::isinf(p);
    if (!p_inf && p != 1.0 && p != 2.0)
        throw std::domain_error("profile_norm_bound_check: p must be 1, 2 or infinity");

    const double D = d + alpha.total() + 2.0 * eps.order();
    const double zeta_pow = -D + 0.5 * th.order() + 0.5 * rh.order() - (p_inf ? 0.0 : W / p) - 0.5 * u;

    auto run_level = [&](int level, int nodes, SupTracker& t) {
        ProductRule rule;
        for (int i = 0; i < d; ++i)
            rule.factors.push_back(pi_measure_rule(alpha[i] + 1.0 + eps[i], nodes));
        for (const auto& [x, y] : sweep_pairs({0.1, 0.5, 2.0}, d, level)) {
            const double delta = dist(x, y);
            double log_xy = 0.0;
            for (int i = 0; i < d; ++i)
                log_xy += (2.0 * eps[i] - th[i]) * std::log(x[i]) +
                          (2.0 * eps[i] - rh[i]) * std::log(y[i]);
            auto log_pu = [&](double t_time) {
                const double zeta = std::tanh(t_time);
                const double log_1mz2 =
                    2.0 * (M_LN2 - t_time - std::log1p(std::exp(-2.0 * t_time)));
                const double lse = product_log_sum_exp(rule, [&](std::span<const double> s) {
                    return C * log_exp_qform(zeta, q_forms(x, y, s));
                });
                return D * log_1mz2 + zeta_pow * std::log(zeta) + log_xy + lse;
            };
            // The profile decays like (1-zeta^2)^D ~ e^{-2Dt}; size the window
            // so the discarded tail is below e^{-45} of the peak scale.
            const double decay = 2.0 * (d + alpha.total());
            double norm;
            if (p_inf) {
                const double t_lo = std::min(1e-4, delta * delta / 50.0);
                const double t_hi = std::max(20.0, 45.0 / decay);
                double sup = -kInf;
                const int n_grid = 160;
                for (int i = 0; i < n_grid; ++i) {
                    const double t_time = t_lo * std::pow(t_hi / t_lo, i / (n_grid - 1.0));
                    sup = std::max(sup, log_pu(t_time));
                }
                norm = std::exp(sup);
            } else {
                const double t_lo = std::min(1e-6, delta * delta / 160.0);
                const QuadRule tr = t_weighted_grid(W, t_lo, std::max(20.0, 45.0 / (p * decay)), 48);
                double s = 0.0;
                for (std::size_t i = 0; i < tr.nodes.size(); ++i)
                    s += tr.weights[i] * std::exp(p * log_pu(tr.nodes[i]));
                norm = std::pow(s, 1.0 / p);
            }
            t.add(norm * std::pow(delta, u) * ball_mu(alpha, x, delta));
        }
    };
    SupTracker base, ref;
    run_level(0, pi_nodes, base);
    run_level(1, 2 * pi_nodes, ref);
    return finish_report("profile_norm_bound", base.sup, std::max(base.sup, ref.sup));
}

std::string BoundCheckReport::to_json() const {
    std::ostringstream os;
    os << "{\"name\": \"" << name << "\", \"sup\": " << fmt_full(sup_base)
       << ", \"sup_refined\": " << fmt_full(sup_refined) << ", \"delta_rel\": " << fmt_full(delta_rel)
       << ", \"finite\": " << (finite ? "true" : "false")
       << ", \"stable\": " << (stable ? "true" : "false");
    for (const auto& [k, v] : details) os << ", \"" << k << "\": " << fmt_full(v);
    os << "}";
    return os.str();
}

std::string fmt_full(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string point_label(const std::vector<double>& coords) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) os << ", ";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g", coords[i]);
        os << buf;
    }
    os << ")";
    return os.str();
}

}  // namespace lagcz
