// Command-line front end: identity verification suites, standard-estimate
// sweeps, kernel evaluation, and operator application on truncated
// Fourier-Laguerre expansions.
//
// Exit codes: 0 = all checks pass, 1 = a check failed, 2 = usage/config error.

#include <CLI11.hpp>
#include <json.hpp>

#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "lagcz/estimates.hpp"
#include "lagcz/kernels.hpp"
#include "lagcz/operators.hpp"
#include "lagcz/quadrature.hpp"
#include "lagcz/special.hpp"
#include "lagcz/verify.hpp"

namespace {

using namespace lagcz;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
}

AlphaIndex parse_alpha(const std::vector<double>& alpha_raw, int dim) {
    std::vector<double> a = alpha_raw;
    if (a.empty()) a = {-0.75};
    if (dim > 0 && static_cast<int>(a.size()) == 1 && dim > 1)
        a.assign(static_cast<std::size_t>(dim), a[0]);
    if (dim > 0 && static_cast<int>(a.size()) != dim)
        throw CLI::ValidationError("--alpha", "alpha dimension does not match --dim");
    return AlphaIndex(a);  // validates the (-1, inf) constraint
}

int cmd_verify(const std::vector<double>& alpha_raw, int dim, std::uint64_t seed, int threads,
               double bessel_fault, const std::string& out_path) {
    VerifyOptions opt{parse_alpha(alpha_raw, dim)};
    opt.seed = seed;
    opt.threads = threads;
    opt.bessel_fault = bessel_fault;
    const VerifyReport rep = run_verify(opt);
    for (const CheckResult& c : rep.checks) {
        std::printf("[%s] %-34s achieved %.6g (tolerance %.6g)\n", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), c.achieved, c.tolerance);
    }
    std::printf("%s\n", rep.all_pass ? "verify: all checks passed" : "verify: FAILURES present");
    if (!out_path.empty()) write_file(out_path, rep.to_json());
    return rep.all_pass ? kExitPass : kExitCheckFailed;
}

int cmd_sweep(const std::string& config_path, std::string out_path, const std::string& format,
              int threads_override) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot read config file: " + config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    SweepConfig cfg = SweepConfig::from_json_text(buf.str());
    if (threads_override > 0) cfg.threads = threads_override;
    const EstimateReport rep = run_sweep(cfg);
    if (out_path.empty()) out_path = "sweep_report";
    write_file(out_path + ".json", rep.to_json());
    write_file(out_path + ".csv", rep.to_csv());
    for (const FamilyReport& f : rep.families) {
        std::printf("%-14s alpha=%-12s %s\n", f.family.c_str(), f.alpha_label.c_str(),
                    f.stable ? "stable" : "UNSTABLE");
        for (const KindStat& k : f.kinds)
            std::printf("    %-9s sup %.6e -> %.6e (delta %.2f%%)\n", k.kind.c_str(), k.sup_base,
                        k.sup_refined, 100.0 * k.delta_rel);
    }
    std::printf("sweep: %s (report: %s.json, %s.csv)\n",
                rep.all_stable ? "all families refinement-stable" : "instability detected",
                out_path.c_str(), out_path.c_str());
    (void)format;
    return rep.all_stable ? kExitPass : kExitCheckFailed;
}

int cmd_kernel(const std::vector<double>& alpha_raw, double t, std::vector<double> xs,
               std::vector<double> ys, const std::string& rep_choice, int k_max, int nodes) {
    const AlphaIndex alpha = parse_alpha(alpha_raw, static_cast<int>(xs.size()));
    if (xs.size() != ys.size() || xs.empty())
        throw CLI::ValidationError("--x/--y", "points must share a positive dimension");
    const PointRd x(xs), y(ys);
    const bool all = rep_choice == "all";
    std::optional<double> closed, spectral, schlafli;
    if (all || rep_choice == "closed") closed = heat_kernel_closed(alpha, t, x, y);
    if (all || rep_choice == "spectral") {
        const SpectralValue v = heat_kernel_spectral(alpha, t, x, y, k_max);
        spectral = v.value;
        std::printf("spectral tail estimate: %s  (max |term|: %s)\n",
                    fmt_full(v.tail_estimate).c_str(), fmt_full(v.max_term).c_str());
    }
    if (all || rep_choice == "schlafli") schlafli = heat_kernel_schlafli(alpha, t, x, y, nodes);
    auto print_one = [](const char* name, std::optional<double> v) {
        if (v) std::printf("%-10s %s\n", name, fmt_full(*v).c_str());
    };
    print_one("closed", closed);
    print_one("spectral", spectral);
    print_one("schlafli", schlafli);
    auto rel = [](double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); };
    if (closed && spectral)
        std::printf("rel(closed, spectral) = %.3e\n", rel(*spectral, *closed));
    if (closed && schlafli)
        std::printf("rel(closed, schlafli) = %.3e\n", rel(*schlafli, *closed));
    if (spectral && schlafli)
        std::printf("rel(spectral, schlafli) = %.3e\n", rel(*spectral, *schlafli));
    return kExitPass;
}

struct ApplyConfig {
    std::string op;
    std::vector<double> alpha{-0.75};
    int k_max = 32;
    // operator parameters
    double t = 0.5;
    std::vector<int> n;
    int m = 0;
    std::string psi = "one";  // "one" | "exp" | "imaginary_power"
    double gamma = 0.5;
    std::vector<std::pair<double, double>> atoms;  // (t, weight)
    // input function
    std::string input_type = "laguerre";  // "laguerre" | "bump" | "coeffs"
    std::vector<int> input_k;
    std::vector<double> bump_center{1.0};
    double bump_width = 0.1;
    std::vector<double> coeffs;
    // output grid
    double grid_min = 0.2, grid_max = 3.0;
    int grid_points = 12;
};

ApplyConfig parse_apply_config(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("apply config: expected a JSON object");
    ApplyConfig c;
    for (const auto& [key, value] : j.items()) {
        if (key == "schema_version") {
            if (value.get<int>() != 1) throw std::invalid_argument("apply config: unsupported schema_version");
        } else if (key == "op") c.op = value.get<std::string>();
        else if (key == "alpha") c.alpha = value.get<std::vector<double>>();
        else if (key == "k_max") c.k_max = value.get<int>();
        else if (key == "t") c.t = value.get<double>();
        else if (key == "n") c.n = value.get<std::vector<int>>();
        else if (key == "m") c.m = value.get<int>();
        else if (key == "psi") c.psi = value.get<std::string>();
        else if (key == "gamma") c.gamma = value.get<double>();
        else if (key == "atoms") {
            for (const auto& a : value) c.atoms.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
        } else if (key == "input") {
            for (const auto& [ik, iv] : value.items()) {
                if (ik == "type") c.input_type = iv.get<std::string>();
                else if (ik == "k") c.input_k = iv.get<std::vector<int>>();
                else if (ik == "center") c.bump_center = iv.get<std::vector<double>>();
                else if (ik == "width") c.bump_width = iv.get<double>();
                else if (ik == "coeffs") c.coeffs = iv.get<std::vector<double>>();
                else throw std::invalid_argument("apply config: unknown input key '" + ik + "'");
            }
        } else if (key == "grid") {
            for (const auto& [gk, gv] : value.items()) {
                if (gk == "min") c.grid_min = gv.get<double>();
                else if (gk == "max") c.grid_max = gv.get<double>();
                else if (gk == "points") c.grid_points = gv.get<int>();
                else throw std::invalid_argument("apply config: unknown grid key '" + gk + "'");
            }
        } else {
            throw std::invalid_argument("apply config: unknown key '" + key + "'");
        }
    }
    if (c.op.empty()) throw std::invalid_argument("apply config: missing 'op'");
    return c;
}

int cmd_apply(const std::string& config_path, const std::string& op_override,
              std::string out_path) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot read config file: " + config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    ApplyConfig cfg = parse_apply_config(buf.str());
    if (!op_override.empty()) cfg.op = op_override;
    const AlphaIndex alpha(cfg.alpha);
    const int d = alpha.dim();
    if (d != 1) throw std::invalid_argument("apply: output grids are one-dimensional (d = 1)");

    // Build the input expansion.
    const ProductRule rule = projection_rule(alpha, cfg.k_max);
    SpectralVector v = SpectralVector::zero(alpha, cfg.k_max);
    std::function<double(const PointRd&)> input_fn;
    bool have_fn = false;
    if (cfg.input_type == "laguerre") {
        const MultiIndex k(cfg.input_k.empty() ? std::vector<int>{0} : cfg.input_k);
        v = SpectralVector::unit(alpha, cfg.k_max, k);
        input_fn = [k, alpha](const PointRd& p) { return laguerre_fn(k, alpha, p); };
        have_fn = true;
    } else if (cfg.input_type == "bump") {
        // smooth bump supported exactly on (center - width, center + width)
        const double lo = cfg.bump_center[0] - cfg.bump_width;
        const double hi = cfg.bump_center[0] + cfg.bump_width;
        if (!(lo > 0.0)) throw std::invalid_argument("apply: bump support must stay inside (0, inf)");
        input_fn = [lo, hi](const PointRd& p) { return compact_bump(p[0], lo, hi); };
        have_fn = true;
        v = project_on_interval([lo, hi](double xv) { return compact_bump(xv, lo, hi); }, alpha,
                                cfg.k_max, lo, hi);
    } else if (cfg.input_type == "coeffs") {
        if (static_cast<int>(cfg.coeffs.size()) > cfg.k_max + 1)
            throw std::invalid_argument("apply: more coefficients than the truncation holds");
        for (std::size_t i = 0; i < cfg.coeffs.size(); ++i) v.coeff[i] = cfg.coeffs[i];
    } else {
        throw std::invalid_argument("apply: unknown input type '" + cfg.input_type + "'");
    }

    const MultiIndex n(cfg.n.empty() ? std::vector<int>{1} : cfg.n);
    std::ostringstream csv;
    csv << "x,value_re,value_im";
    const bool riesz_dual = cfg.op == "riesz" && cfg.input_type == "bump";
    if (riesz_dual) csv << ",kernel_side_re";
    csv << "\r\n";

    for (int gi = 0; gi < cfg.grid_points; ++gi) {
        const double xv =
            cfg.grid_min * std::pow(cfg.grid_max / cfg.grid_min, gi / std::max(1.0, cfg.grid_points - 1.0));
        const PointRd x{xv};
        std::complex<double> val;
        if (cfg.op == "heat") {
            val = synthesize(heat_apply(v, cfg.t), x);
        } else if (cfg.op == "maximal") {
            const QuadRule grid = t_weighted_grid(1.0, 1e-5, 20.0, 40);
            val = maximal_apply(v, x, grid);
        } else if (cfg.op == "riesz") {
            val = riesz_apply(v, n, x);
        } else if (cfg.op == "gfun") {
            const double W = n.order() + 2.0 * cfg.m;
            const QuadRule tr = t_weighted_grid(W, 1e-7, 40.0, 48);
            val = gfun_apply(v, n, cfg.m, x, tr);
        } else if (cfg.op == "laplace_mult") {
            MultiplierSymbol sym = [&] {
                if (cfg.psi == "one")
                    return MultiplierSymbol::laplace([](double) { return std::complex<double>(1.0, 0.0); }, 1.0);
                if (cfg.psi == "exp")
                    return MultiplierSymbol::laplace(
                        [](double t) { return std::complex<double>(std::exp(-t), 0.0); }, 1.0);
                if (cfg.psi == "imaginary_power") return imaginary_power_symbol(cfg.gamma);
                throw std::invalid_argument("apply: unknown psi '" + cfg.psi + "'");
            }();
            val = synthesize(multiplier_apply(v, sym), x);
        } else if (cfg.op == "stieltjes_mult") {
            NuMeasure nu;
            if (cfg.atoms.empty()) nu.atoms.push_back({0.7, 1.0});
            for (const auto& [ta, wa] : cfg.atoms) nu.atoms.push_back({ta, wa});
            val = synthesize(multiplier_apply(v, MultiplierSymbol::stieltjes(nu)), x);
        } else {
            throw std::invalid_argument("apply: unknown operator '" + cfg.op + "'");
        }
        csv << fmt_full(xv) << ',' << fmt_full(val.real()) << ',' << fmt_full(val.imag());
        if (riesz_dual) {
            // kernel-side value where x falls outside the input's support
            const double lo = cfg.bump_center[0] - cfg.bump_width;
            const double hi = cfg.bump_center[0] + cfg.bump_width;
            double ks = std::numeric_limits<double>::quiet_NaN();
            if (xv < lo - 0.05 || xv > hi + 0.05) {
                const QuadRule gq = gauss_legendre_rule(96, lo, hi);
                ks = 0.0;
                for (std::size_t qi = 0; qi < gq.nodes.size(); ++qi) {
                    const double yv = gq.nodes[qi];
                    ks += gq.weights[qi] * riesz_kernel(alpha, n, x, PointRd{yv}) *
                          input_fn(PointRd{yv}) * std::pow(yv, 2.0 * alpha[0] + 1.0);
                }
            }
            csv << ',' << (std::isfinite(ks) ? fmt_full(ks) : "");
        }
        csv << "\r\n";
    }
    if (out_path.empty()) out_path = "apply_output.csv";
    write_file(out_path, csv.str());
    std::printf("apply: wrote %s\n", out_path.c_str());
    (void)have_fn;
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Laguerre semigroup kernels, operators and homogeneous-type kernel estimates"};
    app.require_subcommand(1);

    std::vector<double> alpha_raw;
    int dim = 0;
    std::uint64_t seed = 20260810;
    int threads = 0;
    std::string out_path, format = "json";

    // verify
    auto* verify = app.add_subcommand("verify", "run the identity verification suite");
    double bessel_fault = 0.0;
    verify->add_option("--alpha", alpha_raw, "type index components (each > -1)");
    verify->add_option("--dim", dim, "dimension (replicates a scalar --alpha)");
    verify->add_option("--seed", seed, "sampling seed");
    verify->add_option("--threads", threads, "worker cap (0 = all cores)");
    verify->add_option("--out", out_path, "write a JSON report here");
    verify->add_option("--format", format, "json|csv (reports are JSON)");
    verify->add_option("--bessel-fault", bessel_fault,
                       "test fixture: relative perturbation injected into the recurrence check")
        ->group("");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "standard-estimate sweep over kernel families");
    std::string config_path;
    sweep->add_option("--config", config_path, "JSON sweep configuration")->required();
    sweep->add_option("--out", out_path, "output stem (writes .json and .csv)");
    sweep->add_option("--format", format, "json|csv (both are always written)");
    sweep->add_option("--threads", threads, "worker cap (0 = all cores)");

    // kernel
    auto* kernel = app.add_subcommand("kernel", "evaluate heat-kernel representations side by side");
    double t = 0.5;
    std::vector<double> xs, ys;
    std::string rep_choice = "all";
    int k_max = 90, nodes = 64;
    kernel->add_option("--alpha", alpha_raw, "type index components (each > -1)");
    kernel->add_option("--t", t, "time parameter (> 0)")->required();
    kernel->add_option("--x", xs, "first point, strictly positive coordinates")->required();
    kernel->add_option("--y", ys, "second point")->required();
    kernel->add_option("--rep", rep_choice, "all|closed|spectral|schlafli")
        ->check(CLI::IsMember({"all", "closed", "spectral", "schlafli"}));
    kernel->add_option("--kmax", k_max, "truncation for the eigen-series");
    kernel->add_option("--nodes", nodes, "nodes per coordinate for the integral representation");

    // apply
    auto* apply = app.add_subcommand("apply", "apply an operator to a truncated expansion");
    std::string op_name;
    apply->add_option("--op", op_name, "heat|maximal|riesz|gfun|laplace_mult|stieltjes_mult");
    apply->add_option("--config", config_path, "JSON application configuration")->required();
    apply->add_option("--out", out_path, "output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints help/error text
        return kExitUsage;
    }

    try {
        if (verify->parsed()) return cmd_verify(alpha_raw, dim, seed, threads, bessel_fault, out_path);
        if (sweep->parsed()) return cmd_sweep(config_path, out_path, format, threads);
        if (kernel->parsed()) return cmd_kernel(alpha_raw, t, xs, ys, rep_choice, k_max, nodes);
        if (apply->parsed()) return cmd_apply(config_path, op_name, out_path);
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitCheckFailed;
    }
    return kExitUsage;
}
