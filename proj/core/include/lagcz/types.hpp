#ifndef LAGCZ_TYPES_HPP
#define LAGCZ_TYPES_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace lagcz {

// Error raised when an iterative scheme fails to reach its target accuracy.
// Carries the best estimate obtained so far and the accuracy actually achieved.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, double best_estimate, double achieved_tol)
        : std::runtime_error(what), best_(best_estimate), tol_(achieved_tol) {}
    double best_estimate() const noexcept { return best_; }
    double achieved_tol() const noexcept { return tol_; }

private:
    double best_;
    double tol_;
};

// Type multi-index alpha in (-1, inf)^d. Parameterizes the measure
// mu_alpha(dx) = x^(2*alpha+1) dx, the differential operator and all kernels.
class AlphaIndex {
public:
    explicit AlphaIndex(std::vector<double> components) : c_(std::move(components)) {
        if (c_.empty()) throw std::domain_error("AlphaIndex: dimension must be >= 1");
        for (double a : c_)
            if (!(a > -1.0) || !std::isfinite(a))
                throw std::domain_error("AlphaIndex: every component must lie in (-1, inf), got " +
                                        std::to_string(a));
    }
    AlphaIndex(std::initializer_list<double> c) : AlphaIndex(std::vector<double>(c)) {}

    int dim() const noexcept { return static_cast<int>(c_.size()); }
    double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& components() const noexcept { return c_; }
    // |alpha| = alpha_1 + ... + alpha_d
    double total() const noexcept { return std::accumulate(c_.begin(), c_.end(), 0.0); }

private:
    std::vector<double> c_;
};

// Multi-index n in N^d with |n| = n_1 + ... + n_d.
class MultiIndex {
public:
    explicit MultiIndex(std::vector<int> components) : c_(std::move(components)) {
        for (int n : c_)
            if (n < 0) throw std::domain_error("MultiIndex: components must be >= 0");
    }
    MultiIndex(std::initializer_list<int> c) : MultiIndex(std::vector<int>(c)) {}
    static MultiIndex zero(int d) { return MultiIndex(std::vector<int>(static_cast<std::size_t>(d), 0)); }
    static MultiIndex unit(int d, int j) {
        std::vector<int> c(static_cast<std::size_t>(d), 0);
        c[static_cast<std::size_t>(j)] = 1;
        return MultiIndex(std::move(c));
    }

    int dim() const noexcept { return static_cast<int>(c_.size()); }
    int operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& components() const noexcept { return c_; }
    int order() const noexcept { return std::accumulate(c_.begin(), c_.end(), 0); }
    bool operator==(const MultiIndex& o) const noexcept { return c_ == o.c_; }

private:
    std::vector<int> c_;
};

// Point of R_+^d = (0, inf)^d.
class PointRd {
public:
    explicit PointRd(std::vector<double> coords) : c_(std::move(coords)) {
        if (c_.empty()) throw std::domain_error("PointRd: dimension must be >= 1");
        for (double v : c_)
            if (!(v > 0.0) || !std::isfinite(v))
                throw std::domain_error("PointRd: coordinates must be strictly positive");
    }
    PointRd(std::initializer_list<double> c) : PointRd(std::vector<double>(c)) {}

    int dim() const noexcept { return static_cast<int>(c_.size()); }
    double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& coords() const noexcept { return c_; }
    double sq_norm() const noexcept {
        double s = 0;
        for (double v : c_) s += v * v;
        return s;
    }

private:
    std::vector<double> c_;
};

inline double dist(const PointRd& x, const PointRd& y) {
    double s = 0;
    for (int i = 0; i < x.dim(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline void require_same_dim(int a, int b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace lagcz

#endif
