#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Eigenvalues>

#include "linalg.hpp"

namespace frobsym {

/// Dense univariate polynomial, coefficients in increasing degree.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(std::initializer_list<double> c) : c_(c) {}
    explicit Polynomial(std::vector<double> c) : c_(std::move(c)) {}

    const std::vector<double>& coefficients() const noexcept { return c_; }

    double operator()(double x) const {
        double acc = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    double max_coefficient() const {
        double m = 0.0;
        for (double v : c_) m = std::max(m, std::abs(v));
        return m;
    }

    /// Degree after dropping coefficients below rel * max|c|; -1 for zero.
    int degree(double rel = 1e-12) const {
        const double cut = rel * max_coefficient();
        for (int d = static_cast<int>(c_.size()) - 1; d >= 0; --d)
            if (std::abs(c_[static_cast<std::size_t>(d)]) > cut) return d;
        return -1;
    }

    bool is_zero(double abs_tol) const { return max_coefficient() <= abs_tol; }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<double> c(std::max(a.c_.size(), b.c_.size()), 0.0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
        return Polynomial(std::move(c));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + b * -1.0; }
    friend Polynomial operator*(const Polynomial& a, double s) {
        Polynomial r = a;
        for (double& v : r.c_) v *= s;
        return r;
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.c_.empty() || b.c_.empty()) return {};
        std::vector<double> c(a.c_.size() + b.c_.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(c));
    }

    /// Real roots from companion-matrix eigenvalues, keeping those whose
    /// imaginary part is below imag_tol * max(1, |root|).
    std::vector<double> real_roots(double imag_tol = 1e-6) const {
        const int d = degree();
        if (d <= 0) return {};
        const double lead = c_[static_cast<std::size_t>(d)];
        Matrix comp = Matrix::Zero(d, d);
        for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
        for (int i = 0; i < d; ++i) comp(i, d - 1) = -c_[static_cast<std::size_t>(i)] / lead;
        Eigen::EigenSolver<Matrix> es(comp, false);
        std::vector<double> out;
        for (Eigen::Index i = 0; i < d; ++i) {
            const std::complex<double> z = es.eigenvalues()(i);
            if (std::abs(z.imag()) <= imag_tol * std::max(1.0, std::abs(z))) out.push_back(z.real());
        }
        return out;
    }

private:
    std::vector<double> c_;
};

} // namespace frobsym
