#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <type_traits>

#include "linalg.hpp"

namespace frobsym {

/// Relative finite-difference steps. The absolute step along coordinate i is
/// rel * max(1, |x_i|).
struct FdSteps {
    double first = 1e-5;
    double second = 6e-4;
    double third = 1e-2;
};

namespace fd {

inline double scaled_step(double rel, double xi) { return rel * std::max(1.0, std::abs(xi)); }

// 5-point first-derivative weights at offsets {-2, -1, +1, +2}, divided by 12h.
inline constexpr std::array<int, 4> kOffsets{-2, -1, 1, 2};
inline constexpr std::array<double, 4> kWeights{1.0, -8.0, 8.0, -1.0};

/// Fourth-order central derivative of F along coordinate i. F may return any
/// type closed under addition and scalar multiplication.
template <class F>
auto partial(const F& f, const Vector& x, Eigen::Index i, double h) {
    using Result = std::decay_t<decltype(f(x))>;
    Vector xs = x;
    xs(i) = x(i) + kOffsets[0] * h;
    Result acc = f(xs) * kWeights[0];
    for (std::size_t s = 1; s < kOffsets.size(); ++s) {
        xs(i) = x(i) + kOffsets[s] * h;
        acc = acc + f(xs) * kWeights[s];
    }
    return Result(acc * (1.0 / (12.0 * h)));
}

inline Vector gradient(const std::function<double(const Vector&)>& f, const Vector& x, double rel) {
    Vector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) g(i) = partial(f, x, i, scaled_step(rel, x(i)));
    return g;
}

/// Fourth-order Hessian: dedicated stencil on the diagonal, nested first
/// derivatives off the diagonal.
inline Matrix hessian(const std::function<double(const Vector&)>& f, const Vector& x, double rel) {
    const Eigen::Index n = x.size();
    Matrix h(n, n);
    const double f0 = f(x);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double hi = scaled_step(rel, x(i));
        Vector xs = x;
        auto at = [&](double off) {
            xs(i) = x(i) + off * hi;
            return f(xs);
        };
        h(i, i) = (-at(2) + 16.0 * at(1) - 30.0 * f0 + 16.0 * at(-1) - at(-2)) / (12.0 * hi * hi);
        for (Eigen::Index j = 0; j < i; ++j) {
            const double hj = scaled_step(rel, x(j));
            double acc = 0.0;
            for (std::size_t a = 0; a < kOffsets.size(); ++a)
                for (std::size_t b = 0; b < kOffsets.size(); ++b) {
                    Vector y = x;
                    y(i) += kOffsets[a] * hi;
                    y(j) += kOffsets[b] * hj;
                    acc += kWeights[a] * kWeights[b] * f(y);
                }
            h(i, j) = h(j, i) = acc / (144.0 * hi * hj);
        }
    }
    return h;
}

/// Third-derivative tensor by composing the first-derivative stencil three
/// times; exact up to roundoff for polynomials of degree <= 4 per variable.
inline Tensor3 third_derivatives(const std::function<double(const Vector&)>& f, const Vector& x, double rel) {
    const auto n = static_cast<std::size_t>(x.size());
    Tensor3 t(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            for (std::size_t k = j; k < n; ++k) {
                const double hi = scaled_step(rel, x(i)), hj = scaled_step(rel, x(j)), hk = scaled_step(rel, x(k));
                double acc = 0.0;
                for (std::size_t a = 0; a < 4; ++a)
                    for (std::size_t b = 0; b < 4; ++b)
                        for (std::size_t c = 0; c < 4; ++c) {
                            Vector y = x;
                            y(i) += kOffsets[a] * hi;
                            y(j) += kOffsets[b] * hj;
                            y(k) += kOffsets[c] * hk;
                            acc += kWeights[a] * kWeights[b] * kWeights[c] * f(y);
                        }
                const double v = acc / (1728.0 * hi * hj * hk);
                t(i, j, k) = t(i, k, j) = t(j, i, k) = t(j, k, i) = t(k, i, j) = t(k, j, i) = v;
            }
    return t;
}

/// Mixed partial along the listed coordinates (repeats allowed) by composing
/// the first-derivative stencil once per index; 4^k evaluations.
inline double mixed_partial(const std::function<double(const Vector&)>& f, const Vector& x, std::span<const Eigen::Index> idx,
                            double rel) {
    if (idx.empty()) return f(x);
    const Eigen::Index i = idx.front();
    const double h = scaled_step(rel, x(i));
    double acc = 0.0;
    Vector xs = x;
    for (std::size_t s = 0; s < kOffsets.size(); ++s) {
        xs(i) = x(i) + kOffsets[s] * h;
        acc += kWeights[s] * mixed_partial(f, xs, idx.subspan(1), rel);
    }
    return acc / (12.0 * h);
}

} // namespace fd
} // namespace frobsym
