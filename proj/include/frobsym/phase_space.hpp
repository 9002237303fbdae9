#pragma once

#include <functional>
#include <utility>

#include "errors.hpp"
#include "finite_diff.hpp"
#include "linalg.hpp"

namespace frobsym {

/// Positions z, momenta p and an optional spin block Lambda. Flattened as
/// (z, p, Lambda).
struct PhasePoint {
    Vector z;
    Vector p;
    Vector spin;

    PhasePoint() = default;
    PhasePoint(Vector z_, Vector p_, Vector spin_ = {}) : z(std::move(z_)), p(std::move(p_)), spin(std::move(spin_)) {}

    Eigen::Index size() const noexcept { return z.size() + p.size() + spin.size(); }

    Vector flatten() const {
        Vector y(size());
        y << z, p, spin;
        return y;
    }

    /// Inverse of flatten() with the block sizes of `layout`.
    static PhasePoint unflatten(const Vector& y, const PhasePoint& layout) {
        require_same_size(static_cast<std::size_t>(y.size()), static_cast<std::size_t>(layout.size()), "flat phase vector vs layout");
        const Eigen::Index n = layout.z.size(), m = layout.p.size(), s = layout.spin.size();
        return {y.head(n), y.segment(n, m), y.tail(s)};
    }
};

/// Scalar function on phase space with an optional analytic gradient
/// (returned in the same block layout as its argument).
class Observable {
public:
    using Eval = std::function<double(const PhasePoint&)>;
    using Gradient = std::function<PhasePoint(const PhasePoint&)>;

    Observable(Eval value, Gradient gradient = {}, double fd_step = FdSteps{}.first)
        : value_(std::move(value)), gradient_(std::move(gradient)), fd_step_(fd_step) {}

    double operator()(const PhasePoint& y) const { return value_(y); }

    bool has_analytic_gradient() const noexcept { return static_cast<bool>(gradient_); }

    PhasePoint gradient(const PhasePoint& y) const {
        if (gradient_) return gradient_(y);
        const auto flat = [this, &y](const Vector& v) { return value_(PhasePoint::unflatten(v, y)); };
        return PhasePoint::unflatten(fd::gradient(flat, y.flatten(), fd_step_), y);
    }

    double fd_step() const noexcept { return fd_step_; }

    static Observable constant(double c) {
        return Observable([c](const PhasePoint&) { return c; },
                          [](const PhasePoint& y) {
                              return PhasePoint(Vector::Zero(y.z.size()), Vector::Zero(y.p.size()), Vector::Zero(y.spin.size()));
                          });
    }

    /// Coordinate function picking flat index i of (z, p, Lambda).
    static Observable coordinate(Eigen::Index i) {
        return Observable([i](const PhasePoint& y) { return y.flatten()(i); },
                          [i](const PhasePoint& y) {
                              return PhasePoint::unflatten(Vector::Unit(y.size(), i), y);
                          });
    }

private:
    Eval value_;
    Gradient gradient_;
    double fd_step_;
};

} // namespace frobsym
