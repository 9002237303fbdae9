#pragma once

// Split-complex (paracomplex) numbers x + e y with e^2 = 1.
//
// Two coordinate systems are used throughout:
//   {1, e}       re + e im
//   {e+, e-}     plus e+ + minus e-,  e+- = (1 +- e) / 2
// Multiplication is componentwise in the idempotent basis, which makes the
// zero divisors (plus == 0 or minus == 0) explicit.

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"

namespace frobsym::para {

/// Relative guard for |re^2 - im^2| below which a number counts as a zero divisor.
inline constexpr double kZeroDivisorThreshold = 1e-12;

template <class T>
struct BasicParaNumber {
    T re{};
    T im{};

    constexpr BasicParaNumber() = default;
    constexpr BasicParaNumber(T real) : re(real) {} // NOLINT: implicit from reals
    constexpr BasicParaNumber(T real, T imag) : re(real), im(imag) {}

    static constexpr BasicParaNumber unit_e() { return {T(0), T(1)}; }

    /// z conj(z) = re^2 - im^2, real and possibly negative.
    constexpr T modulus_squared() const { return re * re - im * im; }

    constexpr BasicParaNumber& operator+=(const BasicParaNumber& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    constexpr BasicParaNumber& operator-=(const BasicParaNumber& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    constexpr BasicParaNumber& operator*=(const BasicParaNumber& o) {
        const T r = re * o.re + im * o.im;
        im = re * o.im + im * o.re;
        re = r;
        return *this;
    }

    friend constexpr BasicParaNumber operator+(BasicParaNumber a, const BasicParaNumber& b) { return a += b; }
    friend constexpr BasicParaNumber operator-(BasicParaNumber a, const BasicParaNumber& b) { return a -= b; }
    friend constexpr BasicParaNumber operator*(BasicParaNumber a, const BasicParaNumber& b) { return a *= b; }
    friend constexpr BasicParaNumber operator-(const BasicParaNumber& a) { return {-a.re, -a.im}; }
    friend constexpr bool operator==(const BasicParaNumber&, const BasicParaNumber&) = default;

    friend std::ostream& operator<<(std::ostream& os, const BasicParaNumber& z) {
        return os << z.re << (z.im < 0 ? " - " : " + ") << std::abs(z.im) << "e";
    }
};

using ParaNumber = BasicParaNumber<double>;
using ParaVector = std::vector<ParaNumber>;

template <class T>
constexpr BasicParaNumber<T> conj(const BasicParaNumber<T>& z) {
    return {z.re, -z.im};
}

/// Coefficient of e.
template <class T>
constexpr T imag(const BasicParaNumber<T>& z) {
    return z.im;
}

template <class T>
bool is_zero_divisor(const BasicParaNumber<T>& z, T threshold = T(kZeroDivisorThreshold)) {
    const T scale = std::max(T(1), z.re * z.re + z.im * z.im);
    return std::abs(z.modulus_squared()) <= threshold * scale;
}

/// Multiplicative inverse conj(z) / (z conj(z)); throws ZeroDivisor on the null cone.
template <class T>
BasicParaNumber<T> inverse(const BasicParaNumber<T>& z, T threshold = T(kZeroDivisorThreshold)) {
    if (is_zero_divisor(z, threshold)) {
        throw ZeroDivisor("re^2 - im^2 = 0 within threshold");
    }
    const T d = z.modulus_squared();
    return {z.re / d, -z.im / d};
}

template <class T>
struct BasicIdempotentCoords {
    T plus{};
    T minus{};
    friend constexpr bool operator==(const BasicIdempotentCoords&, const BasicIdempotentCoords&) = default;
};

using IdempotentCoords = BasicIdempotentCoords<double>;

template <class T>
constexpr BasicIdempotentCoords<T> decompose(const BasicParaNumber<T>& z) {
    return {z.re + z.im, z.re - z.im};
}

template <class T>
constexpr BasicParaNumber<T> recompose(const BasicIdempotentCoords<T>& c) {
    return {(c.plus + c.minus) / T(2), (c.plus - c.minus) / T(2)};
}

inline constexpr ParaNumber e_plus{0.5, 0.5};
inline constexpr ParaNumber e_minus{0.5, -0.5};

/// Reflection through the mirror fixed by the reals: swaps the e+ and e-
/// components. Coincides with conjugation and is an involutive automorphism.
template <class T>
constexpr BasicParaNumber<T> peirce_reflect(const BasicParaNumber<T>& z) {
    const auto c = decompose(z);
    return recompose(BasicIdempotentCoords<T>{c.minus, c.plus});
}

/// <xi, eta> = g_jk xi^j conj(eta^k).
inline ParaNumber hermitian_product(const Matrix& g, const ParaVector& xi, const ParaVector& eta) {
    require_same_size(static_cast<std::size_t>(g.rows()), xi.size(), "metric vs first vector");
    require_same_size(static_cast<std::size_t>(g.cols()), eta.size(), "metric vs second vector");
    ParaNumber acc;
    for (std::size_t j = 0; j < xi.size(); ++j)
        for (std::size_t k = 0; k < eta.size(); ++k) {
            acc += ParaNumber(g(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k))) * xi[j] * conj(eta[k]);
        }
    return acc;
}

/// Real 2m x 2m endomorphism K with K^2 = I and equal-dimensional +-1 eigenspaces.
class ParaStructure {
public:
    explicit ParaStructure(Matrix k) : k_(std::move(k)) {
        if (k_.rows() != k_.cols() || k_.rows() % 2 != 0 || k_.rows() == 0) {
            throw DimensionMismatch("paracomplex structure needs an even, nonzero square matrix");
        }
        const Matrix id = Matrix::Identity(k_.rows(), k_.cols());
        if (max_abs(k_ * k_ - id) > 1e-12) throw InvariantViolation("K^2 != I");
        // With K^2 = I the eigenvalues are +-1, so equal eigenspace dimensions <=> tr K = 0.
        if (std::abs(k_.trace()) > 1e-9) throw InvariantViolation("+1 and -1 eigenspaces differ in dimension");
    }

    /// K = diag(I_m, -I_m) in adapted coordinates (z+, z-).
    static ParaStructure adapted(Eigen::Index m) {
        Matrix k = Matrix::Zero(2 * m, 2 * m);
        k.topLeftCorner(m, m).setIdentity();
        k.bottomRightCorner(m, m) = -Matrix::Identity(m, m);
        return ParaStructure(std::move(k));
    }

    /// Multiplication by e on realified coordinates (x, y): (x, y) -> (y, x).
    static ParaStructure realified(Eigen::Index m) {
        Matrix k = Matrix::Zero(2 * m, 2 * m);
        k.topRightCorner(m, m).setIdentity();
        k.bottomLeftCorner(m, m).setIdentity();
        return ParaStructure(std::move(k));
    }

    const Matrix& matrix() const noexcept { return k_; }
    Eigen::Index dimension() const noexcept { return k_.rows(); }

    /// Projection onto the +1 (sign > 0) or -1 eigenspace: (I +- K) / 2.
    Matrix projector(int sign) const {
        const Matrix id = Matrix::Identity(k_.rows(), k_.cols());
        return 0.5 * (id + (sign > 0 ? 1.0 : -1.0) * k_);
    }

private:
    Matrix k_;
};

} // namespace frobsym::para
