// linalg.hpp: dense Hermitian helpers: checks, spectral functions, log-determinants
//
// Everything here is a thin layer over Eigen. Matrix exponentials of Hermitian
// generators are always formed from an eigendecomposition so the resulting
// propagators are unitary up to eigensolver error.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace decoheat {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr cd I{0.0, 1.0};

// Largest absolute entry (the "max-entry norm" used for all tolerance checks).
template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real max_abs(const Eigen::MatrixBase<Derived>& m) {
    if (m.size() == 0) return 0;
    return m.cwiseAbs().maxCoeff();
}

template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real
hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
    return max_abs(m - m.adjoint());
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m,
                  typename Eigen::NumTraits<typename Derived::Scalar>::Real tol) {
    return m.rows() == m.cols() && hermiticity_defect(m) <= tol;
}

template <typename DerivedA, typename DerivedB>
auto commutator(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    using Scalar = typename DerivedA::Scalar;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Mat out = a * b;
    out.noalias() -= b * a;
    return out;
}

// Hermitian eigendecomposition with eigenvalues ascending.
template <typename Scalar>
struct HermitianSpectrum {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    RVector values;
    Mat vectors; // columns

    HermitianSpectrum() = default;

    template <typename Derived>
    explicit HermitianSpectrum(const Eigen::MatrixBase<Derived>& h) {
        Eigen::SelfAdjointEigenSolver<Mat> es(h.derived().template cast<Scalar>());
        values = es.eigenvalues();
        vectors = es.eigenvectors();
    }

    Eigen::Index dim() const { return values.size(); }

    // V f(Λ) V† for an arbitrary complex-valued spectral function.
    template <typename F>
    CMatrix apply(F&& f) const {
        CVector fv(values.size());
        for (Eigen::Index k = 0; k < values.size(); ++k) fv(k) = f(values(k));
        CMatrix left = vectors.template cast<cd>() * fv.asDiagonal();
        return left * vectors.adjoint().template cast<cd>();
    }

    // exp(-i t H)
    CMatrix propagator(double t) const {
        return apply([t](double e) { return std::exp(-I * t * e); });
    }

    // exp(s H) for complex s; callers are responsible for overflow.
    CMatrix exponential(cd s) const {
        return apply([s](double e) { return std::exp(s * e); });
    }

    Mat reconstruct() const {
        return vectors * values.asDiagonal() * vectors.adjoint();
    }
};

// Natural log of a complex number stored as (log|z|, arg z). Survives values far
// below the double underflow threshold.
struct LogComplex {
    double log_magnitude{0.0};
    double phase{0.0};
    bool phase_reliable{true};

    static LogComplex from_value(cd z) {
        if (z == cd{0.0, 0.0})
            return {-std::numeric_limits<double>::infinity(), 0.0, false};
        return {std::log(std::abs(z)), std::arg(z), true};
    }

    bool is_zero() const { return std::isinf(log_magnitude) && log_magnitude < 0; }

    cd value() const {
        if (is_zero()) return {0.0, 0.0};
        return std::polar(std::exp(log_magnitude), phase);
    }

    double magnitude() const { return is_zero() ? 0.0 : std::exp(log_magnitude); }

    LogComplex& operator*=(const LogComplex& o) {
        log_magnitude += o.log_magnitude;
        phase = std::remainder(phase + o.phase, 2.0 * std::numbers::pi);
        phase_reliable = phase_reliable && o.phase_reliable;
        return *this;
    }
};

inline LogComplex operator*(LogComplex a, const LogComplex& b) { return a *= b; }

// Determinant by LU with partial pivoting, accumulated as log-magnitude plus phase
// from the diagonal of U. A zero or subnormal pivot is reported as log|det| = -inf
// with the phase flagged unreliable.
template <typename Derived>
LogComplex log_determinant(const Eigen::MatrixBase<Derived>& m) {
    using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (m.rows() == 0) return {};
    Eigen::PartialPivLU<Mat> lu(m.derived());
    const auto& packed = lu.matrixLU();

    double log_mag = 0.0;
    cd phasor{lu.permutationP().determinant() > 0 ? 1.0 : -1.0, 0.0};
    for (Eigen::Index k = 0; k < packed.rows(); ++k) {
        const cd pivot(packed(k, k));
        const double a = std::abs(pivot);
        if (!(a >= std::numeric_limits<double>::min()) || !std::isfinite(a))
            return {-std::numeric_limits<double>::infinity(), 0.0, false};
        log_mag += std::log(a);
        phasor *= pivot / a;
        // keep the running phasor on the unit circle
        phasor /= std::abs(phasor);
    }
    return {log_mag, std::arg(phasor), true};
}

// log(1 + exp(x)) without overflow.
inline double softplus(double x) {
    return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

} // namespace decoheat
