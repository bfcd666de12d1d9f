// Common aliases, error types and small numeric helpers shared by the core.
#ifndef SUNN_TYPES_HPP
#define SUNN_TYPES_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace sunn {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidArgument : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
// A signature-respecting triangular factor does not exist for the input.
struct FactorizationFailed : Error {
    using Error::Error;
};
// The input admits no Iwasawa-like splitting (it lies outside the prime subset).
struct NotInPrimeSubset : Error {
    using Error::Error;
};
struct NotOnConstraint : Error {
    using Error::Error;
};
struct PhaseRecoveryAmbiguous : Error {
    using Error::Error;
};
struct IllConditioned : Error {
    using Error::Error;
};
// Raised by the Darboux integrator when coordinates are about to degenerate.
struct BoundaryApproach : Error {
    using Error::Error;
};

inline constexpr double kStructuralTol = 1e-10;
inline constexpr double kConstraintTol = 1e-9;
inline constexpr double kFiniteDiffTol = 1e-6;

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
inline double max_abs(const RMat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
inline double max_abs(const CVec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }
inline double max_abs(const RVec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
    return m.allFinite();
}

inline void require_finite(const Mat& m, const char* what) {
    if (!m.allFinite()) throw InvalidArgument(std::string(what) + ": non-finite entries");
}

inline void require_square(const Mat& m, const char* what) {
    if (m.rows() != m.cols()) throw InvalidArgument(std::string(what) + ": matrix must be square");
}

// sinh(t)/t, smooth through t = 0.
inline double sinhc(double t) {
    if (std::abs(t) < 1e-4) {
        const double t2 = t * t;
        return 1.0 + t2 / 6.0 * (1.0 + t2 / 20.0);
    }
    return std::sinh(t) / t;
}

// expm1(t)/t, smooth through t = 0.
inline double expm1c(double t) {
    if (std::abs(t) < 1e-4) {
        return 1.0 + t / 2.0 * (1.0 + t / 3.0);
    }
    return std::expm1(t) / t;
}

inline Complex unit_phase(Complex z) {
    const double a = std::abs(z);
    return a == 0.0 ? Complex(1.0, 0.0) : z / a;
}

// Principal k-th root of a (nonzero) complex number.
inline Complex principal_root(Complex w, int k) {
    if (w == Complex(0.0, 0.0)) throw InvalidArgument("principal_root: zero argument");
    return std::exp(std::log(w) / static_cast<double>(k));
}

}  // namespace sunn

#endif
