// qutrit.hpp
// Exact three-level state of one engine particle, entropy and coherence
// functionals, and the work-stroke rotation on the {2,3} subspace.
//
// Level indices follow the physics labelling: level 1 is the ground state,
// level 2 the cold excited level, level 3 the hot excited level. Internally
// matrices are 0-based, so level k lives at row/column k-1.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "otto/error.hpp"

namespace otto {

using complex = std::complex<double>;
using Matrix3c = Eigen::Matrix3cd;

inline constexpr double kStateTol = 1e-12;
inline constexpr double kSupportTol = 1e-14;

/// Populations of the three levels.
struct ProbVector3 {
    double p1 = 1.0;
    double p2 = 0.0;
    double p3 = 0.0;

    double sum() const { return p1 + p2 + p3; }
    double operator[](int level) const { return level == 1 ? p1 : level == 2 ? p2 : p3; }
    std::array<double, 3> as_array() const { return {p1, p2, p3}; }

    bool is_valid(double tol = kStateTol) const {
        const auto in_unit = [tol](double p) { return p >= -tol && p <= 1.0 + tol; };
        return in_unit(p1) && in_unit(p2) && in_unit(p3) && std::abs(sum() - 1.0) <= tol;
    }
};

inline ProbVector3 operator-(const ProbVector3& a, const ProbVector3& b) {
    return {a.p1 - b.p1, a.p2 - b.p2, a.p3 - b.p3};
}

/// Hermitian, unit-trace, positive semidefinite 3x3 matrix. Construction
/// validates; every instance in circulation is a physical state.
class DensityMatrix3 {
public:
    DensityMatrix3() : m_(Matrix3c::Zero()) { m_(0, 0) = 1.0; }

    explicit DensityMatrix3(const Matrix3c& m) : m_(m) { validate(); }

    static DensityMatrix3 diagonal(const ProbVector3& p) {
        if (!p.is_valid()) {
            fail(ErrorKind::InvalidState, "populations are not a probability vector");
        }
        Matrix3c m = Matrix3c::Zero();
        m(0, 0) = std::max(p.p1, 0.0);
        m(1, 1) = std::max(p.p2, 0.0);
        m(2, 2) = std::max(p.p3, 0.0);
        return DensityMatrix3(m);
    }

    const Matrix3c& matrix() const { return m_; }

    /// 1-based element access matching the level labels.
    complex element(int row, int col) const { return m_(row - 1, col - 1); }

    ProbVector3 populations() const { return {m_(0, 0).real(), m_(1, 1).real(), m_(2, 2).real()}; }

    bool is_diagonal(double tol = kStateTol) const {
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) {
                if (r != c && std::abs(m_(r, c)) > tol) return false;
            }
        }
        return true;
    }

    /// Ascending eigenvalues with round-off negatives in [-tol, 0] clipped to 0.
    Eigen::Vector3d eigenvalues() const {
        Eigen::SelfAdjointEigenSolver<Matrix3c> es(m_, Eigen::EigenvaluesOnly);
        Eigen::Vector3d ev = es.eigenvalues();
        for (int k = 0; k < 3; ++k) ev(k) = std::max(ev(k), 0.0);
        return ev;
    }

private:
    void validate() const {
        if (!m_.allFinite()) fail(ErrorKind::InvalidState, "non-finite matrix element");
        if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kStateTol) {
            fail(ErrorKind::InvalidState, "matrix is not Hermitian");
        }
        const complex tr = m_.trace();
        if (std::abs(tr.real() - 1.0) > kStateTol || std::abs(tr.imag()) > kStateTol) {
            fail(ErrorKind::InvalidState, "trace differs from 1");
        }
        Eigen::SelfAdjointEigenSolver<Matrix3c> es(m_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -kStateTol) {
            fail(ErrorKind::InvalidState, "matrix has a negative eigenvalue");
        }
    }

    Matrix3c m_;
};

/// Coordinates of the {2,3} block on its Bloch disk (the x coordinate is
/// identically zero for every state this toolkit produces).
struct BlochVector23 {
    double y = 0.0;  ///< i(rho_23 - rho_32)
    double z = 0.0;  ///< p_3 - p_2

    double radius() const { return std::hypot(y, z); }
    /// Polar angle measured from +z toward +y.
    double angle() const { return std::atan2(y, z); }

    static BlochVector23 from_polar(double radius, double angle) {
        return {radius * std::sin(angle), radius * std::cos(angle)};
    }
};

namespace detail {

inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace detail

/// Shannon entropy of a population vector, in nats.
inline double shannon_entropy(const ProbVector3& p) {
    return -(detail::xlogx(p.p1) + detail::xlogx(p.p2) + detail::xlogx(p.p3));
}

/// von Neumann entropy -tr(rho ln rho) in nats, with 0 ln 0 = 0.
inline double von_neumann_entropy(const DensityMatrix3& rho) {
    const Eigen::Vector3d ev = rho.eigenvalues();
    double s = 0.0;
    for (int k = 0; k < 3; ++k) s -= detail::xlogx(ev(k));
    return std::max(s, 0.0);
}

/// Quantum relative entropy D(rho||sigma) = tr[rho(ln rho - ln sigma)].
/// Throws InfiniteDivergence when rho has weight outside the support of sigma.
inline double relative_entropy(const DensityMatrix3& rho, const DensityMatrix3& sigma) {
    Eigen::SelfAdjointEigenSolver<Matrix3c> es(sigma.matrix());
    const Eigen::Vector3d lambda = es.eigenvalues();
    const Matrix3c& v = es.eigenvectors();

    double cross = 0.0;  // tr(rho ln sigma)
    for (int k = 0; k < 3; ++k) {
        const double weight = (v.col(k).adjoint() * rho.matrix() * v.col(k))(0, 0).real();
        if (lambda(k) <= kSupportTol) {
            if (weight > kStateTol) {
                fail(ErrorKind::InfiniteDivergence, "support of rho is not contained in support of sigma");
            }
            continue;
        }
        cross += weight * std::log(lambda(k));
    }
    return -von_neumann_entropy(rho) - cross;
}

/// Classical Kullback-Leibler divergence D(p||q) of population vectors.
inline double relative_entropy(const ProbVector3& p, const ProbVector3& q) {
    double d = 0.0;
    const auto pa = p.as_array();
    const auto qa = q.as_array();
    for (std::size_t j = 0; j < 3; ++j) {
        if (pa[j] <= 0.0) continue;
        if (qa[j] <= kSupportTol) {
            fail(ErrorKind::InfiniteDivergence, "p has weight where q vanishes");
        }
        d += pa[j] * std::log(pa[j] / qa[j]);
    }
    return d;
}

/// Removes every off-diagonal element (energy-basis dephasing).
inline DensityMatrix3 dephase(const DensityMatrix3& rho) {
    Matrix3c m = Matrix3c::Zero();
    for (int k = 0; k < 3; ++k) m(k, k) = rho.matrix()(k, k).real();
    return DensityMatrix3(m);
}

/// Relative entropy of coherence C(rho) = D(rho||diag rho).
inline double coherence_measure(const DensityMatrix3& rho) {
    if (rho.is_diagonal(0.0)) return 0.0;
    return std::max(relative_entropy(rho, dephase(rho)), 0.0);
}

/// Rotation exp(-i theta sigma_x / 2) on the {2,3} subspace, identity on
/// level 1. A positive angle moves the north pole (pure level 3) toward +y.
inline Matrix3c work_unitary(double delta_theta) {
    const double c = std::cos(0.5 * delta_theta);
    const double s = std::sin(0.5 * delta_theta);
    Matrix3c u = Matrix3c::Zero();
    u(0, 0) = 1.0;
    u(1, 1) = c;
    u(2, 2) = c;
    u(1, 2) = complex(0.0, -s);
    u(2, 1) = complex(0.0, -s);
    return u;
}

/// U rho U^dagger - rho, evaluated as K rho + rho K^dagger + K rho K^dagger
/// with K = U - I so that small rotations keep full relative precision.
inline Matrix3c work_unitary_increment(const DensityMatrix3& rho, double delta_theta) {
    const double half_sin = std::sin(0.25 * delta_theta);
    Matrix3c k = Matrix3c::Zero();
    k(1, 1) = -2.0 * half_sin * half_sin;
    k(2, 2) = k(1, 1);
    k(1, 2) = complex(0.0, -std::sin(0.5 * delta_theta));
    k(2, 1) = k(1, 2);
    const Matrix3c& m = rho.matrix();
    Matrix3c d = k * m + m * k.adjoint() + k * m * k.adjoint();
    return 0.5 * (d + d.adjoint()).eval();
}

inline DensityMatrix3 apply_work_unitary(const DensityMatrix3& rho, double delta_theta) {
    return DensityMatrix3(rho.matrix() + work_unitary_increment(rho, delta_theta));
}

/// Bloch coordinates of the {2,3} block. Requires the state to carry no
/// coherence involving level 1 and no x coherence.
inline BlochVector23 to_bloch(const DensityMatrix3& rho) {
    const Matrix3c& m = rho.matrix();
    if (std::abs(m(0, 1)) > kStateTol || std::abs(m(0, 2)) > kStateTol) {
        fail(ErrorKind::InvalidState, "state has coherence involving the ground level");
    }
    if (std::abs(m(1, 2).real()) > kStateTol) {
        fail(ErrorKind::InvalidState, "state has x coherence on the {2,3} block");
    }
    const complex y = complex(0.0, 1.0) * (m(1, 2) - m(2, 1));
    return {y.real(), m(2, 2).real() - m(1, 1).real()};
}

/// Inverse of to_bloch: p1 is the ground population and s = p2 + p3.
inline DensityMatrix3 from_bloch(double p1, const BlochVector23& b, double s) {
    if (std::abs(p1 + s - 1.0) > kStateTol || p1 < -kStateTol || s < -kStateTol) {
        fail(ErrorKind::InvalidState, "p1 + s must equal 1 with both non-negative");
    }
    if (b.radius() > s + kStateTol) {
        fail(ErrorKind::InvalidState,
             "Bloch radius " + std::to_string(b.radius()) + " exceeds excited weight " + std::to_string(s));
    }
    Matrix3c m = Matrix3c::Zero();
    m(0, 0) = p1;
    m(1, 1) = 0.5 * (s - b.z);
    m(2, 2) = 0.5 * (s + b.z);
    m(1, 2) = complex(0.0, -0.5 * b.y);
    m(2, 1) = complex(0.0, 0.5 * b.y);
    return DensityMatrix3(m);
}

}  // namespace otto
