// Bloch-vector algebra for qubit states and measurement directions, plus a
// 2x2 complex-matrix representation used as an independent cross-check of
// every vector-form computation.
//
// Convention: standard Pauli matrices with sigma_z = diag(1, -1), so the
// +z axis corresponds to the |0> state.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "jointmeas/errors.hpp"

namespace jointmeas {

using complexd = std::complex<double>;

// Absolute tolerance on unit-vector norms. Out-of-tolerance inputs are
// rejected, never silently renormalized.
inline constexpr double kUnitNormTol = 1e-9;

// Agreement tolerance between the vector and matrix computation routes.
inline constexpr double kOracleTol = 1e-12;

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend BlochVector operator+(BlochVector a, BlochVector b) {
        return {a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend BlochVector operator-(BlochVector a, BlochVector b) {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend BlochVector operator*(double s, BlochVector v) {
        return {s * v.x, s * v.y, s * v.z};
    }
    friend BlochVector operator*(BlochVector v, double s) { return s * v; }
    friend BlochVector operator/(BlochVector v, double s) {
        return {v.x / s, v.y / s, v.z / s};
    }
    friend BlochVector operator-(BlochVector v) { return {-v.x, -v.y, -v.z}; }
};

inline double dot(BlochVector a, BlochVector b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline BlochVector cross(BlochVector a, BlochVector b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z,
            a.x * b.y - a.y * b.x};
}

inline double norm(BlochVector v) { return std::sqrt(dot(v, v)); }

inline bool is_unit(BlochVector v, double tol = kUnitNormTol) {
    return std::abs(norm(v) - 1.0) <= tol;
}

// A state vector may lie anywhere in the closed Bloch ball.
inline bool is_state(BlochVector v, double tol = kUnitNormTol) {
    return norm(v) <= 1.0 + tol;
}

inline BlochVector normalized(BlochVector v) {
    const double n = norm(v);
    if (n == 0.0) throw InvalidDirectionError("cannot normalize a zero vector");
    return v / n;
}

inline BlochVector x_axis() { return {1.0, 0.0, 0.0}; }
inline BlochVector y_axis() { return {0.0, 1.0, 0.0}; }
inline BlochVector z_axis() { return {0.0, 0.0, 1.0}; }

inline void require_unit(BlochVector v, const char* name) {
    if (!is_unit(v)) {
        throw InvalidDirectionError(std::string(name) +
                                    " must be a unit direction");
    }
}

inline void require_pure(BlochVector v, const char* name) {
    if (!is_unit(v)) {
        throw InvalidStateError(std::string(name) +
                                " must be a pure state (unit norm)");
    }
}

// Angle between two unit directions, in [0, pi]. For measurement axes a and
// b this is 2*theta; the angle between the corresponding qubit states is
// half of it.
inline double angle_between(BlochVector a, BlochVector b) {
    require_unit(a, "a");
    require_unit(b, "b");
    const double c = std::clamp(dot(a, b), -1.0, 1.0);
    return std::acos(c);
}

struct BornProbabilities {
    double p_plus;
    double p_minus;
};

// Outcome probabilities for a projective measurement along `axis` on the
// state with Bloch vector `state`: p_pm = (1 pm axis.state)/2. The two
// probabilities sum to 1 exactly.
inline BornProbabilities born_probabilities(BlochVector state,
                                            BlochVector axis) {
    require_unit(axis, "axis");
    if (!is_state(state)) {
        throw InvalidStateError("state must lie in the Bloch ball");
    }
    const double d = std::clamp(dot(axis, state), -1.0, 1.0);
    const double p_plus = std::clamp((1.0 + d) / 2.0, 0.0, 1.0);
    return {p_plus, 1.0 - p_plus};
}

// Overlap probability |<psi1|psi2>|^2 between two pure states.
inline double fidelity(BlochVector r1, BlochVector r2) {
    require_pure(r1, "r1");
    require_pure(r2, "r2");
    return std::clamp((1.0 + dot(r1, r2)) / 2.0, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// 2x2 complex matrices (the cross-check route)
// ---------------------------------------------------------------------------

struct Matrix2c {
    // Row-major entries.
    complexd m00, m01, m10, m11;

    friend Matrix2c operator+(const Matrix2c& a, const Matrix2c& b) {
        return {a.m00 + b.m00, a.m01 + b.m01, a.m10 + b.m10, a.m11 + b.m11};
    }
    friend Matrix2c operator-(const Matrix2c& a, const Matrix2c& b) {
        return {a.m00 - b.m00, a.m01 - b.m01, a.m10 - b.m10, a.m11 - b.m11};
    }
    friend Matrix2c operator*(complexd s, const Matrix2c& a) {
        return {s * a.m00, s * a.m01, s * a.m10, s * a.m11};
    }
    friend Matrix2c operator*(double s, const Matrix2c& a) {
        return complexd(s, 0.0) * a;
    }
    friend Matrix2c operator*(const Matrix2c& a, const Matrix2c& b) {
        return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
                a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
    }
};

inline Matrix2c identity2() { return {1.0, 0.0, 0.0, 1.0}; }

inline Matrix2c pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
inline Matrix2c pauli_y() {
    return {0.0, complexd(0.0, -1.0), complexd(0.0, 1.0), 0.0};
}
inline Matrix2c pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }

// v . sigma
inline Matrix2c pauli_dot(BlochVector v) {
    return {complexd(v.z, 0.0), complexd(v.x, -v.y), complexd(v.x, v.y),
            complexd(-v.z, 0.0)};
}

inline complexd trace(const Matrix2c& m) { return m.m00 + m.m11; }

inline Matrix2c adjoint(const Matrix2c& m) {
    return {std::conj(m.m00), std::conj(m.m10), std::conj(m.m01),
            std::conj(m.m11)};
}

inline double max_abs_diff(const Matrix2c& a, const Matrix2c& b) {
    return std::max({std::abs(a.m00 - b.m00), std::abs(a.m01 - b.m01),
                     std::abs(a.m10 - b.m10), std::abs(a.m11 - b.m11)});
}

inline bool is_hermitian(const Matrix2c& m, double tol = kOracleTol) {
    return max_abs_diff(m, adjoint(m)) <= tol;
}

// Eigenvalues of a Hermitian 2x2 matrix, ascending.
inline std::array<double, 2> hermitian_eigenvalues(const Matrix2c& m) {
    const double h = (m.m00.real() + m.m11.real()) / 2.0;
    const double dzz = (m.m00.real() - m.m11.real()) / 2.0;
    const double r = std::sqrt(dzz * dzz + std::norm(m.m01));
    return {h - r, h + r};
}

// Normalized eigenvector of a Hermitian 2x2 matrix for the given eigenvalue.
// Picks the better-conditioned of the two analytic constructions.
inline std::array<complexd, 2> hermitian_eigenvector(const Matrix2c& m,
                                                     double lambda) {
    const std::array<complexd, 2> u = {m.m01, lambda - m.m00};
    const std::array<complexd, 2> v = {lambda - m.m11, m.m10};
    const double nu = std::sqrt(std::norm(u[0]) + std::norm(u[1]));
    const double nv = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    if (nu == 0.0 && nv == 0.0) return {1.0, 0.0};  // multiple of identity
    if (nu >= nv) return {u[0] / nu, u[1] / nu};
    return {v[0] / nv, v[1] / nv};
}

// ---------------------------------------------------------------------------
// Density matrices
// ---------------------------------------------------------------------------

struct DensityMatrix {
    Matrix2c m;

    bool is_valid(double tol = kOracleTol) const {
        if (!is_hermitian(m, tol)) return false;
        if (std::abs(trace(m) - 1.0) > tol) return false;
        return hermitian_eigenvalues(m)[0] >= -tol;
    }
};

// rho = (1 + r.sigma)/2
inline DensityMatrix to_density_matrix(BlochVector r) {
    if (!is_state(r)) {
        throw InvalidStateError("Bloch vector norm exceeds 1");
    }
    return {0.5 * (identity2() + pauli_dot(r))};
}

// Eigenvector of rho for its largest eigenvalue; for a pure state this is
// the state vector |psi> itself.
inline std::array<complexd, 2> principal_eigenvector(const DensityMatrix& rho) {
    return hermitian_eigenvector(rho.m, hermitian_eigenvalues(rho.m)[1]);
}

}  // namespace jointmeas
