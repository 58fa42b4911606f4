// linalg.hpp
// Fixed-size complex matrix aliases and the handful of dense helpers the
// simulator needs (Pauli matrices, Kronecker product, unitarity checks).

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>

namespace sodepol {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix<Complex, 2, 2>;
using Mat4 = Eigen::Matrix<Complex, 4, 4>;
using Mat6 = Eigen::Matrix<Complex, 6, 6>;
using Vec2 = Eigen::Matrix<Complex, 2, 1>;
using Vec3 = Eigen::Matrix<Complex, 3, 1>;
using Vec4 = Eigen::Matrix<Complex, 4, 1>;
using Vec6 = Eigen::Matrix<Complex, 6, 1>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// Structural invariants (hermiticity, trace, completeness of closed forms).
inline constexpr double kStructTol = 1e-12;
/// Normalization slack accepted on user-supplied vectors and amplitudes.
inline constexpr double kInputTol = 1e-9;
/// Kraus completeness and Choi checks.
inline constexpr double kChannelTol = 1e-10;

inline Mat2 identity2() { return Mat2::Identity(); }

inline Mat2 sigma_x() {
    Mat2 m;
    m << 0.0, 1.0,
         1.0, 0.0;
    return m;
}

inline Mat2 sigma_y() {
    Mat2 m;
    m << 0.0, -kI,
         kI, 0.0;
    return m;
}

inline Mat2 sigma_z() {
    Mat2 m;
    m << 1.0, 0.0,
         0.0, -1.0;
    return m;
}

template <typename A, typename B>
auto kron(const A& a, const B& b) {
    constexpr int rows = int(A::RowsAtCompileTime) * int(B::RowsAtCompileTime);
    constexpr int cols = int(A::ColsAtCompileTime) * int(B::ColsAtCompileTime);
    Eigen::Matrix<Complex, rows, cols> out;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Largest entrywise modulus of `m`.
template <typename M>
double max_abs(const M& m) {
    return m.cwiseAbs().maxCoeff();
}

template <typename M>
double unitarity_error(const M& m) {
    return max_abs(m.adjoint() * m - M::Identity(m.rows(), m.cols()));
}

template <typename M>
bool is_unitary(const M& m, double tol = kStructTol) {
    return unitarity_error(m) <= tol;
}

template <typename M>
double hermiticity_error(const M& m) {
    return max_abs(m - m.adjoint());
}

/// Eigenvalues of a Hermitian matrix in ascending order (input is symmetrized first).
template <typename M>
auto hermitian_eigenvalues(const M& m) {
    const M h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<M> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().eval();
}

}  // namespace sodepol
