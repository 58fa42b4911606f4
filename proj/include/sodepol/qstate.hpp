// qstate.hpp
// Polarization-qubit density operators, spin-orbit pure states, and the
// state metrics used throughout: Bloch vectors, partial trace over the
// transverse mode, fidelity, trace distance, spin-orbit concurrence, and
// the l1-norm and maximal coherence measures.
//
// Bloch convention (shared by every module):
//   rho = (I + r.sigma) / 2 with |H> = |0>, so r_z = rho_HH - rho_VV,
//   r_x = 2 Re rho_VH, r_y = 2 Im rho_VH.

#pragma once

#include "sodepol/error.hpp"
#include "sodepol/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace sodepol {

// ---------------------------------------------------------------------------
// Polarization basis kets.

inline Vec2 ket_h() { return Vec2(1.0, 0.0); }
inline Vec2 ket_v() { return Vec2(0.0, 1.0); }
inline Vec2 ket_plus() { return Vec2(1.0, 1.0) / std::sqrt(2.0); }
inline Vec2 ket_minus() { return Vec2(1.0, -1.0) / std::sqrt(2.0); }
/// Left circular, (|H> + i|V>)/sqrt(2).
inline Vec2 ket_l() { return Vec2(1.0, kI) / std::sqrt(2.0); }
inline Vec2 ket_r() { return Vec2(1.0, -kI) / std::sqrt(2.0); }

// ---------------------------------------------------------------------------

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }

    /// Validated construction: |r| <= 1 within the structural tolerance.
    static BlochVector make(double x, double y, double z) {
        BlochVector r{x, y, z};
        if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z) ||
            r.norm() > 1.0 + kStructTol)
            throw Error(Errc::InvalidState, "Bloch vector outside the unit ball");
        return r;
    }

    BlochVector scaled(double f) const { return {f * x, f * y, f * z}; }
};

class PolDensityMatrix;

/// Result of projecting a nearly-physical matrix onto the state space.
struct PhysicalProjection;

class PolDensityMatrix {
public:
    /// Strict construction: Hermitian, unit trace, PSD, all within 1e-12.
    static PolDensityMatrix from_matrix(const Mat2& m) {
        if (!m.allFinite()) throw Error(Errc::InvalidState, "non-finite density matrix");
        if (hermiticity_error(m) > kStructTol)
            throw Error(Errc::InvalidState, "density matrix is not Hermitian");
        const Complex tr = m.trace();
        if (std::abs(tr - 1.0) > kStructTol)
            throw Error(Errc::InvalidState, "density matrix trace differs from 1");
        const Mat2 h = 0.5 * (m + m.adjoint());
        if (hermitian_eigenvalues(h)(0) < -kStructTol)
            throw Error(Errc::InvalidState, "density matrix has a negative eigenvalue");
        return PolDensityMatrix(h);
    }

    /// Projects `m` onto the nearest PSD unit-trace matrix when it misses
    /// positivity by at most `max_violation`; larger violations are errors.
    static PhysicalProjection nearest_physical(const Mat2& m, double max_violation = kInputTol);

    static PolDensityMatrix maximally_mixed() { return PolDensityMatrix(0.5 * Mat2::Identity()); }

    const Mat2& matrix() const { return m_; }
    Complex operator()(int row, int col) const { return m_(row, col); }

    double purity() const { return (m_ * m_).trace().real(); }

private:
    explicit PolDensityMatrix(const Mat2& m) : m_(m) {}

    Mat2 m_;
};

struct PhysicalProjection {
    PolDensityMatrix state;
    bool clipped = false;
    /// Most negative eigenvalue seen before clamping (0 if none).
    double violation = 0.0;
};

inline PhysicalProjection PolDensityMatrix::nearest_physical(const Mat2& m, double max_violation) {
    if (!m.allFinite()) throw Error(Errc::InvalidState, "non-finite density matrix");
    if (hermiticity_error(m) > max_violation)
        throw Error(Errc::InvalidState, "matrix too far from Hermitian to project");
    Mat2 h = 0.5 * (m + m.adjoint());
    const double tr = h.trace().real();
    if (std::abs(tr - 1.0) > max_violation)
        throw Error(Errc::InvalidState, "matrix trace too far from 1 to project");
    h /= tr;

    Eigen::SelfAdjointEigenSolver<Mat2> solver(h);
    const auto& evals = solver.eigenvalues();
    if (evals(0) >= -kStructTol) return {PolDensityMatrix(h), false, 0.0};
    if (evals(0) < -max_violation)
        throw Error(Errc::InvalidState, "negative eigenvalue beyond the clipping tolerance");

    Eigen::Vector2d clamped = evals.cwiseMax(0.0);
    clamped /= clamped.sum();
    const Mat2& vecs = solver.eigenvectors();
    Mat2 projected = vecs * clamped.cast<Complex>().asDiagonal() * vecs.adjoint();
    projected = 0.5 * (projected + projected.adjoint());
    return {PolDensityMatrix(projected), true, evals(0)};
}

// ---------------------------------------------------------------------------
// Spin-orbit modes: {H,V} x {G,h,v}, serialized as (HG, Hh, Hv, VG, Vh, Vv).

enum class Pol { H = 0, V = 1 };
enum class Mode { G = 0, h = 1, v = 2 };

constexpr int so_index(Pol p, Mode m) { return 3 * static_cast<int>(p) + static_cast<int>(m); }

inline Vec3 mode_ket(Mode m) {
    Vec3 k = Vec3::Zero();
    k(static_cast<int>(m)) = 1.0;
    return k;
}

class SpinOrbitState {
public:
    /// Wraps an arbitrary amplitude vector; the normalization flag is derived.
    static SpinOrbitState from_amplitudes(const Vec6& amps) {
        if (!amps.allFinite()) throw Error(Errc::InvalidState, "non-finite amplitudes");
        return SpinOrbitState(amps);
    }

    /// Product mode |pol> (x) |mode>.
    static SpinOrbitState product(const Vec2& pol, const Vec3& mode) {
        return from_amplitudes(kron(pol, mode));
    }

    static SpinOrbitState basis(Pol p, Mode m) {
        Vec6 a = Vec6::Zero();
        a(so_index(p, m)) = 1.0;
        return SpinOrbitState(a);
    }

    const Vec6& amplitudes() const { return a_; }
    Complex amp(Pol p, Mode m) const { return a_(so_index(p, m)); }
    double norm() const { return a_.norm(); }
    bool normalized() const { return std::abs(a_.squaredNorm() - 1.0) <= kStructTol; }

private:
    explicit SpinOrbitState(const Vec6& a) : a_(a) {}

    Vec6 a_;
};

struct CoherenceReport {
    double c_l1 = 0.0;
    double c_max = 0.0;
    std::string basis = "HV";
};

// ---------------------------------------------------------------------------
// Operations.

/// rho = |psi><psi|. Inputs within 1e-9 of unit norm are renormalized.
inline PolDensityMatrix density_from_pure(const Vec2& psi) {
    const double n = psi.norm();
    if (n < kInputTol) throw Error(Errc::ZeroVector, "cannot form a state from a zero vector");
    if (std::abs(n - 1.0) > kInputTol)
        throw Error(Errc::NotNormalized, "pure state norm differs from 1");
    const Vec2 u = psi / n;
    return PolDensityMatrix::from_matrix(u * u.adjoint());
}

inline BlochVector bloch_from_density(const PolDensityMatrix& rho) {
    const Complex vh = rho(1, 0);
    return {2.0 * vh.real(), 2.0 * vh.imag(), (rho(0, 0) - rho(1, 1)).real()};
}

inline PolDensityMatrix density_from_bloch(const BlochVector& r) {
    if (!(r.norm() <= 1.0 + kStructTol))
        throw Error(Errc::InvalidState, "Bloch vector outside the unit ball");
    Mat2 m;
    m << 0.5 * (1.0 + r.z), 0.5 * Complex(r.x, -r.y),
         0.5 * Complex(r.x, r.y), 0.5 * (1.0 - r.z);
    // The ball boundary is allowed to overshoot by rounding; clamp it back.
    return PolDensityMatrix::nearest_physical(m, kInputTol).state;
}

/// Reduced polarization state, tracing out {G, h, v}.
inline PolDensityMatrix partial_trace_mode(const SpinOrbitState& state) {
    const double n2 = state.amplitudes().squaredNorm();
    if (std::abs(std::sqrt(n2) - 1.0) > kInputTol)
        throw Error(Errc::NotNormalized, "spin-orbit state is not normalized");
    Mat2 rho = Mat2::Zero();
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q)
            for (int m = 0; m < 3; ++m)
                rho(p, q) += state.amplitudes()(3 * p + m) * std::conj(state.amplitudes()(3 * q + m));
    return PolDensityMatrix::from_matrix(rho / n2);
}

/// Squared Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, in its
/// qubit form Tr(rho sigma) + 2 sqrt(det rho det sigma). Going through the
/// matrix square root loses ~1e-8 on rank-deficient inputs; this does not.
inline double fidelity(const PolDensityMatrix& rho, const PolDensityMatrix& sigma) {
    const double overlap = (rho.matrix() * sigma.matrix()).trace().real();
    const double d = std::max(0.0, rho.matrix().determinant().real()) *
                     std::max(0.0, sigma.matrix().determinant().real());
    return std::clamp(overlap + 2.0 * std::sqrt(d), 0.0, 1.0);
}

/// Half the trace norm of rho - sigma.
inline double trace_distance(const PolDensityMatrix& rho, const PolDensityMatrix& sigma) {
    const auto ev = hermitian_eigenvalues(Mat2(rho.matrix() - sigma.matrix()));
    return std::min(0.5 * (std::abs(ev(0)) + std::abs(ev(1))), 1.0);
}

/// C = 2|A_Hh A_Vv - A_Hv A_Vh| for a normalized first-order spin-orbit mode.
inline double concurrence_spin_orbit(const SpinOrbitState& state) {
    const double n2 = state.amplitudes().squaredNorm();
    if (std::abs(std::sqrt(n2) - 1.0) > kInputTol)
        throw Error(Errc::NotNormalized, "spin-orbit state is not normalized");
    if (std::abs(state.amp(Pol::H, Mode::G)) > kStructTol ||
        std::abs(state.amp(Pol::V, Mode::G)) > kStructTol)
        throw Error(Errc::GaussianComponentPresent, "concurrence needs a first-order-only mode");
    const Complex det = state.amp(Pol::H, Mode::h) * state.amp(Pol::V, Mode::v) -
                        state.amp(Pol::H, Mode::v) * state.amp(Pol::V, Mode::h);
    return std::min(2.0 * std::abs(det) / n2, 1.0);
}

/// l1-norm coherence in the {H, V} basis: sum of off-diagonal moduli.
inline double coherence_l1(const PolDensityMatrix& rho) {
    return std::abs(rho(0, 1)) + std::abs(rho(1, 0));
}

/// Maximal coherence over local unitaries; for one qubit this is |r|.
inline double coherence_max(const PolDensityMatrix& rho) {
    return bloch_from_density(rho).norm();
}

inline CoherenceReport coherence_report(const PolDensityMatrix& rho) {
    return {coherence_l1(rho), coherence_max(rho), "HV"};
}

}  // namespace sodepol
