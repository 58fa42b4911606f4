// optics.hpp
// Jones-calculus elements for polarization (2x2) and spin-orbit (6x6)
// operators, and the compact depolarizing circuit:
//
//   |V G> --HWP(theta)--PBS--+--transmitted--S-plate--PZT(phi)--+
//                            |                                  BS--> psi6
//                            +--reflected--QWP-HWP-QWP----------+
//
// Conventions: HWP(t) = [[cos 2t, sin 2t], [sin 2t, -cos 2t]],
// QWP(t) = R(t) diag(1, i) R(-t). Global phases are kept as computed.

#pragma once

#include "sodepol/channel.hpp"
#include "sodepol/error.hpp"
#include "sodepol/linalg.hpp"
#include "sodepol/qstate.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace sodepol {

enum class ElementKind {
    HalfWavePlate,
    QuarterWavePlate,
    PbsPort,
    BsPort,
    SPlate,
    PhaseShift,
    DovePair,
    Custom,
};

struct ElementTag {
    ElementKind kind = ElementKind::Custom;
    /// Angle or phase in radians where the element has one.
    double parameter = 0.0;
};

/// An optical element acting on an N-dimensional mode space (N = 2 or 6).
template <int N>
class JonesOperator {
public:
    using Matrix = Eigen::Matrix<Complex, N, N>;
    using Vector = Eigen::Matrix<Complex, N, 1>;

    JonesOperator(const Matrix& m, ElementTag tag) : m_(m), tag_(tag) {}

    const Matrix& matrix() const { return m_; }
    const ElementTag& tag() const { return tag_; }
    bool unitary(double tol = kStructTol) const { return is_unitary(m_, tol); }

    Vector apply(const Vector& v) const { return m_ * v; }

    /// Composition: (a * b) applies b first.
    friend JonesOperator operator*(const JonesOperator& a, const JonesOperator& b) {
        return JonesOperator(a.m_ * b.m_, {ElementKind::Custom, 0.0});
    }

private:
    Matrix m_;
    ElementTag tag_;
};

using PolOperator = JonesOperator<2>;
using ModeOperator = JonesOperator<6>;

inline Mat2 rotation(double theta) {
    Mat2 r;
    r << std::cos(theta), -std::sin(theta),
         std::sin(theta), std::cos(theta);
    return r;
}

inline PolOperator hwp(double theta) {
    const double c = std::cos(2.0 * theta);
    const double s = std::sin(2.0 * theta);
    Mat2 m;
    m << c, s,
         s, -c;
    return {m, {ElementKind::HalfWavePlate, theta}};
}

inline PolOperator qwp(double theta) {
    Mat2 d = Mat2::Zero();
    d(0, 0) = 1.0;
    d(1, 1) = kI;
    return {rotation(theta) * d * rotation(-theta), {ElementKind::QuarterWavePlate, theta}};
}

/// QWP(0) HWP(pi/2) QWP(-pi/2); evaluates to -i sigma_z.
inline PolOperator u_dp() {
    return qwp(0.0) * hwp(kPi / 2.0) * qwp(-kPi / 2.0);
}

/// Relative path phase exp(i phi).
inline PolOperator phase_shift(double phi) {
    return {std::polar(1.0, phi) * identity2(), {ElementKind::PhaseShift, phi}};
}

inline PolOperator pbs_transmit() {
    return {ket_h() * ket_h().adjoint(), {ElementKind::PbsPort, 0.0}};
}

inline PolOperator pbs_reflect() {
    return {ket_v() * ket_v().adjoint(), {ElementKind::PbsPort, 1.0}};
}

/// The two output ports of a lossless 50:50 beam splitter for one input.
inline std::array<PolOperator, 2> bs_ports() {
    const Mat2 t = identity2() / std::sqrt(2.0);
    const Mat2 r = kI * identity2() / std::sqrt(2.0);
    return {PolOperator(t, {ElementKind::BsPort, 0.0}), PolOperator(r, {ElementKind::BsPort, 1.0})};
}

/// Polarization operator lifted to the spin-orbit space, P (x) I_3.
inline ModeOperator lift(const PolOperator& op) {
    return {kron(op.matrix(), Eigen::Matrix<Complex, 3, 3>::Identity().eval()), op.tag()};
}

/// Image rotation by gamma from a Dove-prism pair (second prism at gamma/2),
/// acting on the first-order modes {h, v} and leaving G alone.
inline ModeOperator dove_pair(double gamma) {
    Eigen::Matrix<Complex, 3, 3> r = Eigen::Matrix<Complex, 3, 3>::Identity();
    r.block<2, 2>(1, 1) = rotation(gamma);
    return {kron(identity2(), r), {ElementKind::DovePair, gamma}};
}

/// S-plate: |H G> -> (|Hh> - |Vv>)/sqrt(2). Only that column is physical
/// contract; |V G> is sent to (|Hv> + |Vh>)/sqrt(2) and the remaining four
/// columns are a Gram-Schmidt completion to a unitary.
inline ModeOperator s_plate() {
    const double s = 1.0 / std::sqrt(2.0);
    Mat6 m = Mat6::Zero();
    m(so_index(Pol::H, Mode::h), so_index(Pol::H, Mode::G)) = s;
    m(so_index(Pol::V, Mode::v), so_index(Pol::H, Mode::G)) = -s;
    m(so_index(Pol::H, Mode::v), so_index(Pol::V, Mode::G)) = s;
    m(so_index(Pol::V, Mode::h), so_index(Pol::V, Mode::G)) = s;

    std::vector<Vec6> accepted{m.col(so_index(Pol::H, Mode::G)), m.col(so_index(Pol::V, Mode::G))};
    for (int col = 0; col < 6; ++col) {
        if (col == so_index(Pol::H, Mode::G) || col == so_index(Pol::V, Mode::G)) continue;
        // Try the column's own basis ray first, then the others in order.
        for (int k = 0; k < 6; ++k) {
            Vec6 v = Vec6::Zero();
            v((col + k) % 6) = 1.0;
            for (const auto& a : accepted) v -= a.dot(v) * a;
            if (v.norm() > 0.5) {
                v.normalize();
                m.col(col) = v;
                accepted.push_back(v);
                break;
            }
        }
    }
    return {m, {ElementKind::SPlate, 0.0}};
}

// ---------------------------------------------------------------------------
// Compact circuit.

struct CompactCircuitConfig {
    double theta = 0.0;
    Complex alpha{0.0, 0.0};
    Complex beta{1.0, 0.0};
    double phi = 0.0;

    void validate() const {
        if (!std::isfinite(theta) || !std::isfinite(phi) || !std::isfinite(alpha.real()) ||
            !std::isfinite(alpha.imag()) || !std::isfinite(beta.real()) || !std::isfinite(beta.imag()))
            throw Error(Errc::InvalidConfig, "non-finite circuit parameter");
        if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > kInputTol)
            throw Error(Errc::InvalidConfig, "|alpha|^2 + |beta|^2 must equal 1");
    }
};

/// Unitary W with W|V> = alpha|H> + beta|V>.
inline PolOperator preparation_operator(Complex alpha, Complex beta) {
    Mat2 w;
    w << std::conj(beta), alpha,
         -std::conj(alpha), beta;
    return {w, {ElementKind::Custom, 0.0}};
}

struct PlateAngles {
    double qwp_in = 0.0;
    double hwp = 0.0;
    double qwp_out = 0.0;
};

/// QWP(qwp_out) HWP(hwp) QWP(qwp_in) for the preparation arm.
inline PolOperator preparation_plates(const PlateAngles& a) {
    return qwp(a.qwp_out) * hwp(a.hwp) * qwp(a.qwp_in);
}

/// Plate angles taking |V> to alpha|H> + beta|V> up to a global phase.
/// The HWP sets a linear polarization at azimuth + ellipticity angle and the
/// last QWP, aligned with the azimuth, opens it into the target ellipse.
inline PlateAngles preparation_plate_angles(Complex alpha, Complex beta) {
    const double n = std::sqrt(std::norm(alpha) + std::norm(beta));
    if (n < kInputTol) throw Error(Errc::ZeroVector, "zero preparation amplitudes");
    alpha /= n;
    beta /= n;
    const Complex vh = beta * std::conj(alpha);
    const double rx = 2.0 * vh.real();
    const double ry = 2.0 * vh.imag();
    const double rz = std::norm(alpha) - std::norm(beta);
    const double chi = 0.5 * std::asin(std::clamp(ry, -1.0, 1.0));
    const double psi = 0.5 * std::atan2(rx, rz);
    return {0.0, 0.5 * (psi + chi + kPi / 2.0), psi};
}

enum class Branch { Input, Transmitted, Reflected, Recombined };

constexpr std::string_view branch_name(Branch b) {
    switch (b) {
        case Branch::Input: return "input";
        case Branch::Transmitted: return "transmitted";
        case Branch::Reflected: return "reflected";
        case Branch::Recombined: return "recombined";
    }
    return "unknown";
}

struct CircuitSnapshot {
    std::string label;
    Branch branch;
    /// Scalar weight of this branch before normalization (e.g. sin 2theta).
    Complex branch_amplitude;
    SpinOrbitState state;
};

class CircuitTrace {
public:
    explicit CircuitTrace(std::vector<CircuitSnapshot> snaps) : snaps_(std::move(snaps)) {}

    const std::vector<CircuitSnapshot>& snapshots() const { return snaps_; }

    const CircuitSnapshot& at(std::string_view label) const {
        for (const auto& s : snaps_)
            if (s.label == label) return s;
        throw Error(Errc::InvalidState, "no snapshot labelled " + std::string(label));
    }

    const SpinOrbitState& output() const { return snaps_.back().state; }

private:
    std::vector<CircuitSnapshot> snaps_;
};

inline CircuitTrace run_compact_circuit(const CompactCircuitConfig& cfg) {
    cfg.validate();
    const double c2 = std::cos(2.0 * cfg.theta);
    const double s2 = std::sin(2.0 * cfg.theta);
    const double n = std::sqrt(std::norm(cfg.alpha) + std::norm(cfg.beta));
    const Complex alpha = cfg.alpha / n;
    const Complex beta = cfg.beta / n;

    const Vec6 psi0 = SpinOrbitState::basis(Pol::V, Mode::G).amplitudes();
    const Vec6 psi1 = lift(hwp(cfg.theta)).apply(psi0);
    const Vec6 psi2 = lift(pbs_transmit()).apply(psi1);
    const Vec6 psi3 = lift(pbs_reflect()).apply(psi1);
    const Vec6 psi4 = lift(preparation_operator(alpha, beta)).apply(psi3);
    const Vec6 psi5 = s_plate().apply(psi2);
    // Effective single BS output port: coherent sum of the two arms, the
    // transmitted one carrying the PZT phase.
    const Vec6 psi6 = psi4 + lift(phase_shift(cfg.phi)).apply(psi5);

    if (std::abs(psi6.norm() - 1.0) > kStructTol)
        throw Error(Errc::InvariantViolation, "compact circuit output is not normalized");

    std::vector<CircuitSnapshot> snaps;
    snaps.push_back({"psi0", Branch::Input, 1.0, SpinOrbitState::from_amplitudes(psi0)});
    snaps.push_back({"psi1", Branch::Input, 1.0, SpinOrbitState::from_amplitudes(psi1)});
    snaps.push_back({"psi2", Branch::Transmitted, s2, SpinOrbitState::from_amplitudes(psi2)});
    snaps.push_back({"psi3", Branch::Reflected, -c2, SpinOrbitState::from_amplitudes(psi3)});
    snaps.push_back({"psi4", Branch::Reflected, -c2, SpinOrbitState::from_amplitudes(psi4)});
    snaps.push_back({"psi5", Branch::Transmitted, s2, SpinOrbitState::from_amplitudes(psi5)});
    snaps.push_back({"psi6", Branch::Recombined, 1.0, SpinOrbitState::from_amplitudes(psi6)});
    return CircuitTrace(std::move(snaps));
}

/// lambda_phys = sin^2(2 theta).
inline DepolarizingParam lambda_from_theta(double theta) {
    const double s = std::sin(2.0 * theta);
    return DepolarizingParam::from_phys(std::clamp(s * s, 0.0, 1.0));
}

/// Principal branch theta in [0, pi/4].
inline double theta_from_lambda(double lambda_phys) {
    if (!(lambda_phys >= 0.0 && lambda_phys <= 1.0))
        throw Error(Errc::ParamOutOfRange, "lambda_phys must lie in [0, 1]");
    return 0.5 * std::asin(std::sqrt(lambda_phys));
}

}  // namespace sodepol
