// skdecomp.hpp
// Convex quasi-extreme decomposition of the depolarizing channel,
// E = p E_a + (1 - p) E_b, with each quasi-extreme channel realized by a
// system qubit, one ancilla, two CNOTs and two ancilla rotations:
//
//   system : --U'----*-------X----U--
//                    |       |
//   ancilla: |0>-Ry(2g1)-X--Ry(2g2)-*--[measure]
//
// Kraus operators are read off by projecting the ancilla, giving
//   M0 = U diag(cos(g1+g2), sin(g1-g2)) U'
//   M1 = U antidiag(cos(g1-g2), sin(g1+g2)) U'.

#pragma once

#include "sodepol/channel.hpp"
#include "sodepol/error.hpp"
#include "sodepol/linalg.hpp"
#include "sodepol/optics.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

namespace sodepol {

enum class QuasiExtremeLabel { Ea, Eb };

constexpr std::string_view quasi_extreme_name(QuasiExtremeLabel l) {
    return l == QuasiExtremeLabel::Ea ? "E_a" : "E_b";
}

struct QuasiExtremeParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    /// Applied after the circuit; nullopt is the identity ("none").
    std::optional<Mat2> u;
    /// Applied before the circuit.
    std::optional<Mat2> u_prime;
    QuasiExtremeLabel label = QuasiExtremeLabel::Ea;
};

// ---------------------------------------------------------------------------
// Two-qubit gates on system (x) ancilla, index = 2 * system + ancilla.

namespace detail {

inline Mat2 ry(double angle) {
    Mat2 r;
    r << std::cos(angle / 2.0), -std::sin(angle / 2.0),
         std::sin(angle / 2.0), std::cos(angle / 2.0);
    return r;
}

inline Mat4 cnot_system_controls() {
    Mat4 g = Mat4::Zero();
    g(0, 0) = g(1, 1) = 1.0;
    g(2, 3) = g(3, 2) = 1.0;
    return g;
}

inline Mat4 cnot_ancilla_controls() {
    Mat4 g = Mat4::Zero();
    g(0, 0) = g(2, 2) = 1.0;
    g(1, 3) = g(3, 1) = 1.0;
    return g;
}

inline Mat2 unitary_or_identity(const std::optional<Mat2>& u) {
    if (!u) return identity2();
    if (!u->allFinite() || !is_unitary(*u))
        throw Error(Errc::NonUnitaryU, "U and U' must be unitary");
    return *u;
}

}  // namespace detail

/// Kraus pair of one quasi-extreme channel, by simulating the circuit.
inline KrausChannel quasi_extreme_kraus(const QuasiExtremeParams& params) {
    const Mat2 u = detail::unitary_or_identity(params.u);
    const Mat2 u_prime = detail::unitary_or_identity(params.u_prime);

    const Mat4 circuit = kron(u, identity2()) *
                         detail::cnot_ancilla_controls() *
                         kron(identity2(), detail::ry(2.0 * params.gamma2)) *
                         detail::cnot_system_controls() *
                         kron(identity2(), detail::ry(2.0 * params.gamma1)) *
                         kron(u_prime, identity2());

    // <i, outcome| C |j, 0>
    std::vector<Mat2> ops;
    for (int outcome = 0; outcome < 2; ++outcome) {
        Mat2 k;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) k(i, j) = circuit(2 * i + outcome, 2 * j);
        ops.push_back(k);
    }
    return KrausChannel(std::move(ops), std::string(quasi_extreme_name(params.label)));
}

// ---------------------------------------------------------------------------

enum class Consistency { Verified, Anomalous };

struct SKRow {
    /// First column of the parameter table (a lambda' value).
    double lambda_label = 0.0;
    QuasiExtremeParams e1;
    QuasiExtremeParams e2;
    /// Weight used for assembly.
    double p = 1.0;
    /// Two-decimal weight, when it differs from p by rounding.
    double p_printed = 1.0;
    Consistency consistency = Consistency::Anomalous;
    /// Choi distance from the assembled channel to pauli_kraus(lambda_label).
    double distance = 0.0;
};

inline KrausChannel assemble_channel(const SKRow& row) {
    if (!(row.p >= 0.0 && row.p <= 1.0))
        throw Error(Errc::WeightOutOfRange, "convex weight must lie in [0, 1]");
    const double wa = std::sqrt(row.p);
    const double wb = std::sqrt(1.0 - row.p);
    std::vector<Mat2> ops;
    const KrausChannel ea = quasi_extreme_kraus(row.e1);
    const KrausChannel eb = quasi_extreme_kraus(row.e2);
    for (const auto& m : ea.operators()) ops.push_back(wa * m);
    for (const auto& m : eb.operators()) ops.push_back(wb * m);
    return KrausChannel(std::move(ops), "sk-assembled");
}

/// Fills `consistency` / `distance` against pauli_kraus(lambda_label).
inline SKRow with_consistency(SKRow row) {
    row.distance = channel_distance(assemble_channel(row), pauli_kraus(row.lambda_label));
    row.consistency = row.distance <= kChannelTol ? Consistency::Verified : Consistency::Anomalous;
    return row;
}

/// E_b is the same in every row: alpha = beta = pi/4, 2g1 = pi/2, 2g2 = 0, U = U_DP.
inline QuasiExtremeParams depolarizing_eb() {
    return {kPi / 4.0, kPi / 4.0, kPi / 4.0, 0.0, u_dp().matrix(), std::nullopt, QuasiExtremeLabel::Eb};
}

/// E_a with 2g1 = pi/2 and 2g2 = 2 alpha - pi/2, no U or U'.
inline QuasiExtremeParams depolarizing_ea(double alpha, double two_gamma2) {
    return {alpha, alpha, kPi / 4.0, two_gamma2 / 2.0, std::nullopt, std::nullopt, QuasiExtremeLabel::Ea};
}

/// Closed-form parameters reproducing pauli_kraus(lambda') for lambda' in [0, 1]:
/// p = 1 - 2 lambda'/3, sin^2 alpha = lambda' / (3 p), gamma2 = alpha - pi/4.
inline SKRow solve_depolarizing_params(double lambda_kraus) {
    if (!(lambda_kraus >= 0.0 && lambda_kraus <= 1.0))
        throw Error(Errc::ParamOutOfRange, "lambda' must lie in [0, 1]");
    const double p = 1.0 - 2.0 * lambda_kraus / 3.0;
    const double alpha = std::asin(std::sqrt(std::clamp(lambda_kraus / (3.0 * p), 0.0, 1.0)));
    SKRow row;
    row.lambda_label = lambda_kraus;
    row.e1 = depolarizing_ea(alpha, 2.0 * alpha - kPi / 2.0);
    row.e2 = depolarizing_eb();
    row.p = p;
    row.p_printed = p;
    return with_consistency(row);
}

/// Five reference parameter rows with their two-decimal weights. The
/// rounded weights 0.66 and 0.33 are read as 2/3 and 1/3.
inline std::vector<SKRow> reference_rows() {
    struct Printed {
        double lambda, alpha, two_gamma2, p, p_printed;
    };
    constexpr double pi = kPi;
    const Printed printed[] = {
        {0.0, 0.0, -pi / 2.0, 1.0, 1.0},
        {0.31, pi / 3.0, pi / 6.0, 0.76, 0.76},
        {0.5, pi / 6.0, -pi / 6.0, 2.0 / 3.0, 0.66},
        {0.75, pi / 4.0, 0.0, 0.5, 0.5},
        {1.0, pi / 2.0, pi / 2.0, 1.0 / 3.0, 0.33},
    };
    std::vector<SKRow> rows;
    for (const auto& r : printed) {
        SKRow row;
        row.lambda_label = r.lambda;
        row.e1 = depolarizing_ea(r.alpha, r.two_gamma2);
        row.e2 = depolarizing_eb();
        row.p = r.p;
        row.p_printed = r.p_printed;
        rows.push_back(with_consistency(row));
    }
    return rows;
}

}  // namespace sodepol
