// channel.hpp
// The single-qubit depolarizing channel as a density map, a Kraus sum and a
// Bloch-ball contraction, plus Kraus/Choi machinery for comparing channels.

#pragma once

#include "sodepol/error.hpp"
#include "sodepol/linalg.hpp"
#include "sodepol/qstate.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace sodepol {

/// Depolarizing strength carried in both conventions:
///   phys  : E(rho) = phys I/2 + (1 - phys) rho,            phys  in [0, 1]
///   kraus : E(rho) = (1 - k) rho + k/3 sum_i s_i rho s_i,  kraus in [0, 3/4]
/// with kraus = 3 phys / 4.
class DepolarizingParam {
public:
    static DepolarizingParam from_phys(double lambda_phys) {
        if (!(lambda_phys >= 0.0 && lambda_phys <= 1.0))
            throw Error(Errc::ParamOutOfRange, "lambda_phys must lie in [0, 1]");
        return DepolarizingParam(lambda_phys, 0.75 * lambda_phys);
    }

    static DepolarizingParam from_kraus(double lambda_kraus) {
        if (!(lambda_kraus >= 0.0 && lambda_kraus <= 0.75))
            throw Error(Errc::ParamOutOfRange, "lambda_kraus must lie in [0, 3/4]");
        return DepolarizingParam(lambda_kraus / 0.75, lambda_kraus);
    }

    double phys() const { return phys_; }
    double kraus() const { return kraus_; }
    /// Bloch-vector scale factor 1 - phys = 1 - 4 kraus / 3.
    double contraction() const { return 1.0 - phys_; }

private:
    DepolarizingParam(double phys, double kraus) : phys_(phys), kraus_(kraus) {}

    double phys_;
    double kraus_;
};

/// An ordered, complete set of 2x2 Kraus operators.
class KrausChannel {
public:
    KrausChannel(std::vector<Mat2> operators, std::string label)
        : ops_(std::move(operators)), label_(std::move(label)) {
        if (ops_.empty()) throw Error(Errc::IncompleteKrausSet, "empty Kraus list");
        for (const auto& k : ops_)
            if (!k.allFinite()) throw Error(Errc::IncompleteKrausSet, "non-finite Kraus operator");
        if (completeness_error() > kChannelTol)
            throw Error(Errc::IncompleteKrausSet, "sum K^dagger K differs from the identity");
    }

    const std::vector<Mat2>& operators() const { return ops_; }
    const std::string& label() const { return label_; }
    std::size_t size() const { return ops_.size(); }

    /// Frobenius norm of sum K^dagger K - I.
    double completeness_error() const {
        Mat2 s = Mat2::Zero();
        for (const auto& k : ops_) s += k.adjoint() * k;
        return (s - Mat2::Identity()).norm();
    }

private:
    std::vector<Mat2> ops_;
    std::string label_;
};

/// Choi state (E (x) id)(|Phi><Phi|), |Phi> = (|00> + |11>)/sqrt(2), output
/// factor first.
class ChoiMatrix {
public:
    explicit ChoiMatrix(const Mat4& m) : m_(m) {
        if (hermiticity_error(m_) > kChannelTol)
            throw Error(Errc::InvariantViolation, "Choi matrix is not Hermitian");
        if (hermitian_eigenvalues(m_)(0) < -kChannelTol)
            throw Error(Errc::InvariantViolation, "Choi matrix is not positive");
        if (max_abs(reference_marginal() - 0.5 * Mat2::Identity()) > kChannelTol)
            throw Error(Errc::InvariantViolation, "Choi matrix is not trace preserving");
    }

    const Mat4& matrix() const { return m_; }

    /// Partial trace over the output factor.
    Mat2 reference_marginal() const {
        Mat2 r = Mat2::Zero();
        for (int j = 0; j < 2; ++j)
            for (int l = 0; l < 2; ++l)
                for (int i = 0; i < 2; ++i) r(j, l) += m_(2 * i + j, 2 * i + l);
        return r;
    }

private:
    Mat4 m_;
};

// ---------------------------------------------------------------------------

inline PolDensityMatrix depolarize_map(const PolDensityMatrix& rho, const DepolarizingParam& p) {
    const double lam = p.phys();
    return PolDensityMatrix::from_matrix(lam * 0.5 * Mat2::Identity() + (1.0 - lam) * rho.matrix());
}

/// K0 = sqrt(1 - k) I, K_i = sqrt(k/3) sigma_i. Defined (and CPTP) for
/// k in [0, 1]; the depolarizing family proper stops at k = 3/4.
inline KrausChannel pauli_kraus(double lambda_kraus) {
    if (!(lambda_kraus >= 0.0 && lambda_kraus <= 1.0))
        throw Error(Errc::ParamOutOfRange, "lambda_kraus must lie in [0, 1]");
    const double a = std::sqrt(1.0 - lambda_kraus);
    const double b = std::sqrt(lambda_kraus / 3.0);
    return KrausChannel({a * identity2(), b * sigma_x(), b * sigma_y(), b * sigma_z()},
                        "depolarizing");
}

inline KrausChannel kraus_depolarizing(const DepolarizingParam& p) { return pauli_kraus(p.kraus()); }

inline KrausChannel identity_channel() { return KrausChannel({identity2()}, "identity"); }

inline PolDensityMatrix apply_kraus(const KrausChannel& channel, const PolDensityMatrix& rho) {
    Mat2 out = Mat2::Zero();
    for (const auto& k : channel.operators()) out += k * rho.matrix() * k.adjoint();
    return PolDensityMatrix::nearest_physical(out, kInputTol).state;
}

inline BlochVector bloch_contraction(const BlochVector& r, const DepolarizingParam& p) {
    return r.scaled(p.contraction());
}

inline Mat4 choi_entries(const KrausChannel& channel) {
    Mat4 c = Mat4::Zero();
    for (const auto& k : channel.operators()) {
        Vec4 v;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) v(2 * i + j) = k(i, j) / std::sqrt(2.0);
        c += v * v.adjoint();
    }
    return c;
}

inline ChoiMatrix choi_matrix(const KrausChannel& channel) { return ChoiMatrix(choi_entries(channel)); }

/// Frobenius distance between Choi matrices; zero iff the maps coincide.
inline double channel_distance(const KrausChannel& a, const KrausChannel& b) {
    return (choi_matrix(a).matrix() - choi_matrix(b).matrix()).norm();
}

}  // namespace sodepol
