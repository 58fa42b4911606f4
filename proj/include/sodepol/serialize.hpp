// serialize.hpp
// JSON forms of states, channels, circuit traces and table rows, plus a
// deterministic writer (17 significant digits, insertion-ordered keys).
//
// Matrices are {"re": [[...]], "im": [[...]]}. A SpinOrbitState is written
// as a 2 x 3 matrix, rows (H, V), columns (G, h, v), which is the
// (HG, Hh, Hv, VG, Vh, Vv) ordering read row-major.

#pragma once

#include "sodepol/channel.hpp"
#include "sodepol/error.hpp"
#include "sodepol/optics.hpp"
#include "sodepol/qstate.hpp"
#include "sodepol/skdecomp.hpp"
#include "sodepol/tomography.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace sodepol {

using Json = nlohmann::ordered_json;

template <typename M>
Json matrix_to_json(const M& m) {
    Json re = Json::array();
    Json im = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json rr = Json::array();
        Json ri = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rr.push_back(m(i, j).real());
            ri.push_back(m(i, j).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ri));
    }
    Json out;
    out["re"] = std::move(re);
    out["im"] = std::move(im);
    return out;
}

template <int Rows, int Cols>
Eigen::Matrix<Complex, Rows, Cols> matrix_from_json(const Json& j) {
    const auto bad = [] { return Error(Errc::InvalidConfig, "malformed {re, im} matrix"); };
    if (!j.is_object() || !j.contains("re") || !j.contains("im")) throw bad();
    const Json& re = j.at("re");
    const Json& im = j.at("im");
    if (!re.is_array() || !im.is_array() || re.size() != Rows || im.size() != Rows) throw bad();
    Eigen::Matrix<Complex, Rows, Cols> m;
    for (int r = 0; r < Rows; ++r) {
        if (!re[r].is_array() || !im[r].is_array() || re[r].size() != Cols || im[r].size() != Cols)
            throw bad();
        for (int c = 0; c < Cols; ++c) {
            if (!re[r][c].is_number() || !im[r][c].is_number()) throw bad();
            m(r, c) = Complex(re[r][c].get<double>(), im[r][c].get<double>());
        }
    }
    return m;
}

inline Json to_json(const PolDensityMatrix& rho) { return matrix_to_json(rho.matrix()); }

inline PolDensityMatrix density_from_json(const Json& j) {
    return PolDensityMatrix::from_matrix(matrix_from_json<2, 2>(j));
}

inline Json to_json(const SpinOrbitState& s) {
    Eigen::Matrix<Complex, 2, 3> m;
    for (int p = 0; p < 2; ++p)
        for (int k = 0; k < 3; ++k) m(p, k) = s.amplitudes()(3 * p + k);
    return matrix_to_json(m);
}

inline SpinOrbitState spin_orbit_from_json(const Json& j) {
    const auto m = matrix_from_json<2, 3>(j);
    Vec6 a;
    for (int p = 0; p < 2; ++p)
        for (int k = 0; k < 3; ++k) a(3 * p + k) = m(p, k);
    return SpinOrbitState::from_amplitudes(a);
}

inline Json to_json(const BlochVector& r) { return Json::array({r.x, r.y, r.z}); }

inline Json to_json(const KrausChannel& ch) {
    Json ops = Json::array();
    for (const auto& k : ch.operators()) ops.push_back(matrix_to_json(k));
    Json out;
    out["label"] = ch.label();
    out["operators"] = std::move(ops);
    return out;
}

inline KrausChannel kraus_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("operators") || !j.at("operators").is_array())
        throw Error(Errc::InvalidConfig, "Kraus channel JSON needs an operators array");
    std::vector<Mat2> ops;
    for (const auto& op : j.at("operators")) ops.push_back(matrix_from_json<2, 2>(op));
    return KrausChannel(std::move(ops), j.value("label", std::string{}));
}

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json to_json(const CircuitTrace& trace) {
    Json stages = Json::array();
    for (const auto& s : trace.snapshots()) {
        Json st;
        st["label"] = s.label;
        st["branch"] = std::string(branch_name(s.branch));
        st["branch_amplitude"] = complex_to_json(s.branch_amplitude);
        st["norm"] = s.state.norm();
        st["state"] = to_json(s.state);
        stages.push_back(std::move(st));
    }
    Json out;
    out["basis"] = Json::array({"HG", "Hh", "Hv", "VG", "Vh", "Vv"});
    out["stages"] = std::move(stages);
    return out;
}

inline Json to_json(const QuasiExtremeParams& q) {
    Json out;
    out["label"] = std::string(quasi_extreme_name(q.label));
    out["alpha"] = q.alpha;
    out["beta"] = q.beta;
    out["two_gamma1"] = 2.0 * q.gamma1;
    out["two_gamma2"] = 2.0 * q.gamma2;
    out["U"] = q.u ? matrix_to_json(*q.u) : Json(nullptr);
    out["U_prime"] = q.u_prime ? matrix_to_json(*q.u_prime) : Json(nullptr);
    return out;
}

inline Json to_json(const SKRow& row) {
    Json out;
    out["lambda"] = row.lambda_label;
    out["E1"] = to_json(row.e1);
    out["E2"] = to_json(row.e2);
    out["p"] = row.p;
    out["p_printed"] = row.p_printed;
    out["consistency"] = row.consistency == Consistency::Verified ? "Verified" : "Anomalous";
    out["choi_distance"] = row.distance;
    return out;
}

inline Json to_json(const TomographyRecord& rec) {
    Json out;
    out["iH"] = rec.h();
    out["iV"] = rec.v();
    out["iP"] = rec.plus();
    out["iM"] = rec.minus();
    out["iL"] = rec.l();
    out["iR"] = rec.r();
    out["source"] = rec.source().str();
    return out;
}

// ---------------------------------------------------------------------------
// Deterministic writer.

namespace detail {

inline std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_json(const Json& j, std::string& out, int indent, int depth) {
    const auto newline = [&](int d) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) { out += "{}"; return; }
            out += '{';
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                out += Json(key).dump();
                out += indent < 0 ? ":" : ": ";
                write_json(value, out, indent, depth + 1);
            }
            newline(depth);
            out += '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) { out += "[]"; return; }
            // Arrays of scalars stay on one line.
            bool flat = true;
            for (const auto& v : j)
                if (v.is_structured()) flat = false;
            out += '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += flat ? ", " : ",";
                first = false;
                if (!flat) newline(depth + 1);
                write_json(v, out, indent, depth + 1);
            }
            if (!flat) newline(depth);
            out += ']';
            return;
        }
        case Json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

}  // namespace detail

/// Byte-stable rendering: doubles with 17 significant digits, keys in
/// insertion order. indent < 0 gives a single line.
inline std::string dump_deterministic(const Json& j, int indent = 2) {
    std::string out;
    detail::write_json(j, out, indent, 0);
    return out;
}

/// 64-bit FNV-1a, used to fingerprint effective configurations.
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace sodepol
