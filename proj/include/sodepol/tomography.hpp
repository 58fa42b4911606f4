// tomography.hpp
// Simulated polarization state tomography: six projective intensities
// (exact, or integrated from rendered PBS output frames), Stokes
// parameters, and density-matrix reconstruction.
//
// Axis convention: S1 <-> H/V <-> r_z, S2 <-> +/- <-> r_x, S3 <-> L/R <-> r_y,
// with |L> = (|H> + i|V>)/sqrt(2).

#pragma once

#include "sodepol/error.hpp"
#include "sodepol/linalg.hpp"
#include "sodepol/qstate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sodepol {

enum class TomoBasis { HV, DA, LR };

constexpr std::string_view basis_name(TomoBasis b) {
    switch (b) {
        case TomoBasis::HV: return "HV";
        case TomoBasis::DA: return "DA";
        case TomoBasis::LR: return "LR";
    }
    return "?";
}

inline TomoBasis parse_basis(std::string_view s) {
    if (s == "HV") return TomoBasis::HV;
    if (s == "DA") return TomoBasis::DA;
    if (s == "LR") return TomoBasis::LR;
    throw Error(Errc::InvalidBasis, "unknown tomography basis '" + std::string(s) + "'");
}

/// (transmitted, reflected) polarization of a PBS analyzer set to `b`.
inline std::pair<Vec2, Vec2> basis_kets(TomoBasis b) {
    switch (b) {
        case TomoBasis::HV: return {ket_h(), ket_v()};
        case TomoBasis::DA: return {ket_plus(), ket_minus()};
        case TomoBasis::LR: return {ket_l(), ket_r()};
    }
    throw Error(Errc::InvalidBasis, "unknown tomography basis");
}

inline constexpr std::array<TomoBasis, 3> kAllBases{TomoBasis::HV, TomoBasis::DA, TomoBasis::LR};

// ---------------------------------------------------------------------------

struct RecordSource {
    enum class Kind { Analytic, ImageIntegrated };
    Kind kind = Kind::Analytic;
    int grid_size = 0;

    static RecordSource analytic() { return {Kind::Analytic, 0}; }
    static RecordSource image(int n) { return {Kind::ImageIntegrated, n}; }

    double tolerance() const { return kind == Kind::Analytic ? kInputTol : 1e-3; }

    std::string str() const {
        return kind == Kind::Analytic ? "analytic" : "image:" + std::to_string(grid_size);
    }
};

/// Normalized intensities (i_H, i_V, i_+, i_-, i_L, i_R).
class TomographyRecord {
public:
    static TomographyRecord make(const std::array<double, 6>& i, RecordSource source) {
        const double tol = source.tolerance();
        for (double v : i)
            if (!std::isfinite(v) || v < -tol || v > 1.0 + tol)
                throw Error(Errc::InconsistentRecord, "intensity outside [0, 1]");
        for (int pair = 0; pair < 3; ++pair)
            if (std::abs(i[2 * pair] + i[2 * pair + 1] - 1.0) > tol)
                throw Error(Errc::InconsistentRecord, "basis pair does not sum to 1");
        return TomographyRecord(i, source);
    }

    double h() const { return i_[0]; }
    double v() const { return i_[1]; }
    double plus() const { return i_[2]; }
    double minus() const { return i_[3]; }
    double l() const { return i_[4]; }
    double r() const { return i_[5]; }
    const std::array<double, 6>& values() const { return i_; }
    const RecordSource& source() const { return src_; }

private:
    TomographyRecord(const std::array<double, 6>& i, RecordSource s) : i_(i), src_(s) {}

    std::array<double, 6> i_;
    RecordSource src_;
};

struct StokesVector {
    double s1 = 0.0;
    double s2 = 0.0;
    double s3 = 0.0;

    double norm() const { return std::sqrt(s1 * s1 + s2 * s2 + s3 * s3); }
};

inline constexpr double kStokesTol = 3e-3;

inline TomographyRecord project_intensities(const PolDensityMatrix& rho) {
    std::array<double, 6> out{};
    int k = 0;
    for (TomoBasis b : kAllBases) {
        const auto [t, r] = basis_kets(b);
        out[k++] = (t.adjoint() * rho.matrix() * t)(0).real();
        out[k++] = (r.adjoint() * rho.matrix() * r)(0).real();
    }
    return TomographyRecord::make(out, RecordSource::analytic());
}

/// Intensities ||(P_j (x) I) psi||^2 with the mode factor carried along.
inline TomographyRecord project_intensities(const SpinOrbitState& state) {
    const double n2 = state.amplitudes().squaredNorm();
    if (std::abs(std::sqrt(n2) - 1.0) > kInputTol)
        throw Error(Errc::NotNormalized, "spin-orbit state is not normalized");
    const auto port = [&](const Vec2& ket) {
        const Vec6 projected = kron(Mat2(ket * ket.adjoint()), Eigen::Matrix<Complex, 3, 3>::Identity().eval()) *
                               state.amplitudes();
        return projected.squaredNorm() / n2;
    };
    std::array<double, 6> out{};
    int k = 0;
    for (TomoBasis b : kAllBases) {
        const auto [t, r] = basis_kets(b);
        out[k++] = port(t);
        out[k++] = port(r);
    }
    return TomographyRecord::make(out, RecordSource::analytic());
}

inline StokesVector stokes_from_record(const TomographyRecord& rec) {
    const double tol = rec.source().tolerance();
    const auto& i = rec.values();
    for (int pair = 0; pair < 3; ++pair)
        if (std::abs(i[2 * pair] + i[2 * pair + 1] - 1.0) > tol)
            throw Error(Errc::InconsistentRecord, "basis pair does not sum to 1");
    return {rec.h() - rec.v(), rec.plus() - rec.minus(), rec.l() - rec.r()};
}

struct ReconstructedState {
    PolDensityMatrix rho;
    /// True when |s| > 1 was pulled back onto the Bloch sphere.
    bool clipped = false;
};

inline ReconstructedState reconstruct_density(const StokesVector& s) {
    if (!std::isfinite(s.norm()) || s.norm() > 1.0 + kStokesTol)
        throw Error(Errc::UnphysicalStokes, "Stokes vector longer than 1");
    const double n = s.norm();
    const double scale = n > 1.0 ? 1.0 / n : 1.0;
    const BlochVector r{scale * s.s2, scale * s.s3, scale * s.s1};
    return {density_from_bloch(r), n > 1.0};
}

// ---------------------------------------------------------------------------
// Transverse-mode images.

/// N x N intensity samples over [-extent w, extent w]^2, row-major with y
/// increasing down the rows.
class ModeImage {
public:
    ModeImage(int n, double extent, double waist, std::vector<double> pixels)
        : n_(n), extent_(extent), waist_(waist), px_(std::move(pixels)) {
        if (n_ < 16) throw Error(Errc::InvalidConfig, "image grid must be at least 16 x 16");
        if (!(extent_ > 0.0) || !(waist_ > 0.0))
            throw Error(Errc::InvalidConfig, "extent and waist must be positive");
        if (px_.size() != static_cast<std::size_t>(n_) * n_)
            throw Error(Errc::GridMismatch, "pixel count does not match the grid");
        for (double v : px_)
            if (!(v >= 0.0)) throw Error(Errc::InvalidState, "negative or non-finite pixel");
    }

    int size() const { return n_; }
    double extent() const { return extent_; }
    double waist() const { return waist_; }
    const std::vector<double>& pixels() const { return px_; }
    double at(int row, int col) const { return px_[static_cast<std::size_t>(row) * n_ + col]; }

    double pixel_pitch() const { return 2.0 * extent_ * waist_ / n_; }
    double pixel_area() const { return pixel_pitch() * pixel_pitch(); }

    /// Pixel sum in row-major order with Neumaier compensation.
    double sum() const {
        double s = 0.0;
        double comp = 0.0;
        for (double v : px_) {
            const double t = s + v;
            comp += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
            s = t;
        }
        return s + comp;
    }
    double energy() const { return sum() * pixel_area(); }
    double peak() const {
        double m = 0.0;
        for (double v : px_) m = std::max(m, v);
        return m;
    }

private:
    int n_;
    double extent_;
    double waist_;
    std::vector<double> px_;
};

struct PortImages {
    ModeImage transmitted;
    ModeImage reflected;
};

/// Renders both PBS output ports for analyzer basis `basis`. Transverse
/// profiles (unit-normalized):
///   psi_G ~ exp(-r^2/w^2), psi_h ~ (2x/w) exp(-r^2/w^2), psi_v ~ (2y/w) exp(-r^2/w^2).
inline PortImages render_output_images(const SpinOrbitState& state, TomoBasis basis, int n,
                                       double extent, double waist = 1.0) {
    if (n < 16) throw Error(Errc::InvalidConfig, "image grid must be at least 16 x 16");
    if (!(extent > 0.0) || !(waist > 0.0))
        throw Error(Errc::InvalidConfig, "extent and waist must be positive");

    const auto [t_ket, r_ket] = basis_kets(basis);
    const double pitch = 2.0 * extent * waist / n;
    const double norm = std::sqrt(2.0 / (kPi * waist * waist));

    std::vector<double> coord(n), gauss(n);
    for (int i = 0; i < n; ++i) {
        coord[i] = -extent * waist + (i + 0.5) * pitch;
        gauss[i] = std::exp(-coord[i] * coord[i] / (waist * waist));
    }

    const auto render = [&](const Vec2& ket) {
        // Mode coefficients of the field leaving this port.
        std::array<Complex, 3> c{};
        for (int m = 0; m < 3; ++m)
            c[m] = std::conj(ket(0)) * state.amplitudes()(m) + std::conj(ket(1)) * state.amplitudes()(3 + m);
        std::vector<double> px(static_cast<std::size_t>(n) * n);
        for (int row = 0; row < n; ++row) {
            const double y = coord[row];
            for (int col = 0; col < n; ++col) {
                const double x = coord[col];
                const Complex field = norm * gauss[row] * gauss[col] *
                                      (c[0] + c[1] * (2.0 * x / waist) + c[2] * (2.0 * y / waist));
                px[static_cast<std::size_t>(row) * n + col] = std::norm(field);
            }
        }
        return ModeImage(n, extent, waist, std::move(px));
    };
    return {render(t_ket), render(r_ket)};
}

struct PortIntensities {
    double transmitted = 0.0;
    double reflected = 0.0;
};

/// CCD-style normalized port intensities (sum T, sum R) / total.
inline PortIntensities integrate_images(const ModeImage& transmitted, const ModeImage& reflected) {
    if (transmitted.size() != reflected.size() || transmitted.extent() != reflected.extent() ||
        transmitted.waist() != reflected.waist())
        throw Error(Errc::GridMismatch, "port images are sampled on different grids");
    const double t = transmitted.sum();
    const double r = reflected.sum();
    if (!(t + r > 0.0)) throw Error(Errc::InvalidState, "both port images are dark");
    return {t / (t + r), r / (t + r)};
}

inline PortIntensities integrate_images(const PortImages& images) {
    return integrate_images(images.transmitted, images.reflected);
}

/// Full six-intensity record from rendered frames in all three bases.
inline TomographyRecord image_tomography(const SpinOrbitState& state, int n, double extent,
                                         double waist = 1.0) {
    std::array<double, 6> out{};
    int k = 0;
    for (TomoBasis b : kAllBases) {
        const auto ports = integrate_images(render_output_images(state, b, n, extent, waist));
        out[k++] = ports.transmitted;
        out[k++] = ports.reflected;
    }
    return TomographyRecord::make(out, RecordSource::image(n));
}

// ---------------------------------------------------------------------------
// Export.

inline std::string image_filename(std::string_view state, TomoBasis basis, std::string_view port, int n,
                                  std::string_view ext = "pgm") {
    return std::string(state) + "_" + std::string(basis_name(basis)) + "_" + std::string(port) + "_" +
           std::to_string(n) + "." + std::string(ext);
}

/// Portable graymap, max value 65535, linearly scaled to the image peak.
/// P5 (binary, big-endian 16-bit) by default, P2 (ASCII) on request.
inline void write_pgm(const ModeImage& img, const std::filesystem::path& path, bool binary = true) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoFailure, "cannot open " + path.string());
    const int n = img.size();
    const double peak = img.peak();
    const auto level = [&](double v) {
        return peak > 0.0 ? static_cast<std::uint16_t>(std::lround(65535.0 * v / peak)) : std::uint16_t{0};
    };
    out << (binary ? "P5" : "P2") << "\n" << n << " " << n << "\n65535\n";
    for (int row = 0; row < n; ++row) {
        for (int col = 0; col < n; ++col) {
            const std::uint16_t g = level(img.at(row, col));
            if (binary) {
                out.put(static_cast<char>(g >> 8));
                out.put(static_cast<char>(g & 0xff));
            } else {
                out << g << (col + 1 == n ? "\n" : " ");
            }
        }
    }
    if (!out) throw Error(Errc::IoFailure, "write failed for " + path.string());
}

/// Raw intensity samples, one image row per line.
inline void write_image_csv(const ModeImage& img, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::IoFailure, "cannot open " + path.string());
    char buf[32];
    for (int row = 0; row < img.size(); ++row) {
        for (int col = 0; col < img.size(); ++col) {
            std::snprintf(buf, sizeof buf, "%.17g", img.at(row, col));
            out << buf << (col + 1 == img.size() ? "\n" : ",");
        }
    }
    if (!out) throw Error(Errc::IoFailure, "write failed for " + path.string());
}

inline constexpr std::string_view kRecordCsvHeader = "iH,iV,iP,iM,iL,iR,source";

inline std::string record_csv_row(const TomographyRecord& rec) {
    std::string line;
    char buf[32];
    for (double v : rec.values()) {
        std::snprintf(buf, sizeof buf, "%.17g,", v);
        line += buf;
    }
    return line + rec.source().str();
}

}  // namespace sodepol
