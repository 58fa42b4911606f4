// experiment.hpp
// Experiment runner: sweeps a depolarizing-strength grid through one of the
// three channel realizations (compact optical circuit, quasi-extreme
// decomposition, ideal Kraus sum), tomographs each output, and emits
// reports, CSV curves and PGM frames.
//
// Output layout:
//   <out>/report.json
//   <out>/<scheme>_<state>_summary.csv
//   <out>/<scheme>/<state>/<lambda>/{density.json, record.csv, trace.json,
//                                    channel.json, <state>_<basis>_<port>_<N>.pgm|.csv}

#pragma once

#include "sodepol/channel.hpp"
#include "sodepol/error.hpp"
#include "sodepol/optics.hpp"
#include "sodepol/qstate.hpp"
#include "sodepol/serialize.hpp"
#include "sodepol/skdecomp.hpp"
#include "sodepol/tomography.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace sodepol {

inline constexpr std::string_view kToolkitVersion = "sodepol 1.0.0";

enum class Scheme { Compact, SolovayKitaev, IdealKraus };

constexpr std::string_view scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Compact: return "compact";
        case Scheme::SolovayKitaev: return "solovay_kitaev";
        case Scheme::IdealKraus: return "ideal_kraus";
    }
    return "?";
}

inline Scheme parse_scheme(std::string_view s) {
    if (s == "compact") return Scheme::Compact;
    if (s == "solovay_kitaev" || s == "solovay-kitaev" || s == "sk") return Scheme::SolovayKitaev;
    if (s == "ideal_kraus" || s == "ideal-kraus" || s == "ideal") return Scheme::IdealKraus;
    throw Error(Errc::InvalidConfig, "unknown scheme '" + std::string(s) + "'");
}

/// Largest grid value each scheme accepts. The decomposition scheme is
/// parameterized by lambda', whose depolarizing range ends at 3/4.
constexpr double scheme_lambda_max(Scheme s) { return s == Scheme::SolovayKitaev ? 0.75 : 1.0; }

struct InitialState {
    enum class Kind { V, Plus, Custom };
    Kind kind = Kind::V;
    Complex alpha{0.0, 0.0};
    Complex beta{1.0, 0.0};

    static InitialState vertical() { return {Kind::V, 0.0, 1.0}; }
    static InitialState plus() { return {Kind::Plus, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}; }

    /// "V", "plus", or "custom:a_re,a_im,b_re,b_im" (renormalized).
    static InitialState parse(std::string_view text) {
        if (text == "V" || text == "v") return vertical();
        if (text == "plus" || text == "Plus" || text == "+") return plus();
        constexpr std::string_view prefix = "custom:";
        if (text.substr(0, prefix.size()) == prefix) {
            std::vector<double> v;
            std::stringstream ss{std::string(text.substr(prefix.size()))};
            std::string item;
            while (std::getline(ss, item, ',')) {
                try {
                    std::size_t used = 0;
                    v.push_back(std::stod(item, &used));
                    if (used != item.size()) throw std::invalid_argument(item);
                } catch (const std::exception&) {
                    throw Error(Errc::InvalidConfig, "bad number in custom state: '" + item + "'");
                }
            }
            if (v.size() != 4) throw Error(Errc::InvalidConfig, "custom state needs a_re,a_im,b_re,b_im");
            const Complex a(v[0], v[1]);
            const Complex b(v[2], v[3]);
            const double n = std::sqrt(std::norm(a) + std::norm(b));
            if (!(n > kInputTol) || !std::isfinite(n))
                throw Error(Errc::InvalidConfig, "custom state amplitudes vanish");
            return {Kind::Custom, a / n, b / n};
        }
        throw Error(Errc::InvalidConfig, "unknown initial state '" + std::string(text) + "'");
    }

    std::string label() const {
        switch (kind) {
            case Kind::V: return "V";
            case Kind::Plus: return "plus";
            case Kind::Custom: return "custom";
        }
        return "?";
    }

    std::string spec() const {
        if (kind != Kind::Custom) return label();
        return "custom:" + detail::format_double(alpha.real()) + "," + detail::format_double(alpha.imag()) +
               "," + detail::format_double(beta.real()) + "," + detail::format_double(beta.imag());
    }

    Vec2 ket() const { return Vec2(alpha, beta); }
    PolDensityMatrix density() const { return density_from_pure(ket()); }
};

struct RenderSpec {
    int n = 512;
    double extent = 4.0;
};

struct ExperimentConfig {
    Scheme scheme = Scheme::Compact;
    InitialState initial_state = InitialState::vertical();
    std::vector<double> lambda_grid;
    double phi = 0.0;
    std::optional<RenderSpec> render;
    std::filesystem::path output_dir;
    std::set<std::string> formats{"json"};
    bool trace = false;
    bool channel_dump = false;

    bool wants(std::string_view f) const { return formats.count(std::string(f)) > 0; }

    void validate() const {
        if (lambda_grid.empty()) throw Error(Errc::InvalidConfig, "empty lambda grid");
        const double hi = scheme_lambda_max(scheme);
        for (double l : lambda_grid)
            if (!(l >= 0.0 && l <= hi))
                throw Error(Errc::InvalidConfig, "lambda " + detail::format_double(l) + " outside [0, " +
                                                     detail::format_double(hi) + "] for scheme " +
                                                     std::string(scheme_name(scheme)));
        if (!std::isfinite(phi)) throw Error(Errc::InvalidConfig, "phi must be finite");
        for (const auto& f : formats)
            if (f != "json" && f != "csv" && f != "pgm")
                throw Error(Errc::InvalidConfig, "unknown output format '" + f + "'");
        if (render) {
            if (scheme != Scheme::Compact)
                throw Error(Errc::InvalidConfig, "image rendering needs the compact scheme");
            if (render->n < 16) throw Error(Errc::InvalidConfig, "render grid must be at least 16");
            if (!(render->extent > 0.0) || !std::isfinite(render->extent))
                throw Error(Errc::InvalidConfig, "render extent must be positive");
        }
        std::set<std::string> dirs;
        for (double l : lambda_grid)
            if (!dirs.insert(lambda_dirname(l)).second)
                throw Error(Errc::InvalidConfig, "duplicate lambda grid value " + lambda_dirname(l));
    }

    static std::string lambda_dirname(double l) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "lambda_%.6g", l);
        return buf;
    }

    /// Effective experiment parameters (the output location is excluded, so
    /// the same experiment written to two places hashes identically).
    Json to_json() const {
        Json j;
        j["scheme"] = std::string(scheme_name(scheme));
        j["state"] = initial_state.spec();
        j["lambdas"] = lambda_grid;
        j["phi"] = phi;
        if (render) {
            Json r;
            r["n"] = render->n;
            r["extent"] = render->extent;
            j["render"] = r;
        } else {
            j["render"] = nullptr;
        }
        j["formats"] = Json(std::vector<std::string>(formats.begin(), formats.end()));
        j["trace"] = trace;
        j["channel_dump"] = channel_dump;
        return j;
    }

    /// Reads the JSON config document. Keys: scheme, state, lambdas,
    /// thetas_deg (compact only, converted to lambda), phi,
    /// render {n, extent}, formats, trace, channel_dump, output_dir.
    static ExperimentConfig from_json(const Json& j) {
        if (!j.is_object()) throw Error(Errc::InvalidConfig, "config must be a JSON object");
        ExperimentConfig cfg;
        try {
            if (j.contains("scheme")) cfg.scheme = parse_scheme(j.at("scheme").get<std::string>());
            if (j.contains("state")) cfg.initial_state = InitialState::parse(j.at("state").get<std::string>());
            if (j.contains("lambdas")) cfg.lambda_grid = j.at("lambdas").get<std::vector<double>>();
            if (j.contains("thetas_deg")) {
                for (double t : j.at("thetas_deg").get<std::vector<double>>())
                    cfg.lambda_grid.push_back(lambda_from_theta(t * kPi / 180.0).phys());
            }
            if (j.contains("phi")) cfg.phi = j.at("phi").get<double>();
            if (j.contains("render") && !j.at("render").is_null()) {
                RenderSpec r;
                r.n = j.at("render").value("n", r.n);
                r.extent = j.at("render").value("extent", r.extent);
                cfg.render = r;
            }
            if (j.contains("formats")) {
                const auto fs = j.at("formats").get<std::vector<std::string>>();
                cfg.formats = std::set<std::string>(fs.begin(), fs.end());
            }
            if (j.contains("trace")) cfg.trace = j.at("trace").get<bool>();
            if (j.contains("channel_dump")) cfg.channel_dump = j.at("channel_dump").get<bool>();
            if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::InvalidConfig, std::string("bad config field: ") + e.what());
        }
        return cfg;
    }
};

struct GridPointResult {
    /// Grid value as given (lambda for compact / ideal, lambda' for the decomposition).
    double grid_value;
    DepolarizingParam param;
    /// Compact scheme only: HWP angle used.
    std::optional<double> theta;
    TomographyRecord record;
    PolDensityMatrix reconstructed;
    bool clipped;
    PolDensityMatrix ideal;
    double fidelity;
    double trace_distance;
    CoherenceReport coherence;
    BlochVector bloch;
};

struct RunReport {
    Json config;
    std::string config_hash;
    std::string version;
    std::vector<GridPointResult> points;

    Json to_json() const {
        Json pts = Json::array();
        for (const auto& p : points) {
            Json j;
            j["grid_value"] = p.grid_value;
            j["lambda_phys"] = p.param.phys();
            j["lambda_kraus"] = p.param.kraus();
            j["theta"] = p.theta ? Json(*p.theta) : Json(nullptr);
            j["record"] = sodepol::to_json(p.record);
            j["reconstructed"] = sodepol::to_json(p.reconstructed);
            j["clipped"] = p.clipped;
            j["ideal"] = sodepol::to_json(p.ideal);
            j["fidelity"] = p.fidelity;
            j["trace_distance"] = p.trace_distance;
            Json c;
            c["c_l1"] = p.coherence.c_l1;
            c["c_max"] = p.coherence.c_max;
            c["basis"] = p.coherence.basis;
            j["coherence"] = c;
            j["bloch"] = sodepol::to_json(p.bloch);
            pts.push_back(std::move(j));
        }
        Json out;
        out["version"] = version;
        out["config_hash"] = config_hash;
        out["config"] = config;
        out["points"] = std::move(pts);
        return out;
    }
};

namespace detail {

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoFailure, "cannot open " + path.string());
    out << text;
    if (!out) throw Error(Errc::IoFailure, "write failed for " + path.string());
}

inline void make_dirs(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(Errc::IoFailure, "cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace detail

/// Channel evolution, tomography and metrics for one grid value. When
/// `artifacts` is set, per-point files are written there.
inline GridPointResult evaluate_grid_point(const ExperimentConfig& cfg, double grid_value,
                                           const std::optional<std::filesystem::path>& artifacts = {}) {
    const PolDensityMatrix rho0 = cfg.initial_state.density();
    const DepolarizingParam param = cfg.scheme == Scheme::SolovayKitaev
                                        ? DepolarizingParam::from_kraus(grid_value)
                                        : DepolarizingParam::from_phys(grid_value);

    std::optional<double> theta;
    std::optional<TomographyRecord> record;
    std::optional<KrausChannel> channel;

    switch (cfg.scheme) {
        case Scheme::Compact: {
            CompactCircuitConfig cc;
            cc.theta = theta_from_lambda(param.phys());
            cc.alpha = cfg.initial_state.alpha;
            cc.beta = cfg.initial_state.beta;
            cc.phi = cfg.phi;
            theta = cc.theta;
            const CircuitTrace trace = run_compact_circuit(cc);
            const SpinOrbitState& out = trace.output();
            record = cfg.render ? image_tomography(out, cfg.render->n, cfg.render->extent)
                                : project_intensities(out);
            if (artifacts && cfg.trace)
                detail::write_text(*artifacts / "trace.json", dump_deterministic(to_json(trace)) + "\n");
            if (artifacts && cfg.render && cfg.wants("pgm")) {
                const std::string label = cfg.initial_state.label();
                for (TomoBasis b : kAllBases) {
                    const auto imgs = render_output_images(out, b, cfg.render->n, cfg.render->extent);
                    for (const auto& [port, img] : {std::pair{"T", &imgs.transmitted}, std::pair{"R", &imgs.reflected}}) {
                        write_pgm(*img, *artifacts / image_filename(label, b, port, cfg.render->n));
                        write_image_csv(*img, *artifacts / image_filename(label, b, port, cfg.render->n, "csv"));
                    }
                }
            }
            channel = kraus_depolarizing(param);
            break;
        }
        case Scheme::SolovayKitaev: {
            channel = assemble_channel(solve_depolarizing_params(grid_value));
            record = project_intensities(apply_kraus(*channel, rho0));
            break;
        }
        case Scheme::IdealKraus: {
            channel = kraus_depolarizing(param);
            record = project_intensities(apply_kraus(*channel, rho0));
            break;
        }
    }

    const ReconstructedState rec = reconstruct_density(stokes_from_record(*record));
    const PolDensityMatrix ideal = depolarize_map(rho0, param);
    const double f = fidelity(rec.rho, ideal);
    if (!(f >= 0.0 && f <= 1.0)) throw Error(Errc::InvariantViolation, "fidelity outside [0, 1]");

    GridPointResult result{grid_value, param, theta, *record, rec.rho, rec.clipped, ideal, f,
                           trace_distance(rec.rho, ideal), coherence_report(rec.rho), bloch_from_density(rec.rho)};

    if (artifacts) {
        if (cfg.wants("json")) {
            Json d;
            d["reconstructed"] = to_json(result.reconstructed);
            d["ideal"] = to_json(result.ideal);
            detail::write_text(*artifacts / "density.json", dump_deterministic(d) + "\n");
        }
        if (cfg.wants("csv"))
            detail::write_text(*artifacts / "record.csv",
                               std::string(kRecordCsvHeader) + "\n" + record_csv_row(result.record) + "\n");
        if (cfg.channel_dump)
            detail::write_text(*artifacts / "channel.json", dump_deterministic(to_json(*channel)) + "\n");
    }
    return result;
}

inline std::string summary_csv(const RunReport& report) {
    std::string out = "grid_value,lambda_phys,lambda_kraus,fidelity,trace_distance,c_l1,c_max,rx,ry,rz\n";
    for (const auto& p : report.points) {
        const double vals[] = {p.grid_value, p.param.phys(), p.param.kraus(), p.fidelity, p.trace_distance,
                               p.coherence.c_l1, p.coherence.c_max, p.bloch.x, p.bloch.y, p.bloch.z};
        bool first = true;
        for (double v : vals) {
            if (!first) out += ',';
            first = false;
            out += detail::format_double(v);
        }
        out += '\n';
    }
    return out;
}

/// Runs the sweep. With an empty output_dir nothing is written.
inline RunReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    RunReport report;
    report.config = cfg.to_json();
    char hash[20];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(dump_deterministic(report.config, -1))));
    report.config_hash = hash;
    report.version = std::string(kToolkitVersion);

    const bool write = !cfg.output_dir.empty();
    const std::filesystem::path state_dir =
        cfg.output_dir / std::string(scheme_name(cfg.scheme)) / cfg.initial_state.label();

    for (double l : cfg.lambda_grid) {
        std::optional<std::filesystem::path> artifacts;
        if (write) {
            artifacts = state_dir / ExperimentConfig::lambda_dirname(l);
            detail::make_dirs(*artifacts);
        }
        report.points.push_back(evaluate_grid_point(cfg, l, artifacts));
    }

    if (write) {
        detail::make_dirs(cfg.output_dir);
        if (cfg.wants("json"))
            detail::write_text(cfg.output_dir / "report.json", dump_deterministic(report.to_json()) + "\n");
        if (cfg.wants("csv"))
            detail::write_text(cfg.output_dir / (std::string(scheme_name(cfg.scheme)) + "_" +
                                                 cfg.initial_state.label() + "_summary.csv"),
                               summary_csv(report));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Bloch-ball contraction samples.

struct BlochSample {
    BlochVector in;
    BlochVector out;
};

/// Fibonacci-sphere unit vectors and their images under the channel.
inline std::vector<BlochSample> bloch_contraction_samples(const DepolarizingParam& p, int samples) {
    if (samples < 8) throw Error(Errc::InvalidConfig, "need at least 8 Bloch samples");
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    std::vector<BlochSample> out;
    out.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / samples;
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double a = golden * i;
        const BlochVector r{rho * std::cos(a), rho * std::sin(a), z};
        out.push_back({r, bloch_contraction(r, p)});
    }
    return out;
}

inline std::string bloch_contraction_csv(const DepolarizingParam& p, int samples) {
    std::string out = "# bloch contraction factor=" + detail::format_double(p.contraction()) +
                      " (1 - lambda_phys) lambda_phys=" + detail::format_double(p.phys()) +
                      " lambda_kraus=" + detail::format_double(p.kraus()) + "\n";
    out += "rx_in,ry_in,rz_in,rx_out,ry_out,rz_out\n";
    for (const auto& s : bloch_contraction_samples(p, samples)) {
        const double vals[] = {s.in.x, s.in.y, s.in.z, s.out.x, s.out.y, s.out.z};
        for (int k = 0; k < 6; ++k) {
            out += detail::format_double(vals[k]);
            out += k == 5 ? '\n' : ',';
        }
    }
    return out;
}

inline void emit_bloch_contraction(const DepolarizingParam& p, int samples, const std::filesystem::path& file) {
    const std::string csv = bloch_contraction_csv(p, samples);
    if (file.has_parent_path()) detail::make_dirs(file.parent_path());
    detail::write_text(file, csv);
}

// ---------------------------------------------------------------------------
// Parameter-table report.

inline Json reference_table_json() {
    Json rows = Json::array();
    for (const auto& row : reference_rows()) {
        Json j = to_json(row);
        const SKRow solved = solve_depolarizing_params(row.lambda_label);
        Json s;
        s["alpha"] = solved.e1.alpha;
        s["two_gamma2"] = 2.0 * solved.e1.gamma2;
        s["p"] = solved.p;
        s["choi_distance"] = solved.distance;
        j["solver"] = s;
        rows.push_back(std::move(j));
    }
    Json out;
    out["rows"] = std::move(rows);
    return out;
}

inline std::string reference_table_text() {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-6s %9s %9s %9s %6s  %-9s %10s | %9s %9s %9s %10s\n", "lambda", "alpha",
                  "2g1", "2g2", "p", "verdict", "distance", "alpha*", "2g2*", "p*", "distance*");
    out += buf;
    for (const auto& row : reference_rows()) {
        const SKRow solved = solve_depolarizing_params(row.lambda_label);
        std::snprintf(buf, sizeof buf, "%-6.2f %9.5f %9.5f %9.5f %6.2f  %-9s %10.3e | %9.5f %9.5f %9.5f %10.3e\n",
                      row.lambda_label, row.e1.alpha, 2.0 * row.e1.gamma1, 2.0 * row.e1.gamma2, row.p_printed,
                      row.consistency == Consistency::Verified ? "Verified" : "Anomalous", row.distance,
                      solved.e1.alpha, 2.0 * solved.e1.gamma2, solved.p, solved.distance);
        out += buf;
    }
    out += "E2 (all rows): alpha = beta = pi/4, 2g1 = pi/2, 2g2 = 0, U = U_DP, U' = none\n";
    out += "* closed-form solver for the same lambda'\n";
    return out;
}

}  // namespace sodepol
