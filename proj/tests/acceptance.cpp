// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include "oracles.hpp"
#include "sodepol/sodepol.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace sodepol;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

double mdiff(const Mat2& a, const Mat2& b) { return max_abs(Mat2(a - b)); }

PolDensityMatrix random_state(std::mt19937_64& rng) {
    return PolDensityMatrix::from_matrix(oracle::bloch_matrix(oracle::random_bloch(rng)));
}

CompactCircuitConfig circuit(double theta, const Vec2& k, double phi) {
    CompactCircuitConfig c;
    c.theta = theta;
    c.alpha = k(0);
    c.beta = k(1);
    c.phi = phi;
    return c;
}

// 1
Outcome kraus_consistency() {
    std::mt19937_64 rng(1001);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const auto rho = random_state(rng);
        const auto p = DepolarizingParam::from_phys(oracle::uniform(rng, 0.0, 1.0));
        const KrausChannel ch = kraus_depolarizing(p);
        Mat2 sum = Mat2::Zero();
        for (const auto& op : ch.operators()) sum += op * rho.matrix() * op.adjoint();
        worst = std::max(worst, mdiff(depolarize_map(rho, p).matrix(), sum));
    }
    return {worst <= 1e-12, fmt("max elementwise error %.2e", worst)};
}

// 2
Outcome closed_form_output() {
    std::mt19937_64 rng(1002);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const auto r = oracle::random_bloch(rng);
        const double lk = oracle::uniform(rng, 0.0, 0.75);
        const auto out = apply_kraus(pauli_kraus(lk), PolDensityMatrix::from_matrix(oracle::bloch_matrix(r)));
        worst = std::max(worst, mdiff(out.matrix(), oracle::depolarized_closed_form(r, lk)));
    }
    return {worst <= 1e-12, fmt("max entrywise error %.2e", worst)};
}

// 3
Outcome bloch_contraction_grid() {
    std::mt19937_64 rng(1003);
    double worst = 0.0;
    for (int i = 0; i <= 10; ++i) {
        const auto p = DepolarizingParam::from_phys(i / 10.0);
        for (int k = 0; k < 100; ++k) {
            const auto r = oracle::random_bloch(rng);
            const BlochVector in{r.x, r.y, r.z};
            const auto out = bloch_from_density(apply_kraus(kraus_depolarizing(p), density_from_bloch(in)));
            worst = std::max(worst, std::abs(out.norm() - (1.0 - p.phys()) * in.norm()));
            worst = std::max(worst, std::abs(bloch_contraction(in, p).norm() - (1.0 - p.phys()) * in.norm()));
        }
    }
    return {worst <= 1e-12, fmt("max | |r_out| - (1-l)|r_in| | = %.2e", worst)};
}

// 4
Outcome compact_equivalence() {
    std::mt19937_64 rng(1004);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const Vec2 chi = oracle::random_ket(rng);
        const auto rho0 = density_from_pure(chi);
        const double phi = oracle::uniform(rng, 0.0, 2.0 * kPi);
        for (int i = 0; i <= 10; ++i) {
            const auto lam = DepolarizingParam::from_phys(i / 10.0);
            const auto out = partial_trace_mode(run_compact_circuit(circuit(theta_from_lambda(lam.phys()), chi, phi)).output());
            const Mat2 ideal = (1.0 - lam.phys()) * rho0.matrix() + lam.phys() * 0.5 * Mat2::Identity();
            worst = std::max(worst, trace_distance(out, PolDensityMatrix::from_matrix(ideal)));
        }
    }
    double endpoint = 0.0;
    for (int k = 0; k < 50; ++k) {
        const Vec2 chi = oracle::random_ket(rng);
        const double phi = oracle::uniform(rng, 0.0, 2.0 * kPi);
        const auto start = partial_trace_mode(run_compact_circuit(circuit(0.0, chi, phi)).output());
        const auto end = partial_trace_mode(run_compact_circuit(circuit(kPi / 4.0, chi, phi)).output());
        endpoint = std::max(endpoint, mdiff(start.matrix(), Mat2(chi * chi.adjoint())));
        endpoint = std::max(endpoint, mdiff(end.matrix(), 0.5 * Mat2::Identity()));
    }
    // "exactly": rounding only, a few ulps
    return {worst <= 1e-12 && endpoint <= 4.0 * std::numeric_limits<double>::epsilon(),
            fmt("max trace distance %.2e, endpoint deviation %.2e", worst, endpoint)};
}

// 5
Outcome phase_independence() {
    std::mt19937_64 rng(1005);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const Vec2 chi = oracle::random_ket(rng);
        const double theta = oracle::uniform(rng, 0.0, kPi / 4.0);
        const Mat2 ref = partial_trace_mode(run_compact_circuit(circuit(theta, chi, 0.0)).output()).matrix();
        for (double phi : {kPi / 5.0, kPi / 2.0, kPi, 1.7 * kPi})
            worst = std::max(worst, mdiff(partial_trace_mode(run_compact_circuit(circuit(theta, chi, phi)).output()).matrix(), ref));
    }
    return {worst <= 1e-12, fmt("max elementwise spread %.2e", worst)};
}

// 6
Outcome sk_table() {
    const auto rows = reference_rows();
    bool ok = rows.size() == 5;
    double worst = 0.0;
    double anomalous = 0.0;
    for (const auto& row : rows) {
        const double d = channel_distance(assemble_channel(row), pauli_kraus(row.lambda_label));
        if (row.lambda_label == 0.31) {
            anomalous = d;
            ok = ok && row.consistency == Consistency::Anomalous && d > 0.01;
        } else {
            worst = std::max(worst, d);
            ok = ok && row.consistency == Consistency::Verified;
        }
    }
    const double solved = channel_distance(assemble_channel(solve_depolarizing_params(0.31)), pauli_kraus(0.31));
    ok = ok && worst <= 1e-10 && solved <= 1e-10;
    return {ok, fmt("reference rows %.2e, row 0.31 %.4f (anomalous)", worst, anomalous) + fmt(", solver row %.2e", solved)};
}

// 7
Outcome sk_circuit_oracle() {
    std::mt19937_64 rng(1007);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        QuasiExtremeParams q;
        q.gamma1 = oracle::uniform(rng, -kPi, kPi);
        q.gamma2 = oracle::uniform(rng, -kPi, kPi);
        q.u = oracle::random_unitary(rng);
        q.u_prime = oracle::random_unitary(rng);
        const auto ch = quasi_extreme_kraus(q);
        const auto [m0, m1] = oracle::quasi_extreme(q.gamma1, q.gamma2, *q.u, *q.u_prime);
        worst = std::max({worst, mdiff(ch.operators()[0], m0), mdiff(ch.operators()[1], m1)});
    }
    return {worst <= 1e-12, fmt("max elementwise error %.2e", worst)};
}

// 8
Outcome udp_structure() {
    const Mat2 u = u_dp().matrix();
    const double off = std::max(std::abs(u(0, 1)), std::abs(u(1, 0)));
    const double mod = std::max(std::abs(std::abs(u(0, 0)) - 1.0), std::abs(std::abs(u(1, 1)) - 1.0));
    const double sign = std::abs(u(0, 0) + u(1, 1));
    return {off <= 1e-12 && mod <= 1e-12 && sign <= 1e-12,
            fmt("off-diagonal %.2e, ", off) + fmt("|d0|-1 %.2e, d0+d1 %.2e", mod, sign)};
}

ExperimentConfig config(Scheme s, InitialState st, std::vector<double> grid) {
    ExperimentConfig c;
    c.scheme = s;
    c.initial_state = st;
    c.lambda_grid = std::move(grid);
    return c;
}

// 9
Outcome endpoints() {
    double worst = 0.0;
    for (const auto& st : {InitialState::vertical(), InitialState::plus()}) {
        for (const auto& [scheme, lam] : {std::pair{Scheme::Compact, 1.0}, std::pair{Scheme::SolovayKitaev, 0.75}}) {
            const auto rep = run_experiment(config(scheme, st, {lam}));
            const auto& rho = rep.points[0].reconstructed;
            worst = std::max(worst, 1.0 - fidelity(rho, PolDensityMatrix::maximally_mixed()));
            worst = std::max(worst, mdiff(rho.matrix(), 0.5 * Mat2::Identity()));
        }
    }
    return {worst <= 1e-9, fmt("max deviation from I/2 %.2e", worst)};
}

// 10
Outcome coherence_curves() {
    std::vector<double> grid;
    for (int k = 0; k <= 10; ++k) grid.push_back(k / 10.0);
    double worst = 0.0;
    for (Scheme s : {Scheme::Compact, Scheme::IdealKraus}) {
        const auto plus = run_experiment(config(s, InitialState::plus(), grid));
        const auto vert = run_experiment(config(s, InitialState::vertical(), grid));
        for (int k = 0; k <= 10; ++k) {
            const double l = grid[k];
            worst = std::max({worst, std::abs(plus.points[k].coherence.c_l1 - (1 - l)),
                              std::abs(plus.points[k].coherence.c_max - (1 - l)),
                              std::abs(vert.points[k].coherence.c_l1),
                              std::abs(vert.points[k].coherence.c_max - (1 - l))});
        }
    }
    return {worst <= 1e-12, fmt("max curve error %.2e", worst)};
}

// 11
Outcome tomography_round_trip() {
    std::mt19937_64 rng(1011);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const auto rho = random_state(rng);
        worst = std::max(worst, trace_distance(reconstruct_density(stokes_from_record(project_intensities(rho))).rho, rho));
    }
    return {worst <= 1e-9, fmt("max trace distance %.2e", worst)};
}

// 12
Outcome image_tomography_convergence() {
    std::mt19937_64 rng(1012);
    std::vector<SpinOrbitState> states;
    for (int k = 0; k < 20; ++k) {
        const Vec2 chi = oracle::random_ket(rng);
        const double theta = oracle::uniform(rng, 0.0, kPi / 4.0);
        const double phi = oracle::uniform(rng, 0.0, 2.0 * kPi);
        states.push_back(run_compact_circuit(circuit(theta, chi, phi)).output());
    }
    const int grids[] = {64, 128, 256, 512};
    std::vector<double> err;
    for (int n : grids) {
        double e = 0.0;
        for (const auto& st : states) {
            const auto analytic = project_intensities(st);
            const auto img = image_tomography(st, n, 4.0);
            for (int i = 0; i < 6; ++i) e = std::max(e, std::abs(img.values()[i] - analytic.values()[i]));
        }
        err.push_back(e);
    }
    bool monotone = true;
    for (std::size_t i = 1; i < err.size(); ++i) monotone = monotone && err[i] <= err[i - 1];
    std::string detail = "max error by N:";
    for (std::size_t i = 0; i < err.size(); ++i) detail += " " + std::to_string(grids[i]) + "=" + fmt("%.2e", err[i]);
    detail += monotone ? " (monotone)" : " (not monotone)";
    return {err.back() <= 1e-3 && monotone, detail};
}

// 13
Outcome concurrence() {
    const double s = 1.0 / std::sqrt(2.0);
    double bell = 0.0;
    for (const auto& [a, b] : {std::pair{Mode::h, Mode::v}, std::pair{Mode::v, Mode::h}})
        for (double sign : {1.0, -1.0}) {
            Vec6 psi = Vec6::Zero();
            psi(so_index(Pol::H, a)) = s;
            psi(so_index(Pol::V, b)) = sign * s;
            bell = std::max(bell, std::abs(concurrence_spin_orbit(SpinOrbitState::from_amplitudes(psi)) - 1.0));
        }
    std::mt19937_64 rng(1013);
    double product = 0.0;
    double purity = 0.0;
    for (int k = 0; k < 1000; ++k) {
        Vec3 mode(0.0, oracle::cgauss(rng), oracle::cgauss(rng));
        mode /= mode.norm();
        product = std::max(product, concurrence_spin_orbit(SpinOrbitState::product(oracle::random_ket(rng), mode)));

        Vec6 psi = oracle::random_ket6(rng);
        psi(0) = psi(3) = 0.0;
        psi /= psi.norm();
        const Mat2 red = oracle::reduce_polarization(psi);
        const double oracle_c = std::sqrt(std::max(0.0, 2.0 * (1.0 - (red * red).trace().real())));
        purity = std::max(purity, std::abs(concurrence_spin_orbit(SpinOrbitState::from_amplitudes(psi)) - oracle_c));
    }
    return {bell <= 1e-12 && product <= 1e-12 && purity <= 1e-10,
            fmt("Bell %.2e, product %.2e, ", bell, product) + fmt("purity oracle %.2e", purity)};
}

// 14
Outcome cross_scheme() {
    std::vector<double> phys;
    std::vector<double> kraus;
    for (int k = 0; k <= 10; ++k) {
        phys.push_back(k / 10.0);
        kraus.push_back(DepolarizingParam::from_phys(k / 10.0).kraus());
    }
    std::vector<InitialState> states{InitialState::vertical(), InitialState::plus(),
                                     InitialState::parse("custom:0.3,0.1,-0.5,0.8"),
                                     InitialState::parse("custom:0.9,0,0,0.2")};
    double worst = 0.0;
    for (const auto& st : states) {
        const auto c = run_experiment(config(Scheme::Compact, st, phys));
        const auto s = run_experiment(config(Scheme::SolovayKitaev, st, kraus));
        const auto i = run_experiment(config(Scheme::IdealKraus, st, phys));
        for (std::size_t k = 0; k < phys.size(); ++k)
            worst = std::max({worst, trace_distance(c.points[k].reconstructed, s.points[k].reconstructed),
                              trace_distance(c.points[k].reconstructed, i.points[k].reconstructed),
                              trace_distance(s.points[k].reconstructed, i.points[k].reconstructed)});
    }
    return {worst <= 1e-9, fmt("max pairwise trace distance %.2e", worst)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 15
Outcome cli_determinism() {
    const fs::path root = fs::temp_directory_path() / "sodepol_acceptance_determinism";
    fs::remove_all(root);
    std::vector<std::map<std::string, std::string>> runs;
    for (const char* name : {"a", "b"}) {
        const fs::path out = root / name;
        const std::string cmd = std::string(SODEPOL_CLI) +
                                " run --scheme compact --state plus --lambdas 0,0.4,0.75,1 --render 64,4"
                                " --formats json,csv,pgm --trace --channel-dump --out " +
                                out.string() + " >/dev/null 2>&1";
        if (std::system(cmd.c_str()) != 0) return {false, "run exited non-zero"};
        std::map<std::string, std::string> files;
        for (const auto& e : fs::recursive_directory_iterator(out))
            if (e.is_regular_file()) files[fs::relative(e.path(), out).string()] = slurp(e.path());
        runs.push_back(std::move(files));
    }
    fs::remove_all(root);
    const bool same = runs[0] == runs[1] && runs[0].count("report.json") == 1;
    return {same, std::to_string(runs[0].size()) + " files compared, " + (same ? "byte-identical" : "differ")};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
    double time_limit;  // seconds, 0 = none
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "Kraus sum equals depolarizing map", kraus_consistency, 1.0},
        {2, "Kraus evolution matches closed-form output matrix", closed_form_output, 0.0},
        {3, "Bloch contraction by 1 - lambda", bloch_contraction_grid, 0.0},
        {4, "Compact circuit reduced state is depolarized input", compact_equivalence, 0.0},
        {5, "Reduced state independent of phi", phase_independence, 0.0},
        {6, "Quasi-extreme table rows against ideal channel", sk_table, 1.0},
        {7, "Two-qubit circuit matches closed-form M0/M1", sk_circuit_oracle, 0.0},
        {8, "U_DP proportional to sigma_z", udp_structure, 0.0},
        {9, "Full depolarization gives I/2 in both schemes", endpoints, 0.0},
        {10, "Coherence curves", coherence_curves, 0.0},
        {11, "Tomography round trip", tomography_round_trip, 0.0},
        {12, "Image-integrated tomography accuracy and convergence", image_tomography_convergence, 30.0},
        {13, "Spin-orbit concurrence", concurrence, 0.0},
        {14, "Cross-scheme agreement", cross_scheme, 0.0},
        {15, "CLI determinism", cli_determinism, 0.0},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.time_limit > 0.0 && secs >= c.time_limit) {
            o.pass = false;
            o.detail += fmt(" [over time limit %.0f s]", c.time_limit);
        }
        if (!o.pass) ++failed;
        std::printf("%s  %2d  %-52s %s (%.3f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
