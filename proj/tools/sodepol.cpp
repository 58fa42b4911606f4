// sodepol command-line driver.
//
//   sodepol run    --scheme compact --state plus --lambdas 0,0.4,0.75,1 --out out/
//   sodepol bloch  --lambda 0.5 --samples 200 --out bloch.csv
//   sodepol sk-table [--json]
//   sodepol trace  --theta 22.5 --state V
//
// exit codes: 0 ok, 2 invalid config, 3 i/o, 4 invariant violation

#include "sodepol/sodepol.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace sodepol;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitInvariant = 4;

int exit_code(Errc c) {
    switch (c) {
        case Errc::IoFailure: return kExitIo;
        case Errc::InvariantViolation:
        case Errc::IncompleteKrausSet:
        case Errc::NonUnitaryU:
        case Errc::WeightOutOfRange:
        case Errc::InconsistentRecord:
        case Errc::UnphysicalStokes:
        case Errc::GridMismatch:
            return kExitInvariant;
        default: return kExitConfig;
    }
}

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(Errc::InvalidConfig, std::string("bad value in ") + what + ": '" + item + "'");
        }
    }
    if (out.empty()) throw Error(Errc::InvalidConfig, std::string(what) + " is empty");
    return out;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoFailure, "cannot read " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::InvalidConfig, path + ": " + e.what());
    }
}

struct RunFlags {
    std::string config;
    std::string scheme;
    std::string state;
    std::string lambdas;
    std::string thetas;
    double phi = 0.0;
    std::string render;
    std::string out;
    std::string formats;
    bool trace = false;
    bool channel_dump = false;
    long long seed = 0;
};

ExperimentConfig build_config(const RunFlags& f, const CLI::App& sub) {
    ExperimentConfig cfg;
    if (!f.config.empty()) cfg = ExperimentConfig::from_json(read_json_file(f.config));

    const auto given = [&](const char* name) { return sub.get_option(name)->count() > 0; };

    if (given("--scheme")) cfg.scheme = parse_scheme(f.scheme);
    if (given("--state")) cfg.initial_state = InitialState::parse(f.state);
    if (given("--lambdas") && given("--thetas"))
        throw Error(Errc::InvalidConfig, "give either --lambdas or --thetas, not both");
    if (given("--lambdas")) cfg.lambda_grid = parse_list(f.lambdas, "--lambdas");
    if (given("--thetas")) {
        if (cfg.scheme != Scheme::Compact) throw Error(Errc::InvalidConfig, "--thetas is for the compact scheme");
        cfg.lambda_grid.clear();
        for (double t : parse_list(f.thetas, "--thetas"))
            cfg.lambda_grid.push_back(lambda_from_theta(t * kPi / 180.0).phys());
    }
    if (given("--phi")) cfg.phi = f.phi;
    if (given("--render")) {
        const auto v = parse_list(f.render, "--render");
        if (v.size() != 2 || v[0] != static_cast<int>(v[0]))
            throw Error(Errc::InvalidConfig, "--render expects N,extent");
        cfg.render = RenderSpec{static_cast<int>(v[0]), v[1]};
    }
    if (given("--out")) cfg.output_dir = f.out;
    if (given("--formats")) {
        cfg.formats.clear();
        std::stringstream ss(f.formats);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) cfg.formats.insert(item);
    }
    if (given("--trace")) cfg.trace = true;
    if (given("--channel-dump")) cfg.channel_dump = true;
    // pgm frames only make sense with rendering on
    if (cfg.wants("pgm") && !cfg.render)
        throw Error(Errc::InvalidConfig, "pgm output needs --render");
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Depolarizing-channel simulator with spin-orbit optical modes"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolkitVersion));

    RunFlags rf;
    auto* run = app.add_subcommand("run", "sweep a lambda grid and write reports");
    run->add_option("--config", rf.config, "JSON config file (flags override it)");
    run->add_option("--scheme", rf.scheme, "compact | solovay_kitaev | ideal_kraus");
    run->add_option("--state", rf.state, "V | plus | custom:a_re,a_im,b_re,b_im");
    run->add_option("--lambdas", rf.lambdas, "comma-separated grid (lambda' for solovay_kitaev)");
    run->add_option("--thetas", rf.thetas, "comma-separated HWP angles in degrees (compact)");
    run->add_option("--phi", rf.phi, "PZT phase, radians");
    run->add_option("--render", rf.render, "render frames: N,extent");
    run->add_option("--out", rf.out, "output directory");
    run->add_option("--formats", rf.formats, "subset of json,csv,pgm");
    run->add_flag("--trace", rf.trace, "write psi-stage traces (compact)");
    run->add_flag("--channel-dump", rf.channel_dump, "write Kraus operators per grid point");
    run->add_option("--seed", rf.seed, "reserved; everything is deterministic");

    double bloch_lambda = 0.0;
    int bloch_samples = 100;
    std::string bloch_out;
    auto* bloch = app.add_subcommand("bloch", "Bloch-sphere contraction samples as CSV");
    bloch->add_option("--lambda", bloch_lambda, "lambda_phys in [0, 1]")->required();
    bloch->add_option("--samples", bloch_samples, "number of unit vectors (>= 8)");
    bloch->add_option("--out", bloch_out, "CSV path (stdout when omitted)");

    bool table_json = false;
    auto* sk_table = app.add_subcommand("sk-table", "quasi-extreme parameter table with consistency check");
    sk_table->add_flag("--json", table_json, "emit JSON instead of text");

    double trace_theta = 0.0;
    double trace_lambda = 0.0;
    double trace_phi = 0.0;
    std::string trace_state = "V";
    std::string trace_out;
    auto* trace = app.add_subcommand("trace", "dump the compact-circuit psi stages as JSON");
    auto* t_opt = trace->add_option("--theta", trace_theta, "HWP angle in degrees");
    auto* l_opt = trace->add_option("--lambda", trace_lambda, "lambda_phys in [0, 1]");
    t_opt->excludes(l_opt);
    trace->add_option("--state", trace_state, "V | plus | custom:a_re,a_im,b_re,b_im");
    trace->add_option("--phi", trace_phi, "PZT phase, radians");
    trace->add_option("--out", trace_out, "JSON path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*run) {
            const ExperimentConfig cfg = build_config(rf, *run);
            const RunReport report = run_experiment(cfg);
            if (cfg.output_dir.empty())
                std::cout << dump_deterministic(report.to_json()) << "\n";
            else
                std::cerr << "wrote " << report.points.size() << " grid points to " << cfg.output_dir.string()
                          << " (config " << report.config_hash << ")\n";
        } else if (*bloch) {
            const auto p = DepolarizingParam::from_phys(bloch_lambda);
            if (bloch_out.empty())
                std::cout << bloch_contraction_csv(p, bloch_samples);
            else
                emit_bloch_contraction(p, bloch_samples, bloch_out);
        } else if (*sk_table) {
            if (table_json)
                std::cout << dump_deterministic(reference_table_json()) << "\n";
            else
                std::cout << reference_table_text();
        } else if (*trace) {
            const InitialState s = InitialState::parse(trace_state);
            CompactCircuitConfig cc;
            cc.theta = l_opt->count() ? theta_from_lambda(trace_lambda) : trace_theta * kPi / 180.0;
            cc.alpha = s.alpha;
            cc.beta = s.beta;
            cc.phi = trace_phi;
            const std::string text = dump_deterministic(to_json(run_compact_circuit(cc))) + "\n";
            if (trace_out.empty()) {
                std::cout << text;
            } else {
                std::ofstream out(trace_out);
                if (!(out << text)) throw Error(Errc::IoFailure, "cannot write " + trace_out);
            }
        }
    } catch (const Error& e) {
        std::cerr << "sodepol: " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "sodepol: internal error: " << e.what() << "\n";
        return kExitInvariant;
    }
    return 0;
}
