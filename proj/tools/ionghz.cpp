// ionghz: command-line front end for the trapped-ion GHZ simulator.
//
// Exit codes: 0 pass, 1 physics check failed, 2 usage / input error.

#include "ionghz/dense.hpp"
#include "ionghz/io.hpp"
#include "ionghz/protocol.hpp"
#include "ionghz/seqlang.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>
#include <fmt/ostream.h>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

namespace {

using namespace ionghz;

constexpr int kExitPass = 0;
constexpr int kExitPhysics = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CommonFlags {
    int ions = 2;
    double nu = 1.0;
    double eta = 0.1;
    double rabi = 1.0;
    int nmax = 4;
    PulseMode mode = PulseMode::Ideal;
    std::string output;
    std::string format = "csv";
    bool dump_state = false;
    unsigned seed = 12345;

    TrapParams params() const {
        TrapParams p{ions, nu, eta, rabi, nmax};
        try {
            p.validate();
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
        return p;
    }
};

void add_common(CLI::App* app, CommonFlags& flags) {
    const std::map<std::string, PulseMode> modes{{"ideal", PulseMode::Ideal}, {"physical", PulseMode::Physical}};
    app->add_option("--ions", flags.ions, "number of ions N")->capture_default_str();
    app->add_option("--nu", flags.nu, "axial trap frequency")->capture_default_str();
    app->add_option("--eta", flags.eta, "Lamb-Dicke parameter")->capture_default_str();
    app->add_option("--rabi", flags.rabi, "base Rabi frequency")->capture_default_str();
    app->add_option("--nmax", flags.nmax, "Fock cutoff")->capture_default_str();
    app->add_option("--mode", flags.mode, "ideal | physical")
        ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case))
        ->default_str("ideal");
    app->add_option("--output", flags.output, "write data to this file");
    app->add_option("--format", flags.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app->add_flag("--dump-state", flags.dump_state, "print the final state as JSON");
    app->add_option("--seed", flags.seed, "seed for randomized spot checks")->capture_default_str();
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw UsageError("cannot open '" + path + "' for writing");
    }
    return out;
}

std::string fock_text(const std::vector<double>& pops) {
    std::string text;
    for (std::size_t n = 0; n < pops.size(); ++n) {
        text += (n ? " " : "") + fmt::format("{:.6f}", pops[n]);
    }
    return text;
}

void print_trace_table(std::ostream& out, const std::vector<seqlang::TraceEntry>& trace) {
    fmt::print(out, "{:>4}  {:<28}  {:>22}  {:>18}  {}\n", "step", "pulse", "clock", "norm", "fock populations");
    for (const auto& t : trace) {
        fmt::print(out, "{:>4}  {:<28}  {:>22.14e}  {:>18.15f}  {}\n", t.step, t.label, t.clock, t.norm,
                   fock_text(t.fock_populations));
    }
}

void write_trace(const CommonFlags& flags, const std::vector<seqlang::TraceEntry>& trace) {
    if (flags.output.empty()) {
        return;
    }
    auto out = open_output(flags.output);
    if (flags.format == "json") {
        out << io::trace_to_json(trace).dump(2) << '\n';
    } else {
        io::write_trace_csv(out, trace);
    }
}

std::vector<seqlang::TraceEntry> report_trace(const PreparationReport& report) {
    const auto sequence = preparation_sequence(report.final_state.params(), report.mode);
    std::vector<seqlang::TraceEntry> trace;
    for (std::size_t k = 0; k < report.step_states.size(); ++k) {
        const auto& s = report.step_states[k];
        trace.push_back({k + 1, 0, describe(sequence[k]), s.clock(), s.norm(), fock_populations(s)});
    }
    return trace;
}

int cmd_prepare(const CommonFlags& flags, std::optional<double> omega0, double carrier_phase) {
    const TrapParams params = flags.params();
    PrepareOptions options;
    options.mode = flags.mode;
    options.omega0 = omega0;
    options.carrier_phase = carrier_phase;
    const auto report = prepare_max_entangled(params, options);
    const auto trace = report_trace(report);

    print_trace_table(std::cout, trace);
    fmt::print("fidelity: {:.12f}\n", report.fidelity_vs_target);
    if (report.phi_schroedinger) {
        fmt::print("phi: {:.15g}\n", *report.phi_schroedinger);
    }
    write_trace(flags, trace);
    if (flags.dump_state) {
        std::cout << io::state_to_json(report.final_state).dump() << '\n';
    }
    return report.fidelity_vs_target >= 1.0 - 1e-9 ? kExitPass : kExitPhysics;
}

struct ScanFlags {
    double delta_min = 0.0;
    double delta_max = 0.0;
    int points = 41;
    double wait = 1.0;
    unsigned workers = 0;
    bool detuning_during_pulses = false;
};

int cmd_ramsey_scan(const CommonFlags& flags, const ScanFlags& scan) {
    const TrapParams params = flags.params();
    if (scan.points < 1) {
        throw UsageError("--points must be >= 1");
    }
    if (!(scan.wait >= 0.0)) {
        throw UsageError("--wait must be non-negative");
    }
    if (scan.delta_max < scan.delta_min) {
        throw UsageError("--delta-max must not be below --delta-min");
    }
    RamseyConfig config;
    config.params = params;
    config.mode = flags.mode;
    config.wait_time = scan.wait;
    config.workers = scan.workers;
    config.detuning_during_pulses = scan.detuning_during_pulses;
    for (int i = 0; i < scan.points; ++i) {
        const double frac = scan.points == 1 ? 0.0 : static_cast<double>(i) / (scan.points - 1);
        config.detuning_grid.push_back(scan.delta_min + frac * (scan.delta_max - scan.delta_min));
    }

    const auto result = ramsey_scan(config);
    for (const auto& w : result.warnings) {
        std::cerr << "warning: " << w << '\n';
    }

    std::ostringstream data;
    if (flags.format == "json") {
        data << io::ramsey_to_json(result).dump(2) << '\n';
    } else {
        io::write_ramsey_csv(data, result);
    }
    std::ostream* summary = &std::cerr;
    if (flags.output.empty()) {
        std::cout << data.str();
    } else {
        auto out = open_output(flags.output);
        out << data.str();
        summary = &std::cout;
    }
    fmt::print(*summary, "max_abs_error: {:.3e}\n", result.max_abs_error);
    return result.max_abs_error <= 1e-9 ? kExitPass : kExitPhysics;
}

int cmd_run(const CommonFlags& flags, const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot read '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const auto parsed = seqlang::parse(buffer.str());
    for (const auto& d : parsed.diagnostics) {
        std::cerr << path << ':' << d.to_string() << '\n';
    }
    if (!parsed.ok()) {
        return kExitUsage;
    }
    const auto& program = *parsed.program;
    // The program is already validated, so anything thrown here is physics (leakage, norm).
    std::optional<seqlang::ExecutionResult> executed;
    try {
        executed = seqlang::execute(program);
    } catch (const seqlang::ExecutionError& e) {
        std::cerr << path << ':' << e.what() << '\n';
        return kExitPhysics;
    }
    const auto& result = *executed;

    print_trace_table(std::cout, result.trace);
    if (program.frame.tag == FrameTag::R) {
        fmt::print("fidelity: {:.12f}\n", fidelity(result.final_state, target_ghz(program.params, 0.0)));
    }
    write_trace(flags, result.trace);
    if (flags.dump_state) {
        std::cout << io::state_to_json(result.final_state).dump() << '\n';
    }
    return kExitPass;
}

// Random unitarity and dense-oracle agreement for every pulse kind.
double spot_check(const TrapParams& params, PulseMode mode, std::mt19937_64& rng, int samples) {
    std::normal_distribution<double> gauss;
    const auto random_state = [&] {
        StateVector s(params, Frame::atomic());
        double norm = 0.0;
        for (auto& a : s.amplitudes()) {
            a = {gauss(rng), gauss(rng)};
            norm += std::norm(a);
        }
        for (auto& a : s.amplitudes()) {
            a /= std::sqrt(norm);
        }
        return s;
    };
    const int last = params.n_ions;
    const PulseSpec kinds[] = {PulseSpec::carrier_pi_half(last), PulseSpec::jc_pi(last, 0, mode),
                               PulseSpec::dispersive_pi(last, 1, mode), PulseSpec::dispersive_all_pi(1, mode)};
    const bool dense_ok = params.dim() <= 512;
    double worst = 0.0;
    for (const auto& spec : kinds) {
        const DenseMatrix u = dense_ok ? dense_matrix(spec, params, 0.0) : DenseMatrix{};
        for (int k = 0; k < samples; ++k) {
            StateVector s = random_state();
            const DenseVector expected = dense_ok ? DenseVector(u * to_dense(s)) : DenseVector{};
            apply_pulse(s, spec);
            worst = std::max(worst, std::abs(s.norm() - 1.0));
            if (dense_ok) {
                worst = std::max(worst, (to_dense(s) - expected).cwiseAbs().maxCoeff());
            }
        }
    }
    return worst;
}

int cmd_verify(const CommonFlags& flags, int ions_min, int ions_max, double tamper_phase, int samples) {
    if (ions_min < 1 || ions_max < ions_min) {
        throw UsageError("need 1 <= --ions-min <= --ions-max");
    }
    constexpr double tolerance = 1e-10;
    std::mt19937_64 rng(flags.seed);
    bool pass = true;
    fmt::print("{:>4}  {:>10}  {:>10}  {:>10}  {:>10}  {:>10}  {:>10}\n", "N", "step1", "step2", "step3", "step4",
               "step5", "spot");
    for (int n = ions_min; n <= ions_max; ++n) {
        CommonFlags f = flags;
        f.ions = n;
        const TrapParams params = f.params();
        PrepareOptions options;
        options.mode = flags.mode;
        options.carrier_phase = tamper_phase;
        const auto residuals = verify_trajectory(prepare_max_entangled(params, options));
        const double spot = samples > 0 ? spot_check(params, flags.mode, rng, samples) : 0.0;
        fmt::print("{:>4}", n);
        for (double r : residuals) {
            fmt::print("  {:>10.2e}", r);
            pass = pass && r <= tolerance;
        }
        fmt::print("  {:>10.2e}\n", spot);
        pass = pass && spot <= tolerance;
    }
    fmt::print("{}\n", pass ? "all residuals within 1e-10" : "RESIDUAL CHECK FAILED");
    return pass ? kExitPass : kExitPhysics;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trapped-ion GHZ preparation and Ramsey spectroscopy simulator"};
    app.require_subcommand(1);

    CommonFlags flags;

    auto* prepare = app.add_subcommand("prepare", "run the five-pulse GHZ preparation");
    add_common(prepare, flags);
    std::optional<double> omega0;
    double carrier_phase = 0.0;
    prepare->add_option("--omega0", omega0, "atomic frequency, to report phi = N omega0 t5");
    prepare->add_option("--carrier-phase", carrier_phase, "laser phase of the first pi/2 pulse")
        ->capture_default_str();

    auto* scan_cmd = app.add_subcommand("ramsey-scan", "scan the Ramsey fringe over a detuning grid");
    add_common(scan_cmd, flags);
    ScanFlags scan;
    scan_cmd->add_option("--delta-min", scan.delta_min, "first detuning")->capture_default_str();
    scan_cmd->add_option("--delta-max", scan.delta_max, "last detuning")->capture_default_str();
    scan_cmd->add_option("--points", scan.points, "grid size")->capture_default_str();
    scan_cmd->add_option("--wait", scan.wait, "free evolution time T")->capture_default_str();
    scan_cmd->add_option("--workers", scan.workers, "threads (0 = hardware)")->capture_default_str();
    scan_cmd->add_flag("--detuning-during-pulses", scan.detuning_during_pulses,
                       "also accumulate the detuning phase while pulses are on");

    auto* run = app.add_subcommand("run", "execute a .pseq pulse program");
    add_common(run, flags);
    std::string program_path;
    run->add_option("program", program_path, "path to a .pseq file")->required();

    auto* verify = app.add_subcommand("verify", "check preparation residuals against the closed forms");
    add_common(verify, flags);
    int ions_min = 1;
    int ions_max = 8;
    double tamper_phase = 0.0;
    int samples = 10;
    verify->add_option("--ions-min", ions_min, "smallest ion count checked")->capture_default_str();
    verify->add_option("--ions-max", ions_max, "largest ion count checked")->capture_default_str();
    verify->add_option("--tamper-phase", tamper_phase, "test hook: perturb the first pulse's laser phase")
        ->capture_default_str();
    verify->add_option("--samples", samples, "random states per pulse kind in the spot check")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (prepare->parsed()) {
            return cmd_prepare(flags, omega0, carrier_phase);
        }
        if (scan_cmd->parsed()) {
            return cmd_ramsey_scan(flags, scan);
        }
        if (run->parsed()) {
            return cmd_run(flags, program_path);
        }
        if (verify->parsed()) {
            return cmd_verify(flags, ions_min, ions_max, tamper_phase, samples);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const LeakageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitPhysics;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitPhysics;
    }
    return kExitUsage;
}
