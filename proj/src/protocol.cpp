#include "ionghz/protocol.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

namespace ionghz {

namespace {

using std::numbers::pi;

std::uint64_t last_ion_mask(const TrapParams& params) {
    return std::uint64_t{1} << (params.n_ions - 1);
}

// Runs one pulse with the leakage guard, optionally wrapping it in the
// detuning phase it would accumulate while on.
void run_pulse(StateVector& state, const PulseSpec& spec, bool detuning_during_pulse) {
    if (detuning_during_pulse && spec.kind != PulseKind::Wait) {
        const double half = 0.5 * pulse_duration(spec, state.params());
        apply_detuning_phase(state, half);
        apply_pulse(state, spec);
        apply_detuning_phase(state, half);
    } else {
        apply_pulse(state, spec);
    }
    check_leakage(state);
}

StateVector prepared_in_frame(const TrapParams& params, PulseMode mode, const Frame& frame, bool detuning_during_pulses) {
    StateVector state = ground_state(params, frame);
    for (const auto& spec : preparation_sequence(params, mode)) {
        run_pulse(state, spec, detuning_during_pulses);
    }
    return state;
}

}  // namespace

std::vector<PulseSpec> preparation_sequence(const TrapParams& params, PulseMode mode, double carrier_phase) {
    const int last = params.n_ions;
    return {
        PulseSpec::carrier_pi_half(last, carrier_phase),
        PulseSpec::jc_pi(last, 0, mode),
        PulseSpec::dispersive_all_pi(1, mode),
        PulseSpec::dispersive_pi(last, 1, mode),
        PulseSpec::jc_pi(last, 0, mode),
    };
}

PreparationReport prepare_max_entangled(const TrapParams& params, const PrepareOptions& options) {
    params.validate();
    StateVector state = ground_state(params);
    std::vector<StateVector> steps;
    std::array<double, kPreparationSteps> times{};
    const auto sequence = preparation_sequence(params, options.mode, options.carrier_phase);
    for (std::size_t k = 0; k < sequence.size(); ++k) {
        run_pulse(state, sequence[k], false);
        check_normalized(state);
        steps.push_back(state);
        times[k] = state.clock();
    }

    PreparationReport report{state, 0.0, std::move(steps), times, std::nullopt, options.mode};
    report.fidelity_vs_target = fidelity(report.final_state, target_ghz(params, options.carrier_phase));
    if (options.omega0) {
        report.phi_schroedinger = params.n_ions * *options.omega0 * times.back();
    }
    return report;
}

StateVector analytic_step_state(const TrapParams& params, int step, const std::array<double, kPreparationSteps>& times) {
    StateVector state(params, Frame::atomic());
    const double amp = std::numbers::sqrt2 / 2.0;
    const std::uint64_t all_excited = params.ion_dim() - 1;
    const std::uint64_t last = last_ion_mask(params);
    const double nu = params.trap_freq;
    const complex i_unit{0.0, 1.0};
    const auto t = [&](int k) { return times[static_cast<std::size_t>(k - 1)]; };

    state[{0, 0}] = amp;
    switch (step) {
        case 1:
            state[{last, 0}] = amp;
            break;
        case 2:
            state[{0, 1}] = amp * i_unit * std::polar(1.0, -nu * t(2));
            break;
        case 3:
            state[{all_excited, 1}] = amp * i_unit * std::polar(1.0, -nu * t(3));
            break;
        case 4:
            state[{all_excited ^ last, 1}] = -amp * i_unit * std::polar(1.0, -nu * t(4));
            break;
        case 5:
            state[{all_excited, 0}] = amp;
            break;
        default:
            throw std::out_of_range("preparation step must be in [1, 5]");
    }
    return state;
}

std::array<double, kPreparationSteps> verify_trajectory(const PreparationReport& report) {
    std::array<double, kPreparationSteps> residuals{};
    const auto& params = report.final_state.params();
    for (int k = 1; k <= kPreparationSteps; ++k) {
        const auto& simulated = report.step_states[static_cast<std::size_t>(k - 1)];
        residuals[static_cast<std::size_t>(k - 1)] =
            1.0 - fidelity(simulated, analytic_step_state(params, k, report.pulse_times));
    }
    return residuals;
}

StateVector reversed_sequence(StateVector state, PulseMode mode) {
    auto sequence = preparation_sequence(state.params(), mode);
    std::reverse(sequence.begin(), sequence.end());
    for (const auto& spec : sequence) {
        run_pulse(state, spec, false);
    }
    return state;
}

double ramsey_probability_analytic(int n_ions, double delta, double wait_time) {
    const double parity = n_ions % 2 == 0 ? 1.0 : -1.0;
    return 0.5 * (1.0 - parity * std::cos(n_ions * delta * wait_time));
}

StateVector ramsey_final_state_analytic(const TrapParams& params, double delta, double wait_time, double clock) {
    StateVector state(params, Frame::laser(delta));
    state.advance_clock(clock);
    const double parity = params.n_ions % 2 == 0 ? 1.0 : -1.0;
    const complex fringe = parity * std::polar(1.0, -params.n_ions * delta * wait_time);
    state[{0, 0}] = 0.5 * (1.0 + fringe);
    state[{last_ion_mask(params), 0}] = 0.5 * (1.0 - fringe);
    return state;
}

std::optional<std::string> ramsey_validity_warning(const TrapParams& params, double delta) {
    const double slowest =
        std::min({rabi::carrier(params), rabi::jaynes_cummings(params, 0), rabi::dispersive(params, 1)});
    if (std::abs(delta) > 0.01 * slowest) {
        std::ostringstream msg;
        msg << "|delta| = " << std::abs(delta) << " is not small against the slowest Rabi frequency " << slowest
            << "; pulse transformations in the laser frame are approximate";
        return msg.str();
    }
    return std::nullopt;
}

RamseyRun ramsey_run(const RamseyConfig& config, double delta) {
    const Frame frame = Frame::laser(delta);
    StateVector state = prepared_in_frame(config.params, config.mode, frame, config.detuning_during_pulses);
    free_evolve(state, config.wait_time);
    auto sequence = preparation_sequence(config.params, config.mode);
    std::reverse(sequence.begin(), sequence.end());
    for (const auto& spec : sequence) {
        run_pulse(state, spec, config.detuning_during_pulses);
    }
    const double p = excited_population(state, config.params.n_ions);
    return {std::move(state), p};
}

RamseyResult ramsey_scan(const RamseyConfig& config) {
    if (config.detuning_grid.empty()) {
        throw std::invalid_argument("Ramsey scan needs at least one detuning");
    }
    config.params.validate();
    const std::size_t points = config.detuning_grid.size();
    RamseyResult result;
    result.samples.resize(points);

    for (double delta : config.detuning_grid) {
        if (auto warning = ramsey_validity_warning(config.params, delta)) {
            result.warnings.push_back(*warning);
            break;
        }
    }

    unsigned workers = config.workers != 0 ? config.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, points));

    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < points; i += workers) {
                        const double delta = config.detuning_grid[i];
                        const auto run = ramsey_run(config, delta);
                        result.samples[i] = {delta, config.wait_time, run.excited_probability,
                                             ramsey_probability_analytic(config.params.n_ions, delta, config.wait_time)};
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& error : errors) {
        if (error) {
            std::rethrow_exception(error);
        }
    }

    for (const auto& s : result.samples) {
        result.max_abs_error = std::max(result.max_abs_error, std::abs(s.p_sim - s.p_analytic));
    }
    return result;
}

double ramsey_first_fringe_maximum(const TrapParams& params, double wait_time, PulseMode mode) {
    params.validate();
    if (!(wait_time > 0.0)) {
        throw std::invalid_argument("fringe maximum needs a positive wait time");
    }
    RamseyConfig config;
    config.params = params;
    config.wait_time = wait_time;
    config.mode = mode;
    const bool even = params.n_ions % 2 == 0;
    const auto fringe = [&](double delta) {
        const double p = ramsey_run(config, delta).excited_probability;
        return (even ? 1.0 - p : p) - 0.5;
    };

    // Walk out from the central fringe in steps of 1/32 of the expected
    // N-ion fringe period, collecting the first three half-contrast crossings.
    const double step = 2.0 * pi / (32.0 * params.n_ions * wait_time);
    std::vector<std::pair<double, double>> brackets;
    double prev_delta = 0.0;
    double prev_value = fringe(0.0);
    for (int k = 1; k <= 32 * 4 && brackets.size() < 3; ++k) {
        const double delta = k * step;
        const double value = fringe(delta);
        if ((prev_value > 0.0) != (value > 0.0)) {
            brackets.emplace_back(prev_delta, delta);
        }
        prev_delta = delta;
        prev_value = value;
    }
    if (brackets.size() < 3) {
        throw std::runtime_error("could not bracket the first side fringe");
    }

    const auto crossing = [&](std::pair<double, double> bracket) {
        std::uintmax_t iterations = 200;
        const auto root = boost::math::tools::toms748_solve(fringe, bracket.first, bracket.second,
                                                            boost::math::tools::eps_tolerance<double>(52), iterations);
        return 0.5 * (root.first + root.second);
    };
    return 0.5 * (crossing(brackets[1]) + crossing(brackets[2]));
}

}  // namespace ionghz
