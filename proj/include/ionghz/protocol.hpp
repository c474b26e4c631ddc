#pragma once

// Five-pulse GHZ preparation and the entanglement-enhanced Ramsey scheme.

#include "ionghz/hilbert.hpp"
#include "ionghz/pulses.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace ionghz {

inline constexpr int kPreparationSteps = 5;

/// carrier pi/2 on ion N, JC pi (n=0) on ion N, dispersive pi (n=1) on all
/// ions, dispersive pi (n=1) on ion N, JC pi (n=0) on ion N.
std::vector<PulseSpec> preparation_sequence(const TrapParams& params, PulseMode mode, double carrier_phase = 0.0);

struct PrepareOptions {
    PulseMode mode = PulseMode::Ideal;
    /// Laser phase of the first pi/2 pulse; sets the relative phase of |J,J>.
    double carrier_phase = 0.0;
    /// Atomic frequency; only used to report the Schroedinger-picture phase.
    std::optional<double> omega0;
};

struct PreparationReport {
    StateVector final_state;
    double fidelity_vs_target = 0.0;
    std::vector<StateVector> step_states;  // after each of the five pulses
    std::array<double, kPreparationSteps> pulse_times{};
    std::optional<double> phi_schroedinger;  // N * omega0 * t5
    PulseMode mode = PulseMode::Ideal;
};

/// Runs the sequence from |J,-J>|0> in frame R. Throws LeakageError if any
/// step puts population on the top Fock level.
PreparationReport prepare_max_entangled(const TrapParams& params, const PrepareOptions& options = {});

/// Closed-form state after preparation step k (1..5), with the exact phase
/// factors that follow from back-to-back pulses ending at `times`.
StateVector analytic_step_state(const TrapParams& params, int step, const std::array<double, kPreparationSteps>& times);

/// 1 - fidelity of each stored step state against its closed form.
std::array<double, kPreparationSteps> verify_trajectory(const PreparationReport& report);

/// Applies the preparation pulses again in reverse order, starting at the
/// state's clock.
StateVector reversed_sequence(StateVector state, PulseMode mode);

struct RamseyConfig {
    std::vector<double> detuning_grid;
    double wait_time = 0.0;
    TrapParams params;
    PulseMode mode = PulseMode::Ideal;
    /// Apply the detuning phase during pulses as well (split half before,
    /// half after each pulse) instead of only during the free wait.
    bool detuning_during_pulses = false;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned workers = 0;
};

struct RamseySample {
    double delta = 0.0;
    double wait_time = 0.0;
    double p_sim = 0.0;
    double p_analytic = 0.0;
};

struct RamseyResult {
    std::vector<RamseySample> samples;
    double max_abs_error = 0.0;
    std::vector<std::string> warnings;
};

struct RamseyRun {
    StateVector final_state;
    double excited_probability = 0.0;
};

/// {1 - (-1)^N cos(N Delta T)} / 2.
double ramsey_probability_analytic(int n_ions, double delta, double wait_time);

/// Closed form of the final Ramsey state at clock t7 = T + 2 t5.
StateVector ramsey_final_state_analytic(const TrapParams& params, double delta, double wait_time, double clock);

/// Set when |Delta| exceeds 1% of the slowest Rabi frequency in the sequence.
std::optional<std::string> ramsey_validity_warning(const TrapParams& params, double delta);

RamseyRun ramsey_run(const RamseyConfig& config, double delta);

/// Samples every grid point; output order follows the grid regardless of how
/// the points are distributed over worker threads.
RamseyResult ramsey_scan(const RamseyConfig& config);

/// First side-fringe maximum (Delta > 0) of the fringe that is certain at
/// Delta = 0: P for odd N, 1 - P for even N. Located as the midpoint of the
/// two half-contrast crossings around it, both root-found on the simulation.
double ramsey_first_fringe_maximum(const TrapParams& params, double wait_time, PulseMode mode = PulseMode::Ideal);

}  // namespace ionghz
