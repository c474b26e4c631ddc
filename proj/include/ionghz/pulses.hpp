#pragma once

// Laser pulses acting on the ion string, expressed in the rotating frame.
//
// Every pulse of duration tp starting at t0 = state.clock() is applied as
//
//     U = exp(-i nu a^dag a (t0 + tp)) * R * exp(+i nu a^dag a t0)
//
// where R is a resonant two-level rotation in the interaction picture. In
// ideal mode R rotates only the addressed transition (by exactly pi or pi/2)
// and is the identity elsewhere. In physical mode every transition of the same
// type is rotated, by an angle scaled with its own Rabi frequency.

#include "ionghz/hilbert.hpp"

#include <string>

namespace ionghz {

enum class PulseKind { CarrierPiHalf, JaynesCummingsPi, DispersiveSinglePi, DispersiveCollectivePi, Wait };
enum class PulseMode { Ideal, Physical };

const char* to_string(PulseKind kind);
const char* to_string(PulseMode mode);

struct PulseSpec {
    PulseKind kind = PulseKind::Wait;
    int target_ion = 1;    // 1-based; ignored by collective pulses and waits
    int target_n = 0;      // lower Fock number of the addressed transition
    PulseMode mode = PulseMode::Ideal;
    double wait_time = 0.0;    // Wait only; pulse durations follow from the Rabi law
    double laser_phase = 0.0;  // field phase relative to the common origin t = 0

    static PulseSpec carrier_pi_half(int ion, double laser_phase = 0.0);
    static PulseSpec jc_pi(int ion, int n, PulseMode mode = PulseMode::Ideal, double laser_phase = 0.0);
    static PulseSpec dispersive_pi(int ion, int n, PulseMode mode = PulseMode::Ideal, double laser_phase = 0.0);
    static PulseSpec dispersive_all_pi(int n, PulseMode mode = PulseMode::Ideal, double laser_phase = 0.0);
    static PulseSpec wait(double duration);

    bool operator==(const PulseSpec&) const = default;
};

std::string describe(const PulseSpec& spec);

/// Rabi frequencies to leading order in the Lamb-Dicke parameter.
namespace rabi {
double carrier(const TrapParams& params);
/// |g, n+1> <-> |e, n> on one ion: Omega0 * eta * sqrt(n+1) / sqrt(N).
double jaynes_cummings(const TrapParams& params, int n);
/// |g, n> <-> |e, n>, single ion or all ions: Omega0 * eta^2 * n / N.
double dispersive(const TrapParams& params, int n);
}  // namespace rabi

/// Duration of the pulse (pi/2 or pi on its addressed transition), or the
/// wait time. Throws std::invalid_argument when the addressed Rabi frequency
/// is zero.
double pulse_duration(const PulseSpec& spec, const TrapParams& params);

/// Throws if the spec cannot act on this Hilbert space (ion or Fock bounds,
/// zero Rabi frequency, negative wait).
void validate_pulse(const PulseSpec& spec, const TrapParams& params);

void apply_carrier_pi_half(StateVector& state, int ion, double laser_phase = 0.0);
void apply_jc_pulse(StateVector& state, int ion, int target_n, PulseMode mode, double laser_phase = 0.0);
void apply_dispersive_single(StateVector& state, int ion, int target_n, PulseMode mode, double laser_phase = 0.0);
void apply_dispersive_collective(StateVector& state, int target_n, PulseMode mode, double laser_phase = 0.0);

/// Free evolution for time T: exp(-i nu n T) * exp(-i Delta T popcount) per
/// basis state, Delta being the frame detuning.
void free_evolve(StateVector& state, double duration);

/// Detuning phase exp(-i Delta dt popcount) without touching the clock or the
/// mode. Used to model the detuning accumulated while a pulse is on.
void apply_detuning_phase(StateVector& state, double dt);

void apply_pulse(StateVector& state, const PulseSpec& spec);

/// Raised when population reaches the top of the truncated Fock space.
class LeakageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kLeakageThreshold = 1e-10;

/// Throws LeakageError if population at n = n_max exceeds the threshold.
void check_leakage(const StateVector& state, double threshold = kLeakageThreshold);

}  // namespace ionghz
