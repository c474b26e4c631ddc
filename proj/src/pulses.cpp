#include "ionghz/pulses.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ionghz {

namespace {

using std::numbers::pi;

// Resonant rotation exp(-i (theta/2) (c |e><g| + c* |g><e|)) written as
//   g' = cos * g + to_g * e,   e' = cos * e + to_e * g.
struct Rotation {
    double cos = 1.0;
    complex to_g{};
    complex to_e{};

    bool is_identity() const { return cos == 1.0 && to_g == complex{} && to_e == complex{}; }
};

// `turns` is theta / pi. Common angles are exact so that the ideal pulses
// reproduce their matrices without rounding residue.
Rotation make_rotation(double turns, complex coupling) {
    double c = 0.0;
    double s = 0.0;
    if (turns == 0.0) {
        return {};
    } else if (turns == 1.0) {
        s = 1.0;
    } else if (turns == 0.5) {
        c = s = std::numbers::sqrt2 / 2.0;
    } else {
        c = std::cos(0.5 * pi * turns);
        s = std::sin(0.5 * pi * turns);
    }
    const complex minus_i{0.0, -1.0};
    return {c, minus_i * std::conj(coupling) * s, minus_i * coupling * s};
}

inline void rotate(complex& g, complex& e, const Rotation& r) {
    const complex g0 = g;
    const complex e0 = e;
    g = r.cos * g0 + r.to_g * e0;
    e = r.cos * e0 + r.to_e * g0;
}

// Phase on the raising part of each coupling that makes the pi pulses match
// the textbook forms: carrier/dispersive take |g> -> +|e>, JC takes
// |e,n> -> +i e^{...} |g,n+1>.
complex carrier_coupling(double laser_phase) { return complex{0.0, 1.0} * std::polar(1.0, laser_phase); }
complex jc_coupling(double laser_phase) { return -std::polar(1.0, laser_phase); }

void require_ion(const TrapParams& params, int ion) {
    if (ion < 1 || ion > params.n_ions) {
        throw std::out_of_range("ion " + std::to_string(ion) + " outside [1, " + std::to_string(params.n_ions) + "]");
    }
}

void scale_level(std::span<complex> level, complex factor) {
    for (auto& a : level) {
        a *= factor;
    }
}

void rotate_ion_on_level(std::span<complex> level, std::uint64_t mask, const Rotation& r) {
    for (std::size_t bits = 0; bits < level.size(); ++bits) {
        if (!(bits & mask)) {
            rotate(level[bits], level[bits | mask], r);
        }
    }
}

// Shared body of the Fock-preserving pulses (carrier, dispersive). `turns_at`
// gives theta/pi for Fock level m; `masks` are the ions rotated on each level.
template <typename TurnsAt>
void apply_level_preserving(StateVector& state, std::span<const std::uint64_t> masks, complex coupling,
                            double duration, TurnsAt turns_at) {
    const auto& p = state.params();
    for (int m = 0; m <= p.fock_cutoff; ++m) {
        auto level = state.level(m);
        const Rotation r = make_rotation(turns_at(m), coupling);
        if (!r.is_identity()) {
            for (auto mask : masks) {
                rotate_ion_on_level(level, mask, r);
            }
        }
        if (m != 0) {
            scale_level(level, std::polar(1.0, -p.trap_freq * m * duration));
        }
    }
    state.advance_clock(duration);
}

}  // namespace

const char* to_string(PulseKind kind) {
    switch (kind) {
        case PulseKind::CarrierPiHalf: return "carrier_pi2";
        case PulseKind::JaynesCummingsPi: return "jc_pi";
        case PulseKind::DispersiveSinglePi: return "disp_pi";
        case PulseKind::DispersiveCollectivePi: return "disp_pi_all";
        case PulseKind::Wait: return "wait";
    }
    return "?";
}

const char* to_string(PulseMode mode) {
    return mode == PulseMode::Ideal ? "ideal" : "physical";
}

PulseSpec PulseSpec::carrier_pi_half(int ion, double laser_phase) {
    return {PulseKind::CarrierPiHalf, ion, 0, PulseMode::Ideal, 0.0, laser_phase};
}

PulseSpec PulseSpec::jc_pi(int ion, int n, PulseMode mode, double laser_phase) {
    return {PulseKind::JaynesCummingsPi, ion, n, mode, 0.0, laser_phase};
}

PulseSpec PulseSpec::dispersive_pi(int ion, int n, PulseMode mode, double laser_phase) {
    return {PulseKind::DispersiveSinglePi, ion, n, mode, 0.0, laser_phase};
}

PulseSpec PulseSpec::dispersive_all_pi(int n, PulseMode mode, double laser_phase) {
    return {PulseKind::DispersiveCollectivePi, 0, n, mode, 0.0, laser_phase};
}

PulseSpec PulseSpec::wait(double duration) {
    return {PulseKind::Wait, 0, 0, PulseMode::Ideal, duration, 0.0};
}

std::string describe(const PulseSpec& spec) {
    std::ostringstream out;
    out << to_string(spec.kind);
    switch (spec.kind) {
        case PulseKind::CarrierPiHalf:
            out << " ion=" << spec.target_ion;
            break;
        case PulseKind::JaynesCummingsPi:
        case PulseKind::DispersiveSinglePi:
            out << " ion=" << spec.target_ion << " n=" << spec.target_n << " mode=" << to_string(spec.mode);
            break;
        case PulseKind::DispersiveCollectivePi:
            out << " n=" << spec.target_n << " mode=" << to_string(spec.mode);
            break;
        case PulseKind::Wait:
            out << " T=" << spec.wait_time;
            break;
    }
    return out.str();
}

namespace rabi {

double carrier(const TrapParams& params) { return params.base_rabi; }

double jaynes_cummings(const TrapParams& params, int n) {
    return params.base_rabi * params.lamb_dicke * std::sqrt(static_cast<double>(n + 1)) /
           std::sqrt(static_cast<double>(params.n_ions));
}

double dispersive(const TrapParams& params, int n) {
    return params.base_rabi * params.lamb_dicke * params.lamb_dicke * static_cast<double>(n) /
           static_cast<double>(params.n_ions);
}

}  // namespace rabi

void validate_pulse(const PulseSpec& spec, const TrapParams& params) {
    params.validate();
    const auto require_rabi = [](double omega, const char* what) {
        if (!(omega > 0.0)) {
            throw std::invalid_argument(std::string(what) + " Rabi frequency is zero; pulse duration is infinite");
        }
    };
    switch (spec.kind) {
        case PulseKind::CarrierPiHalf:
            require_ion(params, spec.target_ion);
            require_rabi(rabi::carrier(params), "carrier");
            break;
        case PulseKind::JaynesCummingsPi:
            require_ion(params, spec.target_ion);
            if (spec.target_n < 0) {
                throw std::invalid_argument("Jaynes-Cummings pulse requires n >= 0");
            }
            if (spec.target_n + 1 > params.fock_cutoff) {
                throw std::invalid_argument("Jaynes-Cummings transition n=" + std::to_string(spec.target_n) +
                                            " couples to n+1 beyond the Fock cutoff " +
                                            std::to_string(params.fock_cutoff));
            }
            require_rabi(rabi::jaynes_cummings(params, spec.target_n), "Jaynes-Cummings");
            break;
        case PulseKind::DispersiveSinglePi:
            require_ion(params, spec.target_ion);
            [[fallthrough]];
        case PulseKind::DispersiveCollectivePi:
            if (spec.target_n < 1) {
                throw std::invalid_argument("dispersive pulse requires n >= 1 (its Rabi frequency vanishes at n = 0)");
            }
            if (spec.target_n > params.fock_cutoff) {
                throw std::invalid_argument("dispersive transition n=" + std::to_string(spec.target_n) +
                                            " beyond the Fock cutoff " + std::to_string(params.fock_cutoff));
            }
            require_rabi(rabi::dispersive(params, spec.target_n), "dispersive");
            break;
        case PulseKind::Wait:
            if (!(spec.wait_time >= 0.0) || !std::isfinite(spec.wait_time)) {
                throw std::invalid_argument("wait time must be finite and non-negative");
            }
            break;
    }
}

double pulse_duration(const PulseSpec& spec, const TrapParams& params) {
    validate_pulse(spec, params);
    switch (spec.kind) {
        case PulseKind::CarrierPiHalf: return pi / (2.0 * rabi::carrier(params));
        case PulseKind::JaynesCummingsPi: return pi / rabi::jaynes_cummings(params, spec.target_n);
        case PulseKind::DispersiveSinglePi:
        case PulseKind::DispersiveCollectivePi: return pi / rabi::dispersive(params, spec.target_n);
        case PulseKind::Wait: return spec.wait_time;
    }
    return 0.0;
}

void apply_carrier_pi_half(StateVector& state, int ion, double laser_phase) {
    const auto& p = state.params();
    const double duration = pulse_duration(PulseSpec::carrier_pi_half(ion, laser_phase), p);
    const std::uint64_t mask[] = {std::uint64_t{1} << (ion - 1)};
    apply_level_preserving(state, mask, carrier_coupling(laser_phase), duration, [](int) { return 0.5; });
}

void apply_jc_pulse(StateVector& state, int ion, int target_n, PulseMode mode, double laser_phase) {
    const auto& p = state.params();
    const double duration = pulse_duration(PulseSpec::jc_pi(ion, target_n, mode, laser_phase), p);
    const double omega_target = rabi::jaynes_cummings(p, target_n);
    const double nu = p.trap_freq;
    const double t0 = state.clock();
    const std::uint64_t mask = std::uint64_t{1} << (ion - 1);
    const complex coupling = jc_coupling(laser_phase);
    const std::size_t ion_dim = p.ion_dim();

    // Pairs (|e, m>, |g, m+1>) for m = 0 .. n_max - 1.
    for (int m = 0; m < p.fock_cutoff; ++m) {
        double turns = 0.0;
        if (mode == PulseMode::Ideal) {
            turns = m == target_n ? 1.0 : 0.0;
        } else {
            turns = rabi::jaynes_cummings(p, m) / omega_target;
        }
        const Rotation r = make_rotation(turns, coupling);
        // Frame factors: stay on level k -> e^{-i nu k tp}; e,m -> g,m+1 and
        // g,m+1 -> e,m pick up the cross terms below.
        const complex stay_low = std::polar(1.0, -nu * m * duration);
        const complex stay_high = std::polar(1.0, -nu * (m + 1) * duration);
        const complex down_to_up = std::polar(1.0, -nu * (t0 + (m + 1) * duration));
        const complex up_to_down = std::polar(1.0, nu * (t0 - m * duration));

        auto low = state.level(m);
        auto high = state.level(m + 1);
        for (std::size_t rest = 0; rest < ion_dim; ++rest) {
            if (rest & mask) {
                continue;
            }
            complex& e = low[rest | mask];
            complex& g = high[rest];
            const complex e0 = e;
            const complex g0 = g;
            g = stay_high * r.cos * g0 + down_to_up * r.to_g * e0;
            e = stay_low * r.cos * e0 + up_to_down * r.to_e * g0;
        }
    }

    // Uncoupled corners: |g, 0> keeps its amplitude; |e, n_max> has no partner
    // inside the truncated space and only acquires the free phase.
    const complex top = std::polar(1.0, -nu * p.fock_cutoff * duration);
    auto top_level = state.level(p.fock_cutoff);
    for (std::size_t bits = 0; bits < ion_dim; ++bits) {
        if (bits & mask) {
            top_level[bits] *= top;
        }
    }
    state.advance_clock(duration);
}

void apply_dispersive_single(StateVector& state, int ion, int target_n, PulseMode mode, double laser_phase) {
    const auto& p = state.params();
    const double duration = pulse_duration(PulseSpec::dispersive_pi(ion, target_n, mode, laser_phase), p);
    const std::uint64_t mask[] = {std::uint64_t{1} << (ion - 1)};
    apply_level_preserving(state, mask, carrier_coupling(laser_phase), duration, [&](int m) {
        if (mode == PulseMode::Ideal) {
            return m == target_n ? 1.0 : 0.0;
        }
        return static_cast<double>(m) / static_cast<double>(target_n);
    });
}

void apply_dispersive_collective(StateVector& state, int target_n, PulseMode mode, double laser_phase) {
    const auto& p = state.params();
    const double duration = pulse_duration(PulseSpec::dispersive_all_pi(target_n, mode, laser_phase), p);
    std::vector<std::uint64_t> masks;
    for (int j = 0; j < p.n_ions; ++j) {
        masks.push_back(std::uint64_t{1} << j);
    }
    apply_level_preserving(state, masks, carrier_coupling(laser_phase), duration, [&](int m) {
        if (mode == PulseMode::Ideal) {
            return m == target_n ? 1.0 : 0.0;
        }
        return static_cast<double>(m) / static_cast<double>(target_n);
    });
}

namespace {

void apply_diagonal_phases(StateVector& state, double vib_time, double detuning_time) {
    const auto& p = state.params();
    const double delta = state.frame().detuning;
    std::vector<complex> by_popcount(static_cast<std::size_t>(p.n_ions) + 1);
    for (int k = 0; k <= p.n_ions; ++k) {
        by_popcount[static_cast<std::size_t>(k)] = std::polar(1.0, -delta * detuning_time * k);
    }
    for (int n = 0; n <= p.fock_cutoff; ++n) {
        const complex vib = std::polar(1.0, -p.trap_freq * n * vib_time);
        auto level = state.level(n);
        for (std::size_t bits = 0; bits < level.size(); ++bits) {
            const int k = std::popcount(bits);
            if (n == 0 && (k == 0 || delta == 0.0)) {
                continue;
            }
            level[bits] *= vib * by_popcount[static_cast<std::size_t>(k)];
        }
    }
}

}  // namespace

void free_evolve(StateVector& state, double duration) {
    validate_pulse(PulseSpec::wait(duration), state.params());
    apply_diagonal_phases(state, duration, duration);
    state.advance_clock(duration);
}

void apply_detuning_phase(StateVector& state, double dt) {
    if (state.frame().detuning != 0.0) {
        apply_diagonal_phases(state, 0.0, dt);
    }
}

void apply_pulse(StateVector& state, const PulseSpec& spec) {
    switch (spec.kind) {
        case PulseKind::CarrierPiHalf:
            apply_carrier_pi_half(state, spec.target_ion, spec.laser_phase);
            break;
        case PulseKind::JaynesCummingsPi:
            apply_jc_pulse(state, spec.target_ion, spec.target_n, spec.mode, spec.laser_phase);
            break;
        case PulseKind::DispersiveSinglePi:
            apply_dispersive_single(state, spec.target_ion, spec.target_n, spec.mode, spec.laser_phase);
            break;
        case PulseKind::DispersiveCollectivePi:
            apply_dispersive_collective(state, spec.target_n, spec.mode, spec.laser_phase);
            break;
        case PulseKind::Wait:
            free_evolve(state, spec.wait_time);
            break;
    }
}

void check_leakage(const StateVector& state, double threshold) {
    const auto pops = fock_populations(state);
    if (pops.back() > threshold) {
        std::ostringstream msg;
        msg << "population " << pops.back() << " reached the Fock cutoff n=" << state.params().fock_cutoff
            << "; raise n_max";
        throw LeakageError(msg.str());
    }
}

}  // namespace ionghz
