#pragma once

// Generator of random valid pulse programs for round-trip property tests.

#include "ionghz/seqlang.hpp"

#include <random>

namespace testgen {

inline ionghz::seqlang::SequenceProgram random_program(std::mt19937_64& rng) {
    using namespace ionghz;
    using namespace ionghz::seqlang;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto between = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const auto real = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
    const auto coin = [&] { return unit(rng) < 0.5; };

    SequenceProgram prog;
    prog.params.n_ions = between(1, 6);
    prog.params.trap_freq = coin() ? 1.0 : real(0.1, 3.0);
    prog.params.lamb_dicke = real(0.01, 0.5);
    prog.params.base_rabi = real(0.1, 5.0);
    prog.params.fock_cutoff = between(2, 6);
    prog.frame = coin() ? Frame::atomic() : Frame::laser(real(-0.05, 0.05));

    const int n_ions = prog.params.n_ions;
    const int nmax = prog.params.fock_cutoff;
    const int steps = between(0, 12);
    for (int k = 0; k < steps; ++k) {
        SequenceStep step;
        const PulseMode mode = coin() ? PulseMode::Ideal : PulseMode::Physical;
        const int ion = between(1, n_ions);
        switch (between(0, 4)) {
            case 0:
                step.spec = PulseSpec::carrier_pi_half(ion, coin() ? 0.0 : real(-3.2, 3.2));
                break;
            case 1:
                step.spec = PulseSpec::jc_pi(ion, between(0, nmax - 1), mode);
                break;
            case 2:
                step.spec = PulseSpec::dispersive_pi(ion, between(1, nmax), mode);
                break;
            case 3:
                step.spec = PulseSpec::dispersive_all_pi(between(1, nmax), mode);
                break;
            default:
                step.spec = PulseSpec::wait(coin() ? 0.0 : real(0.0, 100.0));
                break;
        }
        const bool addresses_ion = step.spec.kind == PulseKind::CarrierPiHalf ||
                                   step.spec.kind == PulseKind::JaynesCummingsPi ||
                                   step.spec.kind == PulseKind::DispersiveSinglePi;
        if (addresses_ion && coin()) {
            step.ion_is_last = true;
            step.spec.target_ion = n_ions;
        }
        prog.steps.push_back(step);
    }
    return prog;
}

}  // namespace testgen
