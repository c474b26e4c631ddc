#include "ionghz/dense.hpp"

#include <Eigen/Eigenvalues>

#include <bit>
#include <cmath>
#include <numbers>

namespace ionghz {

namespace {

// Adds (theta/2) (c |hi><lo| + c* |lo><hi|) to the generator.
void add_coupling(DenseMatrix& gen, std::size_t lo, std::size_t hi, double theta, complex c) {
    gen(static_cast<Eigen::Index>(hi), static_cast<Eigen::Index>(lo)) += 0.5 * theta * c;
    gen(static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(hi)) += 0.5 * theta * std::conj(c);
}

double level_angle(const PulseSpec& spec, const TrapParams& p, int m) {
    using std::numbers::pi;
    switch (spec.kind) {
        case PulseKind::CarrierPiHalf:
            return pi / 2.0;
        case PulseKind::JaynesCummingsPi:
            if (spec.mode == PulseMode::Ideal) {
                return m == spec.target_n ? pi : 0.0;
            }
            return pi * rabi::jaynes_cummings(p, m) / rabi::jaynes_cummings(p, spec.target_n);
        case PulseKind::DispersiveSinglePi:
        case PulseKind::DispersiveCollectivePi:
            if (spec.mode == PulseMode::Ideal) {
                return m == spec.target_n ? pi : 0.0;
            }
            return pi * rabi::dispersive(p, m) / rabi::dispersive(p, spec.target_n);
        case PulseKind::Wait:
            return 0.0;
    }
    return 0.0;
}

}  // namespace

DenseMatrix dense_matrix(const PulseSpec& spec, const TrapParams& p, double t0, double detuning) {
    validate_pulse(spec, p);
    if (p.dim() > kMaxDenseDim) {
        throw std::invalid_argument("dense matrix limited to dimension " + std::to_string(kMaxDenseDim));
    }
    const auto dim = static_cast<Eigen::Index>(p.dim());
    const std::size_t ion_dim = p.ion_dim();
    const double tp = pulse_duration(spec, p);
    const double nu = p.trap_freq;

    if (spec.kind == PulseKind::Wait) {
        DenseMatrix u = DenseMatrix::Zero(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            const auto idx = basis_index(p, static_cast<std::size_t>(i));
            const double phase = -nu * idx.fock_n * tp - detuning * tp * std::popcount(idx.ion_bits);
            u(i, i) = std::polar(1.0, phase);
        }
        return u;
    }

    const complex i_unit{0.0, 1.0};
    const complex c = spec.kind == PulseKind::JaynesCummingsPi ? -std::polar(1.0, spec.laser_phase)
                                                                : i_unit * std::polar(1.0, spec.laser_phase);

    DenseMatrix gen = DenseMatrix::Zero(dim, dim);
    for (int m = 0; m <= p.fock_cutoff; ++m) {
        const double theta = level_angle(spec, p, m);
        if (theta == 0.0) {
            continue;
        }
        for (std::size_t bits = 0; bits < ion_dim; ++bits) {
            for (int ion = 1; ion <= p.n_ions; ++ion) {
                const bool addressed = spec.kind == PulseKind::DispersiveCollectivePi || ion == spec.target_ion;
                const std::uint64_t mask = std::uint64_t{1} << (ion - 1);
                if (!addressed || (bits & mask)) {
                    continue;
                }
                if (spec.kind == PulseKind::JaynesCummingsPi) {
                    // |g, m+1> <-> |e, m>
                    if (m + 1 > p.fock_cutoff) {
                        continue;
                    }
                    add_coupling(gen, flat_index(p, {bits, m + 1}), flat_index(p, {bits | mask, m}), theta, c);
                } else {
                    add_coupling(gen, flat_index(p, {bits, m}), flat_index(p, {bits | mask, m}), theta, c);
                }
            }
        }
    }

    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(gen);
    const DenseVector phases = (-i_unit * eig.eigenvalues().cast<complex>()).array().exp();
    const DenseMatrix rotation = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();

    DenseVector into(dim);
    DenseVector out(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const int n = basis_index(p, static_cast<std::size_t>(i)).fock_n;
        into(i) = std::polar(1.0, nu * n * t0);
        out(i) = std::polar(1.0, -nu * n * (t0 + tp));
    }
    return out.asDiagonal() * rotation * into.asDiagonal();
}

DenseVector to_dense(const StateVector& state) {
    const auto amps = state.amplitudes();
    DenseVector v(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t i = 0; i < amps.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = amps[i];
    }
    return v;
}

}  // namespace ionghz
