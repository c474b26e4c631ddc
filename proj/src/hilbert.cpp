#include "ionghz/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ionghz {

namespace {

constexpr int kMaxIons = 24;

void require_compatible(const StateVector& a, const StateVector& b) {
    if (!(a.params() == b.params())) {
        throw std::invalid_argument("states live in different Hilbert spaces");
    }
    if (!(a.frame() == b.frame())) {
        throw std::invalid_argument("states are expressed in different rotating frames");
    }
}

}  // namespace

void TrapParams::validate() const {
    if (n_ions < 1) {
        throw std::invalid_argument("n_ions must be >= 1, got " + std::to_string(n_ions));
    }
    if (n_ions > kMaxIons) {
        throw std::invalid_argument("n_ions must be <= " + std::to_string(kMaxIons));
    }
    if (fock_cutoff < 1) {
        throw std::invalid_argument("fock_cutoff must be >= 1, got " + std::to_string(fock_cutoff));
    }
    if (!std::isfinite(trap_freq) || trap_freq < 0.0) {
        throw std::invalid_argument("trap_freq must be finite and non-negative");
    }
    if (!std::isfinite(lamb_dicke) || lamb_dicke < 0.0) {
        throw std::invalid_argument("lamb_dicke must be finite and non-negative");
    }
    if (!std::isfinite(base_rabi) || base_rabi < 0.0) {
        throw std::invalid_argument("base_rabi must be finite and non-negative");
    }
}

void Frame::validate() const {
    if (!std::isfinite(detuning)) {
        throw std::invalid_argument("frame detuning must be finite");
    }
    if (tag == FrameTag::R && detuning != 0.0) {
        throw std::invalid_argument("frame R has zero detuning by definition");
    }
}

const char* to_string(FrameTag tag) {
    return tag == FrameTag::R ? "R" : "Rprime";
}

std::size_t flat_index(const TrapParams& params, BasisIndex index) {
    if (index.fock_n < 0 || index.fock_n > params.fock_cutoff) {
        throw std::out_of_range("Fock number " + std::to_string(index.fock_n) + " outside [0, " +
                                std::to_string(params.fock_cutoff) + "]");
    }
    if (index.ion_bits >= params.ion_dim()) {
        throw std::out_of_range("ion word has bits beyond ion " + std::to_string(params.n_ions));
    }
    return static_cast<std::size_t>(index.fock_n) * params.ion_dim() + index.ion_bits;
}

BasisIndex basis_index(const TrapParams& params, std::size_t flat) {
    if (flat >= params.dim()) {
        throw std::out_of_range("flat index " + std::to_string(flat) + " outside state vector");
    }
    return {flat % params.ion_dim(), static_cast<int>(flat / params.ion_dim())};
}

StateVector::StateVector(const TrapParams& params, const Frame& frame)
    : params_(params), frame_(frame) {
    params_.validate();
    frame_.validate();
    amplitudes_.assign(params_.dim(), complex{});
}

std::span<complex> StateVector::level(int n) {
    return std::span<complex>(amplitudes_).subspan(flat_index(params_, {0, n}), params_.ion_dim());
}

std::span<const complex> StateVector::level(int n) const {
    return std::span<const complex>(amplitudes_).subspan(flat_index(params_, {0, n}), params_.ion_dim());
}

void StateVector::advance_clock(double dt) {
    if (!(dt >= 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("clock can only move forward by a finite amount");
    }
    clock_ += dt;
}

void StateVector::set_frame(const Frame& frame) {
    frame.validate();
    frame_ = frame;
}

double StateVector::norm() const {
    double sum = 0.0;
    for (const auto& a : amplitudes_) {
        sum += std::norm(a);
    }
    return std::sqrt(sum);
}

StateVector ground_state(const TrapParams& params, const Frame& frame) {
    return dicke_extreme(params, DickeExtreme::Lowest, 0, frame);
}

StateVector dicke_extreme(const TrapParams& params, DickeExtreme which, int fock_n, const Frame& frame) {
    StateVector state(params, frame);
    const std::uint64_t bits = which == DickeExtreme::Lowest ? 0 : params.ion_dim() - 1;
    state[{bits, fock_n}] = 1.0;
    return state;
}

StateVector target_ghz(const TrapParams& params, double phi, const Frame& frame) {
    StateVector state(params, frame);
    const double amp = std::numbers::sqrt2 / 2.0;
    state[{0, 0}] = amp;
    state[{params.ion_dim() - 1, 0}] = std::polar(amp, phi);
    return state;
}

complex inner_product(const StateVector& a, const StateVector& b) {
    require_compatible(a, b);
    complex sum{};
    const auto lhs = a.amplitudes();
    const auto rhs = b.amplitudes();
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        sum += std::conj(lhs[i]) * rhs[i];
    }
    return sum;
}

double fidelity(const StateVector& a, const StateVector& b) {
    return std::clamp(std::norm(inner_product(a, b)), 0.0, 1.0);
}

double excited_population(const StateVector& state, int ion) {
    const int n_ions = state.params().n_ions;
    if (ion < 1 || ion > n_ions) {
        throw std::out_of_range("ion index " + std::to_string(ion) + " outside [1, " + std::to_string(n_ions) + "]");
    }
    const std::uint64_t mask = std::uint64_t{1} << (ion - 1);
    const auto amps = state.amplitudes();
    const std::size_t ion_dim = state.params().ion_dim();
    double p = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i % ion_dim) & mask) {
            p += std::norm(amps[i]);
        }
    }
    return std::clamp(p, 0.0, 1.0);
}

std::vector<double> fock_populations(const StateVector& state) {
    std::vector<double> pops(state.params().fock_dim(), 0.0);
    for (int n = 0; n <= state.params().fock_cutoff; ++n) {
        for (const auto& a : state.level(n)) {
            pops[static_cast<std::size_t>(n)] += std::norm(a);
        }
    }
    return pops;
}

void check_normalized(const StateVector& state, double tol) {
    const double norm = state.norm();
    if (std::abs(norm - 1.0) > tol) {
        throw std::runtime_error("state norm drifted to " + std::to_string(norm));
    }
}

}  // namespace ionghz
