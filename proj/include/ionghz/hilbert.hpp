#pragma once

// Joint Hilbert space of N two-level ions and one truncated vibrational mode.
//
// Amplitudes are stored Fock-major: flat = n * 2^N + ion_bits, where bit
// (j - 1) of ion_bits is set when ion j is in |e>. Every pulse in this
// library is block-diagonal or block-banded in n, so each Fock level is a
// contiguous slice of length 2^N.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace ionghz {

using complex = std::complex<double>;

inline constexpr double kNormTolerance = 1e-12;

/// Trap and laser scales. Angular frequencies are in rad/s (or in units of
/// the trap frequency when trap_freq = 1).
struct TrapParams {
    int n_ions = 1;
    double trap_freq = 1.0;
    double lamb_dicke = 0.1;
    double base_rabi = 1.0;
    int fock_cutoff = 4;

    /// Throws std::invalid_argument on n_ions < 1, fock_cutoff < 1, or
    /// non-finite/negative scales.
    void validate() const;

    std::size_t ion_dim() const { return std::size_t{1} << n_ions; }
    std::size_t fock_dim() const { return static_cast<std::size_t>(fock_cutoff) + 1; }
    std::size_t dim() const { return ion_dim() * fock_dim(); }

    bool operator==(const TrapParams&) const = default;
};

enum class FrameTag { R, RPrime };

/// Rotating frame. R rotates at the atomic frequency (no detuning); R' rotates
/// at the laser frequency, which sits `detuning` = omega0 - omega below it.
struct Frame {
    FrameTag tag = FrameTag::R;
    double reference_freq = 0.0;
    double detuning = 0.0;

    static Frame atomic(double omega0 = 0.0) { return {FrameTag::R, omega0, 0.0}; }
    static Frame laser(double detuning, double omega = 0.0) { return {FrameTag::RPrime, omega, detuning}; }

    void validate() const;
    bool operator==(const Frame&) const = default;
};

const char* to_string(FrameTag tag);

struct BasisIndex {
    std::uint64_t ion_bits = 0;
    int fock_n = 0;

    bool operator==(const BasisIndex&) const = default;
};

std::size_t flat_index(const TrapParams& params, BasisIndex index);
BasisIndex basis_index(const TrapParams& params, std::size_t flat);

/// Pure state of ions + mode in a rotating frame, stamped with the time
/// elapsed since the common laser phase origin t = 0.
class StateVector {
public:
    StateVector(const TrapParams& params, const Frame& frame);

    const TrapParams& params() const { return params_; }
    const Frame& frame() const { return frame_; }
    double clock() const { return clock_; }

    std::span<complex> amplitudes() { return amplitudes_; }
    std::span<const complex> amplitudes() const { return amplitudes_; }

    /// The 2^N amplitudes of Fock level n.
    std::span<complex> level(int n);
    std::span<const complex> level(int n) const;

    complex& operator[](BasisIndex index) { return amplitudes_[flat_index(params_, index)]; }
    const complex& operator[](BasisIndex index) const { return amplitudes_[flat_index(params_, index)]; }

    std::size_t size() const { return amplitudes_.size(); }

    /// Moves the clock forward; dt must be non-negative.
    void advance_clock(double dt);
    /// Replaces the frame detuning while keeping amplitudes (used to reinterpret
    /// a prepared state in the laser frame).
    void set_frame(const Frame& frame);

    double norm() const;

private:
    TrapParams params_;
    Frame frame_;
    double clock_ = 0.0;
    std::vector<complex> amplitudes_;
};

enum class DickeExtreme { Lowest, Highest };

/// All ions in |g>, mode in |0>, clock 0.
StateVector ground_state(const TrapParams& params, const Frame& frame = Frame::atomic());

/// |J,-J>|n> (all ground) or |J,J>|n> (all excited).
StateVector dicke_extreme(const TrapParams& params, DickeExtreme which, int fock_n,
                          const Frame& frame = Frame::atomic());

/// (|J,-J> + e^{i phi}|J,J>)|0> / sqrt(2).
StateVector target_ghz(const TrapParams& params, double phi, const Frame& frame = Frame::atomic());

/// <a|b>. Requires identical params and frame.
complex inner_product(const StateVector& a, const StateVector& b);

/// |<a|b>|^2, clamped to [0, 1].
double fidelity(const StateVector& a, const StateVector& b);

/// Probability that ion `ion` (1-based) is in |e>.
double excited_population(const StateVector& state, int ion);

/// Marginal distribution over the Fock number, length n_max + 1.
std::vector<double> fock_populations(const StateVector& state);

/// Throws std::runtime_error if |norm - 1| exceeds tol.
void check_normalized(const StateVector& state, double tol = kNormTolerance);

}  // namespace ionghz
