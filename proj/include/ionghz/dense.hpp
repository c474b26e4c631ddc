#pragma once

// Brute-force pulse unitaries, for checking the matrix-free kernels.
//
// The matrix is assembled from the interaction Hamiltonian and exponentiated
// through a Hermitian eigendecomposition, then sandwiched between the
// free-evolution diagonals of the rotating frame.

#include "ionghz/pulses.hpp"

#include <Eigen/Dense>

namespace ionghz {

using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;

inline constexpr std::size_t kMaxDenseDim = 4096;

/// Unitary of `spec` starting at time t0. `detuning` only affects waits.
/// Throws std::invalid_argument if the space exceeds kMaxDenseDim.
DenseMatrix dense_matrix(const PulseSpec& spec, const TrapParams& params, double t0, double detuning = 0.0);

DenseVector to_dense(const StateVector& state);

}  // namespace ionghz
