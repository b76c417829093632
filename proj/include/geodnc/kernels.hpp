#pragma once

#include <span>
#include <vector>

#include "geodnc/lattice.hpp"

namespace geodnc::kernels {

// Amplitude index bit p is the p-th live qubit. All kernels come in a serial
// reference form and an OpenMP form that must agree to rounding.

void apply_matrix_serial(Vector& amps, std::span<const int> positions, const Matrix& m);
void apply_matrix_omp(Vector& amps, std::span<const int> positions, const Matrix& m);

/// Rows are indexed by the bits at `keep`, columns by the remaining bits in
/// ascending position order. rho_keep = X X^+.
Matrix gather_serial(const Vector& amps, int nbits, std::span<const int> keep);
Matrix gather_omp(const Vector& amps, int nbits, std::span<const int> keep);

/// Inverse of gather: writes x back into amps.
void scatter_serial(Vector& amps, std::span<const int> keep, const Matrix& x);
void scatter_omp(Vector& amps, std::span<const int> keep, const Matrix& x);
/// Drops bit `pos`, keeping the half of the amplitudes where it is 0.
Vector project_zero(const Vector& amps, int pos);

/// Sum of |amp|^2 over indices whose bits at `zeros` are all 0.
double weight_with_zeros(const Vector& amps, std::span<const int> zeros);

}  // namespace geodnc::kernels
