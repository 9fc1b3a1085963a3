#pragma once

// Dense complex Hermitian primitives: eigendecomposition, PSD square roots,
// pseudo-inverse square roots, range projections, and partial traces.
// Everything is a pure function of its inputs.

#include <utility>

#include "steerkit/types.hpp"

namespace steerkit {

struct SpectralDecomposition {
    RVector eigenvalues;   // ascending
    CMatrix eigenvectors;  // unitary, columns match eigenvalues
};

bool is_hermitian(const CMatrix& m, double herm_tol = Tolerances{}.herm_tol);

// Throws NotHermitianError when the input fails the (relative) Hermiticity
// check. Eigenvalues come back ascending; the reconstruction residual is
// bounded by spec_tol in all supported dimensions.
SpectralDecomposition eig_hermitian(const CMatrix& m, const Tolerances& tol = {});

// Unique PSD square root. Eigenvalues in [-psd_tol, 0) are clamped to zero;
// anything below -psd_tol raises NotPsdError.
CMatrix sqrt_psd(const CMatrix& m, const Tolerances& tol = {});

// M^{-1/2} inverted on the range of M (eigenvalues > rank_tol * lambda_max)
// and zero on the orthogonal complement. Returns the operator and the rank.
std::pair<CMatrix, int> pinv_sqrt(const CMatrix& m, double rank_tol,
                                  const Tolerances& tol = {});
inline std::pair<CMatrix, int> pinv_sqrt(const CMatrix& m, const Tolerances& tol = {}) {
    return pinv_sqrt(m, Tolerances{}.rank_tol, tol);
}

// Isometry P: H -> K onto the range of a PSD operator, returned as an
// r x d matrix with P P^dag = 1_r and P^dag P the Hermitian projector on ran(M).
std::pair<CMatrix, int> range_projector(const CMatrix& m, double rank_tol,
                                        const Tolerances& tol = {});
inline std::pair<CMatrix, int> range_projector(const CMatrix& m, const Tolerances& tol = {}) {
    return range_projector(m, Tolerances{}.rank_tol, tol);
}

// Trace out the first (slow) tensor factor of a (dA*dB) x (dA*dB) operator.
CMatrix partial_trace_A(const CMatrix& rho_ab, int dA, int dB);

// Kronecker product with the left factor on the slow index.
CMatrix kron(const CMatrix& a, const CMatrix& b);

// Largest / smallest eigenvalue helpers for Hermitian input.
double lambda_max(const CMatrix& m, const Tolerances& tol = {});
double lambda_min_nonzero(const CMatrix& m, double rank_tol, const Tolerances& tol = {});

}  // namespace steerkit
