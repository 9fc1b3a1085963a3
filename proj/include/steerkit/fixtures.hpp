#pragma once

// Built-in measurement families and assemblages used by the CLI pipelines and
// the test suites: Pauli X/Z qubit pair, mutually unbiased bases in dimension
// three, and a noncommuting four-dimensional projector pair (printed to four
// decimals, so loading applies the symmetric repair).

#include "steerkit/assemblage.hpp"

namespace steerkit {
namespace fixtures {

// {(1 + (-1)^a X)/2}, {(1 + (-1)^a Z)/2} for a in {0, 1}.
MeasurementAssemblage qubit_xz();

// Computational basis and its discrete Fourier transform in dimension d
// (mutually unbiased for prime d).
MeasurementAssemblage mub_pair(int d);

// Two noncommuting rank-one projector pairs on four dimensions, entered to
// four decimal places; `repaired` controls the symmetric cleanup.
MeasurementAssemblage projector_pair_d4(bool repaired = true);

// A^T_{a|x}/d: the assemblage steered from a maximally entangled state.
Assemblage canonical_from_measurements(const MeasurementAssemblage& meas);

// tau^{1/2} A_{a|x} tau^{1/2} for tau = diag(mu_i^2), the partially entangled
// qubit family with X/Z measurements.
Assemblage qubit_partially_entangled(double mu1, double mu2);

// Qutrit family from Schmidt coefficients (mu1, mu2, sqrt(1-mu1^2-mu2^2))
// with the transposed MUB pair on the far side.
Assemblage qutrit_family(double mu1, double mu2);

}  // namespace fixtures
}  // namespace steerkit
