#pragma once

// Steering robustness, incompatibility robustness, membership tests, and the
// witness transform between them. Both robustness measures are solved through
// their dual witness programs:
//
//   1 + SR(sigma) = max_F  sum tr(F_{a|x} sigma_{a|x})
//                   s.t.   1 >= sum_{a,x} D(a|x,l) F_{a|x}  for all l,
//                          F_{a|x} >= 0
//
//   1 + IR(B)     = max_{w,eta} sum tr(w_{a|x} B_{a|x})
//                   s.t.   eta >= sum_{a,x} D(a|x,l) w_{a|x} for all l,
//                          w_{a|x} >= 0, tr(eta) = 1
//
// assembled in the conic standard form with one PSD block per deterministic
// strategy plus one per positivity constraint; complex Hermitian operators
// are embedded as 2d x 2d real symmetric blocks throughout.

#include <string>
#include <vector>

#include "steerkit/assemblage.hpp"
#include "steerkit/sdp.hpp"
#include "steerkit/types.hpp"

namespace steerkit {

// Deterministic classical strategies: table[l][x] = a, |l| = k^m, enumerated
// lexicographically with x = 0 as the most significant digit.
struct DeterministicStrategySet {
    Scenario scenario;
    std::vector<std::vector<int>> table;
};

DeterministicStrategySet enumerate_deterministic(const Scenario& scenario,
                                                 int strategy_cap = Tolerances{}.strategy_cap);

struct RobustnessReport {
    double value = 0.0;              // SR or IR, >= 0
    std::vector<CMatrix> witness;    // F (steering) or omega (incompatibility), index x*k+a
    CMatrix eta;                     // incompatibility only; empty otherwise
    double duality_gap = 0.0;
    double primal_infeasibility = 0.0;
    double dual_infeasibility = 0.0;
    int iterations = 0;
    std::string status;

    const CMatrix& witness_at(int a, int x, const Scenario& sc) const {
        return witness[static_cast<size_t>(x) * sc.outcomes + a];
    }
};

// Problem builders, exposed so instances can be exported to SDPA text for
// independent cross-validation. The assembled objective is -(1 + value).
SdpProblem build_sr_problem(const Assemblage& asmb, const Tolerances& tol = {});
SdpProblem build_ir_problem(const MeasurementAssemblage& meas, const Tolerances& tol = {});

// Reconstruct witness operators from a solved problem's variable vector.
RobustnessReport decode_sr_solution(const Assemblage& asmb, const SdpSolution& sol);
RobustnessReport decode_ir_solution(const MeasurementAssemblage& meas, const SdpSolution& sol);

RobustnessReport steering_robustness(const Assemblage& asmb, const Tolerances& tol = {});
RobustnessReport incompatibility_robustness(const MeasurementAssemblage& meas,
                                            const Tolerances& tol = {});

bool is_lhs(const Assemblage& asmb, const Tolerances& tol = {});
bool is_jointly_measurable(const MeasurementAssemblage& meas, const Tolerances& tol = {});

// Map a feasible incompatibility witness to a steering witness
// (F = eta^{-1/2} w eta^{-1/2}) or back (w = eta^{1/2} F eta^{1/2}).
// Rank-deficient eta restricts the transform to its range. The objective
// value is preserved; infeasible inputs are rejected.
enum class WitnessDirection { IncompatibilityToSteering, SteeringToIncompatibility };

std::vector<CMatrix> witness_transform(const std::vector<CMatrix>& family, const CMatrix& eta,
                                       WitnessDirection direction, const Scenario& scenario,
                                       const Tolerances& tol = {});

// Largest steering robustness reachable in the filter-equivalence class of
// the input: the incompatibility robustness of its steering-equivalent
// observables. Never optimized directly over reduced states (that problem is
// not an SDP).
double class_supremum(const Assemblage& asmb, const Tolerances& tol = {});

// Orthonormal Hermitian operator basis used by the SDP assembly; element b of
// dimension d (d*d elements total: diagonal units first, then paired
// real/imaginary off-diagonal elements).
CMatrix hermitian_basis_element(int d, int b);

}  // namespace steerkit
