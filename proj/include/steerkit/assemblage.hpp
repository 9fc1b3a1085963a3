#pragma once

// State assemblages {sigma_{a|x}} and measurement assemblages {A_{a|x}}:
// representation, validation, and the standard generators (measurements on a
// shared state, pure Schmidt-form states, local-hidden-state models).

#include <functional>
#include <string>
#include <vector>

#include "steerkit/types.hpp"

namespace steerkit {

struct Scenario {
    int inputs = 0;    // m, settings x
    int outcomes = 0;  // k, results a
    int dim = 0;       // d, trusted-side dimension

    bool operator==(const Scenario& o) const {
        return inputs == o.inputs && outcomes == o.outcomes && dim == o.dim;
    }
};

// Indexed family of d x d operators, stored with a fixed at(a, x) layout.
// Labels are 0-based in code and 1-based in every user-facing message.
struct OperatorFamily {
    Scenario scenario;
    std::vector<CMatrix> ops;  // index x * outcomes + a

    OperatorFamily() = default;
    explicit OperatorFamily(const Scenario& s)
        : scenario(s), ops(static_cast<size_t>(s.inputs) * s.outcomes,
                           CMatrix::Zero(s.dim, s.dim)) {}

    const CMatrix& at(int a, int x) const { return ops[static_cast<size_t>(x) * scenario.outcomes + a]; }
    CMatrix& at(int a, int x) { return ops[static_cast<size_t>(x) * scenario.outcomes + a]; }
};

struct Assemblage : OperatorFamily {
    using OperatorFamily::OperatorFamily;
};

struct MeasurementAssemblage : OperatorFamily {
    using OperatorFamily::OperatorFamily;
};

// Schmidt coefficients of a pure bipartite state, sum of squares = 1.
// Zero coefficients are rejected unless allow_zero is set.
struct SchmidtVector {
    std::vector<double> mu;
    bool allow_zero = false;
};

struct Violation {
    std::string what;
    double magnitude = 0.0;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool passed() const { return violations.empty(); }
    std::string summary() const;
};

ValidationReport validate(const Assemblage& asmb, const Tolerances& tol = {});
ValidationReport validate(const MeasurementAssemblage& meas, const Tolerances& tol = {});

// sigma_{a|x} = tr_A[(A_{a|x} (x) 1) rho_AB], A on the slow tensor factor.
Assemblage from_state_and_measurements(const CMatrix& rho_ab,
                                       const MeasurementAssemblage& meas,
                                       const Tolerances& tol = {});

// sigma_{a|x} = tau^{1/2} B_{a|x} tau^{1/2} with tau = sum_i mu_i^2 |i><i|,
// the assemblage steered from |psi> = sum_i mu_i |ii> by B^T on the far side.
Assemblage from_pure_schmidt(const SchmidtVector& mu, const MeasurementAssemblage& b,
                             const Tolerances& tol = {});

// rho_B = sum_a sigma_{a|x}; throws if the x-slices disagree beyond ns_tol.
CMatrix reduced_state(const Assemblage& asmb, const Tolerances& tol = {});

// sigma_{a|x} = sum_l p(l) p(a|x,l) rho_l, unsteerable by construction.
// response[l][x][a] are the conditional outcome distributions.
Assemblage lhs_from_model(const std::vector<double>& p_lambda,
                          const std::vector<std::vector<std::vector<double>>>& response,
                          const std::vector<CMatrix>& states,
                          const Tolerances& tol = {});

// Symmetric cleanup for fixtures printed to few decimals: clips small negative
// eigenvalues and restores the defining normalization exactly. Returns the
// largest per-operator Frobenius correction applied. Inputs deviating by more
// than repair_tol are rejected.
double repair(MeasurementAssemblage& meas, double repair_tol, const Tolerances& tol = {});
double repair(Assemblage& asmb, double repair_tol, const Tolerances& tol = {});

}  // namespace steerkit
