#pragma once

// Local filters on the trusted side: application, exact synthesis between
// class-equivalent assemblages, success-probability bounds, distillation to
// the class supremum, dilution to near-zero steerability, and the
// measurement-matched optimal state construction.

#include <cstdint>
#include <utility>

#include "steerkit/assemblage.hpp"
#include "steerkit/robustness.hpp"
#include "steerkit/seo.hpp"
#include "steerkit/types.hpp"

namespace steerkit {

enum class FilterKind { Synthesized, Distill, Dilute, Custom };

const char* to_string(FilterKind k);

// Single Kraus operator K with K^dag K <= 1, applied with postselection;
// p_succ = tr(rho_source K^dag K) is certified at construction time.
struct Filter {
    CMatrix kraus;
    double p_succ = 1.0;
    FilterKind kind = FilterKind::Custom;
    std::uint64_t seed = 0;
};

// sigma -> K sigma K^dag / p_succ. Throws FilterAnnihilatesError when the
// success probability falls below p_floor.
std::pair<Assemblage, double> apply_filter(const Assemblage& asmb, const CMatrix& kraus,
                                           const Tolerances& tol = {});

// Exact filter carrying `source` onto `target`, given the unitary witness of
// their class equivalence: K = alpha * rho_t^{1/2} U rho_s^{-1/2} completed
// isometrically on the source kernel, with alpha maximal under K^dag K <= 1.
// The resulting success probability is 1 / lambda_max(rho_s^{-1/2} U^dag
// rho_t U rho_s^{-1/2}).
Filter synthesize_filter(const Assemblage& target, const Assemblage& source, const CMatrix& u,
                         const Tolerances& tol = {});

// Spectral bounds on the synthesized success probability:
//   lambda_min(rho_source)/lambda_max(rho_target) <= p <= lambda_max(rho_source)/lambda_min(rho_target)
// with lambda_min the smallest nonzero eigenvalue.
std::pair<double, double> p_succ_bounds(const CMatrix& rho_target, const CMatrix& rho_source,
                                        const Tolerances& tol = {});

struct DistillResult {
    Filter filter;
    Assemblage output;
    double certified_sr = 0.0;     // steering robustness of the output, re-solved
    double class_supremum = 0.0;   // incompatibility robustness of the SEO
    CMatrix eta;                   // reduced state of the output on the range space
};

// Filter to a class member whose steerability reaches the class supremum
// within eps, certified a posteriori by re-solving the robustness of the
// constructed target.
DistillResult distill_to_sup(const Assemblage& asmb, double eps, const Tolerances& tol = {});

struct DiluteResult {
    Filter filter;
    Assemblage output;
    double er_bound = 0.0;  // random entanglement robustness of the source state
};

// Filter to a class member with steering robustness at most eps, built from a
// weakly entangled pure state with the same observables.
DiluteResult dilute_to_inf(const Assemblage& asmb, double eps, const Tolerances& tol = {});

// mu_1 mu_2 d_A d_B for the two largest Schmidt coefficients: the random
// entanglement robustness of the pure state, an upper bound on the
// steerability of any assemblage it generates.
double er_random_pure(const SchmidtVector& mu, int dA, int dB);

struct OptimalStateResult {
    CMatrix rho_ab;         // (d*d) x (d*d) bipartite state
    Assemblage assemblage;  // steered from rho_ab by the given measurements
    double certified_sr = 0.0;
    double ir_value = 0.0;
};

// Bipartite state whose assemblage under the given measurements has steering
// robustness within eps of the incompatibility robustness of those
// measurements: rho = d (1 (x) eta_eps^{1/2}) |psi><psi| (1 (x) eta_eps^{1/2}).
OptimalStateResult optimal_state(const MeasurementAssemblage& meas, double eps,
                                 const Tolerances& tol = {});

// Full-rank regularization of a witness reduced state:
// (1-delta) eta + delta (1 - P_eta) / (d - r); returns eta unchanged when it
// is already full rank.
CMatrix regularize_eta(const CMatrix& eta, double delta, const Tolerances& tol = {});

}  // namespace steerkit
