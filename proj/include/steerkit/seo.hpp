#pragma once

// Steering-equivalent observables: B_{a|x} = rho~^{-1/2} sigma~_{a|x} rho~^{-1/2}
// on the range of the reduced state, the canonical class representative
// B_{a|x}/d, and the randomized decision procedure for class equivalence
// (same SEO up to a unitary change of basis).

#include <cstdint>
#include <string>
#include <vector>

#include "steerkit/assemblage.hpp"
#include "steerkit/types.hpp"

namespace steerkit {

struct SeoResult {
    MeasurementAssemblage seo;  // on the rank-d' range space
    CMatrix projector;          // isometry d' x d onto ran(rho_B)
    int rank = 0;
};

struct EquivalenceCertificate {
    enum class Verdict { Equivalent, NotEquivalent, Undetermined };
    Verdict verdict = Verdict::Undetermined;
    CMatrix unitary;     // full-space witness, valid when Equivalent
    double residual = 0.0;
    std::string reason;  // set for NotEquivalent / Undetermined
    std::uint64_t seed = 0;

    bool equivalent() const { return verdict == Verdict::Equivalent; }
};

SeoResult compute_seo(const Assemblage& asmb, double rank_tol, const Tolerances& tol = {});
inline SeoResult compute_seo(const Assemblage& asmb, const Tolerances& tol = {}) {
    return compute_seo(asmb, Tolerances{}.rank_tol, tol);
}

// sigma_{a|x} = B_{a|x} / d' on the range space: the class member steered
// from a maximally entangled state, with maximally mixed reduced state.
Assemblage canonical_representative(const SeoResult& seo);

// Unitary-invariant trace monomials tr(B), tr(BB'), tr(BB'B'') in fixed
// lexicographic order over (a,x) indices; equal fingerprints are necessary
// for class equivalence.
std::vector<double> class_fingerprint(const SeoResult& seo);

// Decide whether two assemblages share an SEO up to a unitary. The witness is
// aligned through seeded random Hermitian combinations of the SEO operators
// and verified independently on every (a,x); degeneracies that survive
// retry_max refreshes yield Undetermined rather than a guess.
EquivalenceCertificate seo_equivalent(const Assemblage& a1, const Assemblage& a2,
                                      std::uint64_t seed, const Tolerances& tol = {});

// Embed an operator family living on the range space back into the ambient
// space through the isometry: sigma -> P^dag sigma P.
Assemblage embed_assemblage(const Assemblage& small, const CMatrix& projector, int ambient_dim);

}  // namespace steerkit
