#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "steerkit/fixtures.hpp"
#include "steerkit/linalg.hpp"
#include "steerkit/seo.hpp"

using namespace steerkit;

namespace {

Assemblage conjugated(const Assemblage& asmb, const CMatrix& u) {
    Assemblage out(asmb.scenario);
    for (size_t i = 0; i < asmb.ops.size(); ++i) out.ops[i] = u * asmb.ops[i] * u.adjoint();
    return out;
}

}  // namespace

TEST_CASE("compute_seo: maximally mixed reduced state rescales the assemblage") {
    MeasurementAssemblage mub = fixtures::mub_pair(3);
    Assemblage canonical = fixtures::canonical_from_measurements(mub);
    SeoResult seo = compute_seo(canonical);
    CHECK(seo.rank == 3);
    // Observables are d * sigma transported to range coordinates.
    for (int x = 0; x < 2; ++x)
        for (int a = 0; a < 3; ++a) {
            CMatrix embedded = seo.projector.adjoint() * seo.seo.at(a, x) * seo.projector;
            CHECK((embedded - 3.0 * canonical.at(a, x)).norm() <= 1e-10);
        }
    CHECK(validate(seo.seo).passed());
}

TEST_CASE("compute_seo: inverts the pure-Schmidt construction") {
    MeasurementAssemblage mub = fixtures::mub_pair(3);
    Assemblage asmb = fixtures::qutrit_family(0.6, 0.5);
    SeoResult seo = compute_seo(asmb);
    CHECK(seo.rank == 3);
    // The observables equal the transposed family up to the (diagonal) basis
    // ordering of the reduced state, so compare through the embedding.
    for (int x = 0; x < 2; ++x)
        for (int a = 0; a < 3; ++a) {
            CMatrix embedded = seo.projector.adjoint() * seo.seo.at(a, x) * seo.projector;
            CHECK((embedded - mub.at(a, x).transpose()).norm() <= 1e-9);
        }
}

TEST_CASE("compute_seo: X/Z family keeps its measurements as observables") {
    Assemblage initial = fixtures::qubit_partially_entangled(0.6, 0.8);
    SeoResult seo = compute_seo(initial);
    MeasurementAssemblage xz = fixtures::qubit_xz();
    for (int x = 0; x < 2; ++x)
        for (int a = 0; a < 2; ++a) {
            CMatrix embedded = seo.projector.adjoint() * seo.seo.at(a, x) * seo.projector;
            CHECK((embedded - xz.at(a, x)).norm() <= 1e-10);
        }
}

TEST_CASE("compute_seo: reconstruction identity on random inputs") {
    Rng rng(41);
    for (int trial = 0; trial < 6; ++trial) {
        const int d = 2 + trial % 3;
        MeasurementAssemblage meas = oracles::random_measurements(2, 2, d, rng);
        CMatrix rho = oracles::random_density(d * d, rng);
        Assemblage asmb = from_state_and_measurements(rho, meas);
        SeoResult seo = compute_seo(asmb);
        CMatrix reduced = reduced_state(asmb);
        CMatrix rho_small = seo.projector * reduced * seo.projector.adjoint();
        CMatrix sqrt_small = sqrt_psd(rho_small);
        for (int x = 0; x < 2; ++x)
            for (int a = 0; a < 2; ++a) {
                CMatrix sigma_small = seo.projector * asmb.at(a, x) * seo.projector.adjoint();
                CHECK((sqrt_small * seo.seo.at(a, x) * sqrt_small - sigma_small).norm() <= 1e-9);
            }
    }
}

TEST_CASE("canonical_representative: maximally mixed reduced state") {
    Assemblage asmb = fixtures::qutrit_family(0.7, 0.5);
    SeoResult seo = compute_seo(asmb);
    Assemblage canonical = canonical_representative(seo);
    CHECK(canonical.scenario.dim == 3);
    CHECK((reduced_state(canonical) - CMatrix::Identity(3, 3) / 3.0).norm() <= 1e-10);
    CHECK(validate(canonical).passed());

    // Single-measurement class: canonical member exists and validates.
    Rng rng(42);
    MeasurementAssemblage single = oracles::random_measurements(1, 3, 3, rng);
    CVector psi = CVector::Zero(9);
    for (int i = 0; i < 3; ++i) psi(i * 3 + i) = 1.0 / std::sqrt(3.0);
    Assemblage from_single = from_state_and_measurements(CMatrix(psi * psi.adjoint()), single);
    CHECK(validate(canonical_representative(compute_seo(from_single))).passed());
}

TEST_CASE("class_fingerprint: unitary invariance and rank-dependent length") {
    Rng rng(43);
    Assemblage asmb = fixtures::qutrit_family(0.6, 0.55);
    CMatrix u = oracles::random_unitary(3, rng);
    auto f1 = class_fingerprint(compute_seo(asmb));
    auto f2 = class_fingerprint(compute_seo(conjugated(asmb, u)));
    REQUIRE(f1.size() == f2.size());
    for (size_t i = 0; i < f1.size(); ++i)
        CHECK(std::abs(f1[i] - f2[i]) <= 1e-9 * std::max(1.0, std::abs(f1[i])));

    // Rank-2 vs rank-3 observables produce fingerprints of different length.
    SchmidtVector rank2;
    rank2.mu = {std::sqrt(0.5), std::sqrt(0.5), 0.0};
    rank2.allow_zero = true;
    MeasurementAssemblage mub = fixtures::mub_pair(3);
    auto f3 = class_fingerprint(compute_seo(from_pure_schmidt(rank2, mub)));
    CHECK(f3.size() != f1.size());
}

TEST_CASE("class_fingerprint: X/Z pair product trace") {
    // Hand value: tr[(1+X)/2 (1+Z)/2] = [tr 1 + tr X + tr Z + tr XZ]/4 = 1/2.
    Assemblage canonical = fixtures::canonical_from_measurements(fixtures::qubit_xz());
    SeoResult seo = compute_seo(canonical);
    CHECK((seo.seo.at(0, 0) * seo.seo.at(0, 1)).trace().real() == doctest::Approx(0.5));
    // Same number sits in the pair section of the fingerprint:
    // [rank][4 traces][8 eigenvalues][pairs...] with pair (t=0, t=2) at slot 2.
    auto fp = class_fingerprint(seo);
    CHECK(fp[1 + 4 + 8 + 2] == doctest::Approx(0.5));
}

TEST_CASE("seo_equivalent: an assemblage is equivalent to itself") {
    Assemblage asmb = fixtures::qutrit_family(0.6, 0.5);
    auto cert = seo_equivalent(asmb, asmb, 7);
    REQUIRE(cert.equivalent());
    CHECK(cert.residual <= 1e-9);
    // The witness commutes with every observable, hence acts as a phase.
    CHECK((cert.unitary.adjoint() * cert.unitary - CMatrix::Identity(3, 3)).norm() <= 1e-9);
}

TEST_CASE("seo_equivalent: recovers a planted unitary up to global phase") {
    Rng rng(44);
    Assemblage asmb = fixtures::qutrit_family(0.65, 0.5);
    CMatrix v = oracles::random_unitary(3, rng);
    Assemblage rotated = conjugated(asmb, v);
    auto cert = seo_equivalent(rotated, asmb, 11);
    REQUIRE(cert.equivalent());
    CHECK(cert.residual <= 1e-7);
    CMatrix rel = cert.unitary.adjoint() * v;
    const Complex phase = rel(0, 0) / std::abs(rel(0, 0));
    CHECK((rel - phase * CMatrix::Identity(3, 3)).norm() <= 1e-6);
}

TEST_CASE("seo_equivalent: partially entangled X/Z family matches its canonical member") {
    Assemblage initial = fixtures::qubit_partially_entangled(0.6, 0.8);
    Assemblage canonical = fixtures::canonical_from_measurements(fixtures::qubit_xz());
    auto cert = seo_equivalent(initial, canonical, 3);
    REQUIRE(cert.equivalent());
    CHECK(cert.residual <= 1e-9);
}

TEST_CASE("seo_equivalent: rank mismatch is refused with a reason") {
    SchmidtVector rank1;
    rank1.mu = {1.0, 0.0};
    rank1.allow_zero = true;
    Assemblage low = from_pure_schmidt(rank1, fixtures::qubit_xz());
    Assemblage full = fixtures::qubit_partially_entangled(0.6, 0.8);
    auto cert = seo_equivalent(low, full, 5);
    CHECK(cert.verdict == EquivalenceCertificate::Verdict::NotEquivalent);
    CHECK(cert.reason.find("rank") != std::string::npos);
}

TEST_CASE("seo_equivalent: distinct classes are separated") {
    Assemblage mub_member = fixtures::canonical_from_measurements(fixtures::mub_pair(3));
    Rng rng(45);
    MeasurementAssemblage other(Scenario{2, 3, 3});
    for (int x = 0; x < 2; ++x) {
        CMatrix u = oracles::random_unitary(3, rng);
        for (int a = 0; a < 3; ++a) other.at(a, x) = u.col(a) * u.col(a).adjoint();
    }
    Assemblage other_member = fixtures::canonical_from_measurements(other);
    auto cert = seo_equivalent(mub_member, other_member, 9);
    CHECK(cert.verdict == EquivalenceCertificate::Verdict::NotEquivalent);
}

TEST_CASE("seo_equivalent: reflexive, symmetric, transitive on a seeded family") {
    Rng rng(46);
    Assemblage base = fixtures::qutrit_family(0.6, 0.5);
    std::vector<Assemblage> family = {base, conjugated(base, oracles::random_unitary(3, rng)),
                                      fixtures::qutrit_family(0.45, 0.7)};
    // All three share the transposed-MUB observables.
    for (const auto& a : family) CHECK(seo_equivalent(a, a, 1).equivalent());
    for (size_t i = 0; i < family.size(); ++i)
        for (size_t j = 0; j < family.size(); ++j) {
            auto forward = seo_equivalent(family[i], family[j], 2);
            auto backward = seo_equivalent(family[j], family[i], 2);
            CHECK(forward.equivalent());
            CHECK(backward.equivalent());
        }
    // Transitivity through explicit witness composition.
    auto c01 = seo_equivalent(family[0], family[1], 3);
    auto c12 = seo_equivalent(family[1], family[2], 3);
    auto c02 = seo_equivalent(family[0], family[2], 3);
    REQUIRE((c01.equivalent() && c12.equivalent() && c02.equivalent()));
    // Composed witness also conjugates observables of 2 onto 0.
    CMatrix composed = c01.unitary * c12.unitary;
    SeoResult s0 = compute_seo(family[0]);
    SeoResult s2 = compute_seo(family[2]);
    for (size_t i = 0; i < s0.seo.ops.size(); ++i) {
        CMatrix b0 = s0.projector.adjoint() * s0.seo.ops[i] * s0.projector;
        CMatrix b2 = s2.projector.adjoint() * s2.seo.ops[i] * s2.projector;
        CHECK((b0 - composed * b2 * composed.adjoint()).norm() <= 1e-6);
    }
}

TEST_CASE("seo_equivalent: equivalent pairs have matching fingerprints") {
    Rng rng(47);
    Assemblage a = fixtures::qutrit_family(0.62, 0.48);
    Assemblage b = conjugated(fixtures::qutrit_family(0.5, 0.57), oracles::random_unitary(3, rng));
    auto cert = seo_equivalent(a, b, 13);
    REQUIRE(cert.equivalent());
    auto fa = class_fingerprint(compute_seo(a));
    auto fb = class_fingerprint(compute_seo(b));
    for (size_t i = 0; i < fa.size(); ++i)
        CHECK(std::abs(fa[i] - fb[i]) <= 1e-7 * std::max(1.0, std::abs(fa[i])));
}
