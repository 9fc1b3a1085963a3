#include <doctest.h>

#include "oracles.hpp"
#include "steerkit/linalg.hpp"
#include "steerkit/rng.hpp"

using namespace steerkit;

TEST_CASE("eig_hermitian: identity and diagonal inputs") {
    auto dec = eig_hermitian(CMatrix::Identity(2, 2));
    CHECK(dec.eigenvalues(0) == doctest::Approx(1.0));
    CHECK(dec.eigenvalues(1) == doctest::Approx(1.0));

    CMatrix d = CMatrix::Zero(3, 3);
    d(0, 0) = 0.09;
    d(1, 1) = 0.16;
    d(2, 2) = 0.75;
    auto dd = eig_hermitian(d);
    CHECK(dd.eigenvalues(0) == doctest::Approx(0.09));
    CHECK(dd.eigenvalues(1) == doctest::Approx(0.16));
    CHECK(dd.eigenvalues(2) == doctest::Approx(0.75));
}

TEST_CASE("eig_hermitian: reconstruction residual on random input") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        CMatrix m = oracles::random_hermitian(4, rng);
        auto dec = eig_hermitian(m);
        CMatrix rebuilt = dec.eigenvectors * dec.eigenvalues.asDiagonal() *
                          dec.eigenvectors.adjoint();
        CHECK((m - rebuilt).norm() <= 1e-10 * std::max(1.0, m.norm()));
        CHECK((dec.eigenvectors.adjoint() * dec.eigenvectors -
               CMatrix::Identity(4, 4)).norm() <= 1e-12);
        for (int i = 1; i < 4; ++i)
            CHECK(dec.eigenvalues(i) >= dec.eigenvalues(i - 1));
    }
}

TEST_CASE("eig_hermitian: rejects non-Hermitian input") {
    CMatrix m(2, 2);
    m << 1.0, 2.0, 3.0, 4.0;
    CHECK_THROWS_AS(eig_hermitian(m), NotHermitianError);
}

TEST_CASE("eig_hermitian: eigenvalues invariant under unitary conjugation") {
    Rng rng(12);
    CMatrix m = oracles::random_hermitian(4, rng);
    CMatrix u = oracles::random_unitary(4, rng);
    auto a = eig_hermitian(m);
    auto b = eig_hermitian(CMatrix(u * m * u.adjoint()));
    CHECK((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("sqrt_psd: identity, diagonal, and the squared-root property") {
    CHECK((sqrt_psd(CMatrix::Identity(3, 3)) - CMatrix::Identity(3, 3)).norm() <= 1e-12);

    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = 4.0;
    d(1, 1) = 9.0;
    CMatrix r = sqrt_psd(d);
    CHECK(r(0, 0).real() == doctest::Approx(2.0));
    CHECK(r(1, 1).real() == doctest::Approx(3.0));

    // tau = diag(mu1^2, mu2^2) -> diag(mu1, mu2)
    CMatrix tau = CMatrix::Zero(2, 2);
    tau(0, 0) = 0.36;
    tau(1, 1) = 0.64;
    CMatrix rt = sqrt_psd(tau);
    CHECK(rt(0, 0).real() == doctest::Approx(0.6));
    CHECK(rt(1, 1).real() == doctest::Approx(0.8));

    Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        CMatrix g = oracles::random_ginibre(4, 4, rng);
        CMatrix psd = g * g.adjoint();
        CMatrix s = sqrt_psd(psd);
        CHECK((s * s - psd).norm() <= 1e-9 * std::max(1.0, psd.norm()));
    }
}

TEST_CASE("sqrt_psd: rejects indefinite input") {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -0.5;
    CHECK_THROWS_AS(sqrt_psd(m), NotPsdError);
}

TEST_CASE("pinv_sqrt: maximally mixed, rank-deficient, and qutrit tau") {
    auto [r1, rank1] = pinv_sqrt(CMatrix(CMatrix::Identity(3, 3) / 3.0));
    CHECK(rank1 == 3);
    CHECK((r1 - std::sqrt(3.0) * CMatrix::Identity(3, 3)).norm() <= 1e-10);

    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = 1.0;
    auto [r2, rank2] = pinv_sqrt(d);
    CHECK(rank2 == 1);
    CHECK((r2 - d).norm() <= 1e-12);

    CMatrix tau = CMatrix::Zero(3, 3);
    tau(0, 0) = 0.25;
    tau(1, 1) = 0.25;
    tau(2, 2) = 0.5;
    auto [r3, rank3] = pinv_sqrt(tau);
    CHECK(rank3 == 3);
    CHECK(r3(0, 0).real() == doctest::Approx(2.0));
    CHECK(r3(2, 2).real() == doctest::Approx(std::sqrt(2.0)));

    CHECK_THROWS_AS(pinv_sqrt(CMatrix(CMatrix::Zero(2, 2))), ZeroOperatorError);
}

TEST_CASE("pinv_sqrt: M^{-1/2} M M^{-1/2} equals the range projector") {
    Rng rng(14);
    for (int trial = 0; trial < 10; ++trial) {
        CMatrix g = oracles::random_ginibre(4, 2, rng);  // rank 2 PSD
        CMatrix m = g * g.adjoint();
        auto [inv_sqrt, rank] = pinv_sqrt(m);
        CHECK(rank == 2);
        auto [iso, rank2] = range_projector(m);
        CMatrix proj = iso.adjoint() * iso;
        CHECK((inv_sqrt * m * inv_sqrt - proj).norm() <= 1e-9);
    }
}

TEST_CASE("range_projector: full rank, rank one, and idempotency") {
    auto [iso, rank] = range_projector(CMatrix(2.0 * CMatrix::Identity(4, 4)));
    CHECK(rank == 4);
    CHECK((iso.adjoint() * iso - CMatrix::Identity(4, 4)).norm() <= 1e-12);

    CMatrix onehot = CMatrix::Zero(3, 3);
    onehot(0, 0) = 1.0;
    auto [iso1, rank1] = range_projector(onehot);
    CHECK(rank1 == 1);
    CHECK(iso1.rows() == 1);
    CHECK(iso1.cols() == 3);

    Rng rng(15);
    CMatrix g = oracles::random_ginibre(4, 2, rng);
    CMatrix m = g * g.adjoint();
    auto [iso2, rank2] = range_projector(m);
    CHECK(rank2 == 2);
    CMatrix proj = iso2.adjoint() * iso2;
    CHECK((proj * proj - proj).norm() <= 1e-10);
    CHECK((iso2 * iso2.adjoint() - CMatrix::Identity(2, 2)).norm() <= 1e-12);
}

TEST_CASE("partial_trace_A: product states, entangled states, and the contraction oracle") {
    Rng rng(16);
    CMatrix rho_a = oracles::random_density(2, rng);
    CMatrix rho_b = oracles::random_density(3, rng);
    CMatrix out = partial_trace_A(kron(rho_a, rho_b), 2, 3);
    CHECK((out - rho_b).norm() <= 1e-12);

    // Maximally entangled qubit pair traces to the maximally mixed state.
    CVector psi = CVector::Zero(4);
    psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
    CMatrix bell = psi * psi.adjoint();
    CHECK((partial_trace_A(bell, 2, 2) - 0.5 * CMatrix::Identity(2, 2)).norm() <= 1e-12);

    // (1 (x) eta^{1/2}) |psi><psi| (1 (x) eta^{1/2}) * d has B-reduction eta.
    const int d = 3;
    CMatrix eta = oracles::random_density(d, rng);
    CMatrix eta_sqrt = sqrt_psd(eta);
    CVector me = CVector::Zero(d * d);
    for (int i = 0; i < d; ++i) me(i * d + i) = 1.0 / std::sqrt(double(d));
    CMatrix dil = kron(CMatrix::Identity(d, d), eta_sqrt);
    CMatrix rho = double(d) * dil * (me * me.adjoint()) * dil.adjoint();
    CHECK((partial_trace_A(rho, d, d) - eta).norm() <= 1e-12);
    CHECK((partial_trace_A(rho, d, d) - oracles::partial_trace_naive(rho, d, d)).norm() <= 1e-13);

    CHECK_THROWS_AS(partial_trace_A(bell, 3, 2), DimensionMismatchError);
}

TEST_CASE("partial_trace_A: linear and positive") {
    Rng rng(17);
    CMatrix r1 = oracles::random_density(6, rng);
    CMatrix r2 = oracles::random_density(6, rng);
    CMatrix mix = 0.3 * r1 + 0.7 * r2;
    CHECK((partial_trace_A(mix, 2, 3) -
           (0.3 * partial_trace_A(r1, 2, 3) + 0.7 * partial_trace_A(r2, 2, 3))).norm() <= 1e-13);
    auto dec = eig_hermitian(partial_trace_A(r1, 2, 3));
    CHECK(dec.eigenvalues(0) >= -1e-9);
}
