#include "steerkit/fixtures.hpp"

#include <cmath>

#include "steerkit/linalg.hpp"

namespace steerkit {
namespace fixtures {

MeasurementAssemblage qubit_xz() {
    MeasurementAssemblage meas(Scenario{2, 2, 2});
    CMatrix x(2, 2), z(2, 2), id = CMatrix::Identity(2, 2);
    x << 0, 1, 1, 0;
    z << 1, 0, 0, -1;
    meas.at(0, 0) = 0.5 * (id + x);
    meas.at(1, 0) = 0.5 * (id - x);
    meas.at(0, 1) = 0.5 * (id + z);
    meas.at(1, 1) = 0.5 * (id - z);
    return meas;
}

MeasurementAssemblage mub_pair(int d) {
    MeasurementAssemblage meas(Scenario{2, d, d});
    CMatrix fourier(d, d);
    const double inv = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l)
            fourier(j, l) = inv * std::polar(1.0, 2.0 * M_PI * j * l / d);
    for (int a = 0; a < d; ++a) {
        CMatrix p = CMatrix::Zero(d, d);
        p(a, a) = 1.0;
        meas.at(a, 0) = p;
        meas.at(a, 1) = fourier * p * fourier.adjoint();
    }
    return meas;
}

MeasurementAssemblage projector_pair_d4(bool repaired) {
    using C = Complex;
    MeasurementAssemblage meas(Scenario{2, 2, 4});
    CMatrix a11(4, 4), a12(4, 4);
    a11 << C(0.0055, 0), C(-0.0007, 0.0469), C(-0.0257, 0.0416), C(0.0048, 0.0285),
        C(-0.0007, -0.0469), C(0.4033, 0), C(0.3610, 0.2153), C(0.2445, -0.0445),
        C(-0.0257, -0.0416), C(0.3610, -0.2153), C(0.4381, 0), C(0.1951, -0.1703),
        C(0.0048, -0.0285), C(0.2445, 0.0445), C(0.1951, 0.1703), C(0.1531, 0);
    a12 << C(0.2905, 0), C(0.3268, -0.1672), C(0.0664, 0.1328), C(-0.0528, 0.2157),
        C(0.3268, 0.1672), C(0.4638, 0), C(-0.0018, 0.1876), C(-0.1835, 0.2123),
        C(0.0664, -0.1328), C(-0.0018, -0.1876), C(0.0759, 0), C(0.0865, 0.0734),
        C(-0.0528, -0.2157), C(-0.1835, -0.2123), C(0.0865, -0.0734), C(0.1698, 0);
    const CMatrix id = CMatrix::Identity(4, 4);
    meas.at(0, 0) = a11;
    meas.at(1, 0) = id - a11;
    meas.at(0, 1) = a12;
    meas.at(1, 1) = id - a12;
    if (repaired) repair(meas, 1e-3);
    return meas;
}

Assemblage canonical_from_measurements(const MeasurementAssemblage& meas) {
    Assemblage out(meas.scenario);
    const double d = static_cast<double>(meas.scenario.dim);
    for (size_t i = 0; i < meas.ops.size(); ++i)
        out.ops[i] = meas.ops[i].transpose() / d;
    return out;
}

Assemblage qubit_partially_entangled(double mu1, double mu2) {
    SchmidtVector mu;
    mu.mu = {mu1, mu2};
    return from_pure_schmidt(mu, qubit_xz());
}

Assemblage qutrit_family(double mu1, double mu2) {
    const double rest = 1.0 - mu1 * mu1 - mu2 * mu2;
    if (rest <= 0.0)
        throw InvalidDistributionError("qutrit_family: mu1^2 + mu2^2 must stay below 1");
    SchmidtVector mu;
    mu.mu = {mu1, mu2, std::sqrt(rest)};
    MeasurementAssemblage mub = mub_pair(3);
    MeasurementAssemblage transposed(mub.scenario);
    for (size_t i = 0; i < mub.ops.size(); ++i) transposed.ops[i] = mub.ops[i].transpose();
    return from_pure_schmidt(mu, transposed);
}

}  // namespace fixtures
}  // namespace steerkit
