#include "steerkit/assemblage.hpp"

#include <cmath>
#include <sstream>

#include "steerkit/linalg.hpp"

namespace steerkit {

namespace {

double min_eigenvalue(const CMatrix& m, const Tolerances& tol) {
    return eig_hermitian(m, tol).eigenvalues(0);
}

void check_scenario(const Scenario& s) {
    if (s.inputs <= 0 || s.outcomes <= 0 || s.dim <= 0)
        throw DimensionMismatchError("scenario fields must be positive");
}

void check_shapes(const OperatorFamily& fam, const char* who) {
    check_scenario(fam.scenario);
    if (fam.ops.size() != static_cast<size_t>(fam.scenario.inputs) * fam.scenario.outcomes)
        throw DimensionMismatchError(std::string(who) + ": operator count does not match scenario");
    for (const auto& op : fam.ops)
        if (op.rows() != fam.scenario.dim || op.cols() != fam.scenario.dim)
            throw DimensionMismatchError(std::string(who) + ": operator dimension mismatch");
}

}  // namespace

std::string ValidationReport::summary() const {
    if (violations.empty()) return "ok";
    std::ostringstream os;
    for (const auto& v : violations)
        os << v.what << " (magnitude " << v.magnitude << ")\n";
    return os.str();
}

ValidationReport validate(const Assemblage& asmb, const Tolerances& tol) {
    check_shapes(asmb, "assemblage");
    ValidationReport rep;
    const auto& sc = asmb.scenario;
    for (int x = 0; x < sc.inputs; ++x) {
        for (int a = 0; a < sc.outcomes; ++a) {
            const CMatrix& s = asmb.at(a, x);
            if (!all_finite(s)) {
                rep.violations.push_back({"non-finite entries in sigma(a=" + std::to_string(a + 1) +
                                          ",x=" + std::to_string(x + 1) + ")", 0.0});
                continue;
            }
            double herm_dev = (s - s.adjoint()).norm();
            if (herm_dev > tol.herm_tol * std::max(1.0, s.norm()))
                rep.violations.push_back({"sigma(a=" + std::to_string(a + 1) + ",x=" +
                                          std::to_string(x + 1) + ") not Hermitian", herm_dev});
            else {
                double lmin = min_eigenvalue(s, tol);
                if (lmin < -tol.psd_tol)
                    rep.violations.push_back({"sigma(a=" + std::to_string(a + 1) + ",x=" +
                                              std::to_string(x + 1) + ") not PSD", -lmin});
            }
        }
    }
    // No-signaling: all x-slices must sum to the same reduced state.
    CMatrix first = CMatrix::Zero(sc.dim, sc.dim);
    for (int a = 0; a < sc.outcomes; ++a) first += asmb.at(a, 0);
    for (int x = 1; x < sc.inputs; ++x) {
        CMatrix sum = CMatrix::Zero(sc.dim, sc.dim);
        for (int a = 0; a < sc.outcomes; ++a) sum += asmb.at(a, x);
        double dev = (sum - first).norm();
        if (dev > tol.ns_tol)
            rep.violations.push_back({"no-signaling violated between x=1 and x=" +
                                      std::to_string(x + 1), dev});
    }
    double tr_dev = std::abs(first.trace().real() - 1.0) + std::abs(first.trace().imag());
    if (tr_dev > tol.ns_tol)
        rep.violations.push_back({"reduced state trace != 1", tr_dev});
    return rep;
}

ValidationReport validate(const MeasurementAssemblage& meas, const Tolerances& tol) {
    check_shapes(meas, "measurement assemblage");
    ValidationReport rep;
    const auto& sc = meas.scenario;
    for (int x = 0; x < sc.inputs; ++x) {
        CMatrix sum = CMatrix::Zero(sc.dim, sc.dim);
        for (int a = 0; a < sc.outcomes; ++a) {
            const CMatrix& e = meas.at(a, x);
            if (!all_finite(e)) {
                rep.violations.push_back({"non-finite entries in A(a=" + std::to_string(a + 1) +
                                          ",x=" + std::to_string(x + 1) + ")", 0.0});
                continue;
            }
            double herm_dev = (e - e.adjoint()).norm();
            if (herm_dev > tol.herm_tol * std::max(1.0, e.norm()))
                rep.violations.push_back({"A(a=" + std::to_string(a + 1) + ",x=" +
                                          std::to_string(x + 1) + ") not Hermitian", herm_dev});
            else {
                double lmin = min_eigenvalue(e, tol);
                if (lmin < -tol.psd_tol)
                    rep.violations.push_back({"A(a=" + std::to_string(a + 1) + ",x=" +
                                              std::to_string(x + 1) + ") not PSD", -lmin});
            }
            sum += e;
        }
        double dev = (sum - CMatrix::Identity(sc.dim, sc.dim)).norm();
        if (dev > tol.ns_tol)
            rep.violations.push_back({"effects for x=" + std::to_string(x + 1) +
                                      " do not sum to identity", dev});
    }
    return rep;
}

Assemblage from_state_and_measurements(const CMatrix& rho_ab,
                                       const MeasurementAssemblage& meas,
                                       const Tolerances& tol) {
    check_shapes(meas, "measurement assemblage");
    const int dA = meas.scenario.dim;
    if (rho_ab.rows() != rho_ab.cols() || rho_ab.rows() % dA != 0)
        throw DimensionMismatchError("from_state_and_measurements: dim(rho) not a multiple of dA");
    const int dB = static_cast<int>(rho_ab.rows()) / dA;
    if (!is_hermitian(rho_ab, tol.herm_tol))
        throw NotAStateError("from_state_and_measurements: rho not Hermitian");
    if (std::abs(rho_ab.trace().real() - 1.0) > tol.ns_tol)
        throw NotAStateError("from_state_and_measurements: tr(rho) != 1");
    if (min_eigenvalue(rho_ab, tol) < -tol.psd_tol)
        throw NotAStateError("from_state_and_measurements: rho not PSD");

    Assemblage out(Scenario{meas.scenario.inputs, meas.scenario.outcomes, dB});
    const CMatrix id_b = CMatrix::Identity(dB, dB);
    for (int x = 0; x < meas.scenario.inputs; ++x)
        for (int a = 0; a < meas.scenario.outcomes; ++a)
            out.at(a, x) = partial_trace_A(kron(meas.at(a, x), id_b) * rho_ab, dA, dB);
    return out;
}

Assemblage from_pure_schmidt(const SchmidtVector& mu, const MeasurementAssemblage& b,
                             const Tolerances& tol) {
    check_shapes(b, "measurement assemblage");
    const int d = b.scenario.dim;
    if (static_cast<int>(mu.mu.size()) != d)
        throw DimensionMismatchError("from_pure_schmidt: coefficient count != dim");
    double norm2 = 0.0;
    for (double c : mu.mu) {
        if (c < 0.0) throw InvalidDistributionError("from_pure_schmidt: negative coefficient");
        if (c == 0.0 && !mu.allow_zero)
            throw RankDeficientSchmidtError("from_pure_schmidt: zero Schmidt coefficient without opt-in");
        norm2 += c * c;
    }
    if (std::abs(norm2 - 1.0) > tol.ns_tol)
        throw InvalidDistributionError("from_pure_schmidt: coefficients not normalized");

    CMatrix sqrt_tau = CMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) sqrt_tau(i, i) = mu.mu[i];
    Assemblage out(b.scenario);
    for (int x = 0; x < b.scenario.inputs; ++x)
        for (int a = 0; a < b.scenario.outcomes; ++a)
            out.at(a, x) = sqrt_tau * b.at(a, x) * sqrt_tau;
    return out;
}

CMatrix reduced_state(const Assemblage& asmb, const Tolerances& tol) {
    check_shapes(asmb, "assemblage");
    const auto& sc = asmb.scenario;
    CMatrix first = CMatrix::Zero(sc.dim, sc.dim);
    for (int a = 0; a < sc.outcomes; ++a) first += asmb.at(a, 0);
    for (int x = 1; x < sc.inputs; ++x) {
        CMatrix sum = CMatrix::Zero(sc.dim, sc.dim);
        for (int a = 0; a < sc.outcomes; ++a) sum += asmb.at(a, x);
        if ((sum - first).norm() > tol.ns_tol)
            throw NoSignalingViolationError("reduced_state: x-slices disagree");
    }
    return first;
}

Assemblage lhs_from_model(const std::vector<double>& p_lambda,
                          const std::vector<std::vector<std::vector<double>>>& response,
                          const std::vector<CMatrix>& states,
                          const Tolerances& tol) {
    const size_t n = p_lambda.size();
    if (n == 0 || response.size() != n || states.size() != n)
        throw InvalidDistributionError("lhs_from_model: inconsistent model sizes");
    double total = 0.0;
    for (double p : p_lambda) {
        if (p < -tol.ns_tol) throw InvalidDistributionError("lhs_from_model: negative p(lambda)");
        total += p;
    }
    if (std::abs(total - 1.0) > tol.ns_tol)
        throw InvalidDistributionError("lhs_from_model: p(lambda) not normalized");

    const int m = static_cast<int>(response[0].size());
    const int k = m > 0 ? static_cast<int>(response[0][0].size()) : 0;
    const int d = static_cast<int>(states[0].rows());
    for (size_t l = 0; l < n; ++l) {
        if (static_cast<int>(response[l].size()) != m)
            throw InvalidDistributionError("lhs_from_model: ragged response table");
        for (int x = 0; x < m; ++x) {
            if (static_cast<int>(response[l][x].size()) != k)
                throw InvalidDistributionError("lhs_from_model: ragged response table");
            double s = 0.0;
            for (double p : response[l][x]) {
                if (p < -tol.ns_tol) throw InvalidDistributionError("lhs_from_model: negative response");
                s += p;
            }
            if (std::abs(s - 1.0) > tol.ns_tol)
                throw InvalidDistributionError("lhs_from_model: response not normalized");
        }
        if (states[l].rows() != d || states[l].cols() != d)
            throw DimensionMismatchError("lhs_from_model: state dimension mismatch");
        if (std::abs(states[l].trace().real() - 1.0) > tol.ns_tol ||
            min_eigenvalue(states[l], tol) < -tol.psd_tol)
            throw NotAStateError("lhs_from_model: rho_lambda not a state");
    }

    Assemblage out(Scenario{m, k, d});
    for (int x = 0; x < m; ++x)
        for (int a = 0; a < k; ++a) {
            CMatrix s = CMatrix::Zero(d, d);
            for (size_t l = 0; l < n; ++l)
                s += p_lambda[l] * response[l][x][a] * states[l];
            out.at(a, x) = s;
        }
    return out;
}

namespace {

// Clip eigenvalues below zero; reject anything below -repair_tol.
// Callers pass an exactly Hermitian matrix.
CMatrix clip_psd(const CMatrix& m, double repair_tol, const Tolerances& tol) {
    auto dec = eig_hermitian(m, tol);
    RVector lam = dec.eigenvalues;
    for (int i = 0; i < lam.size(); ++i) {
        if (lam(i) < -repair_tol)
            throw NotPsdError("repair: eigenvalue below repair threshold");
        lam(i) = std::max(0.0, lam(i));
    }
    return dec.eigenvectors * lam.asDiagonal() * dec.eigenvectors.adjoint();
}

}  // namespace

double repair(MeasurementAssemblage& meas, double repair_tol, const Tolerances& tol) {
    check_shapes(meas, "measurement assemblage");
    const auto& sc = meas.scenario;
    double worst = 0.0;
    for (int x = 0; x < sc.inputs; ++x) {
        std::vector<CMatrix> clipped(sc.outcomes);
        CMatrix sum = CMatrix::Zero(sc.dim, sc.dim);
        for (int a = 0; a < sc.outcomes; ++a) {
            CMatrix h = 0.5 * (meas.at(a, x) + meas.at(a, x).adjoint());
            if ((h - meas.at(a, x)).norm() > repair_tol)
                throw NotHermitianError("repair: effect too far from Hermitian");
            clipped[a] = clip_psd(h, repair_tol, tol);
            sum += clipped[a];
        }
        if ((sum - CMatrix::Identity(sc.dim, sc.dim)).norm() > repair_tol * sc.dim)
            throw SchemaError("repair: effects too far from a POVM");
        // Symmetric renormalization S^{-1/2} A S^{-1/2} restores sum = 1 exactly.
        auto [s_inv, rank] = pinv_sqrt(sum, Tolerances{}.rank_tol, tol);
        if (rank != sc.dim)
            throw NotPsdError("repair: effect sum is singular");
        for (int a = 0; a < sc.outcomes; ++a) {
            CMatrix fixed = s_inv * clipped[a] * s_inv;
            worst = std::max(worst, (fixed - meas.at(a, x)).norm());
            meas.at(a, x) = fixed;
        }
    }
    return worst;
}

double repair(Assemblage& asmb, double repair_tol, const Tolerances& tol) {
    check_shapes(asmb, "assemblage");
    const auto& sc = asmb.scenario;
    std::vector<CMatrix> clipped(asmb.ops.size());
    std::vector<CMatrix> slice(sc.inputs, CMatrix::Zero(sc.dim, sc.dim));
    for (int x = 0; x < sc.inputs; ++x)
        for (int a = 0; a < sc.outcomes; ++a) {
            const CMatrix& s = asmb.at(a, x);
            CMatrix h = 0.5 * (s + s.adjoint());
            if ((h - s).norm() > repair_tol)
                throw NotHermitianError("repair: sigma too far from Hermitian");
            CMatrix c = clip_psd(h, repair_tol, tol);
            clipped[static_cast<size_t>(x) * sc.outcomes + a] = c;
            slice[x] += c;
        }
    CMatrix target = CMatrix::Zero(sc.dim, sc.dim);
    for (const auto& t : slice) target += t;
    target /= static_cast<double>(sc.inputs);
    const double tr = target.trace().real();
    if (std::abs(tr - 1.0) > repair_tol * sc.dim)
        throw SchemaError("repair: assemblage too far from unit trace");
    target /= tr;
    double worst = 0.0;
    CMatrix target_sqrt = sqrt_psd(target, tol);
    for (int x = 0; x < sc.inputs; ++x) {
        // Map each x-slice onto the common reduced state: W sigma W^dag with
        // W = target^{1/2} slice^{-1/2} preserves positivity and fixes
        // no-signaling exactly.
        auto [slice_inv, rank] = pinv_sqrt(slice[x], Tolerances{}.rank_tol, tol);
        if (rank != sc.dim)
            throw NotPsdError("repair: singular x-slice");
        CMatrix w = target_sqrt * slice_inv;
        for (int a = 0; a < sc.outcomes; ++a) {
            CMatrix fixed = w * clipped[static_cast<size_t>(x) * sc.outcomes + a] * w.adjoint();
            worst = std::max(worst, (fixed - asmb.at(a, x)).norm());
            asmb.at(a, x) = fixed;
        }
    }
    return worst;
}

}  // namespace steerkit
