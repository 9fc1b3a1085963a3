#include "steerkit/filter.hpp"

#include <algorithm>
#include <cmath>

#include "steerkit/linalg.hpp"

namespace steerkit {

const char* to_string(FilterKind k) {
    switch (k) {
        case FilterKind::Synthesized: return "synthesized";
        case FilterKind::Distill: return "distill";
        case FilterKind::Dilute: return "dilute";
        case FilterKind::Custom: return "custom";
    }
    return "unknown";
}

std::pair<Assemblage, double> apply_filter(const Assemblage& asmb, const CMatrix& kraus,
                                           const Tolerances& tol) {
    const int d = asmb.scenario.dim;
    if (kraus.rows() != d || kraus.cols() != d)
        throw DimensionMismatchError("apply_filter: Kraus operator shape mismatch");
    const CMatrix ktk = kraus.adjoint() * kraus;
    if (lambda_max(ktk, tol) > 1.0 + tol.psd_tol)
        throw NotPsdError("apply_filter: K^dag K exceeds identity");
    const CMatrix rho = reduced_state(asmb, tol);
    const double p = (rho * ktk).trace().real();
    if (p <= tol.p_floor)
        throw FilterAnnihilatesError("apply_filter: success probability " + std::to_string(p));
    Assemblage out(asmb.scenario);
    for (size_t i = 0; i < asmb.ops.size(); ++i) {
        out.ops[i] = kraus * asmb.ops[i] * kraus.adjoint() / p;
        out.ops[i] = (0.5 * (out.ops[i] + out.ops[i].adjoint())).eval();
    }
    return {out, p};
}

Filter synthesize_filter(const Assemblage& target, const Assemblage& source, const CMatrix& u,
                         const Tolerances& tol) {
    const int d = source.scenario.dim;
    if (target.scenario.dim != d)
        throw DimensionMismatchError("synthesize_filter: ambient dimensions differ");
    if (u.rows() != d || u.cols() != d)
        throw DimensionMismatchError("synthesize_filter: witness unitary shape mismatch");
    if ((u.adjoint() * u - CMatrix::Identity(d, d)).norm() > 1e3 * tol.spec_tol)
        throw NotEquivalentError("synthesize_filter: witness is not unitary");

    // The witness must actually conjugate the embedded observables onto each
    // other before we trust it to build a filter.
    const SeoResult st = compute_seo(target, tol);
    const SeoResult ss = compute_seo(source, tol);
    if (st.rank != ss.rank)
        throw NotEquivalentError("synthesize_filter: range ranks differ");
    double residual = 0.0;
    for (int x = 0; x < source.scenario.inputs; ++x)
        for (int a = 0; a < source.scenario.outcomes; ++a) {
            const CMatrix bt = st.projector.adjoint() * st.seo.at(a, x) * st.projector;
            const CMatrix bs = ss.projector.adjoint() * ss.seo.at(a, x) * ss.projector;
            residual = std::max(residual, (bt - u * bs * u.adjoint()).norm());
        }
    if (residual > tol.equiv_tol)
        throw NotEquivalentError("synthesize_filter: equivalence residual " +
                                 std::to_string(residual) + " exceeds tolerance");

    const CMatrix rho_t = reduced_state(target, tol);
    const CMatrix rho_s = reduced_state(source, tol);
    const CMatrix sqrt_t = sqrt_psd(rho_t, tol);
    auto [pinv_s, rank_s] = pinv_sqrt(rho_s, Tolerances{}.rank_tol, tol);

    const CMatrix k_core = sqrt_t * u * pinv_s;
    const double lmax = lambda_max(CMatrix(k_core.adjoint() * k_core), tol);
    if (lmax <= 0.0) throw ZeroOperatorError("synthesize_filter: degenerate core operator");
    const double alpha = 1.0 / std::sqrt(lmax);

    // Completed isometrically on the source kernel so K^dag K <= 1 holds with
    // no cross terms.
    CMatrix kraus = alpha * k_core;
    if (rank_s < d) {
        const CMatrix proj_s = pinv_s * rho_s * pinv_s;  // projector onto ran(rho_s)
        kraus += u * (CMatrix::Identity(d, d) - proj_s);
    }

    Filter f;
    f.kraus = kraus;
    f.p_succ = alpha * alpha;
    f.kind = FilterKind::Synthesized;
    return f;
}

std::pair<double, double> p_succ_bounds(const CMatrix& rho_target, const CMatrix& rho_source,
                                        const Tolerances& tol) {
    const double lo = lambda_min_nonzero(rho_source, Tolerances{}.rank_tol, tol) /
                      lambda_max(rho_target, tol);
    const double hi = lambda_max(rho_source, tol) /
                      lambda_min_nonzero(rho_target, Tolerances{}.rank_tol, tol);
    return {lo, hi};
}

CMatrix regularize_eta(const CMatrix& eta, double delta, const Tolerances& tol) {
    const int d = static_cast<int>(eta.rows());
    auto dec = eig_hermitian(eta, tol);
    const double lmax = dec.eigenvalues(d - 1);
    const double cut = Tolerances{}.rank_tol * lmax;
    int rank = 0;
    for (int i = 0; i < d; ++i)
        if (dec.eigenvalues(i) > cut) ++rank;
    if (rank == d) return eta;
    CMatrix proj = CMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
        if (dec.eigenvalues(i) > cut)
            proj += dec.eigenvectors.col(i) * dec.eigenvectors.col(i).adjoint();
    return (1.0 - delta) * eta +
           (delta / static_cast<double>(d - rank)) * (CMatrix::Identity(d, d) - proj);
}

namespace {

Assemblage conjugate_family(const MeasurementAssemblage& b, const CMatrix& w) {
    Assemblage out(b.scenario);
    for (size_t i = 0; i < b.ops.size(); ++i) {
        out.ops[i] = w * b.ops[i] * w.adjoint();
        out.ops[i] = (0.5 * (out.ops[i] + out.ops[i].adjoint())).eval();
    }
    return out;
}

}  // namespace

DistillResult distill_to_sup(const Assemblage& asmb, double eps, const Tolerances& tol) {
    if (eps <= 0.0) throw InvalidDistributionError("distill_to_sup: eps must be positive");
    const SeoResult seo = compute_seo(asmb, tol);
    const auto& sc = seo.seo.scenario;  // dim = rank
    RobustnessReport ir = incompatibility_robustness(seo.seo, tol);

    // The canonical representative (maximally mixed reduced state) often
    // already attains the supremum; in that case use it exactly so the
    // synthesized success probability comes out in closed form.
    Assemblage canonical = canonical_representative(seo);
    RobustnessReport sr_can = steering_robustness(canonical, tol);

    Assemblage target_small = canonical;
    double certified = sr_can.value;
    CMatrix eta_used = CMatrix::Identity(sc.dim, sc.dim) / static_cast<double>(sc.dim);
    if (ir.value - sr_can.value > std::max(1e-6, 0.25 * eps)) {
        // General route: conjugate the observables with the regularized
        // witness reduced state, shrinking the regularization until the
        // certified value meets the guarantee.
        double delta = std::min(eps / (4.0 * sc.inputs * sc.outcomes * sc.dim), 1e-3);
        for (int round = 0; round < 6; ++round) {
            CMatrix eta_eps = regularize_eta(ir.eta, delta, tol);
            eta_eps = (0.5 * (eta_eps + eta_eps.adjoint())).eval();
            const CMatrix eta_sqrt = sqrt_psd(eta_eps, tol);
            Assemblage candidate = conjugate_family(seo.seo, eta_sqrt);
            RobustnessReport sr = steering_robustness(candidate, tol);
            if (sr.value >= ir.value - eps + tol.solver_tol || round == 5) {
                target_small = candidate;
                certified = sr.value;
                eta_used = eta_eps;
                break;
            }
            delta *= 0.1;
        }
    }

    Assemblage target = embed_assemblage(target_small, seo.projector, asmb.scenario.dim);
    // Both assemblages carry the same embedded observables, so the identity
    // witnesses their equivalence.
    Filter f = synthesize_filter(target, asmb, CMatrix::Identity(asmb.scenario.dim, asmb.scenario.dim), tol);
    f.kind = FilterKind::Distill;

    DistillResult out;
    out.filter = f;
    out.output = target;
    out.certified_sr = certified;
    out.class_supremum = ir.value;
    out.eta = eta_used;
    return out;
}

DiluteResult dilute_to_inf(const Assemblage& asmb, double eps, const Tolerances& tol) {
    if (eps <= 0.0) throw InvalidDistributionError("dilute_to_inf: eps must be positive");
    const SeoResult seo = compute_seo(asmb, tol);
    const int r = seo.rank;
    if (r < 2)
        throw DimensionMismatchError("dilute_to_inf: observables act on a 1-dimensional range");

    // Pure source state with one dominant Schmidt coefficient; eps' strictly
    // inside eps^2 / (dA dB)^2 keeps the entanglement-robustness bound < eps.
    const double dadb = static_cast<double>(r) * r;
    const double eps_prime = eps * eps / (2.0 * dadb * dadb);
    SchmidtVector mu;
    mu.mu.assign(r, std::sqrt(eps_prime));
    mu.mu[0] = std::sqrt(1.0 - (r - 1) * eps_prime);

    Assemblage small = from_pure_schmidt(mu, seo.seo, tol);
    Assemblage target = embed_assemblage(small, seo.projector, asmb.scenario.dim);
    Filter f = synthesize_filter(target, asmb,
                                 CMatrix::Identity(asmb.scenario.dim, asmb.scenario.dim), tol);
    f.kind = FilterKind::Dilute;

    DiluteResult out;
    out.filter = f;
    out.output = target;
    out.er_bound = er_random_pure(mu, r, r);
    return out;
}

double er_random_pure(const SchmidtVector& mu, int dA, int dB) {
    if (mu.mu.size() < 2) return 0.0;
    std::vector<double> sorted = mu.mu;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    return sorted[0] * sorted[1] * dA * dB;
}

OptimalStateResult optimal_state(const MeasurementAssemblage& meas, double eps,
                                 const Tolerances& tol) {
    if (eps <= 0.0) throw InvalidDistributionError("optimal_state: eps must be positive");
    auto rep = validate(meas, tol);
    if (!rep.passed())
        throw SchemaError("optimal_state: invalid measurement assemblage: " + rep.summary());
    const int d = meas.scenario.dim;
    // The steered family carries the transposed effects, so the witness
    // reduced state must come from the transposed incompatibility problem
    // (same optimal value, transposed witness).
    MeasurementAssemblage transposed(meas.scenario);
    for (size_t i = 0; i < meas.ops.size(); ++i) transposed.ops[i] = meas.ops[i].transpose();
    RobustnessReport ir = incompatibility_robustness(transposed, tol);

    double delta = std::min(eps / (4.0 * meas.scenario.inputs * meas.scenario.outcomes * d), 1e-3);
    CMatrix eta_eps;
    Assemblage sigma;
    double certified = 0.0;
    for (int round = 0; round < 6; ++round) {
        eta_eps = regularize_eta(ir.eta, delta, tol);
        eta_eps = (0.5 * (eta_eps + eta_eps.adjoint())).eval();
        const CMatrix eta_sqrt = sqrt_psd(eta_eps, tol);
        sigma = conjugate_family(transposed, eta_sqrt);
        RobustnessReport sr = steering_robustness(sigma, tol);
        certified = sr.value;
        if (certified >= ir.value - eps + tol.solver_tol || round == 5) break;
        delta *= 0.1;
    }

    // rho = d (1 (x) eta^{1/2}) |psi><psi| (1 (x) eta^{1/2}) with |psi> the
    // maximally entangled vector; PSD with unit trace by construction.
    CVector psi = CVector::Zero(d * d);
    for (int i = 0; i < d; ++i) psi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
    const CMatrix eta_sqrt = sqrt_psd(eta_eps, tol);
    const CMatrix dilation = kron(CMatrix::Identity(d, d), eta_sqrt);
    CMatrix rho = static_cast<double>(d) * (dilation * (psi * psi.adjoint()) * dilation.adjoint());
    rho = (0.5 * (rho + rho.adjoint())).eval();

    OptimalStateResult out;
    out.rho_ab = rho;
    out.assemblage = sigma;
    out.certified_sr = certified;
    out.ir_value = ir.value;
    return out;
}

}  // namespace steerkit
