#include "steerkit/seo.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "steerkit/linalg.hpp"
#include "steerkit/rng.hpp"

namespace steerkit {

namespace {

// Range and complement isometries of a PSD operator, split at the same
// cutoff used everywhere else (rank_tol relative to lambda_max).
struct RangeSplit {
    CMatrix range;       // r x d
    CMatrix complement;  // (d - r) x d
    int rank = 0;
};

RangeSplit split_range(const CMatrix& rho, double rank_tol, const Tolerances& tol) {
    auto dec = eig_hermitian(rho, tol);
    const RVector& lam = dec.eigenvalues;
    const int d = static_cast<int>(lam.size());
    const double lmax = lam(d - 1);
    for (int i = 0; i < d; ++i)
        if (lam(i) < -tol.psd_tol) throw NotPsdError("split_range: reduced state not PSD");
    if (lmax <= 0.0) throw ZeroOperatorError("split_range: zero reduced state");
    const double cut = rank_tol * lmax;
    int rank = 0;
    for (int i = 0; i < d; ++i)
        if (lam(i) > cut) ++rank;
    RangeSplit out;
    out.rank = rank;
    out.range.resize(rank, d);
    out.complement.resize(d - rank, d);
    int r = 0, c = 0;
    for (int i = 0; i < d; ++i) {
        if (lam(i) > cut)
            out.range.row(r++) = dec.eigenvectors.col(i).adjoint();
        else
            out.complement.row(c++) = dec.eigenvectors.col(i).adjoint();
    }
    return out;
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

SeoResult compute_seo(const Assemblage& asmb, double rank_tol, const Tolerances& tol) {
    auto rep = validate(asmb, tol);
    if (!rep.passed()) throw SchemaError("compute_seo: invalid assemblage: " + rep.summary());
    const CMatrix rho = reduced_state(asmb, tol);
    RangeSplit split = split_range(rho, rank_tol, tol);
    const CMatrix rho_small = hermitian_part(split.range * rho * split.range.adjoint());
    auto [inv_sqrt, r2] = pinv_sqrt(rho_small, rank_tol, tol);
    SeoResult out;
    out.rank = split.rank;
    out.projector = split.range;
    out.seo = MeasurementAssemblage(
        Scenario{asmb.scenario.inputs, asmb.scenario.outcomes, split.rank});
    for (int x = 0; x < asmb.scenario.inputs; ++x)
        for (int a = 0; a < asmb.scenario.outcomes; ++a) {
            CMatrix small = split.range * asmb.at(a, x) * split.range.adjoint();
            out.seo.at(a, x) = hermitian_part(inv_sqrt * small * inv_sqrt);
        }
    return out;
}

Assemblage canonical_representative(const SeoResult& seo) {
    Assemblage out(seo.seo.scenario);
    for (size_t i = 0; i < seo.seo.ops.size(); ++i)
        out.ops[i] = seo.seo.ops[i] / static_cast<double>(seo.rank);
    return out;
}

std::vector<double> class_fingerprint(const SeoResult& seo) {
    const auto& sc = seo.seo.scenario;
    const int n = sc.inputs * sc.outcomes;  // operator index t = x*k + a
    const auto& ops = seo.seo.ops;
    std::vector<double> fp;
    fp.push_back(static_cast<double>(seo.rank));
    for (int t = 0; t < n; ++t) fp.push_back(ops[t].trace().real());
    // Per-operator spectra (ascending) make the fingerprint length track the
    // SEO rank as well as the scenario shape.
    Tolerances tol;
    for (int t = 0; t < n; ++t) {
        auto dec = eig_hermitian(ops[t], tol);
        for (int i = 0; i < dec.eigenvalues.size(); ++i) fp.push_back(dec.eigenvalues(i));
    }
    for (int t1 = 0; t1 < n; ++t1)
        for (int t2 = t1; t2 < n; ++t2)
            fp.push_back((ops[t1] * ops[t2]).trace().real());
    // Triples up to cyclic rotation; real and imaginary parts both recorded
    // (the imaginary part separates conjugate-related families).
    for (int t1 = 0; t1 < n; ++t1)
        for (int t2 = t1; t2 < n; ++t2)
            for (int t3 = t1; t3 < n; ++t3) {
                const Complex v = (ops[t1] * ops[t2] * ops[t3]).trace();
                fp.push_back(v.real());
                fp.push_back(v.imag());
            }
    return fp;
}

Assemblage embed_assemblage(const Assemblage& small, const CMatrix& projector, int ambient_dim) {
    if (projector.rows() != small.scenario.dim || projector.cols() != ambient_dim)
        throw DimensionMismatchError("embed_assemblage: projector shape mismatch");
    Assemblage out(Scenario{small.scenario.inputs, small.scenario.outcomes, ambient_dim});
    for (size_t i = 0; i < small.ops.size(); ++i)
        out.ops[i] = projector.adjoint() * small.ops[i] * projector;
    return out;
}

namespace {

struct AlignmentOutcome {
    bool attempted_cleanly = false;  // simple spectrum + fully determined phases
    bool spectra_mismatch = false;
    double residual = std::numeric_limits<double>::infinity();
    CMatrix unitary;
};

// One randomized alignment attempt between SEOs of equal rank r.
AlignmentOutcome align_once(const std::vector<CMatrix>& b1, const std::vector<CMatrix>& b2,
                            int r, Rng& rng, const Tolerances& tol) {
    AlignmentOutcome out;
    const int n = static_cast<int>(b1.size());
    double scale = 1.0;
    for (const auto& b : b1) scale = std::max(scale, b.norm());

    CMatrix h1 = CMatrix::Zero(r, r), h2 = CMatrix::Zero(r, r);
    CMatrix g1 = CMatrix::Zero(r, r), g2 = CMatrix::Zero(r, r);
    for (int t = 0; t < n; ++t) {
        const double c = rng.normal();
        const double c2 = rng.normal();
        h1 += c * b1[t];
        h2 += c * b2[t];
        g1 += c2 * b1[t];
        g2 += c2 * b2[t];
    }
    auto d1 = eig_hermitian(h1, tol);
    auto d2 = eig_hermitian(h2, tol);
    const double spec_dev = (d1.eigenvalues - d2.eigenvalues).cwiseAbs().maxCoeff();
    if (spec_dev > 1e-6 * std::max(1.0, scale)) {
        out.spectra_mismatch = true;
        return out;
    }

    // Cluster by spectral gaps; refine degenerate clusters with the second
    // random combination so eigenlines pair off one by one.
    const double gap_tol = 1e-6 * std::max(1.0, d1.eigenvalues.cwiseAbs().maxCoeff());
    CMatrix v1 = d1.eigenvectors, v2 = d2.eigenvectors;
    bool degenerate_left = false;
    int start = 0;
    while (start < r) {
        int end = start + 1;
        while (end < r && d1.eigenvalues(end) - d1.eigenvalues(end - 1) < gap_tol) ++end;
        const int q = end - start;
        if (q > 1) {
            CMatrix w1 = v1.middleCols(start, q), w2 = v2.middleCols(start, q);
            auto s1 = eig_hermitian(CMatrix(w1.adjoint() * g1 * w1), tol);
            auto s2 = eig_hermitian(CMatrix(w2.adjoint() * g2 * w2), tol);
            if ((s1.eigenvalues - s2.eigenvalues).cwiseAbs().maxCoeff() >
                1e-6 * std::max(1.0, scale)) {
                out.spectra_mismatch = true;
                return out;
            }
            for (int i = 1; i < q; ++i)
                if (s1.eigenvalues(i) - s1.eigenvalues(i - 1) < gap_tol) degenerate_left = true;
            v1.middleCols(start, q) = w1 * s1.eigenvectors;
            v2.middleCols(start, q) = w2 * s2.eigenvectors;
        }
        start = end;
    }

    // Relative phases from matched matrix elements, anchored at line 0 and
    // propagated across a constraint graph fed by every operator.
    const double mag_tol = 1e-6 * std::max(1.0, scale);
    std::vector<double> theta(r, 0.0);
    std::vector<int> determined(r, 0);
    determined[0] = 1;
    bool progress = true;
    while (progress) {
        progress = false;
        for (int t = 0; t < n && !progress; ++t) {
            CMatrix m1 = v1.adjoint() * b1[t] * v1;
            CMatrix m2 = v2.adjoint() * b2[t] * v2;
            for (int p = 0; p < r; ++p) {
                for (int q = 0; q < r; ++q) {
                    if (determined[p] == determined[q]) continue;
                    if (std::abs(m1(p, q)) < mag_tol || std::abs(m2(p, q)) < mag_tol) continue;
                    const double delta = std::arg(m1(p, q)) - std::arg(m2(p, q));
                    if (determined[q]) {
                        theta[p] = theta[q] + delta;
                        determined[p] = 1;
                    } else {
                        theta[q] = theta[p] - delta;
                        determined[q] = 1;
                    }
                    progress = true;
                }
            }
        }
    }
    bool all_determined = true;
    for (int i = 0; i < r; ++i) all_determined = all_determined && determined[i];
    out.attempted_cleanly = !degenerate_left && all_determined;

    CMatrix phases = CMatrix::Zero(r, r);
    for (int i = 0; i < r; ++i) phases(i, i) = std::polar(1.0, theta[i]);
    out.unitary = v1 * phases * v2.adjoint();
    return out;
}

}  // namespace

EquivalenceCertificate seo_equivalent(const Assemblage& a1, const Assemblage& a2,
                                      std::uint64_t seed, const Tolerances& tol) {
    EquivalenceCertificate cert;
    cert.seed = seed;
    if (a1.scenario.inputs != a2.scenario.inputs ||
        a1.scenario.outcomes != a2.scenario.outcomes) {
        cert.verdict = EquivalenceCertificate::Verdict::NotEquivalent;
        cert.reason = "scenario shape mismatch";
        return cert;
    }
    if (a1.scenario.dim != a2.scenario.dim) {
        cert.verdict = EquivalenceCertificate::Verdict::NotEquivalent;
        cert.reason = "ambient dimension mismatch";
        return cert;
    }
    const SeoResult s1 = compute_seo(a1, tol);
    const SeoResult s2 = compute_seo(a2, tol);
    if (s1.rank != s2.rank) {
        cert.verdict = EquivalenceCertificate::Verdict::NotEquivalent;
        cert.reason = "rank mismatch (" + std::to_string(s1.rank) + " vs " +
                      std::to_string(s2.rank) + ")";
        return cert;
    }
    // Fast necessary condition before any alignment work.
    {
        const auto f1 = class_fingerprint(s1);
        const auto f2 = class_fingerprint(s2);
        double dev = 0.0, scale = 1.0;
        for (size_t i = 0; i < f1.size(); ++i) {
            dev = std::max(dev, std::abs(f1[i] - f2[i]));
            scale = std::max(scale, std::abs(f1[i]));
        }
        if (dev > 1e-5 * scale) {
            cert.verdict = EquivalenceCertificate::Verdict::NotEquivalent;
            cert.reason = "fingerprint mismatch (deviation " + std::to_string(dev) + ")";
            return cert;
        }
    }

    const int d = a1.scenario.dim;
    const int r = s1.rank;
    const CMatrix rho1 = reduced_state(a1, tol);
    const CMatrix rho2 = reduced_state(a2, tol);
    RangeSplit sp1 = split_range(rho1, Tolerances{}.rank_tol, tol);
    RangeSplit sp2 = split_range(rho2, Tolerances{}.rank_tol, tol);

    // Embedded SEOs, used for the independent verification of every attempt.
    std::vector<CMatrix> b1e, b2e;
    for (size_t i = 0; i < s1.seo.ops.size(); ++i) {
        b1e.push_back(s1.projector.adjoint() * s1.seo.ops[i] * s1.projector);
        b2e.push_back(s2.projector.adjoint() * s2.seo.ops[i] * s2.projector);
    }

    Rng rng(seed);
    bool saw_ambiguity = false;
    double best_residual = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < tol.retry_max; ++attempt) {
        AlignmentOutcome al = align_once(s1.seo.ops, s2.seo.ops, r, rng, tol);
        if (al.spectra_mismatch) {
            cert.verdict = EquivalenceCertificate::Verdict::NotEquivalent;
            cert.reason = "random-combination spectra differ";
            return cert;
        }
        CMatrix u_full = sp1.range.adjoint() * al.unitary * sp2.range;
        if (r < d) u_full += sp1.complement.adjoint() * sp2.complement;
        double residual = 0.0;
        for (size_t i = 0; i < b1e.size(); ++i)
            residual = std::max(residual,
                                (b1e[i] - u_full * b2e[i] * u_full.adjoint()).norm());
        best_residual = std::min(best_residual, residual);
        if (residual <= tol.equiv_tol) {
            cert.verdict = EquivalenceCertificate::Verdict::Equivalent;
            cert.unitary = u_full;
            cert.residual = residual;
            return cert;
        }
        if (!al.attempted_cleanly) saw_ambiguity = true;
    }
    cert.residual = best_residual;
    if (saw_ambiguity) {
        cert.verdict = EquivalenceCertificate::Verdict::Undetermined;
        cert.reason = "degenerate alignment; no certificate after retries";
    } else {
        cert.verdict = EquivalenceCertificate::Verdict::NotEquivalent;
        cert.reason = "no unitary alignment found (best residual " +
                      std::to_string(best_residual) + ")";
    }
    return cert;
}

}  // namespace steerkit
