#include "steerkit/linalg.hpp"

#include <Eigen/Eigenvalues>

namespace steerkit {

bool is_hermitian(const CMatrix& m, double herm_tol) {
    if (m.rows() != m.cols()) return false;
    double scale = m.norm();
    double dev = (m - m.adjoint()).norm();
    return dev <= herm_tol * std::max(1.0, scale);
}

SpectralDecomposition eig_hermitian(const CMatrix& m, const Tolerances& tol) {
    if (m.rows() != m.cols())
        throw DimensionMismatchError("eig_hermitian: matrix not square");
    if (!all_finite(m))
        throw NotHermitianError("eig_hermitian: non-finite entries");
    if (!is_hermitian(m, tol.herm_tol))
        throw NotHermitianError("eig_hermitian: input deviates from M = M^dag beyond herm_tol");
    // Work on the exact Hermitian part so round-off in the caller cannot leak
    // into the (deterministic) solver.
    CMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    if (es.info() != Eigen::Success)
        throw SolverFailureError("eig_hermitian: eigensolver did not converge");
    return SpectralDecomposition{es.eigenvalues(), es.eigenvectors()};
}

CMatrix sqrt_psd(const CMatrix& m, const Tolerances& tol) {
    auto dec = eig_hermitian(m, tol);
    RVector lam = dec.eigenvalues;
    for (int i = 0; i < lam.size(); ++i) {
        if (lam(i) < -tol.psd_tol)
            throw NotPsdError("sqrt_psd: eigenvalue " + std::to_string(lam(i)) +
                              " below -psd_tol");
        lam(i) = std::sqrt(std::max(0.0, lam(i)));
    }
    return dec.eigenvectors * lam.asDiagonal() * dec.eigenvectors.adjoint();
}

std::pair<CMatrix, int> pinv_sqrt(const CMatrix& m, double rank_tol, const Tolerances& tol) {
    auto dec = eig_hermitian(m, tol);
    RVector lam = dec.eigenvalues;
    const double lmax = lam.size() ? lam(lam.size() - 1) : 0.0;
    for (int i = 0; i < lam.size(); ++i) {
        if (lam(i) < -tol.psd_tol)
            throw NotPsdError("pinv_sqrt: input not PSD");
    }
    if (lmax <= 0.0)
        throw ZeroOperatorError("pinv_sqrt: zero operator");
    const double cut = rank_tol * lmax;
    int rank = 0;
    RVector inv = RVector::Zero(lam.size());
    for (int i = 0; i < lam.size(); ++i) {
        if (lam(i) > cut) {
            inv(i) = 1.0 / std::sqrt(lam(i));
            ++rank;
        }
    }
    if (rank == 0)
        throw ZeroOperatorError("pinv_sqrt: all eigenvalues below rank cutoff");
    CMatrix out = dec.eigenvectors * inv.asDiagonal() * dec.eigenvectors.adjoint();
    return {out, rank};
}

std::pair<CMatrix, int> range_projector(const CMatrix& m, double rank_tol, const Tolerances& tol) {
    auto dec = eig_hermitian(m, tol);
    const RVector& lam = dec.eigenvalues;
    const double lmax = lam.size() ? lam(lam.size() - 1) : 0.0;
    for (int i = 0; i < lam.size(); ++i) {
        if (lam(i) < -tol.psd_tol)
            throw NotPsdError("range_projector: input not PSD");
    }
    if (lmax <= 0.0)
        throw ZeroOperatorError("range_projector: zero operator");
    const double cut = rank_tol * lmax;
    int rank = 0;
    for (int i = 0; i < lam.size(); ++i)
        if (lam(i) > cut) ++rank;
    if (rank == 0)
        throw ZeroOperatorError("range_projector: all eigenvalues below rank cutoff");
    // Rows are the adjoints of the range eigenvectors; ordering follows the
    // ascending eigenvalues so identical inputs give identical isometries.
    CMatrix iso(rank, m.rows());
    int r = 0;
    for (int i = 0; i < lam.size(); ++i) {
        if (lam(i) > cut) iso.row(r++) = dec.eigenvectors.col(i).adjoint();
    }
    return {iso, rank};
}

CMatrix partial_trace_A(const CMatrix& rho_ab, int dA, int dB) {
    if (dA <= 0 || dB <= 0 || rho_ab.rows() != rho_ab.cols() ||
        rho_ab.rows() != static_cast<Eigen::Index>(dA) * dB)
        throw DimensionMismatchError("partial_trace_A: dim(rho) != dA*dB");
    CMatrix out = CMatrix::Zero(dB, dB);
    for (int a = 0; a < dA; ++a)
        out += rho_ab.block(a * dB, a * dB, dB, dB);
    return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

double lambda_max(const CMatrix& m, const Tolerances& tol) {
    auto dec = eig_hermitian(m, tol);
    return dec.eigenvalues(dec.eigenvalues.size() - 1);
}

double lambda_min_nonzero(const CMatrix& m, double rank_tol, const Tolerances& tol) {
    auto dec = eig_hermitian(m, tol);
    const RVector& lam = dec.eigenvalues;
    const double lmax = lam(lam.size() - 1);
    if (lmax <= 0.0)
        throw ZeroOperatorError("lambda_min_nonzero: zero operator");
    const double cut = rank_tol * lmax;
    for (int i = 0; i < lam.size(); ++i)
        if (lam(i) > cut) return lam(i);
    throw ZeroOperatorError("lambda_min_nonzero: no eigenvalue above cutoff");
}

}  // namespace steerkit
