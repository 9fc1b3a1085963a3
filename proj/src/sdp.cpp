#include "steerkit/sdp.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace steerkit {

const char* to_string(SdpStatus s) {
    switch (s) {
        case SdpStatus::Optimal: return "optimal";
        case SdpStatus::MaxIter: return "max_iterations";
        case SdpStatus::Infeasible: return "infeasible";
        case SdpStatus::NumericalTrouble: return "numerical_trouble";
    }
    return "unknown";
}

namespace {

void check_well_formed(const SdpProblem& p) {
    if (p.n_vars <= 0) throw SolverFailureError("sdp: empty problem");
    if (static_cast<int>(p.objective.size()) != p.n_vars ||
        static_cast<int>(p.constraints.size()) != p.n_vars)
        throw SolverFailureError("sdp: objective/constraint size mismatch");
    for (int d : p.block_dims)
        if (d <= 0) throw SolverFailureError("sdp: nonpositive block dimension");
    auto check_entries = [&](const std::vector<SdpEntry>& es) {
        for (const auto& e : es) {
            if (e.block < 0 || e.block >= static_cast<int>(p.block_dims.size()))
                throw SolverFailureError("sdp: entry block out of range");
            const int d = p.block_dims[e.block];
            if (e.row < 0 || e.col < e.row || e.col >= d)
                throw SolverFailureError("sdp: entry index out of range (need row <= col)");
            if (!std::isfinite(e.value)) throw SolverFailureError("sdp: non-finite entry");
        }
    };
    for (const auto& es : p.constraints) check_entries(es);
    check_entries(p.offset);
    if (p.eq_rows.size() != p.eq_rhs.size())
        throw SolverFailureError("sdp: equality rows/rhs mismatch");
}

// Constraint data regrouped per block for the iteration kernels.
struct BlockData {
    int dim = 0;
    std::vector<int> vars;                       // active original variable ids
    std::vector<std::vector<SdpEntry>> entries;  // parallel to vars
    std::vector<SdpEntry> f0;
};

std::vector<BlockData> group_by_block(const SdpProblem& p) {
    std::vector<BlockData> blocks(p.block_dims.size());
    for (size_t b = 0; b < p.block_dims.size(); ++b) blocks[b].dim = p.block_dims[b];
    std::vector<std::vector<int>> slot(p.block_dims.size(), std::vector<int>(p.n_vars, -1));
    for (int i = 0; i < p.n_vars; ++i) {
        for (const auto& e : p.constraints[i]) {
            auto& blk = blocks[e.block];
            int& s = slot[e.block][i];
            if (s < 0) {
                s = static_cast<int>(blk.vars.size());
                blk.vars.push_back(i);
                blk.entries.emplace_back();
            }
            blk.entries[s].push_back(e);
        }
    }
    for (const auto& e : p.offset) blocks[e.block].f0.push_back(e);
    return blocks;
}

void add_scaled(RMatrix& m, const std::vector<SdpEntry>& es, double s) {
    for (const auto& e : es) {
        m(e.row, e.col) += s * e.value;
        if (e.row != e.col) m(e.col, e.row) += s * e.value;
    }
}

// tr(F M) for sparse symmetric F (upper entries) and dense symmetric M.
double trace_product(const std::vector<SdpEntry>& es, const RMatrix& m) {
    double t = 0.0;
    for (const auto& e : es)
        t += (e.row == e.col ? 1.0 : 2.0) * e.value * m(e.row, e.col);
    return t;
}

double frob2(const std::vector<SdpEntry>& es) {
    double t = 0.0;
    for (const auto& e : es) t += (e.row == e.col ? 1.0 : 2.0) * e.value * e.value;
    return t;
}

// Largest alpha in (0, cap] with X + alpha dX >= 0, given X = L L^T.
double step_to_boundary(const Eigen::LLT<RMatrix>& llt, const RMatrix& dx, double cap) {
    RMatrix m = llt.matrixL().solve(dx);
    m = llt.matrixL().solve(RMatrix(m.transpose()));
    Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (m + m.transpose()),
                                              Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues()(0);
    if (lmin >= -1e-14) return cap;
    return std::min(cap, -1.0 / lmin);
}

}  // namespace

std::vector<double> PresolvedSdp::lift(const std::vector<double>& z) const {
    std::vector<double> x(pivot_const.size(), 0.0);
    for (size_t i = 0; i < pivot_const.size(); ++i) {
        double v = pivot_const[i];
        for (const auto& [j, c] : pivot_comb[i]) v += c * z[j];
        x[i] = v;
    }
    return x;
}

PresolvedSdp presolve(const SdpProblem& problem) {
    check_well_formed(problem);
    PresolvedSdp out;
    if (problem.eq_rows.empty()) {
        out.reduced = problem;
        out.identity = true;
        out.free_vars.resize(problem.n_vars);
        out.pivot_const.assign(problem.n_vars, 0.0);
        out.pivot_comb.resize(problem.n_vars);
        for (int i = 0; i < problem.n_vars; ++i) {
            out.free_vars[i] = i;
            out.pivot_comb[i] = {{i, 1.0}};
        }
        return out;
    }
    const int n = problem.n_vars;
    const int rows = static_cast<int>(problem.eq_rows.size());
    RMatrix e = RMatrix::Zero(rows, n);
    RVector rhs = RVector::Zero(rows);
    for (int r = 0; r < rows; ++r) {
        for (const auto& [j, v] : problem.eq_rows[r]) {
            if (j < 0 || j >= n) throw SolverFailureError("sdp: equality index out of range");
            e(r, j) += v;
        }
        rhs(r) = problem.eq_rhs[r];
    }

    constexpr double kPivotTol = 1e-10;
    std::vector<int> pivot_row, pivot_col;  // parallel, one pair per kept row
    std::vector<int> is_pivot(n, 0);
    for (int r = 0; r < rows; ++r) {
        // Largest remaining coefficient in this row decides the pivot.
        int pc = -1;
        double best = kPivotTol;
        for (int j = 0; j < n; ++j) {
            if (!is_pivot[j] && std::abs(e(r, j)) > best) {
                best = std::abs(e(r, j));
                pc = j;
            }
        }
        if (pc < 0) {
            if (std::abs(rhs(r)) > 1e-8)
                throw SolverFailureError("sdp presolve: inconsistent equality row");
            continue;  // dependent row, drop
        }
        const double piv = e(r, pc);
        e.row(r) /= piv;
        rhs(r) /= piv;
        for (int r2 = 0; r2 < rows; ++r2) {
            if (r2 == r || e(r2, pc) == 0.0) continue;
            const double f = e(r2, pc);
            e.row(r2) -= f * e.row(r);
            rhs(r2) -= f * rhs(r);
        }
        pivot_row.push_back(r);
        pivot_col.push_back(pc);
        is_pivot[pc] = 1;
    }
    const int rank = static_cast<int>(pivot_row.size());

    std::vector<int> reduced_of(n, -1);
    for (int j = 0; j < n; ++j) {
        if (!is_pivot[j]) {
            reduced_of[j] = static_cast<int>(out.free_vars.size());
            out.free_vars.push_back(j);
        }
    }
    const int nf = static_cast<int>(out.free_vars.size());
    if (nf == 0) throw SolverFailureError("sdp presolve: no free variables left");

    out.identity = false;
    out.pivot_const.assign(n, 0.0);
    out.pivot_comb.assign(n, {});
    for (int j = 0; j < n; ++j)
        if (!is_pivot[j]) out.pivot_comb[j] = {{reduced_of[j], 1.0}};
    for (int t = 0; t < rank; ++t) {
        const int r = pivot_row[t];
        const int p = pivot_col[t];
        out.pivot_const[p] = rhs(r);
        for (int j = 0; j < n; ++j) {
            if (is_pivot[j] || std::abs(e(r, j)) < 1e-15) continue;
            out.pivot_comb[p].push_back({reduced_of[j], -e(r, j)});
        }
    }

    // Recombine constraint matrices: F'_f = F_f - sum_p E(r_p, f) F_p,
    // F0' = F0 - sum_p rhs_p F_p, c'_f = c_f - sum_p E(r_p, f) c_p.
    SdpProblem& red = out.reduced;
    red.n_vars = nf;
    red.block_dims = problem.block_dims;
    red.origin = problem.origin;
    red.objective.assign(nf, 0.0);
    red.constraints.assign(nf, {});
    red.objective_offset = problem.objective_offset;

    const size_t nb = problem.block_dims.size();
    std::vector<RMatrix> scratch(nb);
    for (size_t b = 0; b < nb; ++b)
        scratch[b] = RMatrix::Zero(problem.block_dims[b], problem.block_dims[b]);
    auto sparsify = [&](std::vector<SdpEntry>& dst) {
        for (size_t b = 0; b < nb; ++b) {
            for (int r = 0; r < scratch[b].rows(); ++r)
                for (int c = r; c < scratch[b].cols(); ++c)
                    if (std::abs(scratch[b](r, c)) > 1e-15)
                        dst.push_back({static_cast<int>(b), r, c, scratch[b](r, c)});
            scratch[b].setZero();
        }
    };
    auto accumulate = [&](const std::vector<SdpEntry>& es, double s) {
        for (const auto& en : es) scratch[en.block](en.row, en.col) += s * en.value;
    };

    for (int f = 0; f < nf; ++f) {
        const int orig = out.free_vars[f];
        accumulate(problem.constraints[orig], 1.0);
        double c = problem.objective[orig];
        for (int t = 0; t < rank; ++t) {
            const double coeff = e(pivot_row[t], orig);
            if (std::abs(coeff) < 1e-15) continue;
            accumulate(problem.constraints[pivot_col[t]], -coeff);
            c -= coeff * problem.objective[pivot_col[t]];
        }
        red.objective[f] = c;
        sparsify(red.constraints[f]);
    }
    accumulate(problem.offset, 1.0);
    for (int t = 0; t < rank; ++t) {
        const int p = pivot_col[t];
        accumulate(problem.constraints[p], -rhs(pivot_row[t]));
        red.objective_offset += problem.objective[p] * rhs(pivot_row[t]);
    }
    sparsify(red.offset);
    return out;
}

SdpSolution solve(const SdpProblem& problem, const SdpSettings& settings) {
    PresolvedSdp pre = presolve(problem);
    const SdpProblem& p = pre.reduced;
    if (p.total_block_dim() > settings.max_total_block_dim)
        throw SolverFailureError("sdp: total block dimension exceeds cap");

    const int n = p.n_vars;
    const auto blocks = group_by_block(p);
    const size_t nb = blocks.size();
    int n_tot = 0;
    for (const auto& b : blocks) n_tot += b.dim;

    // Scaled-identity start, sized to the problem data.
    double data_scale = 1.0;
    for (const auto& es : p.constraints) data_scale = std::max(data_scale, std::sqrt(frob2(es)));
    data_scale = std::max(data_scale, std::sqrt(frob2(p.offset)));
    for (double c : p.objective) data_scale = std::max(data_scale, std::abs(c));
    const double start = settings.start_scale > 0 ? settings.start_scale
                                                  : std::max(10.0, 10.0 * data_scale);

    std::vector<double> x(n, 0.0);
    std::vector<RMatrix> X(nb), Y(nb);
    for (size_t b = 0; b < nb; ++b) {
        X[b] = start * RMatrix::Identity(blocks[b].dim, blocks[b].dim);
        Y[b] = start * RMatrix::Identity(blocks[b].dim, blocks[b].dim);
    }

    double f0_norm = std::sqrt(frob2(p.offset));
    double c_norm = 0.0;
    for (double c : p.objective) c_norm += c * c;
    c_norm = std::sqrt(c_norm);

    SdpSolution best;
    best.status = SdpStatus::MaxIter;
    double best_merit = std::numeric_limits<double>::infinity();

    std::vector<RMatrix> R(nb), Xinv(nb), G(nb), dXa(nb), dYa(nb), dX(nb), dY(nb), Keff(nb);
    std::vector<Eigen::LLT<RMatrix>> llt(nb);
    RMatrix schur(n, n);
    RVector rhs(n), dual_res(n);
    std::vector<RMatrix> denseF;  // per (block, active var) scratch, rebuilt per block

    int iter = 0;
    int stalls = 0;
    for (; iter < settings.max_iter; ++iter) {
        // Residuals and objective values.
        double prim_inf2 = 0.0;
        for (size_t b = 0; b < nb; ++b) {
            R[b] = -X[b];
            add_scaled(R[b], blocks[b].f0, -1.0);
            for (size_t s = 0; s < blocks[b].vars.size(); ++s)
                add_scaled(R[b], blocks[b].entries[s], x[blocks[b].vars[s]]);
            prim_inf2 += R[b].squaredNorm();
        }
        for (int i = 0; i < n; ++i) dual_res(i) = p.objective[i];
        for (size_t b = 0; b < nb; ++b)
            for (size_t s = 0; s < blocks[b].vars.size(); ++s)
                dual_res(blocks[b].vars[s]) -= trace_product(blocks[b].entries[s], Y[b]);

        double pobj = p.objective_offset, dobj = p.objective_offset, mu = 0.0;
        for (int i = 0; i < n; ++i) pobj += p.objective[i] * x[i];
        for (size_t b = 0; b < nb; ++b) {
            dobj += trace_product(blocks[b].f0, Y[b]);
            mu += (X[b] * Y[b]).trace();
        }
        mu /= n_tot;

        const double prim_inf = std::sqrt(prim_inf2) / (1.0 + f0_norm);
        const double dual_inf = dual_res.norm() / (1.0 + c_norm);
        const double relgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
        if (settings.verbose)
            std::printf("it %3d  pobj %+.9e  dobj %+.9e  gap %.2e  pinf %.2e  dinf %.2e  mu %.2e\n",
                        iter, pobj, dobj, relgap, prim_inf, dual_inf, mu);

        const double merit = prim_inf + dual_inf + relgap;
        if (merit < best_merit) {
            best_merit = merit;
            best.x = pre.lift(x);
            best.slack_blocks = X;
            best.dual_blocks = Y;
            best.primal_objective = pobj;
            best.dual_objective = dobj;
            best.gap = relgap;
            best.primal_infeasibility = prim_inf;
            best.dual_infeasibility = dual_inf;
            best.iterations = iter;
        }
        if (prim_inf <= settings.tol && dual_inf <= settings.tol && relgap <= settings.tol) {
            best.status = SdpStatus::Optimal;
            break;
        }
        if (!std::isfinite(mu) || mu > 1e18) {
            best.status = SdpStatus::NumericalTrouble;
            break;
        }

        // Factor the slack blocks.
        bool fail = false;
        for (size_t b = 0; b < nb; ++b) {
            llt[b].compute(X[b]);
            if (llt[b].info() != Eigen::Success) { fail = true; break; }
            Xinv[b] = llt[b].solve(RMatrix::Identity(blocks[b].dim, blocks[b].dim));
            Xinv[b] = (0.5 * (Xinv[b] + Xinv[b].transpose())).eval();
        }
        if (fail) {
            best.status = SdpStatus::NumericalTrouble;
            break;
        }

        // Schur complement B_ij = tr(F_i sym(Xinv F_j Y)), SPD for the HKM
        // direction once symmetrized.
        schur.setZero();
        for (size_t b = 0; b < nb; ++b) {
            const auto& blk = blocks[b];
            const size_t na = blk.vars.size();
            if (na == 0) continue;
            denseF.assign(na, RMatrix::Zero(blk.dim, blk.dim));
            for (size_t s = 0; s < na; ++s) add_scaled(denseF[s], blk.entries[s], 1.0);
            for (size_t j = 0; j < na; ++j) {
                RMatrix w = Xinv[b] * denseF[j] * Y[b];
                w = (0.5 * (w + w.transpose())).eval();
                const int vj = blk.vars[j];
                for (size_t i = 0; i < na; ++i)
                    schur(blk.vars[i], vj) += trace_product(blk.entries[i], w);
            }
        }
        schur = 0.5 * (schur + schur.transpose()).eval();

        Eigen::LLT<RMatrix> schur_llt(schur);
        if (schur_llt.info() != Eigen::Success) {
            // Tiny diagonal lift keeps the factorization alive near the optimum.
            double bump = 1e-12 * (1.0 + schur.diagonal().maxCoeff());
            schur.diagonal().array() += bump;
            schur_llt.compute(schur);
            if (schur_llt.info() != Eigen::Success) {
                best.status = SdpStatus::NumericalTrouble;
                break;
            }
        }

        // Solve the Newton system for a given complementarity target K:
        //   dX = R + sum_j dx_j F_j
        //   dY = sym(Xinv K) - Y - sym(Xinv dX Y)
        //   tr(F_i (Y + dY)) = c_i
        // which reduces to  B dx = tr(F_i sym(Xinv (K - R Y))) - c_i.
        std::vector<RMatrix> KX(nb);
        auto newton = [&](const std::vector<RMatrix>* kmat, RVector& dx_out,
                          std::vector<RMatrix>& dX_out, std::vector<RMatrix>& dY_out) {
            for (int i = 0; i < n; ++i) rhs(i) = -p.objective[i];
            for (size_t b = 0; b < nb; ++b) {
                if (kmat) {
                    KX[b] = Xinv[b] * (*kmat)[b];
                    KX[b] = 0.5 * (KX[b] + KX[b].transpose()).eval();
                } else {
                    KX[b] = RMatrix::Zero(blocks[b].dim, blocks[b].dim);
                }
                RMatrix ry = Xinv[b] * (R[b] * Y[b]);
                G[b] = KX[b] - 0.5 * (ry + ry.transpose());
                for (size_t s = 0; s < blocks[b].vars.size(); ++s)
                    rhs(blocks[b].vars[s]) += trace_product(blocks[b].entries[s], G[b]);
            }
            dx_out = schur_llt.solve(rhs);
            for (size_t b = 0; b < nb; ++b) {
                dX_out[b] = R[b];
                for (size_t s = 0; s < blocks[b].vars.size(); ++s)
                    add_scaled(dX_out[b], blocks[b].entries[s], dx_out(blocks[b].vars[s]));
                RMatrix t = Xinv[b] * (dX_out[b] * Y[b]);
                dY_out[b] = KX[b] - Y[b] - 0.5 * (t + t.transpose());
            }
        };

        std::vector<Eigen::LLT<RMatrix>> ylt(nb);
        for (size_t b = 0; b < nb; ++b) {
            ylt[b].compute(Y[b]);
            if (ylt[b].info() != Eigen::Success) { fail = true; break; }
        }
        if (fail) {
            best.status = SdpStatus::NumericalTrouble;
            break;
        }

        // Predictor (affine scaling).
        RVector dxa(n), dxc(n);
        newton(nullptr, dxa, dXa, dYa);
        double apa = 1.0, ada = 1.0;
        for (size_t b = 0; b < nb; ++b) {
            apa = std::min(apa, step_to_boundary(llt[b], dXa[b], 1.0));
            ada = std::min(ada, step_to_boundary(ylt[b], dYa[b], 1.0));
        }
        double mu_aff = 0.0;
        for (size_t b = 0; b < nb; ++b)
            mu_aff += ((X[b] + apa * dXa[b]) * (Y[b] + ada * dYa[b])).trace();
        mu_aff = std::max(mu_aff / n_tot, 0.0);
        double sigma = std::pow(mu_aff / mu, 3.0);
        sigma = std::clamp(sigma, 1e-10, 1.0);

        // Corrector with the Mehrotra second-order term.
        for (size_t b = 0; b < nb; ++b) {
            Keff[b] = sigma * mu * RMatrix::Identity(blocks[b].dim, blocks[b].dim) -
                      dXa[b] * dYa[b];
        }
        newton(&Keff, dxc, dX, dY);

        double ap = 1.0, ad = 1.0;
        for (size_t b = 0; b < nb; ++b) {
            ap = std::min(ap, settings.step_fraction *
                                  step_to_boundary(llt[b], dX[b], 1.0 / settings.step_fraction));
            ad = std::min(ad, settings.step_fraction *
                                  step_to_boundary(ylt[b], dY[b], 1.0 / settings.step_fraction));
        }
        ap = std::min(ap, 1.0);
        ad = std::min(ad, 1.0);

        if (ap < 1e-12 && ad < 1e-12) {
            if (++stalls >= 3) {
                best.status = SdpStatus::NumericalTrouble;
                break;
            }
        } else {
            stalls = 0;
        }

        for (int i = 0; i < n; ++i) x[i] += ap * dxc(i);
        for (size_t b = 0; b < nb; ++b) {
            X[b] += ap * dX[b];
            X[b] = 0.5 * (X[b] + X[b].transpose()).eval();
            Y[b] += ad * dY[b];
            Y[b] = 0.5 * (Y[b] + Y[b].transpose()).eval();
        }
    }

    best.iterations = std::max(best.iterations, iter);
    return best;
}

}  // namespace steerkit
