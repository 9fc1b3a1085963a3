#include "steerkit/robustness.hpp"

#include <cmath>

#include "steerkit/linalg.hpp"
#include "steerkit/seo.hpp"

namespace steerkit {

namespace {

constexpr double kSqrtHalf = 0.70710678118654752440;

long long pow_ll(int base, int exp) {
    long long r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// Upper-triangle entries of the real symmetric embedding
// M = A + iB  ->  [[A, -B], [B, A]]  (2d x 2d), appended to `dst`.
void embed_entries(const CMatrix& m, int block, double scale, std::vector<SdpEntry>& dst) {
    const int d = static_cast<int>(m.rows());
    for (int r = 0; r < d; ++r) {
        for (int c = r; c < d; ++c) {
            const double u = scale * m(r, c).real();
            const double v = scale * m(r, c).imag();
            if (u != 0.0) {
                dst.push_back({block, r, c, u});
                dst.push_back({block, r + d, c + d, u});
            }
            if (r < c && v != 0.0) {
                dst.push_back({block, r, c + d, -v});
                dst.push_back({block, c, r + d, v});
            }
        }
    }
}

struct ProblemLayout {
    Scenario sc;
    int n_strategies = 0;
    int basis_size = 0;   // d*d
    bool has_eta = false;

    int family_var(int a, int x, int b) const {
        return ((x * sc.outcomes + a) * basis_size) + b;
    }
    int eta_var(int b) const { return sc.inputs * sc.outcomes * basis_size + b; }
    int pos_block(int a, int x) const { return x * sc.outcomes + a; }
    int lambda_block(int l) const { return sc.inputs * sc.outcomes + l; }
};

// Shared assembly for both duals; `targets` are sigma (SR) or B (IR).
SdpProblem build_dual(const Scenario& sc, const std::vector<CMatrix>& targets, bool with_eta,
                      const std::string& origin, const Tolerances& tol) {
    const auto strategies = enumerate_deterministic(sc, tol.strategy_cap);
    ProblemLayout lay{sc, static_cast<int>(strategies.table.size()), sc.dim * sc.dim, with_eta};

    SdpProblem p;
    p.origin = origin;
    p.n_vars = sc.inputs * sc.outcomes * lay.basis_size + (with_eta ? lay.basis_size : 0);
    p.objective.assign(p.n_vars, 0.0);
    p.constraints.assign(p.n_vars, {});
    const int eb = 2 * sc.dim;  // embedded block dimension
    p.block_dims.assign(sc.inputs * sc.outcomes + lay.n_strategies, eb);

    for (int x = 0; x < sc.inputs; ++x) {
        for (int a = 0; a < sc.outcomes; ++a) {
            const CMatrix& t = targets[static_cast<size_t>(x) * sc.outcomes + a];
            for (int b = 0; b < lay.basis_size; ++b) {
                const int v = lay.family_var(a, x, b);
                const CMatrix e = hermitian_basis_element(sc.dim, b);
                // Maximize sum tr(W sigma): minimize the negative.
                p.objective[v] = -(e.cwiseProduct(t.conjugate())).sum().real();
                embed_entries(e, lay.pos_block(a, x), 1.0, p.constraints[v]);
                for (int l = 0; l < lay.n_strategies; ++l)
                    if (strategies.table[l][x] == a)
                        embed_entries(e, lay.lambda_block(l), -1.0, p.constraints[v]);
            }
        }
    }
    if (with_eta) {
        std::vector<std::pair<int, double>> trace_row;
        for (int b = 0; b < lay.basis_size; ++b) {
            const int v = lay.eta_var(b);
            const CMatrix e = hermitian_basis_element(sc.dim, b);
            for (int l = 0; l < lay.n_strategies; ++l)
                embed_entries(e, lay.lambda_block(l), 1.0, p.constraints[v]);
            const double tr = e.trace().real();
            if (tr != 0.0) trace_row.push_back({v, tr});
        }
        p.eq_rows.push_back(trace_row);
        p.eq_rhs.push_back(1.0);
    } else {
        // Strategy blocks read 1 - sum_x F_{lambda_x|x} >= 0.
        const CMatrix id = CMatrix::Identity(sc.dim, sc.dim);
        for (int l = 0; l < lay.n_strategies; ++l)
            embed_entries(id, lay.lambda_block(l), -1.0, p.offset);
    }
    return p;
}

CMatrix reconstruct(const std::vector<double>& x, int d, int base) {
    CMatrix m = CMatrix::Zero(d, d);
    for (int b = 0; b < d * d; ++b)
        m += x[base + b] * hermitian_basis_element(d, b);
    return m;
}

RobustnessReport decode(const Scenario& sc, bool with_eta, const SdpSolution& sol) {
    RobustnessReport rep;
    rep.value = std::max(0.0, -sol.primal_objective - 1.0);
    const int basis = sc.dim * sc.dim;
    rep.witness.reserve(static_cast<size_t>(sc.inputs) * sc.outcomes);
    for (int x = 0; x < sc.inputs; ++x)
        for (int a = 0; a < sc.outcomes; ++a)
            rep.witness.push_back(reconstruct(sol.x, sc.dim, ((x * sc.outcomes + a) * basis)));
    if (with_eta) rep.eta = reconstruct(sol.x, sc.dim, sc.inputs * sc.outcomes * basis);
    rep.duality_gap = sol.gap;
    rep.primal_infeasibility = sol.primal_infeasibility;
    rep.dual_infeasibility = sol.dual_infeasibility;
    rep.iterations = sol.iterations;
    rep.status = to_string(sol.status);
    return rep;
}

SdpSolution solve_checked(const SdpProblem& p, const Tolerances& tol) {
    SdpSettings settings;
    settings.tol = std::min(1e-9, tol.solver_tol);
    SdpSolution sol = solve(p, settings);
    const double merit = sol.gap + sol.primal_infeasibility + sol.dual_infeasibility;
    if (sol.status != SdpStatus::Optimal && merit > tol.solver_tol)
        throw SolverFailureError("robustness solve did not converge (" +
                                 std::string(to_string(sol.status)) + ", residual " +
                                 std::to_string(merit) + ") for " + p.origin);
    return sol;
}

}  // namespace

CMatrix hermitian_basis_element(int d, int b) {
    CMatrix e = CMatrix::Zero(d, d);
    if (b < d) {
        e(b, b) = 1.0;
        return e;
    }
    int idx = (b - d) / 2;
    const bool imaginary = (b - d) % 2;
    // idx enumerates pairs (i < j) row by row.
    int i = 0;
    int remaining = idx;
    while (remaining >= d - 1 - i) {
        remaining -= d - 1 - i;
        ++i;
    }
    const int j = i + 1 + remaining;
    if (imaginary) {
        e(i, j) = Complex(0.0, -kSqrtHalf);
        e(j, i) = Complex(0.0, kSqrtHalf);
    } else {
        e(i, j) = kSqrtHalf;
        e(j, i) = kSqrtHalf;
    }
    return e;
}

DeterministicStrategySet enumerate_deterministic(const Scenario& scenario, int strategy_cap) {
    if (scenario.inputs <= 0 || scenario.outcomes <= 0)
        throw DimensionMismatchError("enumerate_deterministic: bad scenario");
    const long long total = pow_ll(scenario.outcomes, scenario.inputs);
    if (total > strategy_cap)
        throw TooManyStrategiesError("enumerate_deterministic: k^m = " + std::to_string(total) +
                                     " exceeds cap " + std::to_string(strategy_cap));
    DeterministicStrategySet out;
    out.scenario = scenario;
    out.table.reserve(static_cast<size_t>(total));
    for (long long l = 0; l < total; ++l) {
        std::vector<int> row(scenario.inputs);
        long long rem = l;
        for (int x = scenario.inputs - 1; x >= 0; --x) {
            row[x] = static_cast<int>(rem % scenario.outcomes);
            rem /= scenario.outcomes;
        }
        out.table.push_back(std::move(row));
    }
    return out;
}

SdpProblem build_sr_problem(const Assemblage& asmb, const Tolerances& tol) {
    auto rep = validate(asmb, tol);
    if (!rep.passed())
        throw SchemaError("build_sr_problem: invalid assemblage: " + rep.summary());
    const auto& sc = asmb.scenario;
    return build_dual(sc, asmb.ops, false,
                      "steering robustness dual, m=" + std::to_string(sc.inputs) +
                          " k=" + std::to_string(sc.outcomes) + " d=" + std::to_string(sc.dim) +
                          "; objective = -(1+SR)",
                      tol);
}

SdpProblem build_ir_problem(const MeasurementAssemblage& meas, const Tolerances& tol) {
    auto rep = validate(meas, tol);
    if (!rep.passed())
        throw SchemaError("build_ir_problem: invalid measurement assemblage: " + rep.summary());
    const auto& sc = meas.scenario;
    return build_dual(sc, meas.ops, true,
                      "incompatibility robustness dual, m=" + std::to_string(sc.inputs) +
                          " k=" + std::to_string(sc.outcomes) + " d=" + std::to_string(sc.dim) +
                          "; objective = -(1+IR)",
                      tol);
}

RobustnessReport decode_sr_solution(const Assemblage& asmb, const SdpSolution& sol) {
    return decode(asmb.scenario, false, sol);
}

RobustnessReport decode_ir_solution(const MeasurementAssemblage& meas, const SdpSolution& sol) {
    return decode(meas.scenario, true, sol);
}

RobustnessReport steering_robustness(const Assemblage& asmb, const Tolerances& tol) {
    SdpProblem p = build_sr_problem(asmb, tol);
    return decode(asmb.scenario, false, solve_checked(p, tol));
}

RobustnessReport incompatibility_robustness(const MeasurementAssemblage& meas,
                                            const Tolerances& tol) {
    SdpProblem p = build_ir_problem(meas, tol);
    return decode(meas.scenario, true, solve_checked(p, tol));
}

bool is_lhs(const Assemblage& asmb, const Tolerances& tol) {
    return steering_robustness(asmb, tol).value <= tol.membership_tol;
}

bool is_jointly_measurable(const MeasurementAssemblage& meas, const Tolerances& tol) {
    return incompatibility_robustness(meas, tol).value <= tol.membership_tol;
}

std::vector<CMatrix> witness_transform(const std::vector<CMatrix>& family, const CMatrix& eta,
                                       WitnessDirection direction, const Scenario& scenario,
                                       const Tolerances& tol) {
    if (static_cast<int>(family.size()) != scenario.inputs * scenario.outcomes)
        throw DimensionMismatchError("witness_transform: family size mismatch");
    const double feas_slack = 1e3 * tol.solver_tol;
    const auto strategies = enumerate_deterministic(scenario, tol.strategy_cap);
    auto check_family = [&](const std::vector<CMatrix>& fam, const CMatrix& bound,
                            const char* who) {
        for (const auto& w : fam) {
            auto dec = eig_hermitian(w, tol);
            if (dec.eigenvalues(0) < -feas_slack)
                throw InfeasibleWitnessError(std::string(who) + ": witness operator not PSD");
        }
        for (const auto& strat : strategies.table) {
            CMatrix s = CMatrix::Zero(scenario.dim, scenario.dim);
            for (int x = 0; x < scenario.inputs; ++x)
                s += fam[static_cast<size_t>(x) * scenario.outcomes + strat[x]];
            auto dec = eig_hermitian(CMatrix(bound - s), tol);
            if (dec.eigenvalues(0) < -feas_slack)
                throw InfeasibleWitnessError(std::string(who) + ": strategy constraint violated");
        }
    };

    std::vector<CMatrix> out;
    out.reserve(family.size());
    if (direction == WitnessDirection::IncompatibilityToSteering) {
        check_family(family, eta, "witness_transform(omega)");
        auto [eta_pinv_sqrt, rank] = pinv_sqrt(eta, tol.rank_tol, tol);
        for (const auto& w : family) out.push_back(eta_pinv_sqrt * w * eta_pinv_sqrt);
    } else {
        check_family(family, CMatrix::Identity(scenario.dim, scenario.dim),
                     "witness_transform(F)");
        CMatrix eta_sqrt = sqrt_psd(eta, tol);
        for (const auto& f : family) out.push_back(eta_sqrt * f * eta_sqrt);
    }
    return out;
}

double class_supremum(const Assemblage& asmb, const Tolerances& tol) {
    SeoResult seo = compute_seo(asmb, tol);
    return incompatibility_robustness(seo.seo, tol).value;
}

}  // namespace steerkit
