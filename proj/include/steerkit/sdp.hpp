#pragma once

// Self-contained dense semidefinite solver for small block-structured
// problems in the linear-matrix-inequality standard form
//
//     minimize    c . x  (+ objective_offset)
//     subject to  X(x) := sum_i x_i F_i - F_0  is block-diagonal PSD,
//                 E x = e   (optional linear equalities, removed in presolve)
//
// with the Lagrangian dual
//
//     maximize    tr(F_0 Y)   s.t.  tr(F_i Y) = c_i,  Y >= 0.
//
// The implementation is a primal-dual path-following interior-point method
// with the HKM scaling direction, a Mehrotra predictor-corrector step, and a
// dense Cholesky factorization of the Schur complement. It is fully
// deterministic: identical inputs and settings give identical output bits.

#include <cstdint>
#include <string>
#include <vector>

#include "steerkit/types.hpp"

namespace steerkit {

struct SdpEntry {
    int block = 0;  // 0-based block index
    int row = 0;    // 0-based, row <= col (upper triangle, symmetric fill)
    int col = 0;
    double value = 0.0;
};

struct SdpProblem {
    int n_vars = 0;
    std::vector<double> objective;                  // length n_vars, minimized
    std::vector<int> block_dims;                    // real symmetric block sizes
    std::vector<std::vector<SdpEntry>> constraints; // per variable i: entries of F_i
    std::vector<SdpEntry> offset;                   // entries of F_0
    // Optional equalities E x = e; eliminated by presolve before the solve.
    std::vector<std::vector<std::pair<int, double>>> eq_rows;
    std::vector<double> eq_rhs;
    double objective_offset = 0.0;
    std::string origin;  // label carried into exports and reports

    int total_block_dim() const {
        int t = 0;
        for (int b : block_dims) t += b;
        return t;
    }
};

enum class SdpStatus { Optimal, MaxIter, Infeasible, NumericalTrouble };

const char* to_string(SdpStatus s);

struct SdpSolution {
    std::vector<double> x;                  // original variable order
    std::vector<RMatrix> slack_blocks;      // X = sum x_i F_i - F_0
    std::vector<RMatrix> dual_blocks;       // Y
    double primal_objective = 0.0;          // c.x + offset
    double dual_objective = 0.0;            // tr(F0 Y) + offset
    double gap = 0.0;                       // |primal - dual| / (1 + |p| + |d|)
    double primal_infeasibility = 0.0;
    double dual_infeasibility = 0.0;
    int iterations = 0;
    SdpStatus status = SdpStatus::NumericalTrouble;
};

struct SdpSettings {
    double tol = 1e-9;        // relative gap and residual target
    int max_iter = 200;
    double step_fraction = 0.98;
    double start_scale = 0.0; // 0 => automatic scaled-identity start
    int max_total_block_dim = 4096;
    bool verbose = false;     // per-iteration trace on stdout
};

// Eliminate the equality constraints by Gaussian substitution. Numerically
// dependent rows (pivot below 1e-10) are dropped when consistent; an
// inconsistent dependent row throws SolverFailureError. The returned problem
// has no eq_rows; `back_map` reconstructs original x from reduced variables.
struct PresolvedSdp {
    SdpProblem reduced;
    std::vector<int> free_vars;                  // reduced index -> original index
    std::vector<double> pivot_const;             // per original var: constant term
    std::vector<std::vector<std::pair<int, double>>> pivot_comb; // per original var: sum over reduced
    bool identity = true;                        // no equalities were present

    std::vector<double> lift(const std::vector<double>& z) const;
};

PresolvedSdp presolve(const SdpProblem& problem);

SdpSolution solve(const SdpProblem& problem, const SdpSettings& settings = {});

}  // namespace steerkit
