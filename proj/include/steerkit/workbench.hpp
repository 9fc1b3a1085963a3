#pragma once

// Command layer behind the CLI: each cmd_* loads inputs, runs the library,
// writes machine-readable JSON (stdout or --out) with a run manifest, and
// returns the process exit code (0 pass/equivalent, 1 fail/not-equivalent,
// 2 undetermined or error).

#include <cstdint>
#include <string>
#include <utility>

#include "steerkit/json_io.hpp"
#include "steerkit/types.hpp"

namespace steerkit {
namespace workbench {

struct Options {
    std::string out_path;           // --out: result file (stdout otherwise)
    std::string export_sdpa_path;   // --export-sdpa
    std::string out_dir = ".";      // --out-dir (sweeps)
    double eps = 1e-3;              // --eps
    std::uint64_t seed = 1;         // --seed
    double fixture_tol = 1e-3;      // --fixture-tol: repair threshold for printed fixtures
    int grid = 20;                  // --grid
    double p = 0.5;                 // --p
    std::uint64_t trials = 100000;  // --N
    std::uint64_t batches = 1;      // --batches
    std::string kind = "sr";        // --kind sr|ir
    Tolerances tol;
};

int cmd_validate(const std::string& path, const Options& opt);
int cmd_seo(const std::string& path, const Options& opt);
int cmd_classify(const std::string& path1, const std::string& path2, const Options& opt);
int cmd_robustness(const std::string& path, const Options& opt);
int cmd_distill(const std::string& path, const Options& opt);
int cmd_dilute(const std::string& path, const Options& opt);
int cmd_optimal_state(const std::string& path, const Options& opt);
int cmd_rate(const Options& opt);
int cmd_figure2(const Options& opt);

// One sweep point of the qutrit family: initial steering robustness (solved)
// and the closed-form success probability 3*min(mu1^2, mu2^2, 1-mu1^2-mu2^2).
std::pair<double, double> figure2_point(double mu1, double mu2, const Tolerances& tol = {});

// 64-bit FNV-1a of a file's bytes, hex-encoded; the content hash recorded in
// run manifests.
std::string content_hash(const std::string& path);

// Worker count for sweeps: STEERKIT_THREADS when set, hardware concurrency
// otherwise.
int worker_count();

}  // namespace workbench
}  // namespace steerkit
