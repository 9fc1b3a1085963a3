// Acceptance suite: one numbered, self-contained check per shipped guarantee,
// each printing its own pass/fail line. Run via ctest (target `acceptance`)
// or directly; STEERKIT_BIN and STEERKIT_SOURCE_DIR are set by CTest.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "steerkit/filter.hpp"
#include "steerkit/fixtures.hpp"
#include "steerkit/json_io.hpp"
#include "steerkit/linalg.hpp"
#include "steerkit/rate.hpp"
#include "steerkit/sdpa_io.hpp"
#include "steerkit/workbench.hpp"

using namespace steerkit;

namespace {

std::string source_dir() {
    const char* env = std::getenv("STEERKIT_SOURCE_DIR");
    return env ? env : ".";
}

void report(int number, const std::string& name, bool ok) {
    std::printf("criterion %2d: %s  [%s]\n", number, ok ? "PASS" : "FAIL", name.c_str());
    std::fflush(stdout);
    CHECK_MESSAGE(ok, "criterion ", number, " (", name, ")");
}

double elapsed_seconds(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Solve exported SDPA files with the external optimizer; returns one
// objective per file, NaN on any failure.
std::vector<double> external_solve(const std::vector<std::string>& paths) {
    std::string cmd = "python3 " + source_dir() + "/tools/sdpa_check.py";
    for (const auto& p : paths) cmd += " " + p;
    cmd += " 2>/dev/null";
    std::vector<double> out(paths.size(), std::nan(""));
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return out;
    char line[512];
    size_t idx = 0;
    while (idx < paths.size() && std::fgets(line, sizeof(line), pipe)) {
        std::istringstream is(line);
        std::string path;
        double value;
        if (is >> path >> value) out[idx++] = value;
    }
    pclose(pipe);
    return out;
}

double max_op_distance(const Assemblage& a, const Assemblage& b) {
    double worst = 0.0;
    for (size_t i = 0; i < a.ops.size(); ++i)
        worst = std::max(worst, (a.ops[i] - b.ops[i]).norm());
    return worst;
}

constexpr double kQutritSup = 0.2679;   // class supremum as printed, 4 decimals
constexpr double kPairIr = 0.1481;      // fixture incompatibility, 4 decimals
constexpr double kPairSr = 0.0740;      // fixture maximally entangled value

}  // namespace

TEST_CASE("criterion 1: fixture reproduction within 1e-3 and 10 s") {
    auto t0 = std::chrono::steady_clock::now();
    MeasurementAssemblage pair = fixtures::projector_pair_d4();
    const double ir = incompatibility_robustness(pair).value;
    const double t_ir = elapsed_seconds(t0);

    t0 = std::chrono::steady_clock::now();
    const double sr = steering_robustness(fixtures::canonical_from_measurements(pair)).value;
    const double t_sr = elapsed_seconds(t0);

    const bool ok = std::abs(ir - kPairIr) <= 1e-3 && std::abs(sr - kPairSr) <= 1e-3 &&
                    t_ir < 10.0 && t_sr < 10.0;
    std::printf("  ir=%.6f (ref %.4f, %.2fs)  sr=%.6f (ref %.4f, %.2fs)\n", ir, kPairIr, t_ir,
                sr, kPairSr, t_sr);
    report(1, "d=4 projector fixture: IR and SR", ok);
}

TEST_CASE("criterion 2: qutrit class supremum at 1e-4") {
    const double ir = incompatibility_robustness(fixtures::mub_pair(3)).value;
    const double sr =
        steering_robustness(fixtures::canonical_from_measurements(fixtures::mub_pair(3))).value;
    std::printf("  ir=%.7f sr=%.7f (ref %.4f)\n", ir, sr, kQutritSup);
    report(2, "qutrit MUB pair: IR and canonical SR", std::abs(ir - kQutritSup) <= 1e-4 &&
                                                          std::abs(sr - kQutritSup) <= 1e-4);
}

TEST_CASE("criterion 3: distillation across the valid triangle") {
    Rng rng(301);
    const double eps = 1e-3;
    bool ok = true;
    int checked = 0;
    while (checked < 50) {
        const double mu1 = 0.05 + 0.9 * rng.uniform();
        const double mu2 = 0.05 + 0.9 * rng.uniform();
        if (mu1 * mu1 + mu2 * mu2 >= 0.995) continue;
        ++checked;
        // Through the command layer, matching the CLI surface.
        workbench::Options opt;
        opt.eps = eps;
        const std::string in = "acc3_in.json";
        const std::string out = "acc3_out.json";
        opt.out_path = out;
        save_json_file(in, assemblage_to_json(fixtures::qutrit_family(mu1, mu2)));
        if (workbench::cmd_distill(in, opt) != 0) {
            ok = false;
            break;
        }
        Json res = load_json_file(out);
        const double certified = res["certified_sr"].get<double>();
        const double p = res["filter"]["p_succ"].get<double>();
        const double expect_p =
            3.0 * std::min({mu1 * mu1, mu2 * mu2, 1.0 - mu1 * mu1 - mu2 * mu2});
        if (certified < kQutritSup - eps - 1e-4 || std::abs(p - expect_p) > 1e-8) {
            std::printf("  point (%.4f, %.4f): certified=%.7f p=%.12f expected p=%.12f\n", mu1,
                        mu2, certified, p, expect_p);
            ok = false;
            break;
        }
        std::remove(in.c_str());
        std::remove(out.c_str());
    }
    report(3, "50 seeded distillations: certified SR and exact rate", ok && checked == 50);
}

TEST_CASE("criterion 4: ordering chain on 100 random scenarios") {
    Rng rng(401);
    bool ok = true;
    double worst_slack = 0.0;
    for (int trial = 0; trial < 100 && ok; ++trial) {
        const int d = 2 + static_cast<int>(rng.uniform() * 3);  // 2..4
        const int m = 2 + static_cast<int>(rng.uniform() * 2);  // 2..3
        const int k = 2 + static_cast<int>(rng.uniform() * 2);  // 2..3
        MeasurementAssemblage meas(Scenario{m, k, d});
        if (trial % 2 == 0 && k <= d) {
            // Projective rows of Haar unitaries, remainder in the last effect.
            for (int x = 0; x < m; ++x) {
                CMatrix u = oracles::random_unitary(d, rng);
                CMatrix rest = CMatrix::Identity(d, d);
                for (int a = 0; a + 1 < k; ++a) {
                    meas.at(a, x) = u.col(a) * u.col(a).adjoint();
                    rest -= meas.at(a, x);
                }
                meas.at(k - 1, x) = rest;
            }
        } else {
            meas = oracles::random_measurements(m, k, d, rng);
        }
        CMatrix rho;
        if (trial % 3 == 0) {
            rho = oracles::random_density(d * d, rng);
        } else {
            CMatrix g = oracles::random_ginibre(d * d, 1, rng);
            rho = g * g.adjoint() / (g.adjoint() * g)(0, 0).real();
        }
        Assemblage asmb = from_state_and_measurements(rho, meas);
        const double sr = steering_robustness(asmb).value;
        const double ir_seo = incompatibility_robustness(compute_seo(asmb).seo).value;
        const double ir_a = incompatibility_robustness(meas).value;
        worst_slack = std::max({worst_slack, sr - ir_seo, ir_seo - ir_a});
        if (sr > ir_seo + 1e-6 || ir_seo > ir_a + 1e-6) {
            std::printf("  violation at trial %d: sr=%.8f ir_seo=%.8f ir_a=%.8f\n", trial, sr,
                        ir_seo, ir_a);
            ok = false;
        }
    }
    std::printf("  worst chain slack %.2e\n", worst_slack);
    report(4, "SR <= IR(observables) <= IR(measurements) on 100 scenarios", ok);
}

TEST_CASE("criterion 5: synthesis round trip over 50 random equivalent pairs") {
    Rng rng(501);
    bool ok = true;
    for (int trial = 0; trial < 50 && ok; ++trial) {
        const int d = 2 + static_cast<int>(rng.uniform() * 3);
        MeasurementAssemblage meas = oracles::random_measurements(2, 2, d, rng);
        CMatrix rho = oracles::random_density(d * d, rng);
        Assemblage a1 = from_state_and_measurements(rho, meas);
        // Random full-rank contraction as the relating filter.
        CMatrix g = oracles::random_ginibre(d, d, rng) + 3.0 * CMatrix::Identity(d, d);
        CMatrix k = g / std::sqrt(lambda_max(CMatrix(g.adjoint() * g)));
        auto [a2, p_fwd] = apply_filter(a1, k);

        auto cert = seo_equivalent(a1, a2, 500 + trial);
        if (!cert.equivalent()) {
            std::printf("  pair %d not certified equivalent (%s)\n", trial, cert.reason.c_str());
            ok = false;
            break;
        }
        Filter to1 = synthesize_filter(a1, a2, cert.unitary);
        Filter to2 = synthesize_filter(a2, a1, CMatrix(cert.unitary.adjoint()));
        auto [back1, q1] = apply_filter(a2, to1.kraus);
        auto [back2, q2] = apply_filter(a1, to2.kraus);
        if (max_op_distance(back1, a1) > 1e-7 || max_op_distance(back2, a2) > 1e-7) {
            std::printf("  pair %d reconstruction residual too large\n", trial);
            ok = false;
            break;
        }
        auto [lo1, hi1] = p_succ_bounds(reduced_state(a1), reduced_state(a2));
        auto [lo2, hi2] = p_succ_bounds(reduced_state(a2), reduced_state(a1));
        if (to1.p_succ < lo1 - 1e-9 || to1.p_succ > std::min(hi1, 1.0) + 1e-9 ||
            to2.p_succ < lo2 - 1e-9 || to2.p_succ > std::min(hi2, 1.0) + 1e-9) {
            std::printf("  pair %d success probability outside spectral bounds\n", trial);
            ok = false;
            break;
        }
    }
    report(5, "equivalence, reconstruction, and rate bounds on 50 filtered pairs", ok);
}

TEST_CASE("criterion 6: measurement-matched state beats the maximally entangled one") {
    const double eps = 1e-3;
    OptimalStateResult res = optimal_state(fixtures::projector_pair_d4(), eps);
    std::printf("  certified sr=%.6f  ir=%.6f\n", res.certified_sr, res.ir_value);
    const bool ok =
        res.certified_sr >= kPairIr - eps - 1e-3 && res.certified_sr > kPairSr + 0.05;
    report(6, "optimal state for the d=4 pair", ok);
}

TEST_CASE("criterion 7: dilution to eps = 0.05 stays in class") {
    workbench::Options opt;
    opt.eps = 0.05;
    const std::string in = "acc7_in.json";
    const std::string out = "acc7_out.json";
    opt.out_path = out;
    Assemblage canonical = fixtures::canonical_from_measurements(fixtures::mub_pair(3));
    save_json_file(in, assemblage_to_json(canonical));
    bool ok = workbench::cmd_dilute(in, opt) == 0;
    double sr = 1.0;
    bool in_class = false;
    if (ok) {
        Json res = load_json_file(out);
        Assemblage output = assemblage_from_json(res["output_assemblage"]);
        sr = steering_robustness(output).value;
        in_class = seo_equivalent(output, canonical, 7).equivalent();
        ok = sr <= 0.05 && in_class;
    }
    std::printf("  output sr=%.6f  class preserved=%s\n", sr, in_class ? "yes" : "no");
    std::remove(in.c_str());
    std::remove(out.c_str());
    report(7, "dilution keeps the class and drops SR below 0.05", ok);
}

TEST_CASE("criterion 8: X/Z pipeline with external solver agreement") {
    const double mu1 = 0.6, mu2 = 0.8;  // mu1 < mu2
    Assemblage initial = fixtures::qubit_partially_entangled(mu1, mu2);
    DistillResult res = distill_to_sup(initial, 1e-3);
    Assemblage canonical = fixtures::canonical_from_measurements(fixtures::qubit_xz());
    const double residual = max_op_distance(res.output, canonical);
    const double p_expect = 2.0 * mu1 * mu1;
    const bool filter_ok =
        residual <= 1e-7 && std::abs(res.filter.p_succ - p_expect) <= 1e-9;

    // Cross-validate the distilled assemblage's robustness problem.
    SdpProblem problem = build_sr_problem(res.output);
    const std::string path = "acc8_sr.dat-s";
    write_sdpa_file(problem, path);
    const double internal = solve(problem).primal_objective;
    std::vector<double> ext = external_solve({path});
    const bool solver_ok = !std::isnan(ext[0]) && std::abs(ext[0] - internal) <= 1e-5;
    std::printf("  residual=%.2e p=%.12f (expect %.12f) internal=%.9f external=%.9f\n", residual,
                res.filter.p_succ, p_expect, internal, ext[0]);
    std::remove(path.c_str());
    report(8, "X/Z distillation: exact outputs and cross-solver agreement", filter_ok && solver_ok);
}

TEST_CASE("criterion 9: rate statistics across seeds") {
    bool ok = true;
    for (double p : {0.1, 0.5, 0.9}) {
        const std::uint64_t n = 100000;
        const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
        int within = 0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            RateEstimate est = simulate_rate(p, n, 1, seed);
            if (std::abs(est.mean - p) <= 5.0 * sigma) ++within;
        }
        std::printf("  p=%.1f: %d/20 seeds within 5 sigma\n", p, within);
        ok = ok && within >= 19;
    }
    report(9, "empirical rate concentrates on p_succ", ok);
}

TEST_CASE("criterion 10: twenty instances cross-validated externally") {
    std::vector<std::string> paths;
    std::vector<double> internal;
    int idx = 0;
    auto add_problem = [&](const SdpProblem& p) {
        const std::string path = "acc10_" + std::to_string(idx++) + ".dat-s";
        write_sdpa_file(p, path);
        paths.push_back(path);
        internal.push_back(solve(p).primal_objective);
    };

    Rng rng(1001);
    // Mixed bag: structured families plus random scenarios, SR and IR.
    add_problem(build_sr_problem(fixtures::canonical_from_measurements(fixtures::qubit_xz())));
    add_problem(build_sr_problem(fixtures::canonical_from_measurements(fixtures::mub_pair(3))));
    add_problem(build_ir_problem(fixtures::qubit_xz()));
    add_problem(build_ir_problem(fixtures::mub_pair(3)));
    add_problem(build_ir_problem(fixtures::projector_pair_d4()));
    add_problem(
        build_sr_problem(fixtures::canonical_from_measurements(fixtures::projector_pair_d4())));
    for (int i = 0; i < 7; ++i) {
        const double mu1 = 0.2 + 0.5 * rng.uniform();
        const double mu2 = 0.2 + 0.5 * rng.uniform();
        if (mu1 * mu1 + mu2 * mu2 < 0.99)
            add_problem(build_sr_problem(fixtures::qutrit_family(mu1, mu2)));
        else
            add_problem(
                build_sr_problem(fixtures::qubit_partially_entangled(0.5, std::sqrt(0.75))));
    }
    while (idx < 20) {
        const int d = 2 + static_cast<int>(rng.uniform() * 2);
        MeasurementAssemblage meas = oracles::random_measurements(2, 2, d, rng);
        if (idx % 2 == 0) {
            add_problem(build_ir_problem(meas));
        } else {
            CMatrix rho = oracles::random_density(d * d, rng);
            add_problem(build_sr_problem(from_state_and_measurements(rho, meas)));
        }
    }

    std::vector<double> ext = external_solve(paths);
    bool ok = true;
    double worst = 0.0;
    for (size_t i = 0; i < paths.size(); ++i) {
        const double dev = std::abs(ext[i] - internal[i]);
        worst = std::max(worst, dev);
        if (std::isnan(ext[i]) || dev > 1e-5) {
            std::printf("  %s: internal %.9f external %.9f\n", paths[i].c_str(), internal[i],
                        ext[i]);
            ok = false;
        }
    }
    std::printf("  worst deviation %.2e over %zu instances\n", worst, paths.size());
    for (const auto& p : paths) std::remove(p.c_str());
    report(10, "independent solver agrees within 1e-5 on 20 instances", ok);
}

TEST_CASE("command-line binary end to end") {
    const char* bin = std::getenv("STEERKIT_BIN");
    if (!bin) {
        std::printf("cli check: SKIPPED (STEERKIT_BIN not set)\n");
        return;
    }
    const std::string in = "acc_cli_in.json";
    save_json_file(in, assemblage_to_json(fixtures::qutrit_family(0.6, 0.5)));
    const std::string cmd = std::string(bin) + " distill " + in +
                            " --eps 0.001 --out acc_cli_out.json > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    bool ok = rc == 0;
    if (ok) {
        Json res = load_json_file("acc_cli_out.json");
        const double p = res["filter"]["p_succ"].get<double>();
        ok = std::abs(p - 3.0 * 0.25) <= 1e-8 &&
             res["certified_sr"].get<double>() >= kQutritSup - 2e-3;
    }
    const std::string cls = std::string(bin) + " classify " + source_dir() +
                            "/data/qubit_xz_initial.json " + source_dir() +
                            "/data/qubit_xz_canonical.json > /dev/null 2>&1";
    ok = ok && std::system(cls.c_str()) == 0;
    std::remove(in.c_str());
    std::remove("acc_cli_out.json");
    std::printf("cli check: %s\n", ok ? "PASS" : "FAIL");
    CHECK(ok);
}
