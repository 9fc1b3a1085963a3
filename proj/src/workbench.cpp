#include "steerkit/workbench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "steerkit/fixtures.hpp"
#include "steerkit/linalg.hpp"
#include "steerkit/rate.hpp"
#include "steerkit/sdpa_io.hpp"

namespace steerkit {
namespace workbench {

namespace {

std::string iso_timestamp() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

Json make_manifest(const std::string& command, const std::vector<std::string>& inputs,
                   const Options& opt) {
    Json m;
    m["command"] = command;
    Json in = Json::object();
    for (const auto& p : inputs) in[p] = content_hash(p);
    m["inputs"] = std::move(in);
    m["seed"] = opt.seed;
    m["eps"] = opt.eps;
    m["fixture_tol"] = opt.fixture_tol;
    m["tolerances"] = {{"solver_tol", opt.tol.solver_tol},
                       {"equiv_tol", opt.tol.equiv_tol},
                       {"ns_tol", opt.tol.ns_tol},
                       {"rank_tol", opt.tol.rank_tol}};
    m["timestamp"] = iso_timestamp();
    return m;
}

// Result JSON goes to --out when given (stdout then carries a short summary),
// to stdout otherwise.
void emit(const Json& result, const Options& opt, const std::string& summary) {
    if (!opt.out_path.empty()) {
        save_json_file(opt.out_path, result);
        std::cout << summary << " -> " << opt.out_path << "\n";
    } else {
        std::cout << result.dump(2) << "\n";
        if (!summary.empty()) std::cerr << summary << "\n";
    }
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return 2;
}

}  // namespace

std::string content_hash(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return "missing";
    std::uint64_t h = 0xCBF29CE484222325ull;
    char buf[4096];
    while (f.read(buf, sizeof(buf)) || f.gcount() > 0) {
        for (std::streamsize i = 0; i < f.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001B3ull;
        }
        if (!f) break;
    }
    char out[32];
    std::snprintf(out, sizeof(out), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return out;
}

int worker_count() {
    if (const char* env = std::getenv("STEERKIT_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

int cmd_validate(const std::string& path, const Options& opt) {
    return run_guarded([&]() {
        Json j = load_json_file(path);
        Json result;
        result["manifest"] = make_manifest("validate", {path}, opt);
        ValidationReport rep;
        if (j.contains("sigma")) {
            rep = validate(assemblage_from_json(j), opt.tol);
        } else if (j.contains("povm")) {
            rep = validate(measurement_from_json(j), opt.tol);
        } else {
            throw SchemaError(path + ": expected 'sigma' or 'povm'");
        }
        result["passed"] = rep.passed();
        Json vj = Json::array();
        for (const auto& v : rep.violations)
            vj.push_back({{"what", v.what}, {"magnitude", v.magnitude}});
        result["violations"] = std::move(vj);
        emit(result, opt, rep.passed() ? "valid" : "invalid");
        return rep.passed() ? 0 : 1;
    });
}

int cmd_seo(const std::string& path, const Options& opt) {
    return run_guarded([&]() {
        auto loaded = load_assemblage(path, opt.fixture_tol, opt.tol);
        SeoResult seo = compute_seo(loaded.value, opt.tol);
        Json result;
        result["manifest"] = make_manifest("seo", {path}, opt);
        if (loaded.correction > 0.0) result["manifest"]["fixture_correction"] = loaded.correction;
        result["rank"] = seo.rank;
        result["projector"] = matrix_to_json(seo.projector);
        result["seo"] = measurement_to_json(seo.seo);
        result["fingerprint"] = class_fingerprint(seo);
        emit(result, opt, "seo rank " + std::to_string(seo.rank));
        return 0;
    });
}

int cmd_classify(const std::string& path1, const std::string& path2, const Options& opt) {
    return run_guarded([&]() {
        auto a1 = load_assemblage(path1, opt.fixture_tol, opt.tol);
        auto a2 = load_assemblage(path2, opt.fixture_tol, opt.tol);
        EquivalenceCertificate cert = seo_equivalent(a1.value, a2.value, opt.seed, opt.tol);
        Json result;
        result["manifest"] = make_manifest("classify", {path1, path2}, opt);
        result["certificate"] = certificate_to_json(cert);
        std::string verdict = result["certificate"]["verdict"].get<std::string>();
        emit(result, opt, "verdict: " + verdict);
        switch (cert.verdict) {
            case EquivalenceCertificate::Verdict::Equivalent: return 0;
            case EquivalenceCertificate::Verdict::NotEquivalent: return 1;
            case EquivalenceCertificate::Verdict::Undetermined: return 2;
        }
        return 2;
    });
}

int cmd_robustness(const std::string& path, const Options& opt) {
    return run_guarded([&]() {
        Json result;
        result["manifest"] = make_manifest("robustness", {path}, opt);
        RobustnessReport rep;
        Scenario sc;
        SdpProblem problem;
        if (opt.kind == "ir") {
            auto loaded = load_measurement(path, opt.fixture_tol, opt.tol);
            if (loaded.correction > 0.0)
                result["manifest"]["fixture_correction"] = loaded.correction;
            sc = loaded.value.scenario;
            problem = build_ir_problem(loaded.value, opt.tol);
            rep = incompatibility_robustness(loaded.value, opt.tol);
        } else if (opt.kind == "sr") {
            auto loaded = load_assemblage(path, opt.fixture_tol, opt.tol);
            if (loaded.correction > 0.0)
                result["manifest"]["fixture_correction"] = loaded.correction;
            sc = loaded.value.scenario;
            problem = build_sr_problem(loaded.value, opt.tol);
            rep = steering_robustness(loaded.value, opt.tol);
        } else {
            throw SchemaError("--kind must be 'sr' or 'ir'");
        }
        if (!opt.export_sdpa_path.empty()) {
            write_sdpa_file(problem, opt.export_sdpa_path);
            result["manifest"]["sdpa_export"] = opt.export_sdpa_path;
        }
        result["kind"] = opt.kind;
        result["report"] = report_to_json(rep, sc);
        char summary[128];
        std::snprintf(summary, sizeof(summary), "%s = %.6f (duality gap %.2e)",
                      opt.kind.c_str(), rep.value, rep.duality_gap);
        emit(result, opt, summary);
        return 0;
    });
}

int cmd_distill(const std::string& path, const Options& opt) {
    return run_guarded([&]() {
        auto loaded = load_assemblage(path, opt.fixture_tol, opt.tol);
        DistillResult res = distill_to_sup(loaded.value, opt.eps, opt.tol);
        Json result;
        result["manifest"] = make_manifest("distill", {path}, opt);
        if (loaded.correction > 0.0) result["manifest"]["fixture_correction"] = loaded.correction;
        result["filter"] = filter_to_json(res.filter);
        result["output_assemblage"] = assemblage_to_json(res.output);
        result["certified_sr"] = res.certified_sr;
        result["class_supremum"] = res.class_supremum;
        char summary[160];
        std::snprintf(summary, sizeof(summary),
                      "distilled: SR %.6f (class supremum %.6f), p_succ %.6f",
                      res.certified_sr, res.class_supremum, res.filter.p_succ);
        emit(result, opt, summary);
        return 0;
    });
}

int cmd_dilute(const std::string& path, const Options& opt) {
    return run_guarded([&]() {
        auto loaded = load_assemblage(path, opt.fixture_tol, opt.tol);
        DiluteResult res = dilute_to_inf(loaded.value, opt.eps, opt.tol);
        Json result;
        result["manifest"] = make_manifest("dilute", {path}, opt);
        if (loaded.correction > 0.0) result["manifest"]["fixture_correction"] = loaded.correction;
        result["filter"] = filter_to_json(res.filter);
        result["output_assemblage"] = assemblage_to_json(res.output);
        result["er_bound"] = res.er_bound;
        char summary[128];
        std::snprintf(summary, sizeof(summary), "diluted: ER bound %.6f, p_succ %.3e",
                      res.er_bound, res.filter.p_succ);
        emit(result, opt, summary);
        return 0;
    });
}

int cmd_optimal_state(const std::string& path, const Options& opt) {
    return run_guarded([&]() {
        auto loaded = load_measurement(path, opt.fixture_tol, opt.tol);
        OptimalStateResult res = optimal_state(loaded.value, opt.eps, opt.tol);
        Json result;
        result["manifest"] = make_manifest("optimal-state", {path}, opt);
        if (loaded.correction > 0.0) result["manifest"]["fixture_correction"] = loaded.correction;
        result["rho_ab"] = matrix_to_json(res.rho_ab);
        result["assemblage"] = assemblage_to_json(res.assemblage);
        result["certified_sr"] = res.certified_sr;
        result["ir"] = res.ir_value;
        char summary[128];
        std::snprintf(summary, sizeof(summary), "optimal state: SR %.6f vs IR %.6f",
                      res.certified_sr, res.ir_value);
        emit(result, opt, summary);
        return 0;
    });
}

int cmd_rate(const Options& opt) {
    return run_guarded([&]() {
        RateEstimate est = simulate_rate(opt.p, opt.trials, opt.batches, opt.seed);
        Json result;
        result["manifest"] = make_manifest("rate", {}, opt);
        result["p_succ"] = est.p_succ;
        result["trials_per_batch"] = est.trials_per_batch;
        result["batches"] = est.batches;
        result["mean"] = est.mean;
        result["variance"] = est.variance;
        result["seed"] = est.seed;
        char summary[128];
        std::snprintf(summary, sizeof(summary), "rate: mean %.6f for p %.6f", est.mean, est.p_succ);
        emit(result, opt, summary);
        return 0;
    });
}

std::pair<double, double> figure2_point(double mu1, double mu2, const Tolerances& tol) {
    Assemblage asmb = fixtures::qutrit_family(mu1, mu2);
    const double sr = steering_robustness(asmb, tol).value;
    const double mu3sq = 1.0 - mu1 * mu1 - mu2 * mu2;
    const double p = 3.0 * std::min({mu1 * mu1, mu2 * mu2, mu3sq});
    return {sr, p};
}

int cmd_figure2(const Options& opt) {
    return run_guarded([&]() {
        if (opt.grid < 2) throw SchemaError("--grid must be at least 2");
        const int n = opt.grid;
        struct Point {
            double mu1, mu2, sr, p;
            bool valid;
        };
        std::vector<Point> points(static_cast<size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double mu1 = static_cast<double>(i + 1) / (n + 1);
                const double mu2 = static_cast<double>(j + 1) / (n + 1);
                points[static_cast<size_t>(i) * n + j] =
                    {mu1, mu2, 0.0, 0.0, mu1 * mu1 + mu2 * mu2 < 1.0};
            }

        std::atomic<size_t> next{0};
        auto worker = [&]() {
            for (size_t idx = next.fetch_add(1); idx < points.size(); idx = next.fetch_add(1)) {
                Point& pt = points[idx];
                if (!pt.valid) continue;
                auto [sr, p] = figure2_point(pt.mu1, pt.mu2, opt.tol);
                pt.sr = sr;
                pt.p = p;
            }
        };
        const int workers = std::min<int>(worker_count(), static_cast<int>(points.size()));
        std::vector<std::thread> pool;
        for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();

        const std::string sr_path = opt.out_dir + "/figure2_sr.csv";
        const std::string p_path = opt.out_dir + "/figure2_psucc.csv";
        std::ofstream sr_file(sr_path), p_file(p_path);
        if (!sr_file || !p_file) throw Error("cannot write CSV files under " + opt.out_dir);
        sr_file << "mu1,mu2,sr_initial\n";
        p_file << "mu1,mu2,p_succ\n";
        char line[96];
        for (const Point& pt : points) {
            if (pt.valid)
                std::snprintf(line, sizeof(line), "%.10f,%.10f,%.10f\n", pt.mu1, pt.mu2, pt.sr);
            else
                std::snprintf(line, sizeof(line), "%.10f,%.10f,nan\n", pt.mu1, pt.mu2);
            sr_file << line;
            if (pt.valid)
                std::snprintf(line, sizeof(line), "%.10f,%.10f,%.10f\n", pt.mu1, pt.mu2, pt.p);
            else
                std::snprintf(line, sizeof(line), "%.10f,%.10f,nan\n", pt.mu1, pt.mu2);
            p_file << line;
        }

        Json result;
        result["manifest"] = make_manifest("figure2", {}, opt);
        result["grid"] = n;
        result["outputs"] = {sr_path, p_path};
        emit(result, opt, "wrote " + sr_path + " and " + p_path);
        return 0;
    });
}

}  // namespace workbench
}  // namespace steerkit
