// steerkit: classify steering assemblages into filter-equivalence classes,
// synthesize the optimal local filters, and compute steering/incompatibility
// robustness with the built-in semidefinite solver.

#include <CLI11.hpp>

#include "steerkit/workbench.hpp"

int main(int argc, char** argv) {
    CLI::App app{"steering assemblage classification and filter synthesis"};
    app.require_subcommand(1);

    steerkit::workbench::Options opt;
    std::string path, path2;

    auto add_common = [&](CLI::App* sub, bool with_input = true) {
        if (with_input) sub->add_option("input", path, "input JSON file")->required();
        sub->add_option("--out", opt.out_path, "write the result JSON here");
        sub->add_option("--seed", opt.seed, "seed for randomized alignment");
        sub->add_option("--eps", opt.eps, "accuracy target for filter constructions");
        sub->add_option("--tol", opt.tol.solver_tol, "duality-gap tolerance");
        sub->add_option("--fixture-tol", opt.fixture_tol,
                        "repair threshold for fixtures printed to few decimals");
        return sub;
    };

    auto* validate = add_common(app.add_subcommand("validate", "check an assemblage or POVM file"));
    auto* seo = add_common(app.add_subcommand("seo", "steering-equivalent observables"));
    auto* classify = app.add_subcommand("classify", "decide class equivalence of two assemblages");
    classify->add_option("input1", path, "first assemblage")->required();
    classify->add_option("input2", path2, "second assemblage")->required();
    classify->add_option("--out", opt.out_path, "write the certificate here");
    classify->add_option("--seed", opt.seed, "alignment seed");
    classify->add_option("--fixture-tol", opt.fixture_tol, "fixture repair threshold");

    auto* robustness = add_common(app.add_subcommand("robustness", "steering or incompatibility robustness"));
    robustness->add_option("--kind", opt.kind, "sr (assemblage) or ir (POVM family)")
        ->check(CLI::IsMember({"sr", "ir"}));
    robustness->add_option("--export-sdpa", opt.export_sdpa_path,
                           "also write the assembled problem in SDPA sparse format");

    auto* distill = add_common(app.add_subcommand("distill", "filter to the class supremum"));
    auto* dilute = add_common(app.add_subcommand("dilute", "filter to near-zero steerability"));
    auto* optimal = add_common(app.add_subcommand("optimal-state",
                                                  "state matching the measurement incompatibility"));

    auto* rate = app.add_subcommand("rate", "simulate single-shot conversion statistics");
    rate->add_option("--p", opt.p, "success probability")->required();
    rate->add_option("--N", opt.trials, "trials per batch");
    rate->add_option("--batches", opt.batches, "number of batches");
    rate->add_option("--seed", opt.seed, "counter seed");
    rate->add_option("--out", opt.out_path, "write the estimate here");

    auto* figure2 = app.add_subcommand("figure2", "qutrit family sweep (two CSV files)");
    figure2->add_option("--grid", opt.grid, "grid points per axis")->required();
    figure2->add_option("--out-dir", opt.out_dir, "directory for the CSV files");
    figure2->add_option("--out", opt.out_path, "write the run summary here");
    figure2->add_option("--tol", opt.tol.solver_tol, "duality-gap tolerance");

    CLI11_PARSE(app, argc, argv);

    using namespace steerkit::workbench;
    if (app.got_subcommand(validate)) return cmd_validate(path, opt);
    if (app.got_subcommand(seo)) return cmd_seo(path, opt);
    if (app.got_subcommand(classify)) return cmd_classify(path, path2, opt);
    if (app.got_subcommand(robustness)) return cmd_robustness(path, opt);
    if (app.got_subcommand(distill)) return cmd_distill(path, opt);
    if (app.got_subcommand(dilute)) return cmd_dilute(path, opt);
    if (app.got_subcommand(optimal)) return cmd_optimal_state(path, opt);
    if (app.got_subcommand(rate)) return cmd_rate(opt);
    if (app.got_subcommand(figure2)) return cmd_figure2(opt);
    return 2;
}
