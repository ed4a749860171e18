#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "goc/datagen.hpp"
#include "goc/engine.hpp"
#include "goc/io.hpp"
#include "goc/metrics.hpp"
#include "goc/uncertainty.hpp"

namespace {

goc::OracleKind parseOracle(const std::string& s) {
    if (s == "kmeans") return goc::OracleKind::kmeans;
    if (s == "kmedoids") return goc::OracleKind::kmedoids;
    if (s == "gmm") return goc::OracleKind::gmm_eii;
    if (s == "gmm_bic") return goc::OracleKind::gmm_eii_bic;
    throw CLI::ValidationError("--oracle", "must be kmeans|kmedoids|gmm|gmm_bic");
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Clustering over empirical feature uncertainty sets"};
    app.require_subcommand(1);

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "Generate a synthetic dataset");
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    int gen_kstar = 50, gen_m = 101;
    gen_cmd->add_option("--seed", gen_seed, "RNG seed");
    gen_cmd->add_option("--out", gen_out, "Output directory")->required();
    gen_cmd->add_option("--k-star", gen_kstar, "Number of true clusters")
        ->check(CLI::PositiveNumber);
    gen_cmd->add_option("--m", gen_m, "Candidates per individual")->check(CLI::PositiveNumber);

    // cluster
    auto* clu_cmd = app.add_subcommand("cluster", "Run GOC/GPC/baseline on a dataset");
    std::string clu_in, clu_method = "goc", clu_oracle = "kmeans", clu_out,
                clu_conv = "exact", clu_schedule = "shrink";
    int clu_k0 = 50, clu_max_iter = 100;
    double clu_lambda = 0.0;
    bool clu_no_std = false;
    std::uint64_t clu_seed = 0;
    clu_cmd->add_option("--in", clu_in, "Dataset directory")->required();
    clu_cmd->add_option("--method", clu_method, "goc|gpc|baseline")
        ->check(CLI::IsMember({"goc", "gpc", "baseline"}));
    clu_cmd->add_option("--oracle", clu_oracle, "kmeans|kmedoids|gmm|gmm_bic")
        ->check(CLI::IsMember({"kmeans", "kmedoids", "gmm", "gmm_bic"}));
    clu_cmd->add_option("--k0", clu_k0, "Initial number of clusters")->check(CLI::PositiveNumber);
    clu_cmd->add_option("--lambda", clu_lambda, "Penalty coefficient")
        ->check(CLI::NonNegativeNumber);
    clu_cmd->add_option("--max-iter", clu_max_iter, "Iteration cap")->check(CLI::PositiveNumber);
    clu_cmd->add_option("--convergence", clu_conv, "exact or tol:EPS");
    clu_cmd->add_option("--k-schedule", clu_schedule, "shrink|constant")
        ->check(CLI::IsMember({"shrink", "constant"}));
    clu_cmd->add_option("--seed", clu_seed, "Oracle RNG seed");
    clu_cmd->add_flag("--no-standardize", clu_no_std, "Skip dataset standardization");
    clu_cmd->add_option("--out", clu_out, "Assignment CSV path")->required();

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "Score an assignment against a truth file");
    std::string eval_pred, eval_truth;
    eval_cmd->add_option("--pred", eval_pred, "Assignment CSV")->required();
    eval_cmd->add_option("--truth", eval_truth, "Truth CSV")->required();

    // ap
    auto* ap_cmd = app.add_subcommand("ap", "Affinity propagation over set discrepancies");
    std::string ap_in, ap_kind = "s2", ap_out;
    double ap_quantile = 0.5, ap_damping = 0.9;
    int ap_max_iter = 1000, ap_window = 50;
    bool ap_no_std = false, ap_std_hausdorff = false;
    ap_cmd->add_option("--in", ap_in, "Dataset directory")->required();
    ap_cmd->add_option("--kind", ap_kind, "s1|s2|s3")
        ->check(CLI::IsMember({"s1", "s2", "s3"}));
    ap_cmd->add_option("--quantile", ap_quantile, "Preference quantile in (0,1)");
    ap_cmd->add_option("--damping", ap_damping, "Message damping in [0.5,1)");
    ap_cmd->add_option("--max-iter", ap_max_iter, "Iteration cap");
    ap_cmd->add_option("--conv-window", ap_window, "Stable-exemplar window");
    ap_cmd->add_flag("--no-standardize", ap_no_std, "Skip dataset standardization");
    ap_cmd->add_flag("--hausdorff-standard", ap_std_hausdorff,
                     "Use the textbook sup-inf Hausdorff form for s3");
    ap_cmd->add_option("--out", ap_out, "Assignment CSV path")->required();

    // experiment
    auto* exp_cmd = app.add_subcommand("experiment", "Run a method-matrix sweep");
    std::string exp_config;
    exp_cmd->add_option("--config", exp_config, "Experiment config JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*gen_cmd) {
            goc::GenConfig cfg;
            cfg.seed = gen_seed;
            cfg.K_star = gen_kstar;
            cfg.m = gen_m;
            const goc::Dataset d = goc::generate_dataset(cfg);
            goc::save_dataset(d, gen_out, gen_seed);
            std::cout << "wrote " << d.size() << " individuals to " << gen_out << "\n";
        } else if (*clu_cmd) {
            goc::Dataset d = goc::load_dataset(clu_in);
            if (!clu_no_std && !d.standardized) d = goc::standardize(d);
            if (clu_method == "baseline") {
                goc::OracleConfig oc;
                oc.kind = parseOracle(clu_oracle);
                oc.rng_seed = clu_seed;
                const goc::Assignment a = goc::baseline_cluster(d, clu_k0, oc);
                goc::save_assignment(a, clu_out);
            } else {
                goc::GocConfig gc;
                gc.K0 = clu_k0;
                gc.lambda = clu_lambda;
                gc.T_max = clu_max_iter;
                gc.oracle.kind = parseOracle(clu_oracle);
                gc.oracle.rng_seed = clu_seed;
                gc.k_schedule = clu_schedule == "constant" ? goc::KSchedule::constant
                                                           : goc::KSchedule::shrink_nonsingleton;
                gc.mode = clu_method == "gpc" ? goc::GocMode::pessimistic
                                              : goc::GocMode::optimistic;
                if (clu_conv == "exact") {
                    gc.convergence = goc::ConvergenceRule::exact_candidates;
                } else if (clu_conv.rfind("tol:", 0) == 0) {
                    gc.convergence = goc::ConvergenceRule::tol;
                    gc.tol_eps = std::stod(clu_conv.substr(4));
                    if (!(gc.tol_eps > 0)) throw CLI::ValidationError("--convergence", "EPS must be > 0");
                } else {
                    throw CLI::ValidationError("--convergence", "must be 'exact' or 'tol:EPS'");
                }
                const auto [a, trace] = goc::run_goc(d, std::nullopt, gc);
                goc::save_assignment(a, clu_out);
                std::filesystem::path trace_path(clu_out);
                trace_path.replace_extension(".trace.csv");
                goc::save_trace(trace, trace_path);
                std::cout << "converged=" << (trace.converged ? "true" : "false")
                          << " iterations=" << trace.total_iterations
                          << " clusters=" << a.num_clusters << "\n";
            }
        } else if (*eval_cmd) {
            const std::vector<int> pred = goc::load_labels(eval_pred);
            const std::vector<int> truth = goc::load_labels(eval_truth);
            int k = 0;
            for (int l : pred) k = std::max(k, l);
            std::cout << "nmi " << fmt(goc::nmi(pred, truth)) << "\n";
            std::cout << "f_measure " << fmt(goc::f_measure(pred, truth)) << "\n";
            std::cout << "n_clusters " << k << "\n";
        } else if (*ap_cmd) {
            goc::Dataset d = goc::load_dataset(ap_in);
            if (!ap_no_std && !d.standardized) d = goc::standardize(d);
            const goc::DiscrepancyKind kind =
                ap_kind == "s1"   ? goc::DiscrepancyKind::S1_mean_pairwise
                : ap_kind == "s2" ? goc::DiscrepancyKind::S2_min_min
                                  : goc::DiscrepancyKind::S3_hausdorff;
            const goc::SimilarityMatrix S = goc::discrepancy_matrix(d, kind, ap_std_hausdorff);
            const goc::ApResult res =
                goc::affinity_propagation(S, ap_quantile, ap_damping, ap_max_iter, ap_window);
            goc::save_assignment(res.assignment, ap_out);
            std::cout << "converged=" << (res.converged ? "true" : "false")
                      << " clusters=" << res.assignment.num_clusters << "\n";
        } else if (*exp_cmd) {
            goc::run_experiment(goc::load_experiment_config(exp_config));
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
