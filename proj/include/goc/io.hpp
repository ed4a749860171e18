#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "goc/baselines.hpp"
#include "goc/types.hpp"

namespace goc {

// Directory layout: meta.json, candidates.csv, optional truth.csv.
// All numbers are written as decimal text with 17 significant digits so a
// save/load round trip is bit-exact. Ids and labels are 1-based.
void save_dataset(const Dataset& d, const std::filesystem::path& dir,
                  std::optional<std::uint64_t> seed = std::nullopt);
Dataset load_dataset(const std::filesystem::path& dir);

// Assignment CSV: header "individual,label[,selected]".
void save_assignment(const Assignment& a, const std::filesystem::path& file);
Assignment load_assignment(const std::filesystem::path& file);

// Label column from an assignment CSV or a truth.csv.
std::vector<int> load_labels(const std::filesystem::path& file);

// Trace CSV: one row per iteration
// {t, K, objective, n_changed_labels, n_changed_candidates}.
void save_trace(const GocTrace& trace, const std::filesystem::path& file);

// Dense CSV round trip for similarity matrices.
void save_similarity(const SimilarityMatrix& S, const std::filesystem::path& file);
SimilarityMatrix load_similarity(const std::filesystem::path& file);

// ---------------------------------------------------------------------------
// Experiment sweeps
// ---------------------------------------------------------------------------

struct MethodSpec {
    std::string method;  // goc | gpc | baseline | ap
    std::string oracle = "kmeans";
    std::vector<int> k0;
    std::vector<double> lambda;
    std::string ap_kind = "s2";
    std::vector<double> quantile;
};

struct ExperimentConfig {
    std::vector<std::uint64_t> generate_seeds;  // datasets generated per seed
    std::vector<std::string> load_dirs;         // or loaded from directories
    std::vector<MethodSpec> methods;
    std::filesystem::path out_dir;
};

ExperimentConfig load_experiment_config(const std::filesystem::path& file);

// Runs the method matrix over every dataset and writes results.csv with
// per-replicate rows plus mean/sd aggregate rows.
void run_experiment(const ExperimentConfig& cfg);

}  // namespace goc
