#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "goc/oracles.hpp"
#include "goc/types.hpp"

namespace goc {

enum class KSchedule { constant, shrink_nonsingleton };
enum class ConvergenceRule { exact_candidates, tol };
enum class GocMode { optimistic, pessimistic };

struct GocConfig {
    int K0 = 1;
    double lambda = 0.0;
    KSchedule k_schedule = KSchedule::shrink_nonsingleton;
    ConvergenceRule convergence = ConvergenceRule::exact_candidates;
    double tol_eps = 1e-6;  // mean squared candidate displacement threshold
    int T_max = 100;
    OracleConfig oracle;
    GocMode mode = GocMode::optimistic;
};

// Number of clusters with at least two members.
int count_nonsingleton(const std::vector<int>& labels, int K);

// Row k = mean of rows with label k+1; `nonempty[k]` marks clusters with
// members (empty rows are zeroed).
struct ClusterCenters {
    Eigen::MatrixXd centers;      // K x q
    std::vector<char> nonempty;   // length K
};

ClusterCenters cluster_centers(const Eigen::MatrixXd& features,
                               const std::vector<int>& labels, int K);

// One step-III update. Optimistic mode: exhaustive double argmin over
// (candidate, cluster) of squared distance plus lambda-weighted penalty.
// Pessimistic mode: within the oracle-assigned cluster, pick the candidate
// maximizing the same quantity, then reassign to the nearest center. Ties
// break lexicographically on (candidate index, cluster index).
struct CandidateUpdate {
    Eigen::MatrixXd features;    // n x q
    std::vector<int> labels;     // 1-based
    std::vector<int> selected;   // 1-based candidate indices
};

CandidateUpdate update_candidates(const Dataset& d, const Eigen::MatrixXd& prev_features,
                                  const std::vector<int>& temp_labels, int K, double lambda,
                                  GocMode mode);

// sum_i ||chi_i - mu_{c_i}||^2 + lambda sum_i pen_i, with centers recomputed
// from (features, labels).
double goc_objective(const Eigen::MatrixXd& features, const std::vector<int>& labels, int K,
                     double lambda, const Eigen::VectorXd& selected_penalties);

// The main loop: (I) K-schedule update, (II) clustering oracle on the current
// candidates warm-started with the previous centers, (III) candidate update.
std::pair<Assignment, GocTrace> run_goc(const Dataset& d,
                                        const std::optional<std::vector<int>>& init_selected,
                                        const GocConfig& cfg);

// Pessimistic variant; ignores cfg.mode.
std::pair<Assignment, GocTrace> run_gpc(const Dataset& d, const GocConfig& cfg);

// Default initial candidates: the candidate minimizing the penalty (lowest
// index on ties), or the one nearest the set's own mean when all penalties
// are zero. 1-based indices.
std::vector<int> default_initial_candidates(const Dataset& d);

}  // namespace goc
