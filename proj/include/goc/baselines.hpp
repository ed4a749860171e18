#pragma once

#include "goc/oracles.hpp"
#include "goc/types.hpp"

namespace goc {

enum class DiscrepancyKind { S1_mean_pairwise, S2_min_min, S3_hausdorff };

// Negated set discrepancies (off-diagonal <= 0, diagonal 0 before the
// preference is injected).
struct SimilarityMatrix {
    Eigen::MatrixXd values;  // n x n
    DiscrepancyKind kind = DiscrepancyKind::S1_mean_pairwise;
};

// Row i = sample mean of set i.
Eigen::MatrixXd representative_vectors(const Dataset& d);

// Clustering oracle applied to the representative vectors (the UK-means
// equivalent baseline).
Assignment baseline_cluster(const Dataset& d, int K, const OracleConfig& cfg);

// S1: mean pairwise distance. S2: min-min distance. S3: the max of the two
// min-max terms as printed in the source formulation; `hausdorff_standard`
// switches S3 to the textbook max of sup-inf form.
SimilarityMatrix discrepancy_matrix(const Dataset& d, DiscrepancyKind kind,
                                    bool hausdorff_standard = false);

struct ApResult {
    Assignment assignment;
    bool converged = false;
    int iterations = 0;
};

// Standard responsibility/availability message passing. The diagonal of S is
// set to the `preference_quantile` sample quantile (linear interpolation) of
// the off-diagonal similarities.
ApResult affinity_propagation(const SimilarityMatrix& S, double preference_quantile,
                              double damping = 0.9, int max_iter = 1000,
                              int conv_window = 50);

}  // namespace goc
