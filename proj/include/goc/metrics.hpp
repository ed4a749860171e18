#pragma once

#include <optional>
#include <vector>

#include "goc/types.hpp"

namespace goc {

// Contingency counts between a predicted and a true labeling.
struct Contingency {
    Eigen::MatrixXi n_kl;        // K x K*
    Eigen::VectorXi n_k_dot;     // row sums
    Eigen::VectorXi n_dot_l;     // column sums
    int n = 0;
};

Contingency contingency(const std::vector<int>& pred, const std::vector<int>& truth);

// Normalized mutual information 2I / (H1 + H2), natural log, 0*log(.) = 0.
// Returns 0 when the mutual information is 0 (including the single-cluster
// edge where both entropies vanish).
double nmi(const std::vector<int>& pred, const std::vector<int>& truth);

// Weighted per-true-cluster best F1: sum_l (n_.l / n) max_k F1(k, l).
double f_measure(const std::vector<int>& pred, const std::vector<int>& truth);

// Per-iteration convergence diagnostics relative to the final state:
//   eta1(t) = NMI(c(t), c(final))
//   eta2(t) = n^{-1} sum_i ||chi_i(t) - chi_i(final)||^2
//   eta3(t) = NMI(c(t), truth) / NMI(c(final), truth), absent when the
//             denominator is 0 or truth is missing.
struct EtaScores {
    std::vector<double> eta1;
    std::vector<double> eta2;
    std::optional<std::vector<double>> eta3;
};

EtaScores eta_scores(const GocTrace& trace, const Assignment& final,
                     const Eigen::MatrixXd& final_candidates,
                     const std::optional<std::vector<int>>& truth);

}  // namespace goc
