#pragma once

#include <cstdint>
#include <optional>

#include "goc/types.hpp"

namespace goc {

enum class OracleKind { kmeans, kmedoids, gmm_eii, gmm_eii_bic };

struct OracleConfig {
    OracleKind kind = OracleKind::kmeans;
    int max_iter = 100;
    double tol = 1e-8;
    std::uint64_t rng_seed = 0;
};

// Clusters the rows of `points` into K groups. When init_centers is absent,
// kmeans/gmm seed with k-means++ from cfg.rng_seed and kmedoids uses the PAM
// build step. Labels are 1-based; clusters may end up empty but K is reported
// as requested. `centers` holds means (kmeans/gmm) or medoid points
// (kmedoids). Deterministic given (points, K, init_centers, cfg).
Assignment oracle_cluster(const Eigen::MatrixXd& points, int K,
                          const std::optional<Eigen::MatrixXd>& init_centers,
                          const OracleConfig& cfg);

// Fits the spherical shared-variance mixture for K = 1..K_max and returns the
// assignment minimizing BIC = -2 loglik + p ln(n) with
// p = K q + (K - 1) + 1 free parameters. Ties break toward smaller K.
Assignment gmm_bic_select(const Eigen::MatrixXd& points, int K_max, const OracleConfig& cfg);

}  // namespace goc
