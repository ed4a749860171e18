#include "goc/oracles.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <vector>

#include "goc/rng.hpp"

namespace goc {

namespace {

constexpr double kVarFloor = 1e-12;

// Index of the nearest row of `centers`, ties to the smallest index.
int nearestCenter(const Eigen::MatrixXd& centers, const Eigen::RowVectorXd& x) {
    int best = 0;
    double best_d = (centers.row(0) - x).squaredNorm();
    for (Eigen::Index k = 1; k < centers.rows(); ++k) {
        const double d = (centers.row(k) - x).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(k);
        }
    }
    return best;
}

// k-means++ seeding with deterministic D^2 sampling.
Eigen::MatrixXd kmeansPlusPlus(const Eigen::MatrixXd& points, int K, std::uint64_t seed) {
    const Eigen::Index n = points.rows();
    Rng rng(seed);
    Eigen::MatrixXd centers(K, points.cols());
    Eigen::VectorXd d2(n);
    centers.row(0) = points.row(static_cast<Eigen::Index>(rng.below(n)));
    for (Eigen::Index i = 0; i < n; ++i)
        d2(i) = (points.row(i) - centers.row(0)).squaredNorm();
    for (int k = 1; k < K; ++k) {
        const double total = d2.sum();
        Eigen::Index pick = 0;
        if (total > 0.0) {
            double target = rng.uniform01() * total;
            double acc = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                acc += d2(i);
                if (acc >= target) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = static_cast<Eigen::Index>(rng.below(n));
        }
        centers.row(k) = points.row(pick);
        for (Eigen::Index i = 0; i < n; ++i)
            d2(i) = std::min(d2(i), (points.row(i) - centers.row(k)).squaredNorm());
    }
    return centers;
}

Assignment runKMeans(const Eigen::MatrixXd& points, int K,
                     const std::optional<Eigen::MatrixXd>& init_centers,
                     const OracleConfig& cfg) {
    const Eigen::Index n = points.rows();
    Eigen::MatrixXd centers =
        init_centers ? *init_centers : kmeansPlusPlus(points, K, cfg.rng_seed);

    std::vector<int> labels(n, 0);
    double prev_obj = std::numeric_limits<double>::infinity();
    for (int it = 0; it < cfg.max_iter; ++it) {
        bool changed = false;
        double obj = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const int k = nearestCenter(centers, points.row(i));
            obj += (points.row(i) - centers.row(k)).squaredNorm();
            if (k != labels[i]) {
                labels[i] = k;
                changed = true;
            }
        }
        // Lloyd objective is nonincreasing; the repair below can only lower it.
        assert(obj <= prev_obj + 1e-9);
        prev_obj = obj;

        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(K, points.cols());
        Eigen::VectorXi counts = Eigen::VectorXi::Zero(K);
        for (Eigen::Index i = 0; i < n; ++i) {
            sums.row(labels[i]) += points.row(i);
            counts(labels[i]) += 1;
        }
        std::vector<char> claimed(n, 0);
        for (int k = 0; k < K; ++k) {
            if (counts(k) > 0) {
                centers.row(k) = sums.row(k) / counts(k);
            } else {
                // Reseed an empty cluster to the unclaimed point farthest
                // from its current center.
                Eigen::Index far = -1;
                double far_d = -1.0;
                for (Eigen::Index i = 0; i < n; ++i) {
                    if (claimed[i]) continue;
                    const double d = (points.row(i) - centers.row(k)).squaredNorm();
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                if (far >= 0) {
                    centers.row(k) = points.row(far);
                    claimed[far] = 1;
                    changed = true;
                }
            }
        }
        if (!changed) break;
    }

    Assignment a;
    a.num_clusters = K;
    a.labels.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) a.labels[i] = labels[i] + 1;
    a.centers = centers;
    return a;
}

// PAM build step: greedily pick medoids minimizing total distance.
std::vector<Eigen::Index> pamBuild(const Eigen::MatrixXd& dist, int K) {
    const Eigen::Index n = dist.rows();
    std::vector<Eigen::Index> medoids;
    std::vector<char> used(n, 0);
    Eigen::Index first = 0;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = dist.row(i).sum();
        if (s < best) {
            best = s;
            first = i;
        }
    }
    medoids.push_back(first);
    used[first] = 1;
    Eigen::VectorXd nearest = dist.col(first);
    while (static_cast<int>(medoids.size()) < K) {
        Eigen::Index pick = -1;
        double best_gain = -std::numeric_limits<double>::infinity();
        for (Eigen::Index c = 0; c < n; ++c) {
            if (used[c]) continue;
            double gain = 0.0;
            for (Eigen::Index i = 0; i < n; ++i)
                gain += std::max(0.0, nearest(i) - dist(i, c));
            if (gain > best_gain) {
                best_gain = gain;
                pick = c;
            }
        }
        medoids.push_back(pick);
        used[pick] = 1;
        nearest = nearest.cwiseMin(dist.col(pick));
    }
    return medoids;
}

Assignment runKMedoids(const Eigen::MatrixXd& points, int K,
                       const std::optional<Eigen::MatrixXd>& init_centers,
                       const OracleConfig& cfg) {
    (void)cfg;
    const Eigen::Index n = points.rows();
    Eigen::MatrixXd dist(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            dist(i, j) = (points.row(i) - points.row(j)).norm();

    std::vector<Eigen::Index> medoids;
    if (init_centers) {
        // Map each warm-start center to the nearest unclaimed point.
        std::vector<char> used(n, 0);
        for (Eigen::Index k = 0; k < init_centers->rows(); ++k) {
            Eigen::Index best = -1;
            double best_d = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < n; ++i) {
                if (used[i]) continue;
                const double d = (points.row(i) - init_centers->row(k)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = i;
                }
            }
            medoids.push_back(best);
            used[best] = 1;
        }
    } else {
        medoids = pamBuild(dist, K);
    }

    std::vector<int> labels(n, 0);
    for (int it = 0; it < cfg.max_iter; ++it) {
        // Voronoi assignment.
        for (Eigen::Index i = 0; i < n; ++i) {
            int best = 0;
            double best_d = dist(i, medoids[0]);
            for (int k = 1; k < K; ++k) {
                if (dist(i, medoids[k]) < best_d) {
                    best_d = dist(i, medoids[k]);
                    best = k;
                }
            }
            labels[i] = best;
        }
        // Exhaustive within-cluster medoid update.
        bool changed = false;
        for (int k = 0; k < K; ++k) {
            Eigen::Index best = medoids[k];
            double best_cost = std::numeric_limits<double>::infinity();
            for (Eigen::Index cand = 0; cand < n; ++cand) {
                if (labels[cand] != k) continue;
                double cost = 0.0;
                for (Eigen::Index i = 0; i < n; ++i)
                    if (labels[i] == k) cost += dist(i, cand);
                if (cost < best_cost) {
                    best_cost = cost;
                    best = cand;
                }
            }
            if (best != medoids[k]) {
                medoids[k] = best;
                changed = true;
            }
        }
        if (!changed) break;
    }

    Assignment a;
    a.num_clusters = K;
    a.labels.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        int best = 0;
        double best_d = dist(i, medoids[0]);
        for (int k = 1; k < K; ++k) {
            if (dist(i, medoids[k]) < best_d) {
                best_d = dist(i, medoids[k]);
                best = k;
            }
        }
        a.labels[i] = best + 1;
    }
    Eigen::MatrixXd centers(K, points.cols());
    for (int k = 0; k < K; ++k) centers.row(k) = points.row(medoids[k]);
    a.centers = centers;
    return a;
}

struct GmmFit {
    Assignment assignment;
    double loglik = 0.0;
};

// Spherical shared-variance (EII) mixture: Sigma_k = sigma^2 I for all k.
GmmFit runGmmEii(const Eigen::MatrixXd& points, int K,
                 const std::optional<Eigen::MatrixXd>& init_centers,
                 const OracleConfig& cfg) {
    const Eigen::Index n = points.rows();
    const Eigen::Index q = points.cols();
    Eigen::MatrixXd means =
        init_centers ? *init_centers : kmeansPlusPlus(points, K, cfg.rng_seed);
    Eigen::VectorXd logw = Eigen::VectorXd::Constant(K, -std::log(static_cast<double>(K)));

    double var = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double d2 = std::numeric_limits<double>::infinity();
        for (int k = 0; k < K; ++k)
            d2 = std::min(d2, (points.row(i) - means.row(k)).squaredNorm());
        var += d2;
    }
    var = std::max(var / static_cast<double>(n * q), kVarFloor);

    Eigen::MatrixXd resp(n, K);
    double loglik = -std::numeric_limits<double>::infinity();
    for (int it = 0; it < cfg.max_iter; ++it) {
        // E step in the log domain.
        const double log_norm = -0.5 * q * std::log(2.0 * M_PI * var);
        double new_loglik = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double mx = -std::numeric_limits<double>::infinity();
            for (int k = 0; k < K; ++k) {
                const double lp = logw(k) + log_norm -
                                  0.5 * (points.row(i) - means.row(k)).squaredNorm() / var;
                resp(i, k) = lp;
                mx = std::max(mx, lp);
            }
            double sum = 0.0;
            for (int k = 0; k < K; ++k) sum += std::exp(resp(i, k) - mx);
            const double lse = mx + std::log(sum);
            new_loglik += lse;
            for (int k = 0; k < K; ++k) resp(i, k) = std::exp(resp(i, k) - lse);
        }
        assert(new_loglik >= loglik - 1e-10 || it == 0);
        const bool converged = it > 0 && new_loglik - loglik < cfg.tol;
        loglik = new_loglik;
        if (converged) break;

        // M step.
        double ss = 0.0;
        for (int k = 0; k < K; ++k) {
            const double nk = resp.col(k).sum();
            if (nk > 1e-300) {
                means.row(k) = (resp.col(k).transpose() * points) / nk;
                logw(k) = std::log(nk / static_cast<double>(n));
            } else {
                logw(k) = -std::numeric_limits<double>::infinity();
            }
            for (Eigen::Index i = 0; i < n; ++i)
                ss += resp(i, k) * (points.row(i) - means.row(k)).squaredNorm();
        }
        var = std::max(ss / static_cast<double>(n * q), kVarFloor);
    }

    GmmFit fit;
    fit.loglik = loglik;
    fit.assignment.num_clusters = K;
    fit.assignment.labels.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        int best = 0;
        for (int k = 1; k < K; ++k)
            if (resp(i, k) > resp(i, best)) best = k;
        fit.assignment.labels[i] = best + 1;
    }
    fit.assignment.centers = means;
    return fit;
}

}  // namespace

Assignment oracle_cluster(const Eigen::MatrixXd& points, int K,
                          const std::optional<Eigen::MatrixXd>& init_centers,
                          const OracleConfig& cfg) {
    if (K < 1) throw std::invalid_argument("oracle_cluster: K must be >= 1");
    if (K > points.rows())
        throw KTooLarge("oracle_cluster: K = " + std::to_string(K) + " exceeds n = " +
                        std::to_string(points.rows()));
    if (init_centers &&
        (init_centers->rows() != K || init_centers->cols() != points.cols()))
        throw DimensionMismatch("oracle_cluster: init_centers must be K x q");
    switch (cfg.kind) {
        case OracleKind::kmeans:
            return runKMeans(points, K, init_centers, cfg);
        case OracleKind::kmedoids:
            return runKMedoids(points, K, init_centers, cfg);
        case OracleKind::gmm_eii:
            return runGmmEii(points, K, init_centers, cfg).assignment;
        case OracleKind::gmm_eii_bic:
            return gmm_bic_select(points, K, cfg);
    }
    throw std::logic_error("oracle_cluster: unknown oracle kind");
}

Assignment gmm_bic_select(const Eigen::MatrixXd& points, int K_max, const OracleConfig& cfg) {
    if (K_max < 1) throw std::invalid_argument("gmm_bic_select: K_max must be >= 1");
    if (K_max > points.rows())
        throw KTooLarge("gmm_bic_select: K_max = " + std::to_string(K_max) +
                        " exceeds n = " + std::to_string(points.rows()));
    const double n = static_cast<double>(points.rows());
    const double q = static_cast<double>(points.cols());
    OracleConfig fit_cfg = cfg;
    fit_cfg.kind = OracleKind::gmm_eii;
    Assignment best;
    double best_bic = std::numeric_limits<double>::infinity();
    for (int K = 1; K <= K_max; ++K) {
        const GmmFit fit = runGmmEii(points, K, std::nullopt, fit_cfg);
        const double p = K * q + (K - 1) + 1;  // means, weights, shared variance
        const double bic = -2.0 * fit.loglik + p * std::log(n);
        if (bic < best_bic) {  // strict: ties go to the smaller K
            best_bic = bic;
            best = fit.assignment;
        }
    }
    return best;
}

}  // namespace goc
