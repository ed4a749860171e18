#include "goc/engine.hpp"

#include "goc/rng.hpp"

#include <cmath>
#include <limits>

namespace goc {

int count_nonsingleton(const std::vector<int>& labels, int K) {
    std::vector<int> counts(K, 0);
    for (int l : labels) {
        if (l < 1 || l > K) throw BadLabel("count_nonsingleton: label outside 1..K");
        counts[l - 1] += 1;
    }
    int c = 0;
    for (int k = 0; k < K; ++k)
        if (counts[k] > 1) ++c;
    return c;
}

ClusterCenters cluster_centers(const Eigen::MatrixXd& features,
                               const std::vector<int>& labels, int K) {
    ClusterCenters cc;
    cc.centers = Eigen::MatrixXd::Zero(K, features.cols());
    cc.nonempty.assign(K, 0);
    std::vector<int> counts(K, 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int k = labels[i] - 1;
        if (k < 0 || k >= K) throw BadLabel("cluster_centers: label outside 1..K");
        cc.centers.row(k) += features.row(static_cast<Eigen::Index>(i));
        counts[k] += 1;
    }
    for (int k = 0; k < K; ++k) {
        if (counts[k] > 0) {
            cc.centers.row(k) /= counts[k];
            cc.nonempty[k] = 1;
        }
    }
    return cc;
}

namespace {

// Nearest nonempty center; ties to the smallest cluster index.
int nearestLabel(const ClusterCenters& cc, const Eigen::RowVectorXd& x) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < cc.centers.rows(); ++k) {
        if (!cc.nonempty[k]) continue;
        const double d = (cc.centers.row(k) - x).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(k);
        }
    }
    return best + 1;
}

}  // namespace

CandidateUpdate update_candidates(const Dataset& d, const Eigen::MatrixXd& prev_features,
                                  const std::vector<int>& temp_labels, int K, double lambda,
                                  GocMode mode) {
    const int n = d.size();
    const ClusterCenters cc = cluster_centers(prev_features, temp_labels, K);
    CandidateUpdate out;
    out.features.resize(n, d.feature_dim);
    out.labels.resize(n);
    out.selected.resize(n);

    for (int i = 0; i < n; ++i) {
        const auto& set = d.sets[i];
        int best_j = 0;
        if (mode == GocMode::optimistic) {
            double best_val = std::numeric_limits<double>::infinity();
            for (int j = 0; j < set.size(); ++j) {
                // min over nonempty clusters of the center distance; the
                // penalty does not depend on k, so take the min first.
                double dmin = std::numeric_limits<double>::infinity();
                for (int k = 0; k < K; ++k) {
                    if (!cc.nonempty[k]) continue;
                    dmin = std::min(dmin, (set.candidates.row(j) - cc.centers.row(k))
                                              .squaredNorm());
                }
                const double val = dmin + lambda * set.penalties(j);
                if (val < best_val) {
                    best_val = val;
                    best_j = j;
                }
            }
        } else {
            const int k0 = temp_labels[i] - 1;
            double best_val = -std::numeric_limits<double>::infinity();
            for (int j = 0; j < set.size(); ++j) {
                const double val =
                    (set.candidates.row(j) - cc.centers.row(k0)).squaredNorm() +
                    lambda * set.penalties(j);
                if (val > best_val) {
                    best_val = val;
                    best_j = j;
                }
            }
        }
        out.features.row(i) = set.candidates.row(best_j);
        out.selected[i] = best_j + 1;
        out.labels[i] = nearestLabel(cc, out.features.row(i));
    }
    return out;
}

double goc_objective(const Eigen::MatrixXd& features, const std::vector<int>& labels, int K,
                     double lambda, const Eigen::VectorXd& selected_penalties) {
    const ClusterCenters cc = cluster_centers(features, labels, K);
    double obj = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        obj += (features.row(static_cast<Eigen::Index>(i)) - cc.centers.row(labels[i] - 1))
                   .squaredNorm();
    return obj + lambda * selected_penalties.sum();
}

std::vector<int> default_initial_candidates(const Dataset& d) {
    std::vector<int> sel(d.size());
    for (int i = 0; i < d.size(); ++i) {
        const auto& set = d.sets[i];
        int best = 0;
        if (set.penalties.maxCoeff() > 0.0) {
            for (int j = 1; j < set.size(); ++j)
                if (set.penalties(j) < set.penalties(best)) best = j;
        } else {
            const Eigen::RowVectorXd mean = set.candidates.colwise().mean();
            double best_d = (set.candidates.row(0) - mean).squaredNorm();
            for (int j = 1; j < set.size(); ++j) {
                const double dd = (set.candidates.row(j) - mean).squaredNorm();
                if (dd < best_d) {
                    best_d = dd;
                    best = j;
                }
            }
        }
        sel[i] = best + 1;
    }
    return sel;
}

namespace {

std::pair<Assignment, GocTrace> runLoop(const Dataset& d,
                                        const std::optional<std::vector<int>>& init_selected,
                                        const GocConfig& cfg) {
    validate_dataset(d);
    const int n = d.size();
    if (cfg.K0 < 1 || cfg.K0 > n)
        throw KTooLarge("run_goc: K0 = " + std::to_string(cfg.K0) + " outside 1..n");
    if (cfg.T_max < 1) throw std::invalid_argument("run_goc: T_max must be >= 1");

    std::vector<int> selected = init_selected ? *init_selected : default_initial_candidates(d);
    if (static_cast<int>(selected.size()) != n)
        throw LengthMismatch("run_goc: init_selected length differs from n");
    Eigen::MatrixXd features(n, d.feature_dim);
    for (int i = 0; i < n; ++i) {
        if (selected[i] < 1 || selected[i] > d.sets[i].size())
            throw Error("run_goc: initial candidate index outside 1..m_i");
        features.row(i) = d.sets[i].candidates.row(selected[i] - 1);
    }

    GocTrace trace;
    std::vector<int> labels;  // c(t-1), empty before the first iteration
    int K_prev = cfg.K0;
    std::optional<Eigen::MatrixXd> warm_centers;

    for (int t = 1; t <= cfg.T_max; ++t) {
        // (I) K-schedule. c(0) is undefined, so t = 1 always uses K0.
        int K_t = cfg.K0;
        if (t > 1 && cfg.k_schedule == KSchedule::shrink_nonsingleton)
            K_t = std::max(1, count_nonsingleton(labels, K_prev));

        // Warm start: previous centers of the clusters that survive the
        // schedule; skipped when the count does not match K(t).
        std::optional<Eigen::MatrixXd> init;
        if (t > 1 && warm_centers && warm_centers->rows() == K_t) init = warm_centers;

        // (II) oracle on the current candidates. The BIC oracle picks its own
        // cluster count from 1..K(t). In pessimistic mode the oracle seed is
        // re-derived per iteration (deterministically): the scatter step can
        // lock the candidates into a cycle, and a fixed seed would then pin
        // the oracle to one local optimum forever.
        OracleConfig oc = cfg.oracle;
        if (cfg.mode == GocMode::pessimistic)
            oc.rng_seed = Rng::derive(cfg.oracle.rng_seed, static_cast<std::uint64_t>(t));
        Assignment temp;
        if (cfg.oracle.kind == OracleKind::gmm_eii_bic)
            temp = gmm_bic_select(features, K_t, oc);
        else
            temp = oracle_cluster(features, K_t, init, oc);
        const int K_eff = temp.num_clusters;

        // (III) candidate and assignment update.
        CandidateUpdate upd =
            update_candidates(d, features, temp.labels, K_eff, cfg.lambda, cfg.mode);

        Eigen::VectorXd pens(n);
        for (int i = 0; i < n; ++i) pens(i) = d.sets[i].penalties(upd.selected[i] - 1);

        GocIteration rec;
        rec.t = t;
        rec.K = K_eff;
        rec.labels = upd.labels;
        rec.selected = upd.selected;
        rec.candidates = upd.features;
        rec.objective = goc_objective(upd.features, upd.labels, K_eff, cfg.lambda, pens);
        trace.iterations.push_back(std::move(rec));

        bool converged = false;
        if (t > 1) {
            if (cfg.convergence == ConvergenceRule::exact_candidates) {
                converged = upd.selected == selected;
            } else {
                const double msd =
                    (upd.features - features).rowwise().squaredNorm().mean();
                converged = msd < cfg.tol_eps;
            }
        }

        // Centers for the next warm start: the nonsingleton clusters under
        // the shrink schedule, all nonempty ones otherwise.
        const ClusterCenters cc = cluster_centers(upd.features, upd.labels, K_eff);
        std::vector<int> counts(K_eff, 0);
        for (int l : upd.labels) counts[l - 1] += 1;
        const int keep_min = cfg.k_schedule == KSchedule::shrink_nonsingleton ? 2 : 1;
        std::vector<int> keep;
        for (int k = 0; k < K_eff; ++k)
            if (counts[k] >= keep_min) keep.push_back(k);
        Eigen::MatrixXd wc(static_cast<Eigen::Index>(keep.size()), d.feature_dim);
        for (std::size_t r = 0; r < keep.size(); ++r) wc.row(r) = cc.centers.row(keep[r]);
        warm_centers = wc;

        features = upd.features;
        labels = upd.labels;
        selected = upd.selected;
        K_prev = K_eff;

        if (converged) {
            trace.converged = true;
            break;
        }
    }
    trace.total_iterations = static_cast<int>(trace.iterations.size());

    Assignment final;
    final.labels = labels;
    final.num_clusters = K_prev;
    final.selected = selected;
    final.centers = cluster_centers(features, labels, K_prev).centers;
    return {std::move(final), std::move(trace)};
}

}  // namespace

std::pair<Assignment, GocTrace> run_goc(const Dataset& d,
                                        const std::optional<std::vector<int>>& init_selected,
                                        const GocConfig& cfg) {
    return runLoop(d, init_selected, cfg);
}

std::pair<Assignment, GocTrace> run_gpc(const Dataset& d, const GocConfig& cfg) {
    GocConfig pess = cfg;
    pess.mode = GocMode::pessimistic;
    return runLoop(d, std::nullopt, pess);
}

}  // namespace goc
