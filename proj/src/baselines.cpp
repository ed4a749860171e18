#include "goc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "goc/rng.hpp"

namespace goc {

Eigen::MatrixXd representative_vectors(const Dataset& d) {
    validate_dataset(d);
    Eigen::MatrixXd out(d.size(), d.feature_dim);
    for (int i = 0; i < d.size(); ++i)
        out.row(i) = d.sets[i].candidates.colwise().mean();
    return out;
}

Assignment baseline_cluster(const Dataset& d, int K, const OracleConfig& cfg) {
    return oracle_cluster(representative_vectors(d), K, std::nullopt, cfg);
}

namespace {

double meanPairwise(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    double sum = 0.0;
    for (Eigen::Index a = 0; a < A.rows(); ++a)
        sum += (B.rowwise() - A.row(a)).rowwise().norm().sum();
    return sum / (static_cast<double>(A.rows()) * B.rows());
}

double minMin(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index a = 0; a < A.rows(); ++a)
        best = std::min(best, (B.rowwise() - A.row(a)).rowwise().squaredNorm().minCoeff());
    return std::sqrt(best);
}

// min over rows of A of the max distance to B.
double minMax(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index a = 0; a < A.rows(); ++a)
        best = std::min(best, (B.rowwise() - A.row(a)).rowwise().squaredNorm().maxCoeff());
    return std::sqrt(best);
}

// max over rows of A of the min distance to B (one side of the textbook
// Hausdorff distance).
double maxMin(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    double worst = 0.0;
    for (Eigen::Index a = 0; a < A.rows(); ++a)
        worst = std::max(worst, (B.rowwise() - A.row(a)).rowwise().squaredNorm().minCoeff());
    return std::sqrt(worst);
}

}  // namespace

SimilarityMatrix discrepancy_matrix(const Dataset& d, DiscrepancyKind kind,
                                    bool hausdorff_standard) {
    validate_dataset(d);
    const int n = d.size();
    if (n < 2) throw Error("discrepancy_matrix: need at least 2 sets");
    SimilarityMatrix S;
    S.kind = kind;
    S.values = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const auto& A = d.sets[i].candidates;
            const auto& B = d.sets[j].candidates;
            double disc = 0.0;
            switch (kind) {
                case DiscrepancyKind::S1_mean_pairwise:
                    disc = meanPairwise(A, B);
                    break;
                case DiscrepancyKind::S2_min_min:
                    disc = minMin(A, B);
                    break;
                case DiscrepancyKind::S3_hausdorff:
                    disc = hausdorff_standard
                               ? std::max(maxMin(A, B), maxMin(B, A))
                               : std::max(minMax(A, B), minMax(B, A));
                    break;
            }
            S.values(i, j) = -disc;
            S.values(j, i) = -disc;
        }
    }
    return S;
}

namespace {

// Linear-interpolation sample quantile of a sorted vector.
double quantileSorted(const std::vector<double>& sorted, double q) {
    const double pos = q * (static_cast<double>(sorted.size()) - 1.0);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

ApResult affinity_propagation(const SimilarityMatrix& S, double preference_quantile,
                              double damping, int max_iter, int conv_window) {
    const Eigen::Index n = S.values.rows();
    if (n < 2 || S.values.cols() != n)
        throw Error("affinity_propagation: similarity matrix must be n x n with n >= 2");
    if (!(preference_quantile > 0.0 && preference_quantile < 1.0))
        throw std::invalid_argument("affinity_propagation: quantile must be in (0,1)");
    if (!(damping >= 0.5 && damping < 1.0))
        throw std::invalid_argument("affinity_propagation: damping must be in [0.5, 1)");

    std::vector<double> off;
    off.reserve(static_cast<std::size_t>(n) * (n - 1));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j) off.push_back(S.values(i, j));
    std::sort(off.begin(), off.end());
    const double pref = quantileSorted(off, preference_quantile);

    Eigen::MatrixXd sim = S.values;
    sim.diagonal().setConstant(pref);

    // Deterministic symmetry-breaking jitter (the usual AP degeneracy fix):
    // exact ties in the similarities make the messages oscillate or split
    // clusters arbitrarily.
    Rng jitter(0x5e2d1a4b90c3f7e1ULL);
    const double eps = std::numeric_limits<double>::epsilon();
    const double tiny = std::numeric_limits<double>::min();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            sim(i, j) += (eps * sim(i, j) + 100.0 * tiny) * jitter.normal();
    // Nudge the preference strictly below the quantile so an exact tie
    // between "become an exemplar" and "join another cluster" resolves
    // toward fewer clusters (e.g. identical sets collapse to one).
    sim.diagonal().array() -= eps * sim.cwiseAbs().maxCoeff() + 1000.0 * tiny;

    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    std::vector<char> exemplar(n, 0), prev_exemplar(n, 0);
    int stable = 0, it = 0;
    bool converged = false;

    for (it = 1; it <= max_iter; ++it) {
        // Responsibilities.
        for (Eigen::Index i = 0; i < n; ++i) {
            // Largest and second-largest of a(i,k) + s(i,k) over k.
            double max1 = -std::numeric_limits<double>::infinity();
            double max2 = -std::numeric_limits<double>::infinity();
            Eigen::Index arg1 = -1;
            for (Eigen::Index k = 0; k < n; ++k) {
                const double v = A(i, k) + sim(i, k);
                if (v > max1) {
                    max2 = max1;
                    max1 = v;
                    arg1 = k;
                } else if (v > max2) {
                    max2 = v;
                }
            }
            for (Eigen::Index k = 0; k < n; ++k) {
                const double rnew = sim(i, k) - (k == arg1 ? max2 : max1);
                R(i, k) = damping * R(i, k) + (1.0 - damping) * rnew;
            }
        }
        // Availabilities.
        for (Eigen::Index k = 0; k < n; ++k) {
            double pos_sum = 0.0;
            for (Eigen::Index i = 0; i < n; ++i)
                if (i != k) pos_sum += std::max(0.0, R(i, k));
            for (Eigen::Index i = 0; i < n; ++i) {
                double anew;
                if (i == k) {
                    anew = pos_sum;
                } else {
                    anew = std::min(0.0, R(k, k) + pos_sum - std::max(0.0, R(i, k)));
                }
                A(i, k) = damping * A(i, k) + (1.0 - damping) * anew;
            }
        }
        // Exemplars and convergence over a stable window.
        for (Eigen::Index k = 0; k < n; ++k) exemplar[k] = R(k, k) + A(k, k) > 0.0;
        if (it > 1 && exemplar == prev_exemplar) {
            if (++stable >= conv_window &&
                std::any_of(exemplar.begin(), exemplar.end(), [](char e) { return e != 0; })) {
                converged = true;
                break;
            }
        } else {
            stable = 0;
        }
        prev_exemplar = exemplar;
    }

    std::vector<Eigen::Index> exemplars;
    for (Eigen::Index k = 0; k < n; ++k)
        if (exemplar[k]) exemplars.push_back(k);
    if (exemplars.empty()) {
        Eigen::Index best = 0;
        for (Eigen::Index k = 1; k < n; ++k)
            if (R(k, k) + A(k, k) > R(best, best) + A(best, best)) best = k;
        exemplars.push_back(best);
    }

    const std::size_t K = exemplars.size();
    auto assign = [&](std::vector<int>& labels) {
        labels.assign(n, 0);
        std::vector<int> label_of(n, -1);
        for (std::size_t c = 0; c < K; ++c) label_of[exemplars[c]] = static_cast<int>(c);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (label_of[i] >= 0) {
                labels[i] = label_of[i] + 1;
                continue;
            }
            std::size_t best = 0;
            for (std::size_t c = 1; c < K; ++c)
                if (sim(i, exemplars[c]) > sim(i, exemplars[best])) best = c;
            labels[i] = static_cast<int>(best) + 1;
        }
    };

    std::vector<int> labels;
    assign(labels);
    // Refinement: within each cluster, move the exemplar to the member that
    // maximizes the within-cluster similarity sum, then reassign.
    for (std::size_t c = 0; c < K; ++c) {
        std::vector<Eigen::Index> members;
        for (Eigen::Index i = 0; i < n; ++i)
            if (labels[i] == static_cast<int>(c) + 1) members.push_back(i);
        Eigen::Index best = exemplars[c];
        double best_sum = -std::numeric_limits<double>::infinity();
        for (Eigen::Index cand : members) {
            double s = 0.0;
            for (Eigen::Index m : members) s += sim(m, cand);
            if (s > best_sum) {
                best_sum = s;
                best = cand;
            }
        }
        exemplars[c] = best;
    }
    std::sort(exemplars.begin(), exemplars.end());
    assign(labels);

    ApResult res;
    res.converged = converged;
    res.iterations = std::min(it, max_iter);
    res.assignment.num_clusters = static_cast<int>(K);
    res.assignment.labels = std::move(labels);
    return res;
}

}  // namespace goc
