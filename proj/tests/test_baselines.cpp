#include <doctest.h>

#include <algorithm>

#include "goc/baselines.hpp"
#include "goc/metrics.hpp"
#include "goc/rng.hpp"

using namespace goc;

namespace {

EmpiricalFeatureSet set1d(int id, std::initializer_list<double> values) {
    EmpiricalFeatureSet s;
    s.individual_id = id;
    s.candidates.resize(static_cast<Eigen::Index>(values.size()), 1);
    int j = 0;
    for (double v : values) s.candidates(j++, 0) = v;
    s.penalties = Eigen::VectorXd::Zero(s.candidates.rows());
    return s;
}

Dataset dataset1d(std::vector<EmpiricalFeatureSet> sets) {
    Dataset d;
    d.feature_dim = 1;
    d.sets = std::move(sets);
    return d;
}

Dataset randomSets(Rng& rng, int n, int max_m) {
    Dataset d;
    d.feature_dim = 2;
    for (int i = 0; i < n; ++i) {
        const int m = 1 + static_cast<int>(rng.below(max_m));
        EmpiricalFeatureSet s;
        s.individual_id = i + 1;
        s.candidates.resize(m, 2);
        for (int j = 0; j < m; ++j)
            s.candidates.row(j) << rng.uniform(-3, 3), rng.uniform(-3, 3);
        s.penalties = Eigen::VectorXd::Zero(m);
        d.sets.push_back(std::move(s));
    }
    return d;
}

}  // namespace

TEST_CASE("representative_vectors") {
    Dataset d;
    d.feature_dim = 2;
    EmpiricalFeatureSet a;
    a.individual_id = 1;
    a.candidates.resize(2, 2);
    a.candidates << 0, 0, 2, 2;
    a.penalties = Eigen::VectorXd::Zero(2);
    d.sets.push_back(a);
    d.sets.push_back(a);
    d.sets[1].candidates.resize(1, 2);
    d.sets[1].candidates << 7, -1;
    d.sets[1].penalties = Eigen::VectorXd::Zero(1);

    const Eigen::MatrixXd r = representative_vectors(d);
    CHECK(r.row(0) == Eigen::RowVector2d(1, 1));
    CHECK(r.row(1) == Eigen::RowVector2d(7, -1));

    const Dataset sym = dataset1d({set1d(1, {-1.0, 0.0, 1.0})});
    CHECK(representative_vectors(sym)(0, 0) == 0.0);
}

TEST_CASE("baseline_cluster splits well-separated set means") {
    Dataset d = dataset1d({set1d(1, {-0.1, 0.1}), set1d(2, {0.0, 0.2}),
                           set1d(3, {99.9, 100.1}), set1d(4, {100.0, 100.2})});
    OracleConfig cfg;
    const auto a = baseline_cluster(d, 2, cfg);
    CHECK(nmi(a.labels, {1, 1, 2, 2}) == 1.0);
    CHECK_FALSE(a.selected.has_value());

    const auto singles = baseline_cluster(d, 4, cfg);
    std::vector<int> sorted = singles.labels;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("discrepancy hand values") {
    const Dataset s2d = dataset1d({set1d(1, {0.0, 1.0}), set1d(2, {3.0})});
    const auto s2 = discrepancy_matrix(s2d, DiscrepancyKind::S2_min_min);
    CHECK(s2.values(0, 1) == doctest::Approx(-2.0));
    CHECK(s2.values(0, 0) == 0.0);

    const Dataset s1d = dataset1d({set1d(1, {0.0, 2.0}), set1d(2, {1.0})});
    const auto s1 = discrepancy_matrix(s1d, DiscrepancyKind::S1_mean_pairwise);
    CHECK(s1.values(0, 1) == doctest::Approx(-1.0));

    const Dataset s3d = dataset1d({set1d(1, {0.0, 1.0}), set1d(2, {0.0})});
    const auto s3 = discrepancy_matrix(s3d, DiscrepancyKind::S3_hausdorff);
    CHECK(s3.values(0, 1) == doctest::Approx(-1.0));
}

TEST_CASE("min-min violates the triangle inequality on a witness") {
    // A={0}, B={2}, C={0,2}: s2(A,B)=2 but s2(A,C)+s2(C,B)=0.
    const Dataset d = dataset1d({set1d(1, {0.0}), set1d(2, {2.0}), set1d(3, {0.0, 2.0})});
    const auto S = discrepancy_matrix(d, DiscrepancyKind::S2_min_min);
    const double ab = -S.values(0, 1), ac = -S.values(0, 2), cb = -S.values(2, 1);
    CHECK(ab > ac + cb + 1e-9);
}

TEST_CASE("discrepancy fuzzing: symmetry, s2 <= s1, triangle for s1 and s3") {
    Rng rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        Dataset d = randomSets(rng, 3, 6);
        const auto S1 = discrepancy_matrix(d, DiscrepancyKind::S1_mean_pairwise);
        const auto S2 = discrepancy_matrix(d, DiscrepancyKind::S2_min_min);
        const auto S3 = discrepancy_matrix(d, DiscrepancyKind::S3_hausdorff);
        for (const auto& S : {S1, S2, S3})
            CHECK((S.values - S.values.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK((S2.values.array() >= S1.values.array() - 1e-12).all());  // -s2 >= -s1

        for (const auto& S : {S1, S3}) {
            // Ten triangle checks per trial over the 3 sets, all orderings.
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    for (int c = 0; c < 3; ++c) {
                        if (a == b || b == c || a == c) continue;
                        const double ab = -S.values(a, b);
                        const double ac = -S.values(a, c);
                        const double cb = -S.values(c, b);
                        CHECK(ab <= ac + cb + 1e-9);
                    }
        }
    }
}

TEST_CASE("the standard-hausdorff flag switches the S3 formula") {
    // A={0,3}, B={1,2}: the min-max form gives 2, sup-inf Hausdorff gives 1.
    const Dataset d = dataset1d({set1d(1, {0.0, 3.0}), set1d(2, {1.0, 2.0})});
    const auto printed = discrepancy_matrix(d, DiscrepancyKind::S3_hausdorff, false);
    const auto standard = discrepancy_matrix(d, DiscrepancyKind::S3_hausdorff, true);
    CHECK(-printed.values(0, 1) == doctest::Approx(2.0));
    CHECK(-standard.values(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("affinity propagation recovers three separated groups") {
    const Dataset d = dataset1d({set1d(1, {0.0, 0.1}), set1d(2, {0.05, 0.15}),
                                 set1d(3, {10.0, 10.1}), set1d(4, {10.05, 10.15}),
                                 set1d(5, {20.0, 20.1}), set1d(6, {20.05, 20.15})});
    const auto S = discrepancy_matrix(d, DiscrepancyKind::S2_min_min);
    const auto r = affinity_propagation(S, 0.5, 0.9);
    CHECK(r.assignment.num_clusters == 3);
    CHECK(nmi(r.assignment.labels, {1, 1, 2, 2, 3, 3}) == 1.0);
    CHECK(r.converged);
}

TEST_CASE("two identical sets collapse to one cluster for any quantile") {
    const Dataset d = dataset1d({set1d(1, {1.0, 2.0}), set1d(2, {1.0, 2.0})});
    for (double q : {0.1, 0.5, 0.9}) {
        const auto S = discrepancy_matrix(d, DiscrepancyKind::S2_min_min);
        const auto r = affinity_propagation(S, q, 0.9);
        CHECK(r.assignment.num_clusters == 1);
    }
}

TEST_CASE("raising the preference quantile does not reduce the cluster count") {
    Rng rng(64);
    Dataset d = randomSets(rng, 12, 3);
    const auto S = discrepancy_matrix(d, DiscrepancyKind::S1_mean_pairwise);
    const auto lo = affinity_propagation(S, 0.5, 0.9);
    const auto hi = affinity_propagation(S, 0.95, 0.9);
    CHECK(hi.assignment.num_clusters >= lo.assignment.num_clusters);
}

TEST_CASE("affinity propagation validates its inputs") {
    const Dataset d = dataset1d({set1d(1, {0.0}), set1d(2, {1.0})});
    const auto S = discrepancy_matrix(d, DiscrepancyKind::S2_min_min);
    CHECK_THROWS_AS(affinity_propagation(S, 0.5, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(affinity_propagation(S, 0.0, 0.9), std::invalid_argument);
}

TEST_CASE("small-n AP mostly matches exhaustive exemplar search") {
    Rng rng(15);
    int agree = 0;
    const int trials = 40;
    for (int trial = 0; trial < trials; ++trial) {
        Dataset d = randomSets(rng, 6, 2);
        auto S = discrepancy_matrix(d, DiscrepancyKind::S1_mean_pairwise);
        const auto r = affinity_propagation(S, 0.5, 0.9);

        // Exhaustive net-similarity maximization over all nonempty exemplar
        // subsets, with the same quantile preference on the diagonal.
        std::vector<double> off;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                if (i != j) off.push_back(S.values(i, j));
        std::sort(off.begin(), off.end());
        const double pos = 0.5 * (off.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const double pref = off[lo] + (pos - lo) * (off[lo + 1] - off[lo]);

        double best = -std::numeric_limits<double>::infinity();
        int best_count = 0;
        for (int mask = 1; mask < (1 << 6); ++mask) {
            double net = 0.0;
            for (int i = 0; i < 6; ++i) {
                if (mask & (1 << i)) {
                    net += pref;
                    continue;
                }
                double bi = -std::numeric_limits<double>::infinity();
                for (int e = 0; e < 6; ++e)
                    if (mask & (1 << e)) bi = std::max(bi, S.values(i, e));
                net += bi;
            }
            if (net > best) {
                best = net;
                best_count = __builtin_popcount(static_cast<unsigned>(mask));
            }
        }
        if (r.assignment.num_clusters == best_count) ++agree;
    }
    CHECK(agree >= static_cast<int>(0.9 * trials));
}
