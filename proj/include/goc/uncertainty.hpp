#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "goc/types.hpp"

namespace goc {

// Deterministic pointwise map f: R^d -> R^q.
struct Transform {
    int d = 0;
    int q = 0;
    std::string name;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> fn;

    Eigen::VectorXd operator()(const Eigen::VectorXd& z) const { return fn(z); }

    static Transform identity(int dim);
};

// Maps (sampled covariate, set center, per-dimension scales) to a
// nonnegative scalar.
struct PenaltyRule {
    std::function<double(const Eigen::VectorXd& sample, const Eigen::VectorXd& center,
                         const Eigen::VectorXd& scales)>
        fn;

    static PenaltyRule zero();
    // (sample_1 - center_1)^2 / (2 scales_1^2): quadratic in the first
    // covariate component, the dominant-uncertainty direction.
    static PenaltyRule quadraticFirstComponent();
};

// Draws m points uniformly from the set; identical seed gives identical rows.
Eigen::MatrixXd sample_covariates(const CovariateUncertaintyModel& model, int m,
                                  std::uint64_t rng_seed);

// Pushes uniform samples of the covariate set through f and attaches
// penalties. `scales` feeds the penalty rule (e.g. the per-dimension sigmas
// behind a box built as +-2 sigma).
EmpiricalFeatureSet build_empirical_set(const CovariateUncertaintyModel& model,
                                        const Transform& f, const PenaltyRule& pen,
                                        const Eigen::VectorXd& scales, int m,
                                        std::uint64_t rng_seed, int individual_id);

// Centers every feature dimension to pooled mean 0 and scales it to pooled
// mean square 1 (over all candidates of all individuals); scales penalties so
// the global max is 1 (all-zero penalties stay zero). Records the applied
// shift/scale in norm_meta.
Dataset standardize(const Dataset& d);

// max over reference rows of min_2-norm distance to the candidate set
// (the empirical check behind the coverage property).
double coverage_gap(const EmpiricalFeatureSet& s, const Eigen::MatrixXd& reference);

}  // namespace goc
