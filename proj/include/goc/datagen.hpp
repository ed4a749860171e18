#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "goc/types.hpp"
#include "goc/uncertainty.hpp"

namespace goc {

// Synthetic benchmark recipe: true 6-D covariates (position + velocity)
// grouped into K_star clusters, one dominant-uncertainty component, +-2 sigma
// box uncertainty sets, and a conserved-quantity feature transform.
struct GenConfig {
    int K_star = 50;
    // n_k = 1 + ((k-1) mod 10) unless an explicit list is given.
    std::optional<std::vector<int>> cluster_sizes;
    double cluster_spread = 0.02;  // within-cluster true-covariate scatter
    double sigma_major = 0.3;      // relative uncertainty of covariate 1
    double sigma_minor = 0.05;     // components 2..6
    int m = 101;                   // candidates per individual
    std::uint64_t seed = 1;

    int clusterSize(int k) const {  // k is 1-based
        if (cluster_sizes) return (*cluster_sizes)[k - 1];
        return 1 + (k - 1) % 10;
    }
    int totalIndividuals() const {
        int n = 0;
        for (int k = 1; k <= K_star; ++k) n += clusterSize(k);
        return n;
    }
};

// (E, L, L_z) of a spherical logarithmic potential: with p = (z1,z2,z3) and
// v = (z4,z5,z6), E = ||v||^2/2 + ln||p||, L = ||p x v||, L_z = (p x v)_3.
// All three are conserved along orbits with acceleration -p/||p||^2.
Eigen::Vector3d toy_transform(const Eigen::VectorXd& z);

// The Transform wrapper around toy_transform (d = 6, q = 3).
Transform toy_feature_transform();

Dataset generate_dataset(const GenConfig& cfg);

}  // namespace goc
