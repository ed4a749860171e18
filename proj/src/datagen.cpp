#include "goc/datagen.hpp"

#include <cmath>

#include "goc/rng.hpp"

namespace goc {

Eigen::Vector3d toy_transform(const Eigen::VectorXd& z) {
    if (z.size() != 6) throw DimensionMismatch("toy_transform: expected a 6-vector");
    const Eigen::Vector3d p = z.head<3>();
    const Eigen::Vector3d v = z.tail<3>();
    const double pn = p.norm();
    if (pn <= 1e-12) throw SingularInput("toy_transform: position norm is ~0");
    const Eigen::Vector3d ang = p.cross(v);
    Eigen::Vector3d out;
    out(0) = 0.5 * v.squaredNorm() + std::log(pn);
    out(1) = ang.norm();
    out(2) = ang(2);
    return out;
}

Transform toy_feature_transform() {
    Transform t;
    t.d = 6;
    t.q = 3;
    t.name = "log-potential-invariants";
    t.fn = [](const Eigen::VectorXd& z) -> Eigen::VectorXd { return toy_transform(z); };
    return t;
}

namespace {

// Centroid true covariates: position uniform in the shell 1 <= ||p|| <= 3,
// speed in [0.5, 1.5] with uniform direction, redrawn until all pairwise
// true-feature distances exceed 5 x cluster_spread.
std::vector<Eigen::VectorXd> drawCentroids(const GenConfig& cfg, Rng& rng) {
    const double min_sep = 5.0 * cfg.cluster_spread;
    std::vector<Eigen::VectorXd> centroids;
    std::vector<Eigen::Vector3d> feats;
    auto unitDir = [&rng]() {
        Eigen::Vector3d u;
        double n2;
        do {
            u << rng.normal(), rng.normal(), rng.normal();
            n2 = u.squaredNorm();
        } while (n2 == 0.0);
        return Eigen::Vector3d(u / std::sqrt(n2));
    };
    while (static_cast<int>(centroids.size()) < cfg.K_star) {
        // Radius from the shell volume-uniform law r ~ (cube interpolation)^(1/3).
        const double r = std::cbrt(1.0 + (27.0 - 1.0) * rng.uniform01());
        const double speed = rng.uniform(0.5, 1.5);
        Eigen::VectorXd z(6);
        z.head<3>() = r * unitDir();
        z.tail<3>() = speed * unitDir();
        const Eigen::Vector3d feat = toy_transform(z);
        bool ok = true;
        for (const auto& f : feats)
            if ((f - feat).norm() <= min_sep) {
                ok = false;
                break;
            }
        if (!ok) continue;
        centroids.push_back(z);
        feats.push_back(feat);
    }
    return centroids;
}

}  // namespace

Dataset generate_dataset(const GenConfig& cfg) {
    if (cfg.K_star < 1 || cfg.m < 1 || cfg.cluster_spread <= 0.0 || cfg.sigma_major <= 0.0 ||
        cfg.sigma_minor <= 0.0)
        throw std::invalid_argument("generate_dataset: invalid configuration");
    if (cfg.cluster_sizes && static_cast<int>(cfg.cluster_sizes->size()) != cfg.K_star)
        throw std::invalid_argument("generate_dataset: cluster_sizes length must equal K_star");

    const Transform f = toy_feature_transform();
    const PenaltyRule pen = PenaltyRule::quadraticFirstComponent();

    Rng master(Rng::derive(cfg.seed, 0));
    const std::vector<Eigen::VectorXd> centroids = drawCentroids(cfg, master);

    Dataset d;
    d.feature_dim = 3;
    d.true_labels = std::vector<int>();

    int individual = 0;
    for (int k = 1; k <= cfg.K_star; ++k) {
        for (int member = 0; member < cfg.clusterSize(k); ++member) {
            ++individual;
            // Per-individual stream so generation order never matters.
            Rng rng(Rng::derive(cfg.seed, static_cast<std::uint64_t>(individual)));
            bool done = false;
            for (int attempt = 0; attempt < 100 && !done; ++attempt) {
                // True covariate around the cluster centroid.
                Eigen::VectorXd true_z(6);
                for (int l = 0; l < 6; ++l)
                    true_z(l) = centroids[k - 1](l) + cfg.cluster_spread * rng.normal();

                // Component 1 carries the dominant, magnitude-dependent
                // uncertainty; the rest are nearly exact.
                Eigen::VectorXd sigma(6);
                sigma(0) = cfg.sigma_major * std::abs(true_z(0)) + 0.1 * cfg.sigma_major;
                for (int l = 1; l < 6; ++l) sigma(l) = cfg.sigma_minor;

                Eigen::VectorXd observed(6);
                for (int l = 0; l < 6; ++l) observed(l) = true_z(l) + sigma(l) * rng.normal();

                const auto model = CovariateUncertaintyModel::makeBox(observed, 2.0 * sigma);
                try {
                    EmpiricalFeatureSet set = build_empirical_set(
                        model, f, pen, sigma, cfg.m,
                        Rng::derive(cfg.seed, 0x100000000ULL + individual), individual);
                    d.sets.push_back(std::move(set));
                    done = true;
                } catch (const TransformFailure&) {
                    // A sampled covariate hit the log singularity; redraw.
                } catch (const SingularInput&) {
                }
            }
            if (!done)
                throw SingularInput("generate_dataset: individual " + std::to_string(individual) +
                                    " kept hitting the transform singularity");
            d.true_labels->push_back(k);
        }
    }
    validate_dataset(d);
    return d;
}

}  // namespace goc
