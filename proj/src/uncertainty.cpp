#include "goc/uncertainty.hpp"

#include <cmath>

#include "goc/rng.hpp"

namespace goc {

Transform Transform::identity(int dim) {
    Transform t;
    t.d = dim;
    t.q = dim;
    t.name = "identity";
    t.fn = [](const Eigen::VectorXd& z) { return z; };
    return t;
}

PenaltyRule PenaltyRule::zero() {
    PenaltyRule p;
    p.fn = [](const Eigen::VectorXd&, const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return 0.0;
    };
    return p;
}

PenaltyRule PenaltyRule::quadraticFirstComponent() {
    PenaltyRule p;
    p.fn = [](const Eigen::VectorXd& sample, const Eigen::VectorXd& center,
              const Eigen::VectorXd& scales) {
        const double dev = sample(0) - center(0);
        return dev * dev / (2.0 * scales(0) * scales(0));
    };
    return p;
}

namespace {

// Uniform point in the unit ball of dimension d: normal direction scaled by
// U^(1/d).
Eigen::VectorXd unitBallSample(int d, Rng& rng) {
    Eigen::VectorXd dir(d);
    double norm2;
    do {
        for (int l = 0; l < d; ++l) dir(l) = rng.normal();
        norm2 = dir.squaredNorm();
    } while (norm2 == 0.0);
    const double r = std::pow(rng.uniform01(), 1.0 / d);
    return dir * (r / std::sqrt(norm2));
}

}  // namespace

Eigen::MatrixXd sample_covariates(const CovariateUncertaintyModel& model, int m,
                                  std::uint64_t rng_seed) {
    if (m < 1) throw std::invalid_argument("sample_covariates: m must be >= 1");
    const int d = model.dim();
    Rng rng(rng_seed);
    Eigen::MatrixXd out(m, d);
    switch (model.kind()) {
        case SetKind::box:
            for (int j = 0; j < m; ++j)
                for (int l = 0; l < d; ++l)
                    out(j, l) = model.center()(l) +
                                model.halfWidths()(l) * rng.uniform(-1.0, 1.0);
            break;
        case SetKind::ball:
            for (int j = 0; j < m; ++j)
                out.row(j) =
                    (model.center() + model.radius() * unitBallSample(d, rng)).transpose();
            break;
        case SetKind::ellipsoid: {
            // z = center + sqrt(level) * L * u with u uniform in the unit
            // ball; membership <z-c, Sigma^{-1}(z-c)> <= level holds exactly.
            const double s = std::sqrt(model.level());
            for (int j = 0; j < m; ++j)
                out.row(j) = (model.center() +
                              s * (model.shapeCholesky() * unitBallSample(d, rng)))
                                 .transpose();
            break;
        }
    }
    return out;
}

EmpiricalFeatureSet build_empirical_set(const CovariateUncertaintyModel& model,
                                        const Transform& f, const PenaltyRule& pen,
                                        const Eigen::VectorXd& scales, int m,
                                        std::uint64_t rng_seed, int individual_id) {
    if (f.d != model.dim())
        throw DimensionMismatch("build_empirical_set: transform expects dimension " +
                                std::to_string(f.d) + ", model has " +
                                std::to_string(model.dim()));
    const Eigen::MatrixXd samples = sample_covariates(model, m, rng_seed);
    EmpiricalFeatureSet out;
    out.individual_id = individual_id;
    out.candidates.resize(m, f.q);
    out.penalties.resize(m);
    for (int j = 0; j < m; ++j) {
        const Eigen::VectorXd z = samples.row(j).transpose();
        const Eigen::VectorXd x = f(z);
        if (!x.allFinite())
            throw TransformFailure("transform '" + f.name +
                                   "' returned a non-finite value for candidate " +
                                   std::to_string(j + 1) + " of individual " +
                                   std::to_string(individual_id));
        out.candidates.row(j) = x.transpose();
        out.penalties(j) = pen.fn(z, model.center(), scales);
    }
    return out;
}

Dataset standardize(const Dataset& d) {
    validate_dataset(d);
    const int q = d.feature_dim;
    long total = 0;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(q);
    for (const auto& s : d.sets) {
        mean += s.candidates.colwise().sum().transpose();
        total += s.size();
    }
    mean /= static_cast<double>(total);

    Eigen::VectorXd msq = Eigen::VectorXd::Zero(q);
    double max_pen = 0.0;
    for (const auto& s : d.sets) {
        msq += (s.candidates.rowwise() - mean.transpose())
                   .array()
                   .square()
                   .colwise()
                   .sum()
                   .matrix()
                   .transpose();
        max_pen = std::max(max_pen, s.penalties.maxCoeff());
    }
    msq /= static_cast<double>(total);

    Eigen::VectorXd scale(q);
    for (int l = 0; l < q; ++l) {
        if (msq(l) <= 0.0)
            throw DegenerateDimension("feature dimension " + std::to_string(l + 1) +
                                      " is constant across all candidates");
        scale(l) = std::sqrt(msq(l));
    }

    Dataset out = d;
    for (auto& s : out.sets) {
        s.candidates = ((s.candidates.rowwise() - mean.transpose()).array().rowwise() /
                        scale.transpose().array())
                           .matrix();
        if (max_pen > 0.0) s.penalties /= max_pen;
    }
    out.standardized = true;
    NormMeta meta;
    meta.shift = mean;
    meta.scale = scale;
    meta.penalty_scale = max_pen > 0.0 ? max_pen : 1.0;
    out.norm_meta = meta;
    return out;
}

double coverage_gap(const EmpiricalFeatureSet& s, const Eigen::MatrixXd& reference) {
    if (reference.rows() == 0) throw std::invalid_argument("coverage_gap: empty reference");
    if (reference.cols() != s.dim())
        throw DimensionMismatch("coverage_gap: reference dimension differs from candidates");
    double gap2 = 0.0;
    for (Eigen::Index r = 0; r < reference.rows(); ++r) {
        const double d2 =
            (s.candidates.rowwise() - reference.row(r)).rowwise().squaredNorm().minCoeff();
        gap2 = std::max(gap2, d2);
    }
    return std::sqrt(gap2);
}

}  // namespace goc
