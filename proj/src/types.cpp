#include "goc/types.hpp"

#include <Eigen/Cholesky>

namespace goc {

CovariateUncertaintyModel CovariateUncertaintyModel::makeBox(Eigen::VectorXd center,
                                                             Eigen::VectorXd half_widths) {
    if (center.size() != half_widths.size())
        throw std::invalid_argument("box: center and half_widths sizes differ");
    if (center.size() == 0) throw std::invalid_argument("box: empty center");
    if ((half_widths.array() <= 0.0).any())
        throw std::invalid_argument("box: half_widths must be strictly positive");
    CovariateUncertaintyModel m;
    m.kind_ = SetKind::box;
    m.center_ = std::move(center);
    m.half_widths_ = std::move(half_widths);
    return m;
}

CovariateUncertaintyModel CovariateUncertaintyModel::makeBall(Eigen::VectorXd center,
                                                              double radius) {
    if (center.size() == 0) throw std::invalid_argument("ball: empty center");
    if (!(radius > 0.0)) throw std::invalid_argument("ball: radius must be strictly positive");
    CovariateUncertaintyModel m;
    m.kind_ = SetKind::ball;
    m.center_ = std::move(center);
    m.radius_ = radius;
    return m;
}

CovariateUncertaintyModel CovariateUncertaintyModel::makeEllipsoid(Eigen::VectorXd center,
                                                                   Eigen::MatrixXd shape,
                                                                   double level) {
    if (center.size() == 0) throw std::invalid_argument("ellipsoid: empty center");
    if (shape.rows() != center.size() || shape.cols() != center.size())
        throw std::invalid_argument("ellipsoid: shape matrix has wrong dimensions");
    if (!(level > 0.0)) throw std::invalid_argument("ellipsoid: level must be strictly positive");
    if (((shape - shape.transpose()).array().abs() > 1e-9).any())
        throw std::invalid_argument("ellipsoid: shape matrix not symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(shape);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("ellipsoid: shape matrix not positive-definite");
    CovariateUncertaintyModel m;
    m.kind_ = SetKind::ellipsoid;
    m.center_ = std::move(center);
    m.shape_ = std::move(shape);
    m.shape_chol_ = llt.matrixL();
    m.level_ = level;
    return m;
}

void validate_dataset(const Dataset& d) {
    if (d.sets.empty()) throw EmptySet("dataset contains no sets");
    const int q = d.feature_dim;
    for (std::size_t i = 0; i < d.sets.size(); ++i) {
        const auto& s = d.sets[i];
        if (s.size() < 1)
            throw EmptySet("set " + std::to_string(i + 1) + " has no candidates");
        if (s.dim() != q)
            throw DimensionMismatch("set " + std::to_string(i + 1) + " has dimension " +
                                    std::to_string(s.dim()) + ", expected " + std::to_string(q));
        if (s.penalties.size() != s.size())
            throw DimensionMismatch("set " + std::to_string(i + 1) +
                                    ": penalty count differs from candidate count");
        if (!s.candidates.allFinite())
            throw Error("set " + std::to_string(i + 1) + " has non-finite candidates");
        if ((s.penalties.array() < 0.0).any())
            throw Error("set " + std::to_string(i + 1) + " has negative penalties");
    }
    if (d.true_labels) {
        const auto& tl = *d.true_labels;
        if (tl.size() != d.sets.size())
            throw BadLabel("true_labels length differs from number of sets");
        int k_star = 0;
        for (int l : tl) k_star = std::max(k_star, l);
        for (std::size_t i = 0; i < tl.size(); ++i)
            if (tl[i] < 1 || tl[i] > k_star)
                throw BadLabel("true label " + std::to_string(tl[i]) + " at individual " +
                               std::to_string(i + 1) + " is outside 1..K*");
    }
}

}  // namespace goc
