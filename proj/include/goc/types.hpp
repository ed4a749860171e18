#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace goc {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct EmptySet : Error { using Error::Error; };
struct BadLabel : Error { using Error::Error; };
struct TransformFailure : Error { using Error::Error; };
struct DegenerateDimension : Error { using Error::Error; };
struct KTooLarge : Error { using Error::Error; };
struct SingularInput : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct SchemaError : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// Covariate uncertainty sets
// ---------------------------------------------------------------------------

enum class SetKind { box, ball, ellipsoid };

// A user-specified covariate set: box, Euclidean ball, or ellipsoid
// {z : <z - center, shape^{-1} (z - center)> <= level}.
class CovariateUncertaintyModel {
public:
    static CovariateUncertaintyModel makeBox(Eigen::VectorXd center,
                                             Eigen::VectorXd half_widths);
    static CovariateUncertaintyModel makeBall(Eigen::VectorXd center, double radius);
    static CovariateUncertaintyModel makeEllipsoid(Eigen::VectorXd center,
                                                   Eigen::MatrixXd shape, double level);

    SetKind kind() const { return kind_; }
    int dim() const { return static_cast<int>(center_.size()); }
    const Eigen::VectorXd& center() const { return center_; }
    const Eigen::VectorXd& halfWidths() const { return half_widths_; }
    double radius() const { return radius_; }
    const Eigen::MatrixXd& shape() const { return shape_; }
    double level() const { return level_; }
    // Cholesky factor of the shape matrix (ellipsoid only).
    const Eigen::MatrixXd& shapeCholesky() const { return shape_chol_; }

private:
    CovariateUncertaintyModel() = default;

    SetKind kind_ = SetKind::box;
    Eigen::VectorXd center_;
    Eigen::VectorXd half_widths_;
    double radius_ = 0.0;
    Eigen::MatrixXd shape_;
    Eigen::MatrixXd shape_chol_;
    double level_ = 0.0;
};

// ---------------------------------------------------------------------------
// Datasets
// ---------------------------------------------------------------------------

// The m_i transformed candidate points of one individual with their penalties.
struct EmpiricalFeatureSet {
    Eigen::MatrixXd candidates;  // m_i x q, row j = candidate j
    Eigen::VectorXd penalties;   // length m_i, >= 0
    int individual_id = 0;

    int size() const { return static_cast<int>(candidates.rows()); }
    int dim() const { return static_cast<int>(candidates.cols()); }
};

// Per-dimension shift/scale applied by standardization, plus the penalty
// scale, kept so the transformation is reversible.
struct NormMeta {
    Eigen::VectorXd shift;
    Eigen::VectorXd scale;
    double penalty_scale = 1.0;
};

struct Dataset {
    std::vector<EmpiricalFeatureSet> sets;
    std::optional<std::vector<int>> true_labels;  // 1-based, length n
    int feature_dim = 0;
    bool standardized = false;
    std::optional<NormMeta> norm_meta;

    int size() const { return static_cast<int>(sets.size()); }
};

// Throws DimensionMismatch / EmptySet / BadLabel when an invariant fails.
void validate_dataset(const Dataset& d);

// ---------------------------------------------------------------------------
// Clustering results
// ---------------------------------------------------------------------------

struct Assignment {
    std::vector<int> labels;  // 1-based, in 1..num_clusters
    int num_clusters = 0;
    // Candidate index chosen per individual (1-based); absent for methods
    // that cluster representative vectors.
    std::optional<std::vector<int>> selected;
    std::optional<Eigen::MatrixXd> centers;  // K x q; empty clusters zeroed
};

struct GocIteration {
    int t = 0;
    int K = 0;
    std::vector<int> labels;
    std::vector<int> selected;     // 1-based candidate indices
    Eigen::MatrixXd candidates;    // n x q snapshot of the selected features
    double objective = 0.0;
};

struct GocTrace {
    std::vector<GocIteration> iterations;
    bool converged = false;
    int total_iterations = 0;
};

}  // namespace goc
