#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace facsca::features {

/// Fisher's linear discriminant: axes maximizing between-class over
/// within-class scatter, at most classes-1 of them.
struct FldModel {
    Eigen::VectorXd overall_mean;
    Eigen::MatrixXd within_scatter;  // D x D, symmetric PSD
    Eigen::MatrixXd between_scatter; // D x D
    Eigen::MatrixXd axes;            // D x K, descending Fisher ratio
    Eigen::VectorXd fisher_ratios;   // K
    std::vector<std::string> class_names;
    Eigen::MatrixXd class_means;     // D x classes

    bool fitted() const { return axes.size() > 0; }
};

/// Solves the generalized eigenproblem Sb w = nu (Sw + lambda I) w.
/// Throws with fewer than two classes.
FldModel fit_fld(const std::vector<Eigen::VectorXd>& features,
                 const std::vector<std::string>& labels, double lambda = 1e-6);

/// axes^T (x - overall mean).
Eigen::VectorXd project_fld(const FldModel& model, const Eigen::VectorXd& feature);

/// FLD-projected 2DPCA features concatenated with FLD-projected Gabor
/// features. Both models must be fitted.
Eigen::VectorXd fuse_features(const Eigen::VectorXd& feature_2dpca,
                              const Eigen::VectorXd& feature_gabor, const FldModel& fld_2dpca,
                              const FldModel& fld_gabor);

} // namespace facsca::features
