#pragma once

#include <Eigen/Dense>
#include <vector>

#include "facsca/image.hpp"

namespace facsca::features {

/// 2DPCA model: image-covariance eigenvectors used as projection axes.
struct TwoDPcaModel {
    Eigen::MatrixXd mean_image;      // h x w
    Eigen::MatrixXd projection_axes; // w x d, orthonormal columns

    int component_count() const { return static_cast<int>(projection_axes.cols()); }
    bool fitted() const { return mean_image.size() > 0; }
};

Eigen::MatrixXd chip_to_matrix(const vision::Image& chip);

/// Image covariance G = (1/N) sum (A_i - mean)^T (A_i - mean); axes are
/// the top-d eigenvectors of G. d above the column count is clamped with
/// a note to stderr.
TwoDPcaModel fit_2dpca(const std::vector<vision::Image>& chips, int d);

/// The covariance matrix itself, exposed for verification.
Eigen::MatrixXd image_covariance(const std::vector<vision::Image>& chips);

/// Feature matrix (A - mean) * axes, h x d.
Eigen::MatrixXd features_2dpca(const TwoDPcaModel& model, const vision::Image& chip);

Eigen::VectorXd flatten(const Eigen::MatrixXd& m); // row-major

} // namespace facsca::features
