#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "facsca/image.hpp"

namespace facsca::features {

/// Deterministic sign convention: flip each column so its
/// largest-magnitude entry is positive (first such entry on ties).
void fix_eigenvector_signs(Eigen::MatrixXd& vectors);

/// Eigenface model: mean face, orthonormal basis of the top components,
/// per-gallery-image projection weights and the recognition threshold phi.
/// `eigenvalues` keeps min(M, N) entries including zeros; `basis` keeps a
/// column only for eigenvalues above the rank tolerance, so it can be
/// narrower than the eigenvalue list.
struct EigenModel {
    int chip_width = 0;
    int chip_height = 0;
    Eigen::VectorXd mean;          // length = pixels
    Eigen::VectorXd eigenvalues;   // non-increasing
    Eigen::MatrixXd basis;         // pixels x K, orthonormal columns
    Eigen::MatrixXd gallery;       // K x N projection weights (epsilon_i)
    std::vector<std::string> identities; // N names
    double phi = 0.0;              // recognition distance threshold
    double tau = 0.0;              // key-face novelty threshold

    int component_count() const { return static_cast<int>(basis.cols()); }
    bool fitted() const { return chip_width > 0; }
};

Eigen::VectorXd chip_to_vector(const vision::Image& chip);

/// Fit from >=2 equally sized Gray8 chips. Uses the small Gram matrix when
/// there are fewer images than pixels. `components` above the gallery size
/// is clamped (a note goes to stderr). phi and tau follow the config scales
/// unless overridden; identities name the gallery columns.
EigenModel fit_eigenmodel(const std::vector<vision::Image>& chips,
                          const std::vector<std::string>& identities, int components,
                          double phi_scale = 0.8, double tau_scale = 0.5,
                          double phi_override = -1.0, double tau_override = -1.0);

Eigen::VectorXd project_face(const EigenModel& model, const vision::Image& chip);

/// Distance from the probe to its face-space reconstruction; the
/// face / non-face check.
double face_space_distance(const EigenModel& model, const vision::Image& chip);

struct RecognitionResult {
    std::optional<int> gallery_index; // empty = unknown
    std::string identity;             // "" when unknown
    double distance = 0.0;            // er, the minimum gallery distance
};

/// Nearest gallery weight vector by Euclidean distance; identified only
/// when that distance is below phi.
RecognitionResult recognize(const EigenModel& model, const vision::Image& probe);

/// Greedy novelty scan: the first face is a key face, and each later face
/// is one when its projection is farther than tau from every key face so
/// far. Returns indices into `faces`, in order.
std::vector<int> extract_key_faces(const std::vector<vision::Image>& faces,
                                   const EigenModel& model, double tau);

} // namespace facsca::features
