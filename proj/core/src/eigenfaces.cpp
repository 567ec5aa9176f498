#include "facsca/eigenfaces.hpp"

#include <algorithm>
#include <iostream>
#include <limits>

#include "facsca/error.hpp"

namespace facsca::features {

void fix_eigenvector_signs(Eigen::MatrixXd& vectors) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        Eigen::Index argmax = 0;
        double best = -1.0;
        for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
            const double mag = std::abs(vectors(r, c));
            if (mag > best) {
                best = mag;
                argmax = r;
            }
        }
        if (vectors(argmax, c) < 0) vectors.col(c) = -vectors.col(c);
    }
}

Eigen::VectorXd chip_to_vector(const vision::Image& chip) {
    if (chip.channels != vision::Channels::Gray8)
        throw Error(errc::domain, "feature extraction needs Gray8 chips");
    Eigen::VectorXd v(chip.data.size());
    for (size_t i = 0; i < chip.data.size(); ++i) v(static_cast<Eigen::Index>(i)) = chip.data[i];
    return v;
}

namespace {

double median_pairwise_distance(const Eigen::MatrixXd& gallery) {
    std::vector<double> dists;
    for (Eigen::Index i = 0; i < gallery.cols(); ++i)
        for (Eigen::Index j = i + 1; j < gallery.cols(); ++j)
            dists.push_back((gallery.col(i) - gallery.col(j)).norm());
    if (dists.empty()) return 0.0;
    std::sort(dists.begin(), dists.end());
    const size_t n = dists.size();
    return n % 2 ? dists[n / 2] : 0.5 * (dists[n / 2 - 1] + dists[n / 2]);
}

} // namespace

EigenModel fit_eigenmodel(const std::vector<vision::Image>& chips,
                          const std::vector<std::string>& identities, int components,
                          double phi_scale, double tau_scale, double phi_override,
                          double tau_override) {
    if (chips.size() < 2)
        throw Error(errc::domain, "eigenface training needs at least 2 chips");
    if (!identities.empty() && identities.size() != chips.size())
        throw Error(errc::domain, "identity list must match the gallery size");
    const int w = chips[0].width, h = chips[0].height;
    for (const auto& chip : chips)
        if (chip.width != w || chip.height != h)
            throw Error(errc::domain, "eigenface training chips must share dimensions");

    const Eigen::Index n = static_cast<Eigen::Index>(chips.size());
    const Eigen::Index p = static_cast<Eigen::Index>(w) * h;
    Eigen::MatrixXd data(p, n);
    for (Eigen::Index i = 0; i < n; ++i) data.col(i) = chip_to_vector(chips[static_cast<size_t>(i)]);
    EigenModel model;
    model.chip_width = w;
    model.chip_height = h;
    model.mean = data.rowwise().mean();
    data.colwise() -= model.mean;

    if (components > n) {
        std::cerr << "note: eigenface component count " << components << " clamped to gallery size "
                  << n << "\n";
        components = static_cast<int>(n);
    }
    if (components < 1) throw Error(errc::domain, "component count must be >= 1");
    const Eigen::Index keep = std::min<Eigen::Index>(components, std::min(n, p));

    Eigen::VectorXd values;
    Eigen::MatrixXd vectors; // in pixel space
    if (n < p) {
        // Gram trick: eigenpairs of (X^T X)/n lift to pixel space as X v.
        const Eigen::MatrixXd gram = data.transpose() * data / static_cast<double>(n);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
        values = solver.eigenvalues().reverse();
        const Eigen::MatrixXd small = solver.eigenvectors().rowwise().reverse();
        vectors = data * small;
    } else {
        const Eigen::MatrixXd cov = data * data.transpose() / static_cast<double>(n);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
        values = solver.eigenvalues().reverse();
        vectors = solver.eigenvectors().rowwise().reverse();
    }

    model.eigenvalues = values.head(keep).cwiseMax(0.0);
    const double rank_tol = 1e-12 * std::max(1.0, model.eigenvalues.size() ? model.eigenvalues(0) : 0.0);
    Eigen::Index rank = 0;
    while (rank < keep && model.eigenvalues(rank) > rank_tol) ++rank;

    model.basis.resize(p, rank);
    for (Eigen::Index c = 0; c < rank; ++c) {
        Eigen::VectorXd u = vectors.col(c);
        const double norm = u.norm();
        model.basis.col(c) = u / norm;
    }
    fix_eigenvector_signs(model.basis);

    model.gallery = model.basis.transpose() * data;
    model.identities = identities;
    if (model.identities.empty())
        for (Eigen::Index i = 0; i < n; ++i) model.identities.push_back("face" + std::to_string(i));

    const double median = median_pairwise_distance(model.gallery);
    model.phi = phi_override >= 0 ? phi_override : phi_scale * median;
    model.tau = tau_override >= 0 ? tau_override : tau_scale * model.phi;
    return model;
}

namespace {

Eigen::VectorXd centered_vector(const EigenModel& model, const vision::Image& chip) {
    if (!model.fitted()) throw Error(errc::state, "eigenface model is not fitted");
    if (chip.width != model.chip_width || chip.height != model.chip_height)
        throw Error(errc::domain, "probe dimensions do not match the trained chip size");
    return chip_to_vector(chip) - model.mean;
}

} // namespace

Eigen::VectorXd project_face(const EigenModel& model, const vision::Image& chip) {
    return model.basis.transpose() * centered_vector(model, chip);
}

double face_space_distance(const EigenModel& model, const vision::Image& chip) {
    const Eigen::VectorXd centered = centered_vector(model, chip);
    const Eigen::VectorXd reconstructed = model.basis * (model.basis.transpose() * centered);
    return (centered - reconstructed).norm();
}

RecognitionResult recognize(const EigenModel& model, const vision::Image& probe) {
    const Eigen::VectorXd weights = project_face(model, probe);
    RecognitionResult result;
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index best_i = -1;
    for (Eigen::Index i = 0; i < model.gallery.cols(); ++i) {
        const double d = (model.gallery.col(i) - weights).norm();
        if (d < best) {
            best = d;
            best_i = i;
        }
    }
    result.distance = best;
    if (best_i >= 0 && best < model.phi) {
        result.gallery_index = static_cast<int>(best_i);
        result.identity = model.identities[static_cast<size_t>(best_i)];
    }
    return result;
}

std::vector<int> extract_key_faces(const std::vector<vision::Image>& faces,
                                   const EigenModel& model, double tau) {
    if (faces.empty()) throw Error(errc::domain, "key-face extraction needs at least one face");
    std::vector<int> keys;
    std::vector<Eigen::VectorXd> key_projections;
    for (size_t i = 0; i < faces.size(); ++i) {
        const Eigen::VectorXd projection = project_face(model, faces[i]);
        if (keys.empty()) {
            keys.push_back(static_cast<int>(i));
            key_projections.push_back(projection);
            continue;
        }
        bool novel = true;
        for (const auto& kp : key_projections) {
            if ((kp - projection).norm() <= tau) {
                novel = false;
                break;
            }
        }
        if (novel) {
            keys.push_back(static_cast<int>(i));
            key_projections.push_back(projection);
        }
    }
    return keys;
}

} // namespace facsca::features
