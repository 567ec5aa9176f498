#include "facsca/fld.hpp"

#include <map>

#include "facsca/eigenfaces.hpp"
#include "facsca/error.hpp"

namespace facsca::features {

FldModel fit_fld(const std::vector<Eigen::VectorXd>& features,
                 const std::vector<std::string>& labels, double lambda) {
    if (features.empty() || features.size() != labels.size())
        throw Error(errc::domain, "FLD needs one label per feature vector");
    const Eigen::Index dim = features[0].size();
    for (const auto& f : features)
        if (f.size() != dim) throw Error(errc::domain, "FLD features must share dimensions");

    std::map<std::string, std::vector<const Eigen::VectorXd*>> classes;
    for (size_t i = 0; i < features.size(); ++i) classes[labels[i]].push_back(&features[i]);
    if (classes.size() < 2)
        throw Error(errc::domain, "FLD needs at least two classes, got " +
                                      std::to_string(classes.size()));

    FldModel model;
    model.overall_mean = Eigen::VectorXd::Zero(dim);
    for (const auto& f : features) model.overall_mean += f;
    model.overall_mean /= static_cast<double>(features.size());

    model.class_means.resize(dim, static_cast<Eigen::Index>(classes.size()));
    model.within_scatter = Eigen::MatrixXd::Zero(dim, dim);
    model.between_scatter = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::Index ci = 0;
    for (const auto& [name, members] : classes) {
        model.class_names.push_back(name);
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
        for (const auto* f : members) mean += *f;
        mean /= static_cast<double>(members.size());
        model.class_means.col(ci) = mean;
        for (const auto* f : members) {
            const Eigen::VectorXd d = *f - mean;
            model.within_scatter += d * d.transpose();
        }
        const Eigen::VectorXd d = mean - model.overall_mean;
        model.between_scatter += static_cast<double>(members.size()) * d * d.transpose();
        ++ci;
    }

    const Eigen::MatrixXd regularized =
        model.within_scatter + lambda * Eigen::MatrixXd::Identity(dim, dim);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(model.between_scatter,
                                                                     regularized);
    if (solver.info() != Eigen::Success)
        throw Error(errc::domain, "FLD generalized eigenproblem failed to converge");

    const Eigen::Index keep =
        std::min<Eigen::Index>(static_cast<Eigen::Index>(classes.size()) - 1, dim);
    // Solver returns ascending eigenvalues; take the top ones.
    model.fisher_ratios.resize(keep);
    Eigen::MatrixXd axes(dim, keep);
    for (Eigen::Index k = 0; k < keep; ++k) {
        const Eigen::Index src = dim - 1 - k;
        model.fisher_ratios(k) = solver.eigenvalues()(src);
        axes.col(k) = solver.eigenvectors().col(src).normalized();
    }
    fix_eigenvector_signs(axes);
    model.axes = axes;
    return model;
}

Eigen::VectorXd project_fld(const FldModel& model, const Eigen::VectorXd& feature) {
    if (!model.fitted()) throw Error(errc::state, "FLD model is not fitted");
    if (feature.size() != model.overall_mean.size())
        throw Error(errc::domain, "feature dimension does not match the FLD model");
    return model.axes.transpose() * (feature - model.overall_mean);
}

Eigen::VectorXd fuse_features(const Eigen::VectorXd& feature_2dpca,
                              const Eigen::VectorXd& feature_gabor, const FldModel& fld_2dpca,
                              const FldModel& fld_gabor) {
    if (!fld_2dpca.fitted() || !fld_gabor.fitted())
        throw Error(errc::state, "feature fusion needs both FLD models fitted");
    const Eigen::VectorXd a = project_fld(fld_2dpca, feature_2dpca);
    const Eigen::VectorXd b = project_fld(fld_gabor, feature_gabor);
    Eigen::VectorXd fused(a.size() + b.size());
    fused << a, b;
    return fused;
}

} // namespace facsca::features
