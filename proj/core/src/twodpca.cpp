#include "facsca/twodpca.hpp"

#include <iostream>

#include "facsca/eigenfaces.hpp"
#include "facsca/error.hpp"

namespace facsca::features {

Eigen::MatrixXd chip_to_matrix(const vision::Image& chip) {
    if (chip.channels != vision::Channels::Gray8)
        throw Error(errc::domain, "feature extraction needs Gray8 chips");
    Eigen::MatrixXd m(chip.height, chip.width);
    for (int y = 0; y < chip.height; ++y)
        for (int x = 0; x < chip.width; ++x) m(y, x) = chip.gray_at(x, y);
    return m;
}

Eigen::MatrixXd image_covariance(const std::vector<vision::Image>& chips) {
    if (chips.empty()) throw Error(errc::domain, "2DPCA needs at least one chip");
    const int w = chips[0].width, h = chips[0].height;
    for (const auto& chip : chips)
        if (chip.width != w || chip.height != h)
            throw Error(errc::domain, "2DPCA chips must share dimensions");
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(h, w);
    for (const auto& chip : chips) mean += chip_to_matrix(chip);
    mean /= static_cast<double>(chips.size());
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(w, w);
    for (const auto& chip : chips) {
        const Eigen::MatrixXd centered = chip_to_matrix(chip) - mean;
        cov += centered.transpose() * centered;
    }
    return cov / static_cast<double>(chips.size());
}

TwoDPcaModel fit_2dpca(const std::vector<vision::Image>& chips, int d) {
    if (chips.empty()) throw Error(errc::domain, "2DPCA needs at least one chip");
    const int w = chips[0].width, h = chips[0].height;
    TwoDPcaModel model;
    model.mean_image = Eigen::MatrixXd::Zero(h, w);
    for (const auto& chip : chips) {
        if (chip.width != w || chip.height != h)
            throw Error(errc::domain, "2DPCA chips must share dimensions");
        model.mean_image += chip_to_matrix(chip);
    }
    model.mean_image /= static_cast<double>(chips.size());

    if (d > w) {
        std::cerr << "note: 2DPCA component count " << d << " clamped to image width " << w
                  << "\n";
        d = w;
    }
    if (d < 1) throw Error(errc::domain, "2DPCA needs d >= 1");

    const Eigen::MatrixXd cov = image_covariance(chips);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    Eigen::MatrixXd axes = solver.eigenvectors().rowwise().reverse().leftCols(d);
    fix_eigenvector_signs(axes);
    model.projection_axes = axes;
    return model;
}

Eigen::MatrixXd features_2dpca(const TwoDPcaModel& model, const vision::Image& chip) {
    if (!model.fitted()) throw Error(errc::state, "2DPCA model is not fitted");
    const Eigen::MatrixXd m = chip_to_matrix(chip);
    if (m.rows() != model.mean_image.rows() || m.cols() != model.mean_image.cols())
        throw Error(errc::domain, "chip dimensions do not match the trained 2DPCA model");
    return (m - model.mean_image) * model.projection_axes;
}

Eigen::VectorXd flatten(const Eigen::MatrixXd& m) {
    Eigen::VectorXd v(m.size());
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) v(k++) = m(r, c);
    return v;
}

} // namespace facsca::features
