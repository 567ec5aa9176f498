#include "facsca/gabor.hpp"

#include <cmath>

#include "facsca/error.hpp"
#include "facsca/twodpca.hpp"

namespace facsca::features {

GaborBank GaborBank::build(int scales, int orientations, int kernel_size, double lambda_min,
                           double gamma, double sigma_ratio) {
    if (scales < 1 || orientations < 1) throw Error(errc::domain, "gabor bank needs >=1 filters");
    if (kernel_size < 3 || kernel_size % 2 == 0)
        throw Error(errc::domain, "gabor kernel size must be odd and >= 3");
    GaborBank bank;
    bank.kernel_size = kernel_size;
    const int half = kernel_size / 2;
    for (int s = 0; s < scales; ++s) {
        const double lambda = lambda_min * std::pow(std::sqrt(2.0), s);
        const double sigma = sigma_ratio * lambda;
        for (int o = 0; o < orientations; ++o) {
            const double theta = M_PI * o / orientations;
            Filter f;
            f.scale = s;
            f.orientation = o;
            f.lambda = lambda;
            f.theta = theta;
            f.kernel.resize(kernel_size, kernel_size);
            for (int y = -half; y <= half; ++y) {
                for (int x = -half; x <= half; ++x) {
                    const double xr = x * std::cos(theta) + y * std::sin(theta);
                    const double yr = -x * std::sin(theta) + y * std::cos(theta);
                    const double envelope =
                        std::exp(-(xr * xr + gamma * gamma * yr * yr) / (2.0 * sigma * sigma));
                    f.kernel(y + half, x + half) = envelope * std::cos(2.0 * M_PI * xr / lambda);
                }
            }
            f.kernel.array() -= f.kernel.mean(); // DC-free
            bank.filters.push_back(std::move(f));
        }
    }
    return bank;
}

GaborBank GaborBank::from_config(const Config& cfg) {
    return build(cfg.get_int("gabor.scales"), cfg.get_int("gabor.orientations"),
                 cfg.get_int("gabor.kernel_size"), cfg.get_double("gabor.lambda_min"),
                 cfg.get_double("gabor.gamma"), cfg.get_double("gabor.sigma_ratio"));
}

Eigen::MatrixXd gabor_response(const GaborBank::Filter& filter, const vision::Image& chip) {
    const Eigen::MatrixXd img = chip_to_matrix(chip);
    const int ks = static_cast<int>(filter.kernel.rows());
    const int half = ks / 2;
    Eigen::MatrixXd response = Eigen::MatrixXd::Zero(img.rows(), img.cols());
    for (int y = 0; y < img.rows(); ++y) {
        for (int x = 0; x < img.cols(); ++x) {
            double acc = 0.0;
            for (int ky = -half; ky <= half; ++ky) {
                const int sy = y + ky;
                if (sy < 0 || sy >= img.rows()) continue; // zero padding
                for (int kx = -half; kx <= half; ++kx) {
                    const int sx = x + kx;
                    if (sx < 0 || sx >= img.cols()) continue;
                    acc += img(sy, sx) * filter.kernel(ky + half, kx + half);
                }
            }
            response(y, x) = acc;
        }
    }
    return response;
}

Eigen::VectorXd gabor_features(const GaborBank& bank, const vision::Image& chip) {
    if (chip.width < bank.kernel_size || chip.height < bank.kernel_size)
        throw Error(errc::domain, "chip " + std::to_string(chip.width) + "x" +
                                      std::to_string(chip.height) + " is smaller than the " +
                                      std::to_string(bank.kernel_size) + "-pixel gabor kernel");
    Eigen::VectorXd features(2 * static_cast<Eigen::Index>(bank.filters.size()));
    // Statistics cover only pixels with full kernel support; at the border
    // the padding truncates the kernel and breaks its zero mean.
    const int half = bank.kernel_size / 2;
    const int rows = chip.height - 2 * half;
    const int cols = chip.width - 2 * half;
    Eigen::Index k = 0;
    for (const auto& filter : bank.filters) {
        const Eigen::MatrixXd magnitude =
            gabor_response(filter, chip).block(half, half, rows, cols).cwiseAbs();
        const double mean = magnitude.mean();
        const double var = (magnitude.array() - mean).square().mean();
        features(k++) = mean;
        features(k++) = std::sqrt(var);
    }
    return features;
}

} // namespace facsca::features
