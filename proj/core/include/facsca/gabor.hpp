#pragma once

#include <Eigen/Dense>
#include <vector>

#include "facsca/config.hpp"
#include "facsca/image.hpp"

namespace facsca::features {

/// Real Gabor kernels over a wavelength ladder (lambda_min stepping by
/// sqrt(2) per scale) and evenly spaced orientations. Every kernel has its
/// mean removed so a constant signal gives a zero response.
struct GaborBank {
    struct Filter {
        int scale = 0;
        int orientation = 0;
        double lambda = 0.0;
        double theta = 0.0;
        Eigen::MatrixXd kernel;
    };
    std::vector<Filter> filters; // scale-major, orientation-minor
    int kernel_size = 0;

    static GaborBank build(int scales, int orientations, int kernel_size, double lambda_min,
                           double gamma, double sigma_ratio);
    static GaborBank from_config(const Config& cfg);
};

/// Zero-padded correlation of the chip with one kernel.
Eigen::MatrixXd gabor_response(const GaborBank::Filter& filter, const vision::Image& chip);

/// Mean and standard deviation of the response magnitude per filter;
/// length 2 * scales * orientations. The chip must cover the kernel.
Eigen::VectorXd gabor_features(const GaborBank& bank, const vision::Image& chip);

} // namespace facsca::features
