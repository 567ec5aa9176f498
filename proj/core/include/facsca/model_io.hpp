#pragma once

#include <string>

#include "facsca/au_match.hpp"
#include "facsca/eigenfaces.hpp"
#include "facsca/fld.hpp"
#include "facsca/twodpca.hpp"

namespace facsca::features {

/// Versioned binary model container: magic "PIFE", a version byte, a model
/// kind byte, then little-endian payloads (uint32 sizes, float64 matrices
/// with dimension headers, length-prefixed strings). Future versions are
/// refused; truncation and bad magic raise integrity errors.
namespace model_io {

inline constexpr uint8_t kVersion = 1;

enum class Kind : uint8_t {
    Eigen = 1,
    TwoDPca = 2,
    Fld = 3,
    AuGallery = 4,
    FusedGallery = 5,
};

void save_eigen(const EigenModel& model, const std::string& path);
EigenModel load_eigen(const std::string& path);

void save_2dpca(const TwoDPcaModel& model, const std::string& path);
TwoDPcaModel load_2dpca(const std::string& path);

void save_fld(const FldModel& model, const std::string& path);
FldModel load_fld(const std::string& path);

void save_au_gallery(const AuTemplateGallery& gallery, const std::string& path);
AuTemplateGallery load_au_gallery(const std::string& path);

/// Identity gallery in fused FLD feature space, with its own threshold.
struct FusedGallery {
    std::vector<std::string> identities;
    std::vector<Eigen::VectorXd> vectors;
    double phi = 0.0;

    bool fitted() const { return !vectors.empty(); }
};

void save_fused_gallery(const FusedGallery& gallery, const std::string& path);
FusedGallery load_fused_gallery(const std::string& path);

} // namespace model_io
} // namespace facsca::features
