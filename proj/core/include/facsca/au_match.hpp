#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "facsca/facs.hpp"
#include "facsca/gabor.hpp"
#include "facsca/image.hpp"
#include "facsca/twodpca.hpp"

namespace facsca::features {

/// Neutral templates use AU code 0 (the FACS neutral face), which also
/// makes the lowest-code tie-break favor Neutral on exact ties.
inline constexpr int kNeutralCode = 0;

/// Per-region AU templates: a 2DPCA model fitted on the region's example
/// chips and one feature vector per AU plus one neutral entry.
struct AuTemplateGallery {
    struct Template {
        int au = kNeutralCode;
        Eigen::VectorXd feature;
    };
    struct RegionEntry {
        int chip_width = 0;
        int chip_height = 0;
        TwoDPcaModel model;
        std::vector<Template> templates; // neutral first, then AUs in region order
    };
    std::map<facs::Region, RegionEntry> regions;

    bool covers_all_regions() const;
};

/// Build from a directory of PGM chips named `<region>_<au>.pgm` plus
/// `<region>_neutral.pgm`; every table entry must be present.
AuTemplateGallery build_au_gallery(const std::string& directory, int components);

/// Region feature vector in the gallery's 2DPCA space. Chips whose size
/// differs from the gallery's are resampled first.
Eigen::VectorXd region_features(const AuTemplateGallery& gallery, facs::Region region,
                                const vision::Image& chip);

/// Nearest template by Euclidean distance; ties pick the lowest AU code.
/// Returns kNeutralCode for the neutral template.
int match_au(const facs::RegionSpec& region, const Eigen::VectorXd& features,
             const AuTemplateGallery& gallery);

} // namespace facsca::features
