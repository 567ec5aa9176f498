#include "facsca/au_match.hpp"

#include <limits>

#include "facsca/error.hpp"
#include "facsca/pnm.hpp"

namespace facsca::features {

bool AuTemplateGallery::covers_all_regions() const {
    for (const auto& spec : facs::region_table()) {
        auto it = regions.find(spec.region);
        if (it == regions.end()) return false;
        if (it->second.templates.size() != spec.au_list.size() + 1) return false;
    }
    return true;
}

AuTemplateGallery build_au_gallery(const std::string& directory, int components) {
    AuTemplateGallery gallery;
    for (const auto& spec : facs::region_table()) {
        std::vector<vision::Image> chips;
        std::vector<int> codes;
        chips.push_back(vision::load_image(directory + "/" + spec.name + "_neutral.pgm"));
        codes.push_back(kNeutralCode);
        for (int au : spec.au_list) {
            chips.push_back(
                vision::load_image(directory + "/" + spec.name + "_" + std::to_string(au) + ".pgm"));
            codes.push_back(au);
        }
        const int w = chips[0].width, h = chips[0].height;
        for (const auto& chip : chips)
            if (chip.width != w || chip.height != h)
                throw Error(errc::format,
                            "AU template chips for region " + spec.name + " differ in size");

        AuTemplateGallery::RegionEntry entry;
        entry.chip_width = w;
        entry.chip_height = h;
        entry.model = fit_2dpca(chips, components);
        for (size_t i = 0; i < chips.size(); ++i)
            entry.templates.push_back({codes[i], flatten(features_2dpca(entry.model, chips[i]))});
        gallery.regions[spec.region] = std::move(entry);
    }
    return gallery;
}

Eigen::VectorXd region_features(const AuTemplateGallery& gallery, facs::Region region,
                                const vision::Image& chip) {
    auto it = gallery.regions.find(region);
    if (it == gallery.regions.end())
        throw Error(errc::state, "AU gallery has no entry for region " +
                                     facs::region_spec(region).name);
    const auto& entry = it->second;
    if (chip.width != entry.chip_width || chip.height != entry.chip_height)
        return flatten(features_2dpca(
            entry.model, vision::resize_gray(chip, entry.chip_width, entry.chip_height)));
    return flatten(features_2dpca(entry.model, chip));
}

int match_au(const facs::RegionSpec& region, const Eigen::VectorXd& features,
             const AuTemplateGallery& gallery) {
    auto it = gallery.regions.find(region.region);
    if (it == gallery.regions.end() ||
        it->second.templates.size() != region.au_list.size() + 1)
        throw Error(errc::state, "AU gallery does not cover region " + region.name);
    int best_au = kNeutralCode;
    double best_distance = std::numeric_limits<double>::infinity();
    for (const auto& tmpl : it->second.templates) {
        if (tmpl.feature.size() != features.size())
            throw Error(errc::domain, "feature dimension does not match region " + region.name);
        const double d = (tmpl.feature - features).norm();
        if (d < best_distance || (d == best_distance && tmpl.au < best_au)) {
            best_distance = d;
            best_au = tmpl.au;
        }
    }
    return best_au;
}

} // namespace facsca::features
