#include "facsca/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "facsca/error.hpp"

namespace facsca {

const std::vector<Config::KeyInfo>& Config::registry() {
    static const std::vector<KeyInfo> keys = {
        {"skin.rgb.r_min", "95", "RGB rule: minimum red"},
        {"skin.rgb.g_min", "40", "RGB rule: minimum green"},
        {"skin.rgb.b_min", "20", "RGB rule: minimum blue"},
        {"skin.rgb.spread_min", "15", "RGB rule: minimum max-min channel spread"},
        {"skin.rgb.rg_gap_min", "15", "RGB rule: minimum |R-G|"},
        {"skin.ycbcr.cb_min", "77", "YCbCr rule: Cb lower bound"},
        {"skin.ycbcr.cb_max", "127", "YCbCr rule: Cb upper bound"},
        {"skin.ycbcr.cr_min", "133", "YCbCr rule: Cr lower bound"},
        {"skin.ycbcr.cr_max", "173", "YCbCr rule: Cr upper bound"},
        {"skin.hsi.h_max_low", "50", "HSI rule: upper edge of the low hue band, degrees"},
        {"skin.hsi.h_min_high", "340", "HSI rule: lower edge of the high hue band, degrees"},
        {"skin.hsi.s_min", "0.10", "HSI rule: saturation lower bound"},
        {"skin.hsi.s_max", "0.70", "HSI rule: saturation upper bound"},
        {"skin.hsi.i_min", "0.1568627451", "HSI rule: intensity lower bound (40/255)"},
        {"detect.min_area_frac", "0.002", "minimum component area as a fraction of the image"},
        {"detect.aspect_min", "0.8", "minimum face-box h/w"},
        {"detect.aspect_max", "2.2", "maximum face-box h/w"},
        {"detect.binarize_lo", "30", "Otsu clamp: lowest dark-feature threshold"},
        {"detect.binarize_hi", "120", "Otsu clamp: highest dark-feature threshold"},
        {"chip.size", "64", "normalized face chip side length, pixels"},
        {"eigen.components", "8", "eigenface count M (clamped to gallery size)"},
        {"eigen.phi_scale", "0.8", "phi = scale * median inter-gallery distance"},
        {"eigen.phi_override", "-1", "fixed phi; negative means derive from phi_scale"},
        {"eigen.tau_scale", "0.5", "key-face novelty tau = scale * phi"},
        {"eigen.tau_override", "-1", "fixed tau; negative means derive from tau_scale"},
        {"twodpca.components", "4", "2DPCA projection axis count d"},
        {"gabor.scales", "5", "Gabor bank scale count"},
        {"gabor.orientations", "8", "Gabor bank orientation count"},
        {"gabor.kernel_size", "21", "Gabor kernel side length, odd"},
        {"gabor.lambda_min", "4.0", "shortest wavelength; ladder steps by sqrt(2)"},
        {"gabor.gamma", "0.5", "Gabor spatial aspect ratio"},
        {"gabor.sigma_ratio", "0.56", "sigma = ratio * lambda"},
        {"fld.lambda", "1e-6", "within-scatter ridge regularizer"},
        {"match.features", "2dpca", "AU matching feature space: 2dpca|fused"},
        {"recognize.features", "fused", "identity recognition feature space: eigen|fused"},
        {"eval.beta", "1.0", "F-measure beta weight"},
        {"retrieval.fuzzy_hamming", "0", "max Hamming distance for fuzzy pattern fallback; 0 disables"},
        {"paths.models", "", "default models directory when --models is omitted"},
        {"paths.index", "", "default index path when --index is omitted"},
    };
    return keys;
}

Config::Config() {
    for (const auto& k : registry()) values_[k.key] = k.default_value;
}

Config Config::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::io, "cannot open config file: " + path);
    Config cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(errc::config,
                        path + ":" + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
    auto it = values_.find(key);
    if (it == values_.end()) throw Error(errc::config, "unknown config key: " + key);
    it->second = value;
}

const std::string& Config::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw Error(errc::config, "unknown config key: " + key);
    return it->second;
}

int Config::get_int(const std::string& key) const {
    const std::string& v = get(key);
    char* end = nullptr;
    long n = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw Error(errc::config, "config key " + key + " is not an integer: " + v);
    return static_cast<int>(n);
}

double Config::get_double(const std::string& key) const {
    const std::string& v = get(key);
    char* end = nullptr;
    double d = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw Error(errc::config, "config key " + key + " is not a number: " + v);
    return d;
}

bool Config::get_bool(const std::string& key) const {
    const std::string& v = get(key);
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    throw Error(errc::config, "config key " + key + " is not a boolean: " + v);
}

std::string Config::echo() const {
    std::ostringstream out;
    for (const auto& [k, v] : values_) out << k << "=" << v << "\n";
    return out.str();
}

} // namespace facsca
