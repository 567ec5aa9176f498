#pragma once

#include <map>
#include <string>
#include <vector>

namespace facsca {

/// Flat key=value runtime settings. Every key has a registered default;
/// loading a file with an unregistered key is an error.
class Config {
public:
    struct KeyInfo {
        std::string key;
        std::string default_value;
        std::string description;
    };

    Config(); // all defaults

    static const std::vector<KeyInfo>& registry();

    /// Parse `key=value` lines ('#' starts a comment, blank lines ignored).
    static Config load_file(const std::string& path);

    /// Apply one `key=value` assignment.
    void set(const std::string& key, const std::string& value);

    const std::string& get(const std::string& key) const;
    int get_int(const std::string& key) const;
    double get_double(const std::string& key) const;
    bool get_bool(const std::string& key) const;

    /// Effective settings, one `key=value` per line, sorted by key.
    std::string echo() const;

private:
    std::map<std::string, std::string> values_;
};

} // namespace facsca
