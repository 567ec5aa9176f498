#pragma once

#include <stdexcept>
#include <string>

namespace facsca {

// All recoverable failures surface as Error. The code is a short stable
// identifier the CLI prints as "ERROR <code>: <message>".
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

namespace errc {
inline constexpr const char* args = "ARGS";         // bad CLI usage
inline constexpr const char* config = "CONFIG";     // config file problems
inline constexpr const char* io = "IO";             // missing/unwritable files
inline constexpr const char* format = "FORMAT";     // malformed file contents
inline constexpr const char* domain = "DOMAIN";     // precondition violations
inline constexpr const char* state = "STATE";       // unfitted/missing models
inline constexpr const char* integrity = "INTEGRITY"; // corrupt index/model data
} // namespace errc

} // namespace facsca
