#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mff {

/**
 * @brief Domain error with a stable machine-readable code.
 *
 * Codes are short PascalCase identifiers ("WindowTooLarge", "NonNumericValue", ...)
 * that survive into CLI error output unchanged, so scripts can match on them.
 */
class Error : public std::runtime_error {
public:
    Error(std::string_view code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

}  // namespace mff
