#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ihr {

enum class ErrorCode : std::uint8_t {
    InvalidArgument,       // precondition on a caller-supplied value
    DegenerateDenominator, // U + K <= 0 reached compute_ihr
    InvalidModel,          // logistic slope >= 0
    EmptyInput,
    DegenerateOutcomes,    // all labels identical or a single distinct ihr
    Separation,            // MLE diverging (quasi-complete separation)
    NonConvergence,
    ConfigParse,
    ConfigValidation,
    ConfigUnknownKey,
    Io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

#define IHR_REQUIRE(cond, code, msg)                 \
    do {                                             \
        if (!(cond)) {                               \
            throw ::ihr::Error((code), (msg));       \
        }                                            \
    } while (0)

} // namespace ihr
