#pragma once

#include <stdexcept>
#include <string>

namespace sos {

enum class ErrorCode : int {
    Ok = 0,
    InvalidArgument = 1,
    EnumerationTooLarge = 2,
    CapNotConverged = 3,
    IncompatibleSet = 4,
    NegativeHeight = 5,
    OrderTooLarge = 6,
    NonElementaryCylinder = 7,
    SiteNotAtZero = 8,
    Disconnected = 9,
    TemplateMismatch = 10,
    ParamsOutOfRange = 11,
    NotLargeSet = 12,
    RegionTooLarge = 13,
    ParamsInvalid = 14,
    EpsilonRange = 15,
    ParseError = 16,
    IoError = 17,
    Internal = 99,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace sos
