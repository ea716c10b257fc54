// errors.hpp — Error kinds raised by the battery simulator

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qbat {

enum class ErrorKind {
    Domain,
    InvalidParams,
    NullSpaceDegenerate,
    NonPhysical,
    StepSizeUnderflow,
    DivisionDegenerate,
    BranchAmbiguous,
    ComplexDominant,
    BaselineDegenerate,
    AffinityDegenerate,
    SingleGroup,
    Schema,
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace qbat
