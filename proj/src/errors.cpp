// errors.cpp

#include "qbat/errors.hpp"

namespace qbat {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::Domain: return "Domain";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::NullSpaceDegenerate: return "NullSpaceDegenerate";
    case ErrorKind::NonPhysical: return "NonPhysical";
    case ErrorKind::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorKind::DivisionDegenerate: return "DivisionDegenerate";
    case ErrorKind::BranchAmbiguous: return "BranchAmbiguous";
    case ErrorKind::ComplexDominant: return "ComplexDominant";
    case ErrorKind::BaselineDegenerate: return "BaselineDegenerate";
    case ErrorKind::AffinityDegenerate: return "AffinityDegenerate";
    case ErrorKind::SingleGroup: return "SingleGroup";
    case ErrorKind::Schema: return "Schema";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

} // namespace qbat
