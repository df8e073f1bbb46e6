#pragma once

#include <stdexcept>
#include <string>

namespace perfproj {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define PERFPROJ_ERROR(Name)                                        \
    struct Name : Error {                                           \
        explicit Name(const std::string& msg = #Name) : Error(msg) {} \
    }

PERFPROJ_ERROR(ShapeMismatch);
PERFPROJ_ERROR(NotInvertibleAtPrecision);
PERFPROJ_ERROR(DepthOverflow);
PERFPROJ_ERROR(ZeroSeries);
PERFPROJ_ERROR(NotAUnit);
PERFPROJ_ERROR(UnresolvedAtPrecision);
PERFPROJ_ERROR(NotIdempotent);
PERFPROJ_ERROR(ResidueBasisInvalid);
PERFPROJ_ERROR(WindowTooSmall);
PERFPROJ_ERROR(NotACocycle);
PERFPROJ_ERROR(LiftMismatch);
PERFPROJ_ERROR(TowerInvalid);
PERFPROJ_ERROR(NotGenerating);
PERFPROJ_ERROR(NotSharpLiftable);
PERFPROJ_ERROR(ParseError);

#undef PERFPROJ_ERROR

} // namespace perfproj
