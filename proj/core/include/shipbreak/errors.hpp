#pragma once

#include <stdexcept>
#include <string>

namespace shipbreak {

// Base class for all library errors. Every failure mode below is a distinct
// type so callers (and tests) can catch precisely.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define SHIPBREAK_DEFINE_ERROR(Name)                                  \
    class Name : public Error {                                       \
    public:                                                           \
        explicit Name(const std::string& msg) : Error(msg) {}         \
    }

// series / segmentation
SHIPBREAK_DEFINE_ERROR(InvalidSeries);
SHIPBREAK_DEFINE_ERROR(SeriesTooShort);
SHIPBREAK_DEFINE_ERROR(SingularSegment);
SHIPBREAK_DEFINE_ERROR(InfeasibleBreakCount);
SHIPBREAK_DEFINE_ERROR(InvalidBreaks);
SHIPBREAK_DEFINE_ERROR(OracleTooLarge);
SHIPBREAK_DEFINE_ERROR(NumericalFault);

// selection
SHIPBREAK_DEFINE_ERROR(DegenerateFit);

// inference
SHIPBREAK_DEFINE_ERROR(SegmentTooShort);
SHIPBREAK_DEFINE_ERROR(ZeroShift);
SHIPBREAK_DEFINE_ERROR(NotEnoughBreaks);

// panel building
SHIPBREAK_DEFINE_ERROR(MissingCpiYear);
SHIPBREAK_DEFINE_ERROR(NoOverlap);
SHIPBREAK_DEFINE_ERROR(ZeroDenominator);
SHIPBREAK_DEFINE_ERROR(NoAnchor);
SHIPBREAK_DEFINE_ERROR(ReferenceGap);
SHIPBREAK_DEFINE_ERROR(ExtrapolationRequired);
SHIPBREAK_DEFINE_ERROR(NonPositiveInput);
SHIPBREAK_DEFINE_ERROR(OutOfRangeUtilization);
SHIPBREAK_DEFINE_ERROR(ZeroReference);
SHIPBREAK_DEFINE_ERROR(TooFewObservations);
SHIPBREAK_DEFINE_ERROR(ConfigError);
SHIPBREAK_DEFINE_ERROR(IoError);

#undef SHIPBREAK_DEFINE_ERROR

} // namespace shipbreak
