#pragma once

#include <stdexcept>
#include <string>

namespace mpt {

// Base for every domain error raised by the library. Callers that only care
// about "the computation was rejected" can catch this one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define MPT_DECLARE_ERROR(Name)                                                \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string &what) : Error(#Name ": " + what) {}   \
    }

// ring
MPT_DECLARE_ERROR(SymbolDegreeOverflow);

// series
MPT_DECLARE_ERROR(WindowUnderflow);
MPT_DECLARE_ERROR(NonUnitLeadingTerm);
MPT_DECLARE_ERROR(InexactDivision);
MPT_DECLARE_ERROR(TruncationLoss);
MPT_DECLARE_ERROR(OutsideValidWindow);
MPT_DECLARE_ERROR(BadConstantTerm);
MPT_DECLARE_ERROR(NonConvergentFactor);

// enriques
MPT_DECLARE_ERROR(MissingDivisor);
MPT_DECLARE_ERROR(UnstableWindow);
MPT_DECLARE_ERROR(NotInBasisSpan);

#undef MPT_DECLARE_ERROR

} // namespace mpt
