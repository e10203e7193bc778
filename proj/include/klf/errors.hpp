#pragma once

#include <stdexcept>
#include <string>

namespace klf {

/** @brief Base class of all library errors. */
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define KLF_DEFINE_ERROR(Name)                                              \
    class Name : public Error {                                             \
    public:                                                                 \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

KLF_DEFINE_ERROR(InvalidArgument);
KLF_DEFINE_ERROR(NotInGamma2);
KLF_DEFINE_ERROR(PoleAtOne);
KLF_DEFINE_ERROR(NonPositiveArgument);
KLF_DEFINE_ERROR(OrderTooSmall);
KLF_DEFINE_ERROR(NonDivisibleLeadingExponent);
KLF_DEFINE_ERROR(ZeroSeries);
KLF_DEFINE_ERROR(ConvergenceRegion);
KLF_DEFINE_ERROR(DivergentRegion);
KLF_DEFINE_ERROR(TruncationUnsound);
KLF_DEFINE_ERROR(MissingConstants);
KLF_DEFINE_ERROR(LevelMismatch);

#undef KLF_DEFINE_ERROR

} // namespace klf
