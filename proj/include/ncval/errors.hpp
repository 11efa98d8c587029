#pragma once

#include <stdexcept>
#include <string>

namespace ncval {

// Every failure mode surfaces as a typed error with a stable machine-readable
// code; the CLI maps these to its JSON error field.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define NCVAL_DEFINE_ERROR(Name)                               \
    class Name : public Error {                                \
    public:                                                    \
        explicit Name(const std::string& what)                 \
            : Error(#Name, what) {}                            \
    }

NCVAL_DEFINE_ERROR(DimensionMismatch);
NCVAL_DEFINE_ERROR(ZeroVectorInput);
NCVAL_DEFINE_ERROR(RoleCollision);
NCVAL_DEFINE_ERROR(NotUnitary);
NCVAL_DEFINE_ERROR(NotNormalized);
NCVAL_DEFINE_ERROR(UnknownRole);
NCVAL_DEFINE_ERROR(BasisMismatch);
NCVAL_DEFINE_ERROR(BadBipartition);
NCVAL_DEFINE_ERROR(BadLayout);
NCVAL_DEFINE_ERROR(BadParameters);
NCVAL_DEFINE_ERROR(OffGridShift);
NCVAL_DEFINE_ERROR(OffGridLabel);
NCVAL_DEFINE_ERROR(WrapAround);
NCVAL_DEFINE_ERROR(ConfigInvalid);
NCVAL_DEFINE_ERROR(UnknownSuite);
NCVAL_DEFINE_ERROR(IoFailure);

#undef NCVAL_DEFINE_ERROR

} // namespace ncval
