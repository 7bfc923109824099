#pragma once

#include <stdexcept>
#include <string>

namespace crystal_forge
{
    enum class ErrorKind
    {
        InvalidIndex,
        ShapeMismatch,
        InvalidSelector,
        NotRealistic,
        NotCubical,
        BadDimension,
        NotACrystal,
        CoordinateClash,
        InvalidParams,
        Infeasible,
        NotHollowShadow,
        NotAffine,
        TooFewDimensions,
        DimensionMismatch,
        NotAHomomorphism,
        SupportConditionViolated,
        EmptyLineTemplate,
        FormatError
    };

    auto error_kind_name(ErrorKind kind) -> const char *;

    class Error : public std::runtime_error
    {
    private:
        ErrorKind _kind;

    public:
        Error(ErrorKind kind, const std::string & message);

        auto kind() const -> ErrorKind { return _kind; }
    };
}
