#ifndef TIH_ERRORS_HPP
#define TIH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tih {

struct Error : std::runtime_error {
    explicit Error(const std::string& w) : std::runtime_error(w) {}
};

// Validation-type failures (CLI exit code 2).
struct ValidationError : Error {
    using Error::Error;
};
struct EmptyPolyhedron : ValidationError {
    using ValidationError::ValidationError;
};
struct DimensionMismatch : ValidationError {
    using ValidationError::ValidationError;
};
struct CellNotFound : ValidationError {
    using ValidationError::ValidationError;
};
struct NotAFace : ValidationError {
    using ValidationError::ValidationError;
};
struct NotAComplex : ValidationError {
    using ValidationError::ValidationError;
};
struct NotClosed : ValidationError {
    using ValidationError::ValidationError;
};
struct ComplementNotClosed : ValidationError {
    using ValidationError::ValidationError;
};
struct NotOneDimensional : ValidationError {
    using ValidationError::ValidationError;
};
struct NotAFan : ValidationError {
    using ValidationError::ValidationError;
};
struct BadPair : ValidationError {
    using ValidationError::ValidationError;
};
struct FieldRequired : ValidationError {
    using ValidationError::ValidationError;
};
struct ConditionCNotAsserted : ValidationError {
    using ValidationError::ValidationError;
};
struct ModelMismatch : ValidationError {
    using ValidationError::ValidationError;
};
struct InconsistentStratification : ValidationError {
    using ValidationError::ValidationError;
};
struct ImageNotContained : Error {
    using Error::Error;
};

// Unsupported-input failures (CLI exit code 4).
struct UnsupportedInput : Error {
    using Error::Error;
};
struct UnsupportedStarDimension : UnsupportedInput {
    using UnsupportedInput::UnsupportedInput;
};
struct ConicalStructureRequired : UnsupportedInput {
    using UnsupportedInput::UnsupportedInput;
};
struct UnboundedCellWithoutConeStructure : UnsupportedInput {
    using UnsupportedInput::UnsupportedInput;
};

// Stabilization failures (CLI exit code 3).
struct StabilizationFailure : Error {
    using Error::Error;
};

}  // namespace tih

#endif
