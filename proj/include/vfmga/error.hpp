#pragma once

#include <stdexcept>
#include <string>

namespace vfmga {

/// Base of every exception thrown by the engine. Callers that only need to
/// report a failure can catch this one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input data violates a documented schema or type invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

}  // namespace vfmga
