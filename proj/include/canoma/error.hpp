#pragma once

#include <stdexcept>
#include <string>

namespace canoma {

/// Raised when a model or configuration parameter is out of its domain.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a computation is asked for outside its supported envelope
/// (for example the semi-analytic oracle on a three-stage cascade).
class UnsupportedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace canoma
