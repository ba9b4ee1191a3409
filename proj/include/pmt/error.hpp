#pragma once

#include <stdexcept>
#include <string>

namespace pmt {

/// Raised when a computation produces non-finite values or fails to converge.
/// Precondition violations use std::invalid_argument instead.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace pmt
