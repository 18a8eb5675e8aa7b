#pragma once

#include <stdexcept>
#include <string>

namespace subdiff {

/// Runtime numerical failure (singular pivot, series nonconvergence, ...).
/// Precondition violations use std::invalid_argument instead.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace subdiff
