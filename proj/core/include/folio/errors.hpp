#pragma once

#include <stdexcept>

namespace folio {

/// Malformed or missing input: files, rows, panels, configs.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Degenerate numeric condition: zero variance, no downside, empty range.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace folio
