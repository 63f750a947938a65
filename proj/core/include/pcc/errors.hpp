#pragma once

#include <stdexcept>
#include <string>

namespace pcc {

/// Bad input: unreadable files, malformed lines, invalid parameters.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Eigensolver non-convergence or a broken numerical invariant.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pcc
