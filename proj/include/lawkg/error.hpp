#pragma once

#include <stdexcept>
#include <string>

namespace lawkg {

/// Toolkit-wide error type. Messages carry enough context (file, line
/// number, offending id) to be printed verbatim by the CLI.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace lawkg
