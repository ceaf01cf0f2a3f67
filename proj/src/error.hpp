#ifndef GMSD_ERROR_HPP
#define GMSD_ERROR_HPP

#include <stdexcept>
#include <string>

namespace gmsd {

// File-system and format failures (unreadable file, malformed header,
// bad manifest row). Maps to GMSD_ERR_IO / CLI exit code 2.
struct IoError : std::runtime_error {
    explicit IoError(const std::string &what) : std::runtime_error(what) {}
};

// Contract violations on otherwise well-formed inputs (dimension mismatch,
// image too small, bad parameter). Maps to GMSD_ERR_INVALID / exit code 3.
struct InvalidArgument : std::runtime_error {
    explicit InvalidArgument(const std::string &what) : std::runtime_error(what) {}
};

} // namespace gmsd

#endif
