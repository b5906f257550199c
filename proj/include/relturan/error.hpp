#ifndef RELTURAN_ERROR_HPP
#define RELTURAN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace relturan {

// Malformed input: bad vertex ids, wrong uniformity, unparsable files.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A search or enumeration exceeded its configured budget.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// A certificate or freeness check failed.
class VerificationError : public std::runtime_error {
public:
    explicit VerificationError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace relturan

#endif
