#pragma once

#include <stdexcept>
#include <string>

namespace ratsym {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input: bad document, schema violation, invalid argument combination.
class parse_error : public error {
public:
    explicit parse_error(const std::string& what) : error(what) {}
};

/// Numerical precondition failed: singular leading minor, pole proximity,
/// non-finite intermediate, point on support.
class precondition_error : public error {
public:
    explicit precondition_error(const std::string& what) : error(what) {}
};

/// A configured work budget (term count, pairing count) would be exceeded.
class budget_error : public error {
public:
    explicit budget_error(const std::string& what) : error(what) {}
};

} // namespace ratsym
