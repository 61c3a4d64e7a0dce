#pragma once

#include <stdexcept>
#include <string>

namespace powermdp {

/// Malformed or inconsistent input (bad file, unknown name, invalid flag).
class input_error : public std::invalid_argument {
public:
    explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation was requested beyond a configured size cap.
class size_error : public std::length_error {
public:
    explicit size_error(const std::string& what) : std::length_error(what) {}
};

/// Parameter outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
public:
    explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

}  // namespace powermdp
