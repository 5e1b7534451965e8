#pragma once

#include <stdexcept>
#include <string>

namespace sproc {

// Bad or inconsistent user input (CLI exit code 2).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A computation that could not be completed: divergence, singular system,
// too many failed refits (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sproc
