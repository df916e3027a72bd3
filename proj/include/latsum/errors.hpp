#pragma once

#include <stdexcept>
#include <string>

namespace latsum {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// y lies on a hyperplane where the sum or its generating function is undefined.
struct ExcludedPoint : Error {
    using Error::Error;
};

// A division by a constant-free linear form left a remainder.
struct NonDivisible : Error {
    std::string residual;
    NonDivisible(const std::string& what, std::string res) : Error(what), residual(std::move(res)) {}
};

struct NotSimple : Error {
    using Error::Error;
};

struct RankDrop : Error {
    using Error::Error;
};

struct DegenerateExponent : Error {
    using Error::Error;
};

struct InvalidInput : Error {
    using Error::Error;
};

}  // namespace latsum
