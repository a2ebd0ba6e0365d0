#pragma once

#include <stdexcept>
#include <string>

namespace polymac {

/// Operands from two different fields Z_p, Z_q were combined.
class ModulusMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An operation was called outside its documented domain.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Exact enumeration would exceed the configured message budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No distribution on the requested probability grid sits at the requested distance.
class NoGridDistribution : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace polymac
