#pragma once

#include <stdexcept>
#include <string>

namespace surplus {

// Base for every error the library throws; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (e.g. r >= r_inf).
class DomainError : public Error {
public:
    using Error::Error;
};

// Invalid parameters or controls (violated type invariants).
class ConfigError : public Error {
public:
    using Error::Error;
};

// lambda * mu >= c0: the adjustment equation has no positive root.
class NoPositiveRoot : public Error {
public:
    using Error::Error;
};

// Neither sufficient condition for the exponential ruin bound holds.
class BoundUnavailable : public Error {
public:
    using Error::Error;
};

// Requested exponent violates the supermartingale condition.
class InfeasibleRate : public Error {
public:
    using Error::Error;
};

// A single path exceeded the per-path step budget.
class SimulationBudgetExceeded : public Error {
public:
    using Error::Error;
};

}  // namespace surplus
