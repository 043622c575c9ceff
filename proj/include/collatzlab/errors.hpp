#pragma once

#include <stdexcept>
#include <string>

namespace collatzlab {

// Base for every domain error thrown by the library. std exceptions
// (invalid_argument, domain_error) are reserved for precondition bugs.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

class DivisionByZero : public error {
public:
    DivisionByZero() : error("division by zero") {}
};

class NotConvergent : public error {
public:
    NotConvergent() : error("sequence descriptor carries no declared limit") {}
};

class ConditionOnNull : public error {
public:
    ConditionOnNull() : error("conditioning set has density zero") {}
};

// Base for all resource-budget errors; the CLI maps these to exit code 3.
class BudgetExceeded : public error {
public:
    explicit BudgetExceeded(const std::string& what) : error(what) {}
};

class BranchBudgetExceeded : public BudgetExceeded {
public:
    explicit BranchBudgetExceeded(const std::string& what) : BudgetExceeded(what) {}
};

// Budget exhaustion along an orbit. Signals "undecided", never "disproved".
class TrajectoryBudgetExceeded : public BudgetExceeded {
public:
    explicit TrajectoryBudgetExceeded(const std::string& what) : BudgetExceeded(what) {}
};

class NotEventuallyConstant : public error {
public:
    NotEventuallyConstant() : error("index subsequence is not eventually constant") {}
};

class NoMixingLimit : public error {
public:
    NoMixingLimit() : error("|p00 + p11 - 1| < 1 fails; the chain has no mixing limit") {}
};

class DerivationMismatch : public error {
public:
    explicit DerivationMismatch(const std::string& what) : error(what) {}
};

class AssumptionRequired : public error {
public:
    explicit AssumptionRequired(const std::string& what) : error(what) {}
};

class PlusUndefined : public error {
public:
    PlusUndefined() : error("vector sum is outside the injection's image") {}
};

class NotEven : public error {
public:
    NotEven() : error("supernatural number is odd (exponent of 2 is zero)") {}
};

class PreconditionFailed : public error {
public:
    explicit PreconditionFailed(const std::string& what) : error(what) {}
};

} // namespace collatzlab
