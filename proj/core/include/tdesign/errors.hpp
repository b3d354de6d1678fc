#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tdesign {

/// A computation was refused because it would exceed an explicit resource
/// budget. Deliberately distinct from a verification failure: the caller
/// asked for something too large, not something false.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(std::string what, std::uint64_t required, std::uint64_t limit)
        : std::runtime_error(std::move(what)), required(required), limit(limit) {}

    std::uint64_t required;
    std::uint64_t limit;
};

/// Largest-remainder rounding could not keep every part positive at the
/// requested denominator. Carries the smallest denominator that works.
class InfeasibleRounding : public std::runtime_error {
public:
    InfeasibleRounding(std::string what, std::int64_t min_feasible_q)
        : std::runtime_error(std::move(what)), min_feasible_q(min_feasible_q) {}

    std::int64_t min_feasible_q;
};

/// Newton refinement did not reach the requested weight residual.
class ConvergenceFailure : public std::runtime_error {
public:
    ConvergenceFailure(std::string what, double residual)
        : std::runtime_error(std::move(what)), residual(residual) {}

    double residual;
};

/// A block family failed the t-wise balance check; `subset` names the first
/// witness (0-based point indices) and `t_prime` the level where it failed.
class BalanceViolation : public std::runtime_error {
public:
    BalanceViolation(std::string what, std::vector<int> subset, int t_prime)
        : std::runtime_error(std::move(what)), subset(std::move(subset)), t_prime(t_prime) {}

    std::vector<int> subset;
    int t_prime;
};

/// Two field elements from different field contexts were combined.
class FieldMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace tdesign
