#pragma once

#include <stdexcept>
#include <string>

namespace rlc {

/// Failure categories. Each maps onto one process exit code of the CLI.
enum class ErrorKind {
    validation,
    unreachable,
    infeasible,
    non_contractive,
    io,
    sampling_budget,
    no_convergence,
};

int exit_code(ErrorKind kind) noexcept;
const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised by the constrained planner; carries the best success probability
/// any start-goal path can reach (0 when the goal is unreachable).
class InfeasibleError : public Error {
public:
    InfeasibleError(const std::string& what, double best_probability)
        : Error(ErrorKind::infeasible, what), best_probability_(best_probability) {}

    double best_probability() const noexcept { return best_probability_; }

private:
    double best_probability_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(ErrorKind::validation, what);
}

} // namespace rlc
