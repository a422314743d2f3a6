#include "rlc/error.hpp"

namespace rlc {

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::validation: return 2;
    case ErrorKind::unreachable: return 3;
    case ErrorKind::infeasible: return 4;
    case ErrorKind::non_contractive: return 5;
    case ErrorKind::io: return 6;
    case ErrorKind::sampling_budget: return 7;
    case ErrorKind::no_convergence: return 8;
    }
    return 1;
}

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::unreachable: return "unreachable";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::non_contractive: return "non_contractive";
    case ErrorKind::io: return "io";
    case ErrorKind::sampling_budget: return "sampling_budget";
    case ErrorKind::no_convergence: return "no_convergence";
    }
    return "unknown";
}

} // namespace rlc
