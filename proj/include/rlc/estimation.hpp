#pragma once

#include "rlc/controller.hpp"

#include <optional>
#include <span>

namespace rlc {

/// How the success-probability lower bound scales the empirical std.
enum class BoundMode {
    /// p_hat - sigma_hat * z: per-trial std, as the roadmap formula is written.
    verbatim,
    /// p_hat - sigma_hat / sqrt(T) * z: std of the mean.
    standard_error,
};

struct EdgeStats {
    int trials = 0;
    int successes = 0;
    double p_hat = 0.0;
    /// Mean cost over successful trials; absent when nothing succeeded.
    std::optional<double> c_hat;
    double sigma2_hat = 0.0;
    double p_lower = 0.0;
    double gamma = 0.95;
    BoundMode mode = BoundMode::verbatim;
};

/// Standard normal CDF.
double norm_cdf(double x);

/// Standard normal quantile: Acklam's rational approximation followed by one
/// Halley step against erfc. Throws Error(validation) outside (0, 1).
double inv_norm_cdf(double gamma);

/// Unbiased variance of T Bernoulli outcomes with `successes` ones, written as
/// [S(1 - 2p) + T p^2] / (T - 1). Zero when T < 2.
double bernoulli_variance(int trials, int successes);

/// max(p_hat - s * inv_norm_cdf(gamma), 0) with s chosen by `mode`.
double success_lower_bound(int trials, int successes, double gamma, BoundMode mode);

EdgeStats edge_stats(std::span<const TrialOutcome> outcomes, double gamma, BoundMode mode = BoundMode::verbatim);

} // namespace rlc
