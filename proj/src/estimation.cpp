#include "rlc/estimation.hpp"

#include "rlc/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace rlc {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double inv_norm_cdf(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) fail(ErrorKind::validation, "quantile level must lie in (0, 1)");

    // Acklam (2003) coefficients; relative error of the raw approximation ~1.15e-9
    static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                             1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                             6.680131188771972e+01, -1.328068155288572e+01};
    static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                             -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                             3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (gamma == 0.5) return 0.0;
    // evaluate on the lower half and mirror, so gamma and 1 - gamma negate exactly
    const bool upper = gamma > 0.5;
    const double p = upper ? 1.0 - gamma : gamma;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }

    // Halley refinement
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);

    return upper ? -x : x;
}

double bernoulli_variance(int trials, int successes) {
    if (trials < 2) return 0.0;
    const double t = trials;
    const double s = successes;
    const double p = s / t;
    // exact zero at p in {0, 1}; the closed form can leave -1e-17 residue otherwise
    if (successes == 0 || successes == trials) return 0.0;
    return std::max(0.0, (s * (1.0 - 2.0 * p) + t * p * p) / (t - 1.0));
}

double success_lower_bound(int trials, int successes, double gamma, BoundMode mode) {
    require(trials >= 1, "trial count must be >= 1");
    require(successes >= 0 && successes <= trials, "success count must lie in [0, T]");
    const double z = inv_norm_cdf(gamma);
    const double p_hat = static_cast<double>(successes) / trials;
    double s = std::sqrt(bernoulli_variance(trials, successes));
    if (mode == BoundMode::standard_error) s /= std::sqrt(static_cast<double>(trials));
    // capped at p_hat: a gamma below 1/2 makes z negative and would otherwise push the bound above the estimate
    return std::clamp(p_hat - s * z, 0.0, p_hat);
}

EdgeStats edge_stats(std::span<const TrialOutcome> outcomes, double gamma, BoundMode mode) {
    require(gamma > 0.0 && gamma < 1.0, "gamma must lie in (0, 1)");
    require(!outcomes.empty(), "edge statistics need at least one trial");
    EdgeStats st;
    st.trials = static_cast<int>(outcomes.size());
    double cost_sum = 0.0;
    for (const auto& o : outcomes) {
        if (o.success) {
            ++st.successes;
            cost_sum += o.cost;
        }
    }
    st.p_hat = static_cast<double>(st.successes) / st.trials;
    if (st.successes > 0) st.c_hat = cost_sum / st.successes;
    st.sigma2_hat = bernoulli_variance(st.trials, st.successes);
    st.gamma = gamma;
    st.mode = mode;
    st.p_lower = success_lower_bound(st.trials, st.successes, gamma, mode);
    return st;
}

} // namespace rlc
