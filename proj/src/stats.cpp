// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#include "icand/stats.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace icand::stats
{

namespace
{
boost::math::normal_distribution<double> const kStdNormal(0.0, 1.0);

double quantile_sorted(std::vector<double> const& sorted, double p)
{
    if (sorted.empty())
        throw std::invalid_argument("quantile of empty sample");
    if (p <= 0.0)
        return sorted.front();
    if (p >= 1.0)
        return sorted.back();
    double pos = p * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(pos);
    double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sorted.size())
        return sorted.back();
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double mean_of(std::span<double const> xs)
{
    double sum = 0.0;
    for (double x : xs)
        sum += x;
    return sum / static_cast<double>(xs.size());
}
} // namespace

double normal_quantile(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("normal_quantile needs p in (0, 1)");
    return boost::math::quantile(kStdNormal, p);
}

double normal_cdf(double x)
{
    return boost::math::cdf(kStdNormal, x);
}

double percentile(std::span<double const> samples, double p)
{
    if (samples.empty())
        throw std::invalid_argument("percentile of empty sample");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("percentile needs p in [0, 1]");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    return quantile_sorted(sorted, p);
}

BcaInterval bca_interval(std::span<double const> samples, int resamples, double alpha,
                         std::uint64_t rng_seed)
{
    auto n = samples.size();
    if (n < 2)
        throw std::invalid_argument("bca_interval needs at least two samples");
    if (resamples < 100)
        throw std::invalid_argument("bca_interval needs at least 100 resamples");
    if (!(alpha > 0.0 && alpha < 0.5))
        throw std::invalid_argument("bca_interval needs alpha in (0, 0.5)");

    BcaInterval out;
    out.resamples = resamples;
    out.alpha = alpha;

    double theta_hat = mean_of(samples);
    out.mean = theta_hat;

    bool degenerate = std::all_of(samples.begin(), samples.end(),
                                  [&](double x) { return x == samples[0]; });
    if (degenerate)
    {
        out.lower = theta_hat;
        out.upper = theta_hat;
        return out;
    }

    std::mt19937_64 rng(rng_seed);
    std::vector<double> boot(static_cast<std::size_t>(resamples));
    for (auto& b : boot)
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            sum += samples[rng() % n];
        b = sum / static_cast<double>(n);
    }
    std::sort(boot.begin(), boot.end());

    // Bias correction: where the sample mean falls inside the bootstrap
    // distribution. Clamp away from 0 and 1 so the quantile stays finite.
    auto below = static_cast<double>(
        std::count_if(boot.begin(), boot.end(), [&](double b) { return b < theta_hat; }));
    double b_total = static_cast<double>(resamples);
    double frac = std::clamp(below / b_total, 0.5 / b_total, 1.0 - 0.5 / b_total);
    double z0 = normal_quantile(frac);

    // Acceleration from the jackknife: skewness of the leave-one-out
    // means.
    double total = theta_hat * static_cast<double>(n);
    std::vector<double> jack(n);
    for (std::size_t i = 0; i < n; ++i)
        jack[i] = (total - samples[i]) / static_cast<double>(n - 1);
    double jack_mean = mean_of(jack);
    double num = 0.0;
    double den = 0.0;
    for (double j : jack)
    {
        double d = jack_mean - j;
        num += d * d * d;
        den += d * d;
    }
    double accel = 0.0;
    if (den > 0.0)
        accel = num / (6.0 * std::pow(den, 1.5));

    auto adjusted = [&](double p) {
        double zp = normal_quantile(p);
        double denom = 1.0 - accel * (z0 + zp);
        double t = z0 + (z0 + zp) / denom;
        return std::clamp(normal_cdf(t), 0.0, 1.0);
    };

    out.lower = quantile_sorted(boot, adjusted(alpha / 2.0));
    out.upper = quantile_sorted(boot, adjusted(1.0 - alpha / 2.0));
    if (out.lower > out.upper)
        std::swap(out.lower, out.upper);
    return out;
}

double power_sample_size_raw(double alpha, double power, double sigma, double delta)
{
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must lie in (0, 1)");
    if (!(power > 0.0 && power < 1.0))
        throw std::invalid_argument("power must lie in (0, 1)");
    if (!(sigma > 0.0))
        throw std::invalid_argument("sigma must be positive");
    if (!(delta > 0.0))
        throw std::invalid_argument("delta must be positive");
    double z_alpha = normal_quantile(1.0 - alpha);
    double z_beta = normal_quantile(power);
    double z = z_alpha + z_beta;
    return 2.0 * z * z * sigma * sigma / (delta * delta);
}

int power_sample_size(double alpha, double power, double sigma, double delta)
{
    double raw = power_sample_size_raw(alpha, power, sigma, delta);
    auto n = static_cast<int>(std::ceil(raw));
    return std::max(n, 1);
}

} // namespace icand::stats
