// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#pragma once

#include <cstdint>
#include <span>

namespace icand::stats
{

struct BcaInterval
{
    double mean = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    int resamples = 0;
    double alpha = 0.0;
};

// Bias-corrected and accelerated bootstrap interval for the mean.
// Bias correction comes from the fraction of bootstrap means below the
// sample mean, acceleration from the jackknife skewness of leave-one-out
// means. Degenerate all-equal samples collapse to [c, c]. Throws
// std::invalid_argument for n < 2, resamples < 100 or alpha outside
// (0, 0.5).
BcaInterval bca_interval(std::span<double const> samples, int resamples, double alpha,
                         std::uint64_t rng_seed);

// Linear-interpolation quantile of a copy of the data, p in [0, 1].
double percentile(std::span<double const> samples, double p);

// Standard normal quantile and CDF.
double normal_quantile(double p);
double normal_cdf(double x);

// Two-sample-mean sample size: N = 2 * (z_alpha + z_beta)^2 * sigma^2 /
// delta^2, one-sided alpha, power = 1 - beta. The raw form returns the
// unrounded value; the integer form rounds up and never returns < 1.
// Throws std::invalid_argument for nonpositive sigma/delta or alpha/power
// outside (0, 1).
double power_sample_size_raw(double alpha, double power, double sigma, double delta);
int power_sample_size(double alpha, double power, double sigma, double delta);

} // namespace icand::stats
