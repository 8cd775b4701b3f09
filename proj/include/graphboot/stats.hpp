#pragma once

#include <span>
#include <utility>
#include <vector>

namespace graphboot {

/// Nearest-rank percentile interval: order statistics at ranks
/// ceil(q N) for q = (1 - level) / 2 and 1 - (1 - level) / 2.
/// Throws std::invalid_argument for fewer than 10 samples or level outside
/// (0, 1).
std::pair<double, double> percentile_interval(std::span<const double> samples, double level);

/// Nearest-rank quantile of `samples` at probability q in (0, 1].
double nearest_rank(std::span<const double> samples, double q);

/// sup_x |F_xs(x) - F_ys(x)| over the empirical CDFs. Throws
/// std::invalid_argument if either sample is empty.
double ks_two_sample(std::span<const double> xs, std::span<const double> ys);

/// sup_x |F_xs(x) - Phi((x - mean) / sd)|.
double ks_normal(std::span<const double> xs, double mean, double sd);

double mean(std::span<const double> xs);
/// Sample standard deviation (n - 1 denominator).
double stddev(std::span<const double> xs);
double median(std::vector<double> xs);

}  // namespace graphboot
