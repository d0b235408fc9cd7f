#pragma once

#include <vector>

namespace fnls {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = intercept + slope x; needs at least two points.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// Asymptotic critical value c(level) sqrt((n + m) / (n m)); level in {0.10, 0.05, 0.01, 0.001}.
double ks_critical_value(std::size_t n, std::size_t m, double level = 0.01);

}  // namespace fnls
