#pragma once

#include <utility>
#include <vector>

namespace thick {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

double median(std::vector<double> v);
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);
// Least-squares fit of log(y) against log(x).
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);
// Wilson score interval for a binomial proportion at 95% confidence.
std::pair<double, double> wilson95(std::size_t hits, std::size_t trials);

}  // namespace thick
