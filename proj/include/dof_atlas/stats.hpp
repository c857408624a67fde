#pragma once

#include <vector>

namespace dofatlas {

/// Two-sample Kolmogorov-Smirnov statistic sup|F_a - F_b| (inputs need not
/// be sorted).
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// Asymptotic two-sided p-value for a two-sample KS statistic at sample
/// sizes n and m, with the usual finite-sample correction to the effective
/// size.
double ks_pvalue(double statistic, std::size_t n, std::size_t m);

/// Pearson sample correlation; 0 when either side is constant.
double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r_squared = 1.0;
};

/// Ordinary least squares of y against x. Needs >= 3 points and
/// non-constant x.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace dofatlas
