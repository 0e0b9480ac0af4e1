#pragma once

// Small numeric/statistics toolbox shared by the diagnostics and tests:
// quadrature, chi-square goodness-of-fit machinery, least squares lines.

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace driftgraph::stats {

// Nodes/weights of an n-point Gauss-Legendre rule mapped to (0,1); cached per
// n, thread-safe after first use.
const std::vector<std::pair<double, double>>& gauss_legendre_01(int n);

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth);

// Survival function of the chi-squared distribution (upper tail p-value).
double chi_squared_pvalue(double statistic, int dof);

// Two-sample homogeneity test on count histograms. Bins with pooled expected
// count < min_expected are merged from the top. Returns the p-value.
double chi_squared_homogeneity(const std::vector<std::uint64_t>& a,
                               const std::vector<std::uint64_t>& b,
                               double min_expected = 5.0);

// Goodness of fit of observed counts against model probabilities (must sum to
// <= 1; the remainder becomes an overflow bin). Tail bins are merged so every
// expected count is at least min_expected.
double chi_squared_gof(const std::vector<std::uint64_t>& observed,
                       const std::vector<double>& probabilities, double total,
                       double min_expected = 5.0);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_sse = 0.0;  // sum of squared residuals
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

double median(std::vector<double> values);  // by value: sorts a copy

double pearson(const std::vector<double>& x, const std::vector<double>& y);

double mean(const std::vector<double>& v);
double variance(const std::vector<double>& v);  // unbiased

}  // namespace driftgraph::stats
