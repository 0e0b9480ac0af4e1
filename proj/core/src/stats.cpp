#include "driftgraph/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace driftgraph::stats {

const std::vector<std::pair<double, double>>& gauss_legendre_01(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<std::pair<double, double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  // Newton iteration on Legendre polynomials over [-1,1], then map to (0,1).
  std::vector<std::pair<double, double>> nodes(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    nodes[i] = {0.5 * (1.0 - x), 0.5 * w};
    nodes[n - 1 - i] = {0.5 * (1.0 + x), 0.5 * w};
  }
  return cache.emplace(n, std::move(nodes)).first->second;
}

namespace {
double simpson_step(const std::function<double(double)>& f, double a, double fa,
                    double b, double fb, double m, double fm, double whole,
                    double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_step(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1);
}
}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

double chi_squared_pvalue(double statistic, int dof) {
  if (dof <= 0) throw std::invalid_argument("chi_squared_pvalue: dof must be > 0");
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, std::max(0.0, statistic)));
}

double chi_squared_homogeneity(const std::vector<std::uint64_t>& a,
                               const std::vector<std::uint64_t>& b,
                               double min_expected) {
  const std::size_t n = std::max(a.size(), b.size());
  auto at = [](const std::vector<std::uint64_t>& v, std::size_t i) {
    return i < v.size() ? static_cast<double>(v[i]) : 0.0;
  };
  double ta = 0.0, tb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ta += at(a, i);
    tb += at(b, i);
  }
  if (ta == 0.0 || tb == 0.0)
    throw std::invalid_argument("chi_squared_homogeneity: empty sample");
  const double total = ta + tb;

  // Merge bins (from the top) until the pooled expectation per bin suffices.
  std::vector<std::pair<double, double>> bins;
  double acca = 0.0, accb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acca += at(a, i);
    accb += at(b, i);
    const double pooled = acca + accb;
    if (pooled * ta / total >= min_expected && pooled * tb / total >= min_expected) {
      bins.emplace_back(acca, accb);
      acca = accb = 0.0;
    }
  }
  if (acca + accb > 0.0) {
    if (!bins.empty()) {
      bins.back().first += acca;
      bins.back().second += accb;
    } else {
      bins.emplace_back(acca, accb);
    }
  }
  if (bins.size() < 2) return 1.0;  // nothing to distinguish

  double stat = 0.0;
  for (const auto& [ca, cb] : bins) {
    const double rowtot = ca + cb;
    const double ea = rowtot * ta / total;
    const double eb = rowtot * tb / total;
    stat += (ca - ea) * (ca - ea) / ea + (cb - eb) * (cb - eb) / eb;
  }
  return chi_squared_pvalue(stat, static_cast<int>(bins.size()) - 1);
}

double chi_squared_gof(const std::vector<std::uint64_t>& observed,
                       const std::vector<double>& probabilities, double total,
                       double min_expected) {
  if (observed.size() != probabilities.size())
    throw std::invalid_argument("chi_squared_gof: size mismatch");
  double psum = 0.0;
  for (double p : probabilities) psum += p;
  // Merge bins so each expected count is >= min_expected; the residual
  // probability mass forms a final overflow bin.
  std::vector<std::pair<double, double>> bins;  // (observed, expected)
  double obs_acc = 0.0, exp_acc = 0.0, obs_total = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    obs_acc += static_cast<double>(observed[i]);
    obs_total += static_cast<double>(observed[i]);
    exp_acc += probabilities[i] * total;
    if (exp_acc >= min_expected) {
      bins.emplace_back(obs_acc, exp_acc);
      obs_acc = exp_acc = 0.0;
    }
  }
  const double tail_expected = exp_acc + (1.0 - psum) * total;
  const double tail_observed = obs_acc + (total - obs_total);
  if (tail_expected >= min_expected || bins.empty()) {
    bins.emplace_back(tail_observed, tail_expected);
  } else {
    bins.back().first += tail_observed;
    bins.back().second += tail_expected;
  }
  if (bins.size() < 2) return 1.0;
  double stat = 0.0;
  for (const auto& [o, e] : bins) stat += (o - e) * (o - e) / e;
  return chi_squared_pvalue(stat, static_cast<int>(bins.size()) - 1);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_line: degenerate x values");
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    fit.residual_sse += r * r;
  }
  return fit;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double mean(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean: empty input");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
  if (v.size() < 2) throw std::invalid_argument("variance: need >= 2 values");
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("pearson: need matched samples");
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace driftgraph::stats
