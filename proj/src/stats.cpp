#include "ppmkit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "ppmkit/metrics.hpp"

namespace ppmkit {

namespace {

double median_of_sorted(std::span<const double> v) {
  const auto n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

double mean_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double sample_variance(std::span<const double> v, double mean) {
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

// Continued fraction for I_x(a,b) by the modified Lentz method.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 10'000;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1, qam = a - 1;
  double c = 1, d = 1 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1) < kEps) return h;
  }
  throw StatsError("incomplete beta continued fraction did not converge");
}

constexpr std::pair<std::string_view, std::string_view> kConjectures[] = {
    {"MaxSimulBlock", "C1"},          {"PercNumBlockAsAWhole", "C1"}, {"AvgMoveOnMovedElements", "C2"},
    {"PercNumElementsWithMoves", "C2"}, {"TotTime", "C3"},            {"TotCreateTime", "C3"},
};

std::string_view conjecture_of(std::string_view metric) {
  for (const auto& [m, c] : kConjectures) {
    if (m == metric) return c;
  }
  throw StatsError(fmt::format("unknown metric {}", metric));
}

Json boxplot_to_json(const std::optional<BoxplotSummary>& b) {
  if (!b) return nullptr;
  return Json{{"n", b->n},
              {"median", b->median},
              {"lower_hinge", b->lower_hinge},
              {"upper_hinge", b->upper_hinge},
              {"mean", b->mean},
              {"whisker_low", b->whisker_low},
              {"whisker_high", b->whisker_high},
              {"outliers", b->outliers}};
}

}  // namespace

BoxplotSummary boxplot_summary(std::span<const double> values) {
  if (values.empty()) throw StatsError("boxplot of an empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  const std::span<const double> all(v);
  const std::size_t half = (n + 1) / 2;

  BoxplotSummary b;
  b.n = n;
  b.median = median_of_sorted(all);
  b.lower_hinge = median_of_sorted(all.first(half));
  b.upper_hinge = median_of_sorted(all.last(half));
  b.mean = mean_of(all);
  const double iqr = b.upper_hinge - b.lower_hinge;
  const double low_fence = b.lower_hinge - 1.5 * iqr;
  const double high_fence = b.upper_hinge + 1.5 * iqr;
  b.whisker_low = *std::find_if(v.begin(), v.end(), [&](double x) { return x >= low_fence; });
  b.whisker_high = *std::find_if(v.rbegin(), v.rend(), [&](double x) { return x <= high_fence; });
  for (double x : v) {
    if (x < low_fence || x > high_fence) b.outliers.push_back(x);
  }
  return b;
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (a <= 0 || b <= 0) throw StatsError("incomplete beta needs positive shape parameters");
  if (x < 0 || x > 1) throw StatsError("incomplete beta argument outside [0, 1]");
  if (x == 0 || x == 1) return x;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1) / (a + b + 2)) return front * beta_continued_fraction(a, b, x) / a;
  return 1 - front * beta_continued_fraction(b, a, 1 - x) / b;
}

double t_two_tailed_p(double t, double df) {
  if (df <= 0) throw StatsError("degrees of freedom must be positive");
  if (!std::isfinite(t)) return 0;
  return regularized_incomplete_beta(df / 2, 0.5, df / (df + t * t));
}

TTestResult t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw StatsError("t-test needs at least two values per group");
  TTestResult r;
  r.n1 = a.size();
  r.n2 = b.size();
  r.mean1 = mean_of(a);
  r.mean2 = mean_of(b);
  r.var1 = sample_variance(a, r.mean1);
  r.var2 = sample_variance(b, r.mean2);
  r.df = r.n1 + r.n2 - 2;
  const double n1 = static_cast<double>(r.n1), n2 = static_cast<double>(r.n2);
  const double pooled = ((n1 - 1) * r.var1 + (n2 - 1) * r.var2) / static_cast<double>(r.df);
  if (!(pooled > 0)) throw StatsError("degenerate samples");
  const double se = std::sqrt(pooled * (n1 + n2) / (n1 * n2));
  r.t_value = (r.mean1 - r.mean2) / se;
  r.p_value = t_two_tailed_p(r.t_value, static_cast<double>(r.df));
  return r;
}

GroupComparison compare_groups(std::span<const StoredReport> reports, const CompareOptions& options) {
  std::vector<const StoredReport*> yes, no;
  GroupComparison cmp;
  for (const auto& r : reports) {
    if (options.exclude_unknown && r.stage == Stage::StateSpaceExceeded) {
      ++cmp.excluded_sessions;
      continue;
    }
    (r.perspicuous ? yes : no).push_back(&r);
  }
  if (yes.empty()) throw StatsError("group perspicuous empty");
  if (no.empty()) throw StatsError("group non-perspicuous empty");
  if (yes.size() < 2) throw StatsError("group perspicuous has fewer than 2 sessions");
  if (no.size() < 2) throw StatsError("group non-perspicuous has fewer than 2 sessions");
  cmp.perspicuous_sessions = yes.size();
  cmp.non_perspicuous_sessions = no.size();

  std::vector<std::string> metrics = options.metrics;
  if (metrics.empty()) metrics.assign(std::begin(kMetricNames), std::end(kMetricNames));

  auto collect = [](const std::vector<const StoredReport*>& group, const std::string& metric) {
    std::vector<double> values;
    for (const auto* r : group) {
      for (const auto& [name, value] : r->metrics) {
        if (name == metric && value) values.push_back(*value);
      }
    }
    return values;
  };

  for (const auto& metric : metrics) {
    MetricComparison row;
    row.conjecture = std::string(conjecture_of(metric));
    row.metric = metric;
    const auto a = collect(yes, metric);
    const auto b = collect(no, metric);
    if (!a.empty()) row.perspicuous = boxplot_summary(a);
    if (!b.empty()) row.non_perspicuous = boxplot_summary(b);
    try {
      row.test = t_test(a, b);
    } catch (const StatsError& e) {
      row.note = e.what();
    }
    cmp.rows.push_back(std::move(row));
  }
  return cmp;
}

Json comparison_to_json(const GroupComparison& cmp) {
  Json rows = Json::array();
  for (const auto& r : cmp.rows) {
    Json jr;
    jr["conjecture"] = r.conjecture;
    jr["metric"] = r.metric;
    if (r.test) {
      jr["t_value"] = r.test->t_value;
      jr["df"] = r.test->df;
      jr["p_value"] = r.test->p_value;
      jr["significant"] = r.significant();
      jr["group_sizes"] = {r.test->n1, r.test->n2};
      jr["means"] = {r.test->mean1, r.test->mean2};
      jr["variances"] = {r.test->var1, r.test->var2};
    } else {
      jr["t_value"] = nullptr;
      jr["note"] = r.note.value_or("");
    }
    jr["boxplot_perspicuous"] = boxplot_to_json(r.perspicuous);
    jr["boxplot_non_perspicuous"] = boxplot_to_json(r.non_perspicuous);
    rows.push_back(std::move(jr));
  }
  return Json{{"groups",
               {{"perspicuous", cmp.perspicuous_sessions},
                {"non_perspicuous", cmp.non_perspicuous_sessions},
                {"excluded", cmp.excluded_sessions}}},
              {"rows", std::move(rows)}};
}

std::string comparison_to_text(const GroupComparison& cmp) {
  std::string out = fmt::format("{:<11} {:<26} {:>8} {:>4} {:>15}\n", "Conjecture", "Metric", "T-value", "df",
                                "P-value (sig.)");
  std::string last;
  for (const auto& r : cmp.rows) {
    const std::string conj = r.conjecture == last ? "" : r.conjecture;
    last = r.conjecture;
    if (!r.test) {
      out += fmt::format("{:<11} {:<26} {:>8} {:>4} {:>15}  ({})\n", conj, r.metric, "-", "-", "-", r.note.value_or(""));
      continue;
    }
    const auto p = fmt::format("{:.3f}{}", r.test->p_value, r.significant() ? "*" : " ");
    out += fmt::format("{:<11} {:<26} {:>8.3f} {:>4} {:>15}\n", conj, r.metric, r.test->t_value, r.test->df, p);
  }
  out += fmt::format("(*) statistically significant at the 95% confidence level; groups: {} perspicuous, {} not\n",
                     cmp.perspicuous_sessions, cmp.non_perspicuous_sessions);
  return out;
}

}  // namespace ppmkit
