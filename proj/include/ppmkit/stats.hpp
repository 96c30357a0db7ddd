#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ppmkit/classify.hpp"
#include "ppmkit/json.hpp"

namespace ppmkit {

class StatsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Five-number summary with Tukey hinges and 1.5 x IQR whiskers.
struct BoxplotSummary {
  std::size_t n = 0;
  double median = 0;
  double lower_hinge = 0;
  double upper_hinge = 0;
  double mean = 0;
  double whisker_low = 0;
  double whisker_high = 0;
  std::vector<double> outliers;
};

/// Hinges are the medians of the lower and upper halves of the sorted data;
/// for odd n the median belongs to both halves. Throws StatsError on empty input.
BoxplotSummary boxplot_summary(std::span<const double> values);

struct TTestResult {
  double t_value = 0;
  std::size_t df = 0;
  /// Two-tailed.
  double p_value = 1;
  std::size_t n1 = 0, n2 = 0;
  double mean1 = 0, mean2 = 0;
  double var1 = 0, var2 = 0;
};

/// Student's two-sample t-test with pooled variance, df = n1 + n2 - 2.
/// Throws StatsError when a group has fewer than two values or the pooled
/// variance is zero ("degenerate samples").
TTestResult t_test(std::span<const double> group_a, std::span<const double> group_b);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

/// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double t_two_tailed_p(double t, double df);

inline constexpr double kSignificanceLevel = 0.05;

struct MetricComparison {
  std::string conjecture;
  std::string metric;
  std::optional<BoxplotSummary> perspicuous;
  std::optional<BoxplotSummary> non_perspicuous;
  std::optional<TTestResult> test;
  /// Why no test could be run for this metric.
  std::optional<std::string> note;
  bool significant() const { return test && test->p_value < kSignificanceLevel; }
};

struct GroupComparison {
  std::size_t perspicuous_sessions = 0;
  std::size_t non_perspicuous_sessions = 0;
  std::size_t excluded_sessions = 0;
  std::vector<MetricComparison> rows;
};

struct CompareOptions {
  /// Drop sessions whose soundness check hit the state cap.
  bool exclude_unknown = false;
  /// Metric names to compare; empty = all six.
  std::vector<std::string> metrics;
};

/// Splits sessions by perspicuity and compares each metric; the t value is
/// perspicuous minus non-perspicuous. Values that are not applicable are
/// dropped per metric. Throws StatsError naming an empty group, or when a
/// group has fewer than two sessions.
GroupComparison compare_groups(std::span<const StoredReport> reports, const CompareOptions& options = {});

Json comparison_to_json(const GroupComparison& cmp);
/// Plain-text table: Conjecture, Metric, T-value, df, P-value (sig.).
std::string comparison_to_text(const GroupComparison& cmp);

}  // namespace ppmkit
