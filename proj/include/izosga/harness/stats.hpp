#pragma once

#include <span>
#include <vector>

namespace izosga::harness {

double mean(std::span<const double> xs);
/// Sample standard deviation (n - 1 denominator); 0 for n < 2.
double sample_stddev(std::span<const double> xs);
/// sample_stddev / sqrt(n); 0 for n < 2.
double standard_error(std::span<const double> xs);
/// sqrt(se_a^2 + se_b^2), the standard error of a difference of two means.
double pooled_standard_error(std::span<const double> a, std::span<const double> b);

/// One-sided sign test for "a > b" on paired samples. Ties are dropped.
struct SignTest {
  int positives = 0;
  int negatives = 0;
  double p_value = 1.0;  // P(X >= positives), X ~ Bin(positives + negatives, 1/2)
};
SignTest sign_test_greater(std::span<const double> a, std::span<const double> b);

/// One-sided paired t-test for mean(a - b) > 0.
struct PairedT {
  double mean_difference = 0.0;
  double t_statistic = 0.0;
  double p_value = 1.0;
};
PairedT paired_t_greater(std::span<const double> a, std::span<const double> b);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace izosga::harness
