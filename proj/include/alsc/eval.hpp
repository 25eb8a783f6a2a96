#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "alsc/classes.hpp"

namespace alsc {

// 3x3 counts, rows = gold, cols = predicted.
struct ConfusionMatrix {
  std::array<std::array<int64_t, kNumClasses>, kNumClasses> counts{};

  void add(int gold, int pred) {
    if (gold < 0 || gold >= kNumClasses || pred < 0 || pred >= kNumClasses)
      throw std::invalid_argument("confusion matrix: label out of range");
    ++counts[gold][pred];
  }
  int64_t total() const {
    int64_t t = 0;
    for (auto& row : counts)
      for (auto v : row) t += v;
    return t;
  }
};

double accuracy(const ConfusionMatrix& cm);

// Unweighted mean of per-class F1. A class with zero column or row sum
// contributes F1 = 0 rather than being skipped.
double macro_f1(const ConfusionMatrix& cm);

// Per-seed metric values for one method.
using RunSet = std::vector<double>;

// One-tailed p-value for mean(a) > mean(b), Student's unpaired
// equal-variance t-test with n_a + n_b - 2 degrees of freedom.
double ttest_one_tailed(const RunSet& a, const RunSet& b);

// CDF of Student's t distribution, via the regularized incomplete beta.
double student_t_cdf(double t, double df);
double regularized_incomplete_beta(double a, double b, double x);

struct AttentionRecord {
  std::vector<std::string> tokens;
  int target_begin = 0;
  int target_end = 0;
  std::vector<double> alpha;  // rounded to 4 decimals
  int predicted = 0;
  int gold = 0;
};

// JSON-lines serialization of attention records (one object per line).
std::string attention_record_json(const AttentionRecord& rec);

}  // namespace alsc
