#include "alsc/eval.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace alsc {

double accuracy(const ConfusionMatrix& cm) {
  int64_t total = cm.total();
  if (total == 0) throw std::invalid_argument("accuracy: empty confusion matrix");
  int64_t trace = 0;
  for (int c = 0; c < kNumClasses; ++c) trace += cm.counts[c][c];
  return static_cast<double>(trace) / static_cast<double>(total);
}

double macro_f1(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw std::invalid_argument("macro_f1: empty confusion matrix");
  double sum = 0.0;
  for (int c = 0; c < kNumClasses; ++c) {
    int64_t tp = cm.counts[c][c];
    int64_t col = 0, row = 0;
    for (int k = 0; k < kNumClasses; ++k) {
      col += cm.counts[k][c];
      row += cm.counts[c][k];
    }
    double precision = col > 0 ? static_cast<double>(tp) / col : 0.0;
    double recall = row > 0 ? static_cast<double>(tp) / row : 0.0;
    double f1 = (precision + recall) > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    sum += f1;
  }
  return sum / kNumClasses;
}

// Lentz continued fraction for the regularized incomplete beta, accurate to
// ~1e-14 for the arguments that occur here.
double regularized_incomplete_beta(double a, double b, double x) {
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("ibeta: x outside [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  if (x > (a + 1.0) / (a + b + 2.0)) return 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);

  double log_front = a * std::log(x) + b * std::log1p(-x) - std::log(a) +
                     std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  const double tiny = 1e-300;
  double c = 1.0, d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double cf = d;
  for (int m = 1; m <= 300; ++m) {
    double dm = static_cast<double>(m);
    // even step
    double num = dm * (b - dm) * x / ((a + 2.0 * dm - 1.0) * (a + 2.0 * dm));
    d = 1.0 + num * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    cf *= d * c;
    // odd step
    num = -(a + dm) * (a + b + dm) * x / ((a + 2.0 * dm) * (a + 2.0 * dm + 1.0));
    d = 1.0 + num * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    cf *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  return std::exp(log_front) * cf / a;
}

double student_t_cdf(double t, double df) {
  if (df <= 0.0) throw std::invalid_argument("student_t_cdf: df must be positive");
  double x = df / (df + t * t);
  double tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x);
  return t >= 0.0 ? 1.0 - tail : tail;
}

namespace {

double mean(const RunSet& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sum_sq_dev(const RunSet& v, double m) {
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s;
}

}  // namespace

double ttest_one_tailed(const RunSet& a, const RunSet& b) {
  if (a.size() < 2 || b.size() < 2)
    throw std::invalid_argument("ttest: each run set needs at least 2 values");
  double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  double ma = mean(a), mb = mean(b);
  double df = na + nb - 2.0;
  double pooled = (sum_sq_dev(a, ma) + sum_sq_dev(b, mb)) / df;
  if (pooled == 0.0) {
    if (ma == mb) return 0.5;
    return ma > mb ? 0.0 : 1.0;
  }
  double t = (ma - mb) / std::sqrt(pooled * (1.0 / na + 1.0 / nb));
  return 1.0 - student_t_cdf(t, df);
}

std::string attention_record_json(const AttentionRecord& rec) {
  nlohmann::json j;
  j["tokens"] = rec.tokens;
  j["target"] = {rec.target_begin, rec.target_end};
  std::vector<double> rounded;
  rounded.reserve(rec.alpha.size());
  for (double a : rec.alpha) rounded.push_back(std::round(a * 1e4) / 1e4);
  j["alpha"] = rounded;
  j["predicted"] = label_name(rec.predicted);
  j["gold"] = label_name(rec.gold);
  return j.dump();
}

}  // namespace alsc
