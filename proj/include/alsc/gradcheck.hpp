#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "alsc/tape.hpp"

namespace alsc {

struct GradCheckReport {
  double max_rel_err = 0.0;
  std::string worst_param;
  size_t worst_index = 0;
  double analytic_at_worst = 0.0;
  double numeric_at_worst = 0.0;
};

// Central-difference gradient check, always in 64-bit. f builds a scalar loss
// from the given parameters; with a null tape it must run as a pure forward
// pass. f must be deterministic across calls (recreate any RNG inside).
// Error metric per entry: |analytic - numeric| / max(1, |analytic|, |numeric|).
template <typename F>
GradCheckReport grad_check(F&& f, const std::vector<std::pair<std::string, TensorPtr<double>>>& params,
                           double eps) {
  if (eps < 1e-6 || eps > 1e-4)
    throw std::invalid_argument("grad_check: eps must be in [1e-6, 1e-4], got " + std::to_string(eps));

  for (auto& [name, p] : params) p->zero_grad();
  Tape<double> tape;
  TensorPtr<double> loss = f(&tape);
  if (!loss->is_scalar()) throw std::invalid_argument("grad_check: f must produce a scalar loss");
  tape.backward(loss);

  GradCheckReport rep;
  for (auto& [name, p] : params) {
    for (size_t i = 0; i < p->data.size(); ++i) {
      double saved = p->data[i];
      p->data[i] = saved + eps;
      double up = f(nullptr)->data[0];
      p->data[i] = saved - eps;
      double down = f(nullptr)->data[0];
      p->data[i] = saved;
      double numeric = (up - down) / (2.0 * eps);
      double analytic = p->grad_at(i);
      if (!std::isfinite(numeric) || !std::isfinite(analytic)) {
        throw std::runtime_error("grad_check: non-finite value at " + name + "[" + std::to_string(i) + "]");
      }
      double err = std::abs(analytic - numeric) / std::max({1.0, std::abs(analytic), std::abs(numeric)});
      if (err >= rep.max_rel_err) {
        rep.max_rel_err = err;
        rep.worst_param = name;
        rep.worst_index = i;
        rep.analytic_at_worst = analytic;
        rep.numeric_at_worst = numeric;
      }
    }
  }
  return rep;
}

}  // namespace alsc
