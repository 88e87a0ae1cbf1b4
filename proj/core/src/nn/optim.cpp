#include "aml/nn/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "aml/core/error.hpp"
#include "aml/core/random.hpp"

namespace aml::nn {

void adam_step(std::span<Param* const> params, const AdamOptions& o) {
  for (const Param* p : params) {
    if (!p->trainable) continue;
    for (std::size_t i = 0; i < p->grad.size(); ++i) {
      if (!std::isfinite(p->grad.data()[i])) {
        throw NumericError("adam_step: non-finite gradient " +
                           std::to_string(p->grad.data()[i]) + " in '" + p->name + "' at index " +
                           std::to_string(i));
      }
    }
  }
  for (Param* p : params) {
    if (!p->trainable) continue;
    ++p->step_count;
    const double t = static_cast<double>(p->step_count);
    const double c1 = 1.0 - std::pow(o.beta1, t);
    const double c2 = 1.0 - std::pow(o.beta2, t);
    auto& w = p->value.data();
    auto& g = p->grad.data();
    auto& m = p->adam_m.data();
    auto& v = p->adam_v.data();
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double gi = g[i] + o.weight_decay * w[i];
      m[i] = o.beta1 * m[i] + (1.0 - o.beta1) * gi;
      v[i] = o.beta2 * v[i] + (1.0 - o.beta2) * gi * gi;
      const double mhat = m[i] / c1;
      const double vhat = v[i] / c2;
      w[i] -= o.lr * mhat / (std::sqrt(vhat) + o.eps);
    }
    p->zero_grad();
  }
}

double l2_penalty(std::span<Param* const> params, double lambda) {
  double s = 0.0;
  for (const Param* p : params)
    if (p->trainable) s += frobenius_sq(p->value);
  return 0.5 * lambda * s;
}

void zero_grads(std::span<Param* const> params) {
  for (Param* p : params) p->zero_grad();
}

GradCheckResult grad_check(const std::function<double(bool)>& loss,
                           std::span<Param* const> params, const GradCheckOptions& o) {
  zero_grads(params);
  loss(true);

  struct Coord {
    Param* param;
    std::size_t index;
  };
  std::vector<Coord> all;
  for (Param* p : params) {
    if (!p->trainable) continue;
    for (std::size_t i = 0; i < p->value.size(); ++i) all.push_back({p, i});
  }
  if (all.size() > o.max_coordinates) {
    Rng rng = stream_rng(o.seed, "grad_check");
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(o.max_coordinates);
  }

  GradCheckResult result;
  for (const Coord& c : all) {
    double& w = c.param->value.data()[c.index];
    const double saved = w;
    w = saved + o.step;
    const double up = loss(false);
    w = saved - o.step;
    const double down = loss(false);
    w = saved;
    const double numeric = (up - down) / (2.0 * o.step);
    const double analytic = c.param->grad.data()[c.index];
    const double denom = std::max({std::abs(analytic), std::abs(numeric), o.floor});
    const double err = std::abs(analytic - numeric) / denom;
    if (result.worst.empty() || err > result.max_rel_error) {
      result.max_rel_error = err;
      result.worst = c.param->name + "[" + std::to_string(c.index) + "]";
    }
    ++result.coordinates;
  }
  zero_grads(params);
  return result;
}

}  // namespace aml::nn
