#pragma once

#include <functional>
#include <span>
#include <string>

#include "aml/nn/param.hpp"

namespace aml::nn {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  // Frobenius penalty coefficient; applied as the coupled gradient term
  // lambda * W rather than materialized in the loss.
  double weight_decay = 0.0;
};

// One bias-corrected Adam update on every trainable Param, then zeroes the
// gradients. Throws NumericError naming the offending tensor when a gradient
// is not finite; no Param is modified in that case.
void adam_step(std::span<Param* const> params, const AdamOptions& options);

// (lambda / 2) * sum ||W||_F^2 over trainable params, for logging.
double l2_penalty(std::span<Param* const> params, double lambda);

void zero_grads(std::span<Param* const> params);

struct GradCheckOptions {
  double step = 1e-5;
  std::size_t max_coordinates = 500;
  std::uint64_t seed = 0;
  // Denominator floor for the relative error: |a - n| / max(|a|, |n|, floor).
  double floor = 1e-6;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t coordinates = 0;
  std::string worst;  // "param[index]" of the worst coordinate
};

// Compares analytic gradients against central differences.
//
// loss(true) must evaluate the loss and run backward (accumulating into the
// params' grads); loss(false) only evaluates. The closure must be
// deterministic. Up to max_coordinates coordinates are sampled uniformly over
// all trainable entries; when there are fewer, all are checked.
GradCheckResult grad_check(const std::function<double(bool)>& loss,
                           std::span<Param* const> params, const GradCheckOptions& options = {});

}  // namespace aml::nn
