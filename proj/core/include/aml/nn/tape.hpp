#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "aml/core/matrix.hpp"
#include "aml/cost/cost_meter.hpp"
#include "aml/nn/branch_norm.hpp"
#include "aml/nn/param.hpp"

namespace aml::nn {

enum class Activation { Relu, Identity };

// Handle to a value recorded on a Tape.
struct Var {
  std::size_t id = static_cast<std::size_t>(-1);
  bool valid() const { return id != static_cast<std::size_t>(-1); }
};

// Row-sparse operator mapping a source block of `num_cols` rows onto
// `num_rows` output rows: out[i] = sum_k weights[k] * src[cols[k]] over k in
// [offsets[i], offsets[i+1]).
struct SparseRows {
  std::size_t num_rows = 0;
  std::size_t num_cols = 0;
  std::vector<std::int64_t> offsets{0};
  std::vector<std::int32_t> cols;
  std::vector<double> weights;

  std::size_t nnz() const { return cols.size(); }
};

// Matrix-granular reverse-mode recorder.
//
// Each op stores its output and a closure that, given the output gradient,
// accumulates into its inputs' gradients. backward() walks the record in
// reverse and finally adds leaf gradients into the bound Param::grad.
// A tape built with record_gradients=false only evaluates.
class Tape {
 public:
  explicit Tape(bool record_gradients = true, cost::CostMeter* meter = nullptr)
      : record_(record_gradients), meter_(meter) {}

  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Matrix value);
  // Leaf bound to a parameter; the same Param always maps to the same Var.
  Var param(Param& p);

  const Matrix& value(Var v) const { return nodes_.at(v.id).value; }
  // Gradient after backward(); zero matrix if nothing flowed into v.
  Matrix grad(Var v) const;
  std::size_t size() const { return nodes_.size(); }
  bool recording() const { return record_; }

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var hadamard(Var a, Var b);
  Var scale(Var a, double s);
  Var relu(Var a);
  Var activate(Var a, Activation f);
  Var gather_rows(Var a, std::vector<std::int32_t> rows);
  Var aggregate(Var src, SparseRows op);
  // a (B x r) + bias (1 x r) broadcast over rows.
  Var add_row_bias(Var a, Var bias);
  // B x r -> B x 1.
  Var row_sum(Var a);
  // Training mode normalizes with batch statistics (needs >= 2 rows) and
  // updates the running statistics; inference uses the running statistics.
  Var branch_norm(Var a, BranchNorm& norm, bool training);
  // Mean of log(1 + e^s) - y s over a B x 1 logit column; returns 1 x 1.
  Var bce_with_logits(Var logits, std::vector<double> labels);

  // root must be 1 x 1. Gradients accumulate: calling backward on two
  // different roots of the same tape sums their contributions into Params.
  void backward(Var root);

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    std::function<void(Tape&, std::size_t)> back;
    Param* param = nullptr;
  };

  Var push(Matrix value, std::function<void(Tape&, std::size_t)> back = {});
  Matrix& grad_ref(std::size_t id);
  void accumulate(std::size_t id, const Matrix& g);

  bool record_;
  cost::CostMeter* meter_;
  std::vector<Node> nodes_;
  std::unordered_map<const Param*, std::size_t> param_vars_;
};

}  // namespace aml::nn
