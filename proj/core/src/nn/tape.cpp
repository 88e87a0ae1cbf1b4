#include "aml/nn/tape.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aml/core/error.hpp"

namespace aml::nn {

using cost::CostEvent;

namespace {

std::string shape_str(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(op) + ": shapes " + shape_str(a) + " and " + shape_str(b) +
                     " differ");
  }
}

}  // namespace

Var Tape::push(Matrix value, std::function<void(Tape&, std::size_t)> back) {
  Node n;
  n.value = std::move(value);
  if (record_) n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return Var{nodes_.size() - 1};
}

Matrix& Tape::grad_ref(std::size_t id) {
  Node& n = nodes_[id];
  if (n.grad.empty() && !n.value.empty()) n.grad = Matrix(n.value.rows(), n.value.cols());
  return n.grad;
}

void Tape::accumulate(std::size_t id, const Matrix& g) { add_inplace(grad_ref(id), g); }

Matrix Tape::grad(Var v) const {
  const Node& n = nodes_.at(v.id);
  if (n.grad.empty()) return Matrix(n.value.rows(), n.value.cols());
  return n.grad;
}

Var Tape::constant(Matrix value) { return push(std::move(value)); }

Var Tape::param(Param& p) {
  if (auto it = param_vars_.find(&p); it != param_vars_.end()) return Var{it->second};
  Var v = push(p.value);
  nodes_[v.id].param = &p;
  param_vars_.emplace(&p, v.id);
  return v;
}

Var Tape::matmul(Var a, Var b) {
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  if (av.cols() != bv.rows()) {
    throw ShapeError("matmul: " + shape_str(av) + " times " + shape_str(bv));
  }
  cost::record(meter_, CostEvent::Dense,
               static_cast<std::int64_t>(2 * av.rows() * av.cols() * bv.cols()));
  return push(aml::matmul(av, bv), [a, b](Tape& t, std::size_t self) {
    const Matrix& g = t.nodes_[self].grad;
    // dA = dOut * B^T, dB = A^T * dOut
    t.accumulate(a.id, matmul_nt(g, t.nodes_[b.id].value));
    t.accumulate(b.id, matmul_tn(t.nodes_[a.id].value, g));
  });
}

Var Tape::add(Var a, Var b) {
  require_same_shape(value(a), value(b), "add");
  return push(value(a) + value(b), [a, b](Tape& t, std::size_t self) {
    const Matrix g = t.nodes_[self].grad;
    t.accumulate(a.id, g);
    t.accumulate(b.id, g);
  });
}

Var Tape::hadamard(Var a, Var b) {
  require_same_shape(value(a), value(b), "hadamard");
  return push(aml::hadamard(value(a), value(b)), [a, b](Tape& t, std::size_t self) {
    const Matrix& g = t.nodes_[self].grad;
    t.accumulate(a.id, aml::hadamard(g, t.nodes_[b.id].value));
    t.accumulate(b.id, aml::hadamard(g, t.nodes_[a.id].value));
  });
}

Var Tape::scale(Var a, double s) {
  return push(scaled(value(a), s), [a, s](Tape& t, std::size_t self) {
    t.accumulate(a.id, scaled(t.nodes_[self].grad, s));
  });
}

Var Tape::relu(Var a) {
  Matrix out = value(a);
  for (double& x : out.data()) x = x > 0.0 ? x : 0.0;
  return push(std::move(out), [a](Tape& t, std::size_t self) {
    Matrix g = t.nodes_[self].grad;
    const Matrix& in = t.nodes_[a.id].value;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (!(in.data()[i] > 0.0)) g.data()[i] = 0.0;
    t.accumulate(a.id, g);
  });
}

Var Tape::activate(Var a, Activation f) { return f == Activation::Relu ? relu(a) : a; }

Var Tape::gather_rows(Var a, std::vector<std::int32_t> rows) {
  Matrix out = aml::gather_rows(value(a), rows);
  return push(std::move(out), [a, rows = std::move(rows)](Tape& t, std::size_t self) {
    const Matrix& g = t.nodes_[self].grad;
    Matrix& dst = t.grad_ref(a.id);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      auto drow = dst.row(static_cast<std::size_t>(rows[r]));
      const auto grow = g.row(r);
      for (std::size_t c = 0; c < g.cols(); ++c) drow[c] += grow[c];
    }
  });
}

Var Tape::aggregate(Var src, SparseRows op) {
  const Matrix& sv = value(src);
  if (op.num_cols != sv.rows() || op.offsets.size() != op.num_rows + 1 ||
      op.cols.size() != op.weights.size()) {
    throw ShapeError("aggregate: operator " + std::to_string(op.num_rows) + "x" +
                     std::to_string(op.num_cols) + " does not fit source " + shape_str(sv));
  }
  const std::size_t r = sv.cols();
  cost::record(meter_, CostEvent::Spmm, static_cast<std::int64_t>(2 * op.nnz() * r));
  Matrix out(op.num_rows, r);
  for (std::size_t i = 0; i < op.num_rows; ++i) {
    auto orow = out.row(i);
    for (auto k = op.offsets[i]; k < op.offsets[i + 1]; ++k) {
      const auto srow = sv.row(static_cast<std::size_t>(op.cols[k]));
      const double w = op.weights[k];
      for (std::size_t c = 0; c < r; ++c) orow[c] += w * srow[c];
    }
  }
  return push(std::move(out), [src, op = std::move(op)](Tape& t, std::size_t self) {
    const Matrix& g = t.nodes_[self].grad;
    Matrix& dst = t.grad_ref(src.id);
    for (std::size_t i = 0; i < op.num_rows; ++i) {
      const auto grow = g.row(i);
      for (auto k = op.offsets[i]; k < op.offsets[i + 1]; ++k) {
        auto drow = dst.row(static_cast<std::size_t>(op.cols[k]));
        const double w = op.weights[k];
        for (std::size_t c = 0; c < g.cols(); ++c) drow[c] += w * grow[c];
      }
    }
  });
}

Var Tape::add_row_bias(Var a, Var bias) {
  const Matrix& av = value(a);
  const Matrix& bv = value(bias);
  if (bv.rows() != 1 || bv.cols() != av.cols()) {
    throw ShapeError("add_row_bias: bias " + shape_str(bv) + " for input " + shape_str(av));
  }
  Matrix out = av;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto row = out.row(i);
    for (std::size_t c = 0; c < out.cols(); ++c) row[c] += bv(0, c);
  }
  return push(std::move(out), [a, bias](Tape& t, std::size_t self) {
    const Matrix g = t.nodes_[self].grad;
    Matrix db(1, g.cols());
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t c = 0; c < g.cols(); ++c) db(0, c) += g(i, c);
    t.accumulate(a.id, g);
    t.accumulate(bias.id, db);
  });
}

Var Tape::row_sum(Var a) {
  const Matrix& av = value(a);
  Matrix out(av.rows(), 1);
  for (std::size_t i = 0; i < av.rows(); ++i) {
    double s = 0.0;
    for (double x : av.row(i)) s += x;
    out(i, 0) = s;
  }
  return push(std::move(out), [a](Tape& t, std::size_t self) {
    const Matrix& g = t.nodes_[self].grad;
    Matrix& dst = t.grad_ref(a.id);
    for (std::size_t i = 0; i < dst.rows(); ++i)
      for (std::size_t c = 0; c < dst.cols(); ++c) dst(i, c) += g(i, 0);
  });
}

Var Tape::branch_norm(Var a, BranchNorm& norm, bool training) {
  // Leaves first: pushing nodes invalidates references into nodes_.
  Var gamma = param(norm.gamma);
  Var beta = param(norm.beta);
  const Matrix& x = value(a);
  const std::size_t n = x.rows();
  const std::size_t r = x.cols();
  if (r != norm.width()) {
    throw ShapeError("branch_norm: input " + shape_str(x) + " for norm width " +
                     std::to_string(norm.width()));
  }
  const Matrix& gv = value(gamma);
  const Matrix& bv = value(beta);

  Matrix mean(1, r), inv_std(1, r);
  if (training) {
    if (n < 2) {
      throw ConfigError("branch_norm: training mode needs at least 2 rows, got " +
                        std::to_string(n) + "; increase the batch size");
    }
    Matrix var(1, r);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < r; ++c) mean(0, c) += x(i, c);
    for (std::size_t c = 0; c < r; ++c) mean(0, c) /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < r; ++c) {
        const double d = x(i, c) - mean(0, c);
        var(0, c) += d * d;
      }
    const double m = norm.momentum;
    for (std::size_t c = 0; c < r; ++c) {
      var(0, c) /= static_cast<double>(n);
      inv_std(0, c) = 1.0 / std::sqrt(var(0, c) + norm.eps);
      const double unbiased = var(0, c) * static_cast<double>(n) / static_cast<double>(n - 1);
      norm.running_mean.value(0, c) = (1 - m) * norm.running_mean.value(0, c) + m * mean(0, c);
      norm.running_var.value(0, c) = (1 - m) * norm.running_var.value(0, c) + m * unbiased;
    }
  } else {
    for (std::size_t c = 0; c < r; ++c) {
      mean(0, c) = norm.running_mean.value(0, c);
      inv_std(0, c) = 1.0 / std::sqrt(norm.running_var.value(0, c) + norm.eps);
    }
  }

  Matrix xhat(n, r), out(n, r);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < r; ++c) {
      xhat(i, c) = (x(i, c) - mean(0, c)) * inv_std(0, c);
      out(i, c) = gv(0, c) * xhat(i, c) + bv(0, c);
    }

  return push(std::move(out), [a, gamma, beta, training, xhat = std::move(xhat),
                               inv_std = std::move(inv_std)](Tape& t, std::size_t self) {
    const Matrix& g = t.nodes_[self].grad;
    const Matrix& gv = t.nodes_[gamma.id].value;
    const std::size_t n = g.rows(), r = g.cols();
    Matrix dgamma(1, r), dbeta(1, r);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < r; ++c) {
        dgamma(0, c) += g(i, c) * xhat(i, c);
        dbeta(0, c) += g(i, c);
      }
    Matrix dx(n, r);
    const double nn = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < r; ++c) {
        const double k = gv(0, c) * inv_std(0, c);
        dx(i, c) = training ? k * (g(i, c) - dbeta(0, c) / nn - xhat(i, c) * dgamma(0, c) / nn)
                            : k * g(i, c);
      }
    t.accumulate(a.id, dx);
    t.accumulate(gamma.id, dgamma);
    t.accumulate(beta.id, dbeta);
  });
}

Var Tape::bce_with_logits(Var logits, std::vector<double> labels) {
  const Matrix& s = value(logits);
  if (s.cols() != 1 || s.rows() != labels.size()) {
    throw ShapeError("bce_with_logits: logits " + shape_str(s) + " for " +
                     std::to_string(labels.size()) + " labels");
  }
  if (labels.empty()) throw ShapeError("bce_with_logits: empty batch");
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double x = s(i, 0);
    total += std::max(x, 0.0) - labels[i] * x + std::log1p(std::exp(-std::abs(x)));
  }
  const double n = static_cast<double>(labels.size());
  return push(Matrix(1, 1, total / n), [logits, labels = std::move(labels)](Tape& t,
                                                                           std::size_t self) {
    const double g = t.nodes_[self].grad(0, 0);
    const Matrix& s = t.nodes_[logits.id].value;
    const double n = static_cast<double>(labels.size());
    Matrix d(s.rows(), 1);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const double x = s(i, 0);
      const double sig = x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
      d(i, 0) = g * (sig - labels[i]) / n;
    }
    t.accumulate(logits.id, d);
  });
}

void Tape::backward(Var root) {
  if (!record_) throw std::logic_error("backward on a tape that does not record gradients");
  const Matrix& rv = value(root);
  if (rv.rows() != 1 || rv.cols() != 1) {
    throw ShapeError("backward: root must be 1x1, got " + shape_str(rv));
  }
  for (Node& n : nodes_) n.grad = Matrix();
  grad_ref(root.id)(0, 0) = 1.0;
  for (std::size_t id = root.id + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (n.grad.empty()) continue;
    if (n.back) n.back(*this, id);
    if (n.param != nullptr && n.param->trainable) {
      if (n.param->grad.empty()) n.param->grad = Matrix(n.value.rows(), n.value.cols());
      add_inplace(n.param->grad, nodes_[id].grad);
    }
  }
}

}  // namespace aml::nn
