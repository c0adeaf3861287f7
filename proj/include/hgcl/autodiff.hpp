#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "hgcl/errors.hpp"
#include "hgcl/matrix.hpp"

namespace hgcl::ad {

class Tape;

/// Handle to a tensor recorded on a tape. Cheap to copy; valid as long as
/// the tape lives and has not been cleared.
struct Var {
  Tape* tape = nullptr;
  std::size_t id = 0;

  const Matrix& value() const;
  const Matrix& grad() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  double scalar() const;
};

enum class Activation { Elu, LeakyRelu, Tanh, Sigmoid };

Activation activation_from_name(std::string_view name);
std::string_view activation_name(Activation a);

/// Contiguous segments over a flat array: segment s covers
/// [offsets[s], offsets[s+1]). Segments must be nonempty.
struct Segments {
  std::vector<std::size_t> offsets;
  std::size_t count() const { return offsets.empty() ? 0 : offsets.size() - 1; }
};

/// Row groups for grouped row means. A group may not be empty.
using RowGroups = std::vector<std::vector<std::uint32_t>>;

/// Reverse-mode tape over dense matrices. Every op records the backward
/// closure needed to pull gradients to its parents; backward() walks the
/// tape in reverse creation order. Leaf nodes created with param() are the
/// differentiation targets; constant() leaves take part in the forward pass
/// but still receive gradients (which callers may ignore).
///
/// Each op checks its output for NaN/Inf when finite checks are enabled
/// (the default) and reports the op that produced the first bad value.
class Tape {
 public:
  explicit Tape(bool check_finite = true) : check_finite_(check_finite) {}

  Var param(Matrix value) { return make_leaf(std::move(value), "param"); }
  Var constant(Matrix value) { return make_leaf(std::move(value), "constant"); }

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  /// a (m x n) plus row (1 x n) broadcast over every row of a.
  Var add_row(Var a, Var row);
  Var scale(Var a, double c);
  /// Per-row concatenation: (m x a, m x b) -> m x (a+b).
  Var hcat(Var a, Var b);
  /// Vertical stacking: parts share a column count.
  Var vcat(const std::vector<Var>& parts);
  Var activation(Var a, Activation kind, double leaky_slope = 0.2);
  Var elu(Var a) { return activation(a, Activation::Elu); }
  Var leaky_relu(Var a, double slope = 0.2) { return activation(a, Activation::LeakyRelu, slope); }
  Var tanh(Var a) { return activation(a, Activation::Tanh); }
  Var sigmoid(Var a) { return activation(a, Activation::Sigmoid); }
  /// Rows scaled to unit L2 norm. A zero-norm row is an error.
  Var l2_normalize_rows(Var a);
  Var exp(Var a);
  Var log(Var a);
  Var transpose(Var a);
  /// Column means over all rows: m x n -> 1 x n.
  Var mean_rows(Var a);
  /// Group g of the output is the mean of a's rows listed in groups[g]:
  /// m x n -> |groups| x n. Empty groups are an error.
  Var masked_mean_rows(Var a, RowGroups groups);
  Var gather_rows(Var a, std::vector<std::uint32_t> idx);
  /// Per-row dot product of equal-shape matrices: m x n -> m x 1.
  Var row_dot(Var a, Var b);
  /// Softmax normalized independently within each segment of a column
  /// vector of logits. Empty segments are an error.
  Var segment_softmax(Var logits, Segments segs);
  /// out[target[s], :] = sum over e in segment s of w[e] * rows[e, :].
  /// Output rows not covered by any segment stay zero.
  Var weighted_segment_sum(Var w, Var rows, Segments segs,
                           std::vector<std::uint32_t> target, std::size_t out_rows);
  /// Per-row sum of entries selected by a fixed 0/1 mask: m x n -> m x 1.
  Var masked_row_sum(Var a, Matrix mask);
  /// sum_g weights[g] * parts[g]; weights is a |parts| x 1 tensor.
  Var weighted_sum(const std::vector<Var>& parts, Var weights);

  /// Accumulates d(output)/d(node) into every node's gradient. The output
  /// must be a 1x1 scalar. Repeated calls without zero_grad() accumulate.
  void backward(Var output);
  void zero_grad();

  std::size_t size() const { return nodes_.size(); }
  const Matrix& value_of(std::size_t id) const { return nodes_[id].value; }
  const Matrix& grad_of(std::size_t id) const { return nodes_[id].grad; }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    const char* op;
    std::function<void(Tape&, const Node&)> backward;
  };

  Var make_leaf(Matrix value, const char* op);
  Var push(Matrix value, const char* op, std::function<void(Tape&, const Node&)> bw);
  Matrix& grad_mut(std::size_t id) { return nodes_[id].grad; }

  std::vector<Node> nodes_;
  bool check_finite_;

  friend struct Var;
};

/// Bias-corrected Adam. Holds one moment pair per registered parameter;
/// shapes are fixed at construction.
class AdamState {
 public:
  AdamState(const std::vector<Matrix>& params, double lr,
            double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

  /// In-place update of params from grads. Shapes must match construction.
  void step(std::vector<Matrix>& params, const std::vector<const Matrix*>& grads);

  std::uint64_t step_count() const { return step_count_; }
  double learning_rate() const { return lr_; }

 private:
  std::vector<Matrix> m_, v_;
  std::uint64_t step_count_ = 0;
  double lr_, beta1_, beta2_, eps_;
};

/// Named parameter collection shared by the encoders and the optimizer.
/// Registration order is fixed and defines the optimizer slot order.
class ParamStore {
 public:
  std::size_t add(std::string name, Matrix init) {
    names_.push_back(std::move(name));
    values_.push_back(std::move(init));
    return values_.size() - 1;
  }
  std::size_t size() const { return values_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  Matrix& value(std::size_t i) { return values_[i]; }
  const Matrix& value(std::size_t i) const { return values_[i]; }
  std::vector<Matrix>& values() { return values_; }
  const std::vector<Matrix>& values() const { return values_; }

  /// Registers every parameter on the tape, in slot order.
  std::vector<Var> to_tape(Tape& tape) const {
    std::vector<Var> vars;
    vars.reserve(values_.size());
    for (const auto& v : values_) vars.push_back(tape.param(v));
    return vars;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Matrix> values_;
};

}  // namespace hgcl::ad
