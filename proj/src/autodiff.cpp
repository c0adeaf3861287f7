#include "hgcl/autodiff.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace hgcl::ad {

const Matrix& Var::value() const { return tape->value_of(id); }
const Matrix& Var::grad() const { return tape->grad_of(id); }

double Var::scalar() const {
  const Matrix& v = value();
  if (v.rows() != 1 || v.cols() != 1) throw ShapeError("scalar(): tensor is not 1x1");
  return v(0, 0);
}

Activation activation_from_name(std::string_view name) {
  if (name == "elu") return Activation::Elu;
  if (name == "leaky_relu") return Activation::LeakyRelu;
  if (name == "tanh") return Activation::Tanh;
  if (name == "sigmoid") return Activation::Sigmoid;
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::Elu: return "elu";
    case Activation::LeakyRelu: return "leaky_relu";
    case Activation::Tanh: return "tanh";
    case Activation::Sigmoid: return "sigmoid";
  }
  return "?";
}

Var Tape::make_leaf(Matrix value, const char* op) {
  return push(std::move(value), op, nullptr);
}

Var Tape::push(Matrix value, const char* op, std::function<void(Tape&, const Node&)> bw) {
  if (check_finite_ && !value.all_finite())
    throw TapeError(std::string("op '") + op + "' produced a non-finite value");
  Node node;
  node.grad = Matrix(value.rows(), value.cols());
  node.value = std::move(value);
  node.op = op;
  node.backward = std::move(bw);
  nodes_.push_back(std::move(node));
  return Var{this, nodes_.size() - 1};
}

namespace {

void check_same_tape(const Tape* t, std::initializer_list<Var> vars) {
  for (const Var& v : vars)
    if (v.tape != t) throw TapeError("operands recorded on different tapes");
}

}  // namespace

Var Tape::matmul(Var a, Var b) {
  check_same_tape(this, {a, b});
  Matrix out = hgcl::matmul(a.value(), b.value());
  const std::size_t ia = a.id, ib = b.id;
  return push(std::move(out), "matmul", [ia, ib](Tape& t, const Node& self) {
    const Matrix& dc = self.grad;
    const Matrix& av = t.value_of(ia);
    const Matrix& bv = t.value_of(ib);
    Matrix da = hgcl::matmul(dc, transposed(bv));
    Matrix db = hgcl::matmul(transposed(av), dc);
    Matrix& ga = t.grad_mut(ia);
    Matrix& gb = t.grad_mut(ib);
    for (std::size_t i = 0; i < ga.size(); ++i) ga.data()[i] += da.data()[i];
    for (std::size_t i = 0; i < gb.size(); ++i) gb.data()[i] += db.data()[i];
  });
}

Var Tape::add(Var a, Var b) {
  check_same_tape(this, {a, b});
  if (!a.value().same_shape(b.value())) throw ShapeError("add: shape mismatch");
  Matrix out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += b.value().data()[i];
  const std::size_t ia = a.id, ib = b.id;
  return push(std::move(out), "add", [ia, ib](Tape& t, const Node& self) {
    Matrix& ga = t.grad_mut(ia);
    Matrix& gb = t.grad_mut(ib);
    for (std::size_t i = 0; i < ga.size(); ++i) ga.data()[i] += self.grad.data()[i];
    for (std::size_t i = 0; i < gb.size(); ++i) gb.data()[i] += self.grad.data()[i];
  });
}

Var Tape::sub(Var a, Var b) {
  check_same_tape(this, {a, b});
  if (!a.value().same_shape(b.value())) throw ShapeError("sub: shape mismatch");
  Matrix out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] -= b.value().data()[i];
  const std::size_t ia = a.id, ib = b.id;
  return push(std::move(out), "sub", [ia, ib](Tape& t, const Node& self) {
    Matrix& ga = t.grad_mut(ia);
    Matrix& gb = t.grad_mut(ib);
    for (std::size_t i = 0; i < ga.size(); ++i) ga.data()[i] += self.grad.data()[i];
    for (std::size_t i = 0; i < gb.size(); ++i) gb.data()[i] -= self.grad.data()[i];
  });
}

Var Tape::add_row(Var a, Var row) {
  check_same_tape(this, {a, row});
  const Matrix& av = a.value();
  const Matrix& rv = row.value();
  if (rv.rows() != 1 || rv.cols() != av.cols())
    throw ShapeError("add_row: row must be 1 x cols(a)");
  Matrix out = av;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) += rv(0, j);
  const std::size_t ia = a.id, ir = row.id;
  return push(std::move(out), "add_row", [ia, ir](Tape& t, const Node& self) {
    Matrix& ga = t.grad_mut(ia);
    Matrix& gr = t.grad_mut(ir);
    for (std::size_t i = 0; i < self.grad.rows(); ++i)
      for (std::size_t j = 0; j < self.grad.cols(); ++j) {
        ga(i, j) += self.grad(i, j);
        gr(0, j) += self.grad(i, j);
      }
  });
}

Var Tape::scale(Var a, double c) {
  check_same_tape(this, {a});
  Matrix out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= c;
  const std::size_t ia = a.id;
  return push(std::move(out), "scale", [ia, c](Tape& t, const Node& self) {
    Matrix& ga = t.grad_mut(ia);
    for (std::size_t i = 0; i < ga.size(); ++i) ga.data()[i] += c * self.grad.data()[i];
  });
}

Var Tape::hcat(Var a, Var b) {
  check_same_tape(this, {a, b});
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  if (av.rows() != bv.rows()) throw ShapeError("hcat: row counts differ");
  Matrix out(av.rows(), av.cols() + bv.cols());
  for (std::size_t i = 0; i < av.rows(); ++i) {
    for (std::size_t j = 0; j < av.cols(); ++j) out(i, j) = av(i, j);
    for (std::size_t j = 0; j < bv.cols(); ++j) out(i, av.cols() + j) = bv(i, j);
  }
  const std::size_t ia = a.id, ib = b.id, ac = av.cols();
  return push(std::move(out), "hcat", [ia, ib, ac](Tape& t, const Node& self) {
    Matrix& ga = t.grad_mut(ia);
    Matrix& gb = t.grad_mut(ib);
    for (std::size_t i = 0; i < self.grad.rows(); ++i) {
      for (std::size_t j = 0; j < ga.cols(); ++j) ga(i, j) += self.grad(i, j);
      for (std::size_t j = 0; j < gb.cols(); ++j) gb(i, j) += self.grad(i, ac + j);
    }
  });
}

Var Tape::vcat(const std::vector<Var>& parts) {
  if (parts.empty()) throw ShapeError("vcat: no parts");
  std::size_t total_rows = 0;
  const std::size_t cols = parts.front().cols();
  for (const Var& p : parts) {
    check_same_tape(this, {p});
    if (p.cols() != cols) throw ShapeError("vcat: column counts differ");
    total_rows += p.rows();
  }
  Matrix out(total_rows, cols);
  std::vector<std::size_t> ids, offsets;
  std::size_t at = 0;
  for (const Var& p : parts) {
    ids.push_back(p.id);
    offsets.push_back(at);
    const Matrix& pv = p.value();
    for (std::size_t i = 0; i < pv.rows(); ++i)
      for (std::size_t j = 0; j < cols; ++j) out(at + i, j) = pv(i, j);
    at += pv.rows();
  }
  return push(std::move(out), "vcat",
              [ids = std::move(ids), offsets = std::move(offsets)](Tape& t, const Node& self) {
                for (std::size_t p = 0; p < ids.size(); ++p) {
                  Matrix& gp = t.grad_mut(ids[p]);
                  for (std::size_t i = 0; i < gp.rows(); ++i)
                    for (std::size_t j = 0; j < gp.cols(); ++j)
                      gp(i, j) += self.grad(offsets[p] + i, j);
                }
              });
}

Var Tape::activation(Var a, Activation kind, double leaky_slope) {
  check_same_tape(this, {a});
  const Matrix& av = a.value();
  Matrix out(av.rows(), av.cols());
  for (std::size_t i = 0; i < av.size(); ++i) {
    const double x = av.data()[i];
    double y = 0.0;
    switch (kind) {
      case Activation::Elu: y = x > 0.0 ? x : std::expm1(x); break;
      case Activation::LeakyRelu: y = x > 0.0 ? x : leaky_slope * x; break;
      case Activation::Tanh: y = std::tanh(x); break;
      case Activation::Sigmoid: y = 1.0 / (1.0 + std::exp(-x)); break;
    }
    out.data()[i] = y;
  }
  const std::size_t ia = a.id;
  return push(std::move(out), "activation",
              [ia, kind, leaky_slope](Tape& t, const Node& self) {
                Matrix& ga = t.grad_mut(ia);
                const Matrix& xv = t.value_of(ia);
                const Matrix& yv = self.value;
                for (std::size_t i = 0; i < ga.size(); ++i) {
                  const double x = xv.data()[i];
                  const double y = yv.data()[i];
                  double d = 0.0;
                  switch (kind) {
                    case Activation::Elu: d = x > 0.0 ? 1.0 : y + 1.0; break;
                    case Activation::LeakyRelu: d = x > 0.0 ? 1.0 : leaky_slope; break;
                    case Activation::Tanh: d = 1.0 - y * y; break;
                    case Activation::Sigmoid: d = y * (1.0 - y); break;
                  }
                  ga.data()[i] += d * self.grad.data()[i];
                }
              });
}

Var Tape::l2_normalize_rows(Var a) {
  check_same_tape(this, {a});
  const Matrix& av = a.value();
  Matrix out(av.rows(), av.cols());
  std::vector<double> norms(av.rows());
  for (std::size_t i = 0; i < av.rows(); ++i) {
    const double n = l2_norm(av.row(i));
    if (n == 0.0) throw TapeError("l2_normalize_rows: zero-norm row");
    norms[i] = n;
    for (std::size_t j = 0; j < av.cols(); ++j) out(i, j) = av(i, j) / n;
  }
  const std::size_t ia = a.id;
  return push(std::move(out), "l2_normalize_rows",
              [ia, norms = std::move(norms)](Tape& t, const Node& self) {
                Matrix& ga = t.grad_mut(ia);
                const Matrix& y = self.value;
                for (std::size_t i = 0; i < y.rows(); ++i) {
                  // dx = (dy - y * <y, dy>) / ||x||
                  const double proj = dot(y.row(i), self.grad.row(i));
                  for (std::size_t j = 0; j < y.cols(); ++j)
                    ga(i, j) += (self.grad(i, j) - y(i, j) * proj) / norms[i];
                }
              });
}

Var Tape::exp(Var a) {
  check_same_tape(this, {a});
  Matrix out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = std::exp(out.data()[i]);
  const std::size_t ia = a.id;
  return push(std::move(out), "exp", [ia](Tape& t, const Node& self) {
    Matrix& ga = t.grad_mut(ia);
    for (std::size_t i = 0; i < ga.size(); ++i)
      ga.data()[i] += self.value.data()[i] * self.grad.data()[i];
  });
}

Var Tape::log(Var a) {
  check_same_tape(this, {a});
  Matrix out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = std::log(out.data()[i]);
  const std::size_t ia = a.id;
  return push(std::move(out), "log", [ia](Tape& t, const Node& self) {
    Matrix& ga = t.grad_mut(ia);
    const Matrix& xv = t.value_of(ia);
    for (std::size_t i = 0; i < ga.size(); ++i)
      ga.data()[i] += self.grad.data()[i] / xv.data()[i];
  });
}

Var Tape::transpose(Var a) {
  check_same_tape(this, {a});
  const std::size_t ia = a.id;
  return push(transposed(a.value()), "transpose", [ia](Tape& t, const Node& self) {
    Matrix& ga = t.grad_mut(ia);
    for (std::size_t i = 0; i < self.grad.rows(); ++i)
      for (std::size_t j = 0; j < self.grad.cols(); ++j) ga(j, i) += self.grad(i, j);
  });
}

Var Tape::mean_rows(Var a) {
  check_same_tape(this, {a});
  const Matrix& av = a.value();
  if (av.rows() == 0) throw ShapeError("mean_rows: empty input");
  Matrix out(1, av.cols());
  for (std::size_t i = 0; i < av.rows(); ++i)
    for (std::size_t j = 0; j < av.cols(); ++j) out(0, j) += av(i, j);
  for (std::size_t j = 0; j < av.cols(); ++j) out(0, j) /= static_cast<double>(av.rows());
  const std::size_t ia = a.id;
  const double inv = 1.0 / static_cast<double>(av.rows());
  return push(std::move(out), "mean_rows", [ia, inv](Tape& t, const Node& self) {
    Matrix& ga = t.grad_mut(ia);
    for (std::size_t i = 0; i < ga.rows(); ++i)
      for (std::size_t j = 0; j < ga.cols(); ++j) ga(i, j) += inv * self.grad(0, j);
  });
}

Var Tape::masked_mean_rows(Var a, RowGroups groups) {
  check_same_tape(this, {a});
  const Matrix& av = a.value();
  Matrix out(groups.size(), av.cols());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) throw TapeError("masked_mean_rows: empty group");
    for (const std::uint32_t r : groups[g]) {
      if (r >= av.rows()) throw ShapeError("masked_mean_rows: row index out of range");
      for (std::size_t j = 0; j < av.cols(); ++j) out(g, j) += av(r, j);
    }
    const double inv = 1.0 / static_cast<double>(groups[g].size());
    for (std::size_t j = 0; j < av.cols(); ++j) out(g, j) *= inv;
  }
  const std::size_t ia = a.id;
  return push(std::move(out), "masked_mean_rows",
              [ia, groups = std::move(groups)](Tape& t, const Node& self) {
                Matrix& ga = t.grad_mut(ia);
                for (std::size_t g = 0; g < groups.size(); ++g) {
                  const double inv = 1.0 / static_cast<double>(groups[g].size());
                  for (const std::uint32_t r : groups[g])
                    for (std::size_t j = 0; j < ga.cols(); ++j)
                      ga(r, j) += inv * self.grad(g, j);
                }
              });
}

Var Tape::gather_rows(Var a, std::vector<std::uint32_t> idx) {
  check_same_tape(this, {a});
  const Matrix& av = a.value();
  Matrix out(idx.size(), av.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= av.rows()) throw ShapeError("gather_rows: index out of range");
    for (std::size_t j = 0; j < av.cols(); ++j) out(i, j) = av(idx[i], j);
  }
  const std::size_t ia = a.id;
  return push(std::move(out), "gather_rows",
              [ia, idx = std::move(idx)](Tape& t, const Node& self) {
                Matrix& ga = t.grad_mut(ia);
                for (std::size_t i = 0; i < idx.size(); ++i)
                  for (std::size_t j = 0; j < ga.cols(); ++j)
                    ga(idx[i], j) += self.grad(i, j);
              });
}

Var Tape::row_dot(Var a, Var b) {
  check_same_tape(this, {a, b});
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  if (!av.same_shape(bv)) throw ShapeError("row_dot: shape mismatch");
  Matrix out(av.rows(), 1);
  for (std::size_t i = 0; i < av.rows(); ++i) out(i, 0) = dot(av.row(i), bv.row(i));
  const std::size_t ia = a.id, ib = b.id;
  return push(std::move(out), "row_dot", [ia, ib](Tape& t, const Node& self) {
    Matrix& ga = t.grad_mut(ia);
    Matrix& gb = t.grad_mut(ib);
    const Matrix& av = t.value_of(ia);
    const Matrix& bv = t.value_of(ib);
    for (std::size_t i = 0; i < av.rows(); ++i) {
      const double d = self.grad(i, 0);
      for (std::size_t j = 0; j < av.cols(); ++j) {
        ga(i, j) += d * bv(i, j);
        gb(i, j) += d * av(i, j);
      }
    }
  });
}

Var Tape::segment_softmax(Var logits, Segments segs) {
  check_same_tape(this, {logits});
  const Matrix& lv = logits.value();
  if (lv.cols() != 1) throw ShapeError("segment_softmax: logits must be n x 1");
  if (segs.count() == 0 || segs.offsets.back() != lv.rows())
    throw ShapeError("segment_softmax: segments do not cover the logits");
  Matrix out(lv.rows(), 1);
  for (std::size_t s = 0; s + 1 < segs.offsets.size(); ++s) {
    const std::size_t lo = segs.offsets[s], hi = segs.offsets[s + 1];
    if (lo >= hi) throw TapeError("segment_softmax: empty segment");
    double mx = lv(lo, 0);
    for (std::size_t i = lo + 1; i < hi; ++i) mx = std::max(mx, lv(i, 0));
    double z = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      out(i, 0) = std::exp(lv(i, 0) - mx);
      z += out(i, 0);
    }
    for (std::size_t i = lo; i < hi; ++i) out(i, 0) /= z;
  }
  const std::size_t il = logits.id;
  return push(std::move(out), "segment_softmax",
              [il, segs = std::move(segs)](Tape& t, const Node& self) {
                Matrix& gl = t.grad_mut(il);
                const Matrix& y = self.value;
                for (std::size_t s = 0; s + 1 < segs.offsets.size(); ++s) {
                  const std::size_t lo = segs.offsets[s], hi = segs.offsets[s + 1];
                  double acc = 0.0;
                  for (std::size_t i = lo; i < hi; ++i) acc += self.grad(i, 0) * y(i, 0);
                  for (std::size_t i = lo; i < hi; ++i)
                    gl(i, 0) += y(i, 0) * (self.grad(i, 0) - acc);
                }
              });
}

Var Tape::weighted_segment_sum(Var w, Var rows, Segments segs,
                               std::vector<std::uint32_t> target, std::size_t out_rows) {
  check_same_tape(this, {w, rows});
  const Matrix& wv = w.value();
  const Matrix& rv = rows.value();
  if (wv.cols() != 1 || wv.rows() != rv.rows())
    throw ShapeError("weighted_segment_sum: weights must be rows(rows) x 1");
  if (segs.count() != target.size())
    throw ShapeError("weighted_segment_sum: one target row per segment required");
  if (segs.count() > 0 && segs.offsets.back() != rv.rows())
    throw ShapeError("weighted_segment_sum: segments do not cover the rows");
  Matrix out(out_rows, rv.cols());
  for (std::size_t s = 0; s < target.size(); ++s) {
    if (target[s] >= out_rows) throw ShapeError("weighted_segment_sum: target out of range");
    for (std::size_t e = segs.offsets[s]; e < segs.offsets[s + 1]; ++e)
      for (std::size_t j = 0; j < rv.cols(); ++j)
        out(target[s], j) += wv(e, 0) * rv(e, j);
  }
  const std::size_t iw = w.id, ir = rows.id;
  return push(std::move(out), "weighted_segment_sum",
              [iw, ir, segs = std::move(segs), target = std::move(target)](
                  Tape& t, const Node& self) {
                Matrix& gw = t.grad_mut(iw);
                Matrix& gr = t.grad_mut(ir);
                const Matrix& wv = t.value_of(iw);
                const Matrix& rv = t.value_of(ir);
                for (std::size_t s = 0; s < target.size(); ++s) {
                  const auto out_row = self.grad.row(target[s]);
                  for (std::size_t e = segs.offsets[s]; e < segs.offsets[s + 1]; ++e) {
                    gw(e, 0) += dot(out_row, rv.row(e));
                    for (std::size_t j = 0; j < rv.cols(); ++j)
                      gr(e, j) += wv(e, 0) * out_row[j];
                  }
                }
              });
}

Var Tape::masked_row_sum(Var a, Matrix mask) {
  check_same_tape(this, {a});
  const Matrix& av = a.value();
  if (!av.same_shape(mask)) throw ShapeError("masked_row_sum: mask shape mismatch");
  Matrix out(av.rows(), 1);
  for (std::size_t i = 0; i < av.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < av.cols(); ++j) s += mask(i, j) * av(i, j);
    out(i, 0) = s;
  }
  const std::size_t ia = a.id;
  return push(std::move(out), "masked_row_sum",
              [ia, mask = std::move(mask)](Tape& t, const Node& self) {
                Matrix& ga = t.grad_mut(ia);
                for (std::size_t i = 0; i < ga.rows(); ++i)
                  for (std::size_t j = 0; j < ga.cols(); ++j)
                    ga(i, j) += mask(i, j) * self.grad(i, 0);
              });
}

Var Tape::weighted_sum(const std::vector<Var>& parts, Var weights) {
  if (parts.empty()) throw ShapeError("weighted_sum: no parts");
  check_same_tape(this, {weights});
  const Matrix& wv = weights.value();
  if (wv.cols() != 1 || wv.rows() != parts.size())
    throw ShapeError("weighted_sum: weights must be |parts| x 1");
  const Matrix& first = parts.front().value();
  Matrix out(first.rows(), first.cols());
  std::vector<std::size_t> ids;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    check_same_tape(this, {parts[p]});
    const Matrix& pv = parts[p].value();
    if (!pv.same_shape(first)) throw ShapeError("weighted_sum: parts differ in shape");
    ids.push_back(parts[p].id);
    const double w = wv(p, 0);
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += w * pv.data()[i];
  }
  const std::size_t iw = weights.id;
  return push(std::move(out), "weighted_sum",
              [iw, ids = std::move(ids)](Tape& t, const Node& self) {
                const Matrix& wv = t.value_of(iw);
                Matrix& gw = t.grad_mut(iw);
                for (std::size_t p = 0; p < ids.size(); ++p) {
                  Matrix& gp = t.grad_mut(ids[p]);
                  const Matrix& pv = t.value_of(ids[p]);
                  double acc = 0.0;
                  for (std::size_t i = 0; i < gp.size(); ++i) {
                    gp.data()[i] += wv(p, 0) * self.grad.data()[i];
                    acc += self.grad.data()[i] * pv.data()[i];
                  }
                  gw(p, 0) += acc;
                }
              });
}

void Tape::backward(Var output) {
  if (output.tape != this) throw TapeError("backward: output from another tape");
  const Matrix& ov = nodes_[output.id].value;
  if (ov.rows() != 1 || ov.cols() != 1)
    throw TapeError("backward: output must be a 1x1 scalar");
  // Interior grads are per-pass scratch; only leaf grads accumulate across
  // repeated backward calls.
  for (std::size_t i = 0; i <= output.id; ++i)
    if (nodes_[i].backward) nodes_[i].grad = Matrix(nodes_[i].grad.rows(), nodes_[i].grad.cols());
  nodes_[output.id].grad(0, 0) += 1.0;
  for (std::size_t i = output.id + 1; i-- > 0;) {
    const Node& node = nodes_[i];
    if (node.backward) node.backward(*this, node);
  }
  if (check_finite_) {
    for (const Node& node : nodes_)
      if (!node.grad.all_finite())
        throw TapeError(std::string("op '") + node.op + "' produced a non-finite gradient");
  }
}

void Tape::zero_grad() {
  for (Node& node : nodes_)
    node.grad = Matrix(node.grad.rows(), node.grad.cols());
}

AdamState::AdamState(const std::vector<Matrix>& params, double lr,
                     double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
  m_.reserve(params.size());
  v_.reserve(params.size());
  for (const Matrix& p : params) {
    m_.emplace_back(p.rows(), p.cols());
    v_.emplace_back(p.rows(), p.cols());
  }
}

void AdamState::step(std::vector<Matrix>& params, const std::vector<const Matrix*>& grads) {
  if (params.size() != m_.size() || grads.size() != m_.size())
    throw ShapeError("adam_step: parameter count mismatch");
  ++step_count_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(step_count_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(step_count_));
  for (std::size_t p = 0; p < params.size(); ++p) {
    Matrix& w = params[p];
    const Matrix& g = *grads[p];
    if (!w.same_shape(g) || !w.same_shape(m_[p]))
      throw ShapeError("adam_step: gradient shape mismatch");
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double gi = g.data()[i];
      double& m = m_[p].data()[i];
      double& v = v_[p].data()[i];
      m = beta1_ * m + (1.0 - beta1_) * gi;
      v = beta2_ * v + (1.0 - beta2_) * gi * gi;
      const double mhat = m / bc1;
      const double vhat = v / bc2;
      w.data()[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
    }
  }
}

}  // namespace hgcl::ad
