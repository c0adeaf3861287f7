#include "hgcl/trainer.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>

#include "hgcl/errors.hpp"
#include "hgcl/topo_view.hpp"

namespace hgcl::train {

namespace fs = std::filesystem;

Preprocessed preprocess(const HeteroGraph& g, const TrainConfig& cfg) {
  cfg.validate();
  validate(g);
  if (g.meta_paths.empty())
    throw GraphError("training requires at least one meta-path in the schema");

  Preprocessed pre;
  pre.homo.resize(g.node_types.size());
  for (std::size_t t = 0; t < g.node_types.size(); ++t)
    pre.homo[t] =
        attrview::build_homogeneous_graph(g.attributes[t], cfg.eps_homo.get(g.node_types[t]));

  for (const MetaPath& m : g.meta_paths) {
    pre.metapath_adj.push_back(meta_path_neighbors(g, m));
    pre.delta.push_back(cfg.delta.get(m.name));
  }

  const Matrix sim = cosine_similarity_matrix(g.attributes[g.target_index()]);
  const Matrix corr = contrast::topological_correlation_matrix(pre.metapath_adj, pre.delta);
  std::optional<double> eps_a = cfg.eps_a;
  std::optional<double> eps_t = cfg.eps_t;
  if (cfg.variant == Variant::SampTopo) eps_a.reset();
  if (cfg.variant == Variant::SampAttr) eps_t.reset();
  pre.samples = contrast::select_samples(sim, corr, eps_a, eps_t);
  return pre;
}

TrainedModel train(const HeteroGraph& g, const TrainConfig& cfg) {
  Preprocessed pre = preprocess(g, cfg);

  const bool use_attr = cfg.variant != Variant::TopoOnly;
  const bool use_topo = cfg.variant != Variant::AttrOnly;

  Rng init_rng = Rng::substream(cfg.seed, "init");
  TrainedModel model;
  model.config = cfg;
  std::optional<attrview::Encoder> attr_enc;
  std::optional<topoview::Encoder> topo_enc;
  if (use_attr) attr_enc.emplace(g, cfg, model.params, init_rng);
  if (use_topo) topo_enc.emplace(g, cfg, model.params, init_rng);

  ad::AdamState adam(model.params.values(), cfg.learning_rate);

  auto forward_views = [&](ad::Tape& tape, const std::vector<ad::Var>& pvars) {
    std::optional<ad::Var> za, zt;
    if (use_attr) za = attr_enc->forward(tape, pvars, g, pre.homo).z;
    if (use_topo) zt = topo_enc->forward(tape, pvars, g, pre.metapath_adj).z;
    return std::make_pair(za, zt);
  };

  double best = 0.0;
  int stall = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    ad::Tape tape;
    const std::vector<ad::Var> pvars = model.params.to_tape(tape);
    ad::Var loss;
    try {
      auto [za, zt] = forward_views(tape, pvars);
      if (use_attr && use_topo)
        loss = contrast::final_loss(tape, *zt, *za, pre.samples, cfg.tau, cfg.lambda);
      else if (use_topo)
        loss = contrast::final_loss(tape, *zt, *zt, pre.samples, cfg.tau, cfg.lambda);
      else
        loss = contrast::final_loss(tape, *za, *za, pre.samples, cfg.tau, cfg.lambda);
      tape.backward(loss);
    } catch (const TapeError& e) {
      throw TapeError("training aborted at epoch " + std::to_string(epoch) + ": " + e.what());
    }
    const double loss_val = loss.scalar();

    std::vector<const Matrix*> grads;
    grads.reserve(pvars.size());
    for (const ad::Var& v : pvars) grads.push_back(&v.grad());
    adam.step(model.params.values(), grads);
    model.loss_history.push_back(loss_val);

    if (cfg.patience > 0) {
      if (epoch == 0) {
        best = loss_val;
      } else {
        const double rel = (best - loss_val) / std::max(std::abs(best), 1e-12);
        if (rel >= cfg.min_rel_improve) {
          best = loss_val;
          stall = 0;
        } else if (++stall >= cfg.patience) {
          break;
        }
      }
    }
  }

  // Final representations with the trained parameters.
  ad::Tape tape;
  const std::vector<ad::Var> pvars = model.params.to_tape(tape);
  auto [za, zt] = forward_views(tape, pvars);
  if (za) model.z_attr = za->value();
  if (zt) model.z_topo = zt->value();
  if (za && zt) {
    Matrix z(model.z_attr.rows(), model.z_attr.cols() + model.z_topo.cols());
    for (std::size_t i = 0; i < z.rows(); ++i) {
      for (std::size_t j = 0; j < model.z_attr.cols(); ++j) z(i, j) = model.z_attr(i, j);
      for (std::size_t j = 0; j < model.z_topo.cols(); ++j)
        z(i, model.z_attr.cols() + j) = model.z_topo(i, j);
    }
    model.z = std::move(z);
  } else {
    model.z = za ? model.z_attr : model.z_topo;
  }
  return model;
}

namespace {

std::string shortest_repr(double v) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

}  // namespace

void export_embeddings(const Matrix& z, const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write " + file.string());
  out << "node_index";
  for (std::size_t j = 0; j < z.cols(); ++j) out << ",v" << j;
  out << "\n";
  for (std::size_t i = 0; i < z.rows(); ++i) {
    out << i;
    for (std::size_t j = 0; j < z.cols(); ++j) out << "," << shortest_repr(z(i, j));
    out << "\n";
  }
  if (!out) throw IoError("write failed for " + file.string());
}

Matrix load_embeddings(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open " + file.string());
  std::string line;
  if (!std::getline(in, line)) throw IoError(file.string() + ": empty embeddings file");
  std::size_t cols = 0;
  for (const char c : line)
    if (c == ',') ++cols;
  std::vector<double> values;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    std::size_t at = line.find(',');
    if (at == std::string::npos) throw IoError(file.string() + ": malformed row");
    std::size_t col = 0;
    while (at != std::string::npos && col < cols) {
      const std::size_t next = line.find(',', at + 1);
      const std::string cell = line.substr(at + 1, next == std::string::npos
                                                       ? std::string::npos
                                                       : next - at - 1);
      double v = 0.0;
      const auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || p != cell.data() + cell.size())
        throw IoError(file.string() + ": bad value '" + cell + "'");
      values.push_back(v);
      at = next;
      ++col;
    }
    if (col != cols) throw IoError(file.string() + ": short row");
  }
  Matrix z(rows, cols);
  std::memcpy(z.data(), values.data(), values.size() * sizeof(double));
  return z;
}

void export_loss_history(const std::vector<double>& history, const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write " + file.string());
  out << "epoch,loss\n";
  for (std::size_t e = 0; e < history.size(); ++e)
    out << e << "," << shortest_repr(history[e]) << "\n";
}

namespace {

constexpr char kCheckpointMagic[8] = {'H', 'G', 'C', 'L', 'C', 'K', 'P', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  put_u64(out, bits);
}

double get_f64(std::istream& in) {
  const std::uint64_t bits = get_u64(in);
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}

}  // namespace

void save_checkpoint(const TrainedModel& model, const fs::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot write " + file.string());
  out.write(kCheckpointMagic, 8);
  const std::string cfg = model.config.to_json();
  put_u64(out, cfg.size());
  out.write(cfg.data(), static_cast<std::streamsize>(cfg.size()));
  put_u64(out, model.params.size());
  for (std::size_t p = 0; p < model.params.size(); ++p) {
    const std::string& name = model.params.name(p);
    put_u64(out, name.size());
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    const Matrix& m = model.params.value(p);
    put_u64(out, m.rows());
    put_u64(out, m.cols());
    for (std::size_t i = 0; i < m.size(); ++i) put_f64(out, m.data()[i]);
  }
  if (!out) throw IoError("write failed for " + file.string());
}

TrainedModel load_checkpoint(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open " + file.string());
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kCheckpointMagic, 8) != 0)
    throw IoError(file.string() + ": not a checkpoint file");
  const std::uint64_t cfg_len = get_u64(in);
  std::string cfg_text(cfg_len, '\0');
  in.read(cfg_text.data(), static_cast<std::streamsize>(cfg_len));
  TrainedModel model;
  model.config = TrainConfig::from_json(cfg_text);
  const std::uint64_t count = get_u64(in);
  for (std::uint64_t p = 0; p < count; ++p) {
    const std::uint64_t name_len = get_u64(in);
    std::string name(name_len, '\0');
    in.read(name.data(), static_cast<std::streamsize>(name_len));
    const std::uint64_t rows = get_u64(in);
    const std::uint64_t cols = get_u64(in);
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = get_f64(in);
    if (!in) throw IoError(file.string() + ": truncated checkpoint");
    model.params.add(std::move(name), std::move(m));
  }
  return model;
}

std::vector<std::pair<std::string, double>> gradient_magnitudes(const HeteroGraph& g,
                                                                const TrainConfig& cfg) {
  Preprocessed pre = preprocess(g, cfg);
  Rng init_rng = Rng::substream(cfg.seed, "init");
  ad::ParamStore store;
  attrview::Encoder attr_enc(g, cfg, store, init_rng);
  topoview::Encoder topo_enc(g, cfg, store, init_rng);

  ad::Tape tape;
  const std::vector<ad::Var> pvars = store.to_tape(tape);
  ad::Var za = attr_enc.forward(tape, pvars, g, pre.homo).z;
  ad::Var zt = topo_enc.forward(tape, pvars, g, pre.metapath_adj).z;
  ad::Var loss = contrast::final_loss(tape, zt, za, pre.samples, cfg.tau, cfg.lambda);
  tape.backward(loss);

  std::vector<std::pair<std::string, double>> out;
  for (std::size_t p = 0; p < store.size(); ++p) {
    const Matrix& grad = pvars[p].grad();
    double mx = 0.0;
    for (std::size_t i = 0; i < grad.size(); ++i)
      mx = std::max(mx, std::abs(grad.data()[i]));
    out.emplace_back(store.name(p), mx);
  }
  return out;
}

}  // namespace hgcl::train
