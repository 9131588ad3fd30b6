// Copyright 2026 The symdirec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "symdirec/embeddings/embeddings.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "symdirec/util/hash.h"

namespace symdirec::embeddings {

Vector HashEmbed(std::string_view text, int dim) {
  if (dim < 8) throw DimensionMismatch("embedding dimension must be at least 8");
  Vector v(static_cast<std::size_t>(dim), 0.0);
  std::string lower(text);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  auto add = [&](std::string_view gram) {
    std::uint64_t h = Fnv1a64(gram);
    double sign = (h >> 63) != 0 ? -1.0 : 1.0;
    v[h % static_cast<std::uint64_t>(dim)] += sign;
  };
  if (lower.empty()) return v;
  if (lower.size() < 3) {
    add(lower);
  } else {
    for (std::size_t i = 0; i + 3 <= lower.size(); ++i) add(std::string_view(lower).substr(i, 3));
  }
  double n = Norm(v);
  if (n > 0.0) {
    for (double& x : v) x /= n;
  }
  return v;
}

double Norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double Cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("cosine of vectors of size " + std::to_string(a.size()) +
                            " and " + std::to_string(b.size()));
  }
  double na = Norm(a), nb = Norm(b);
  if (na == 0.0) throw ZeroVector("first argument of cosine is the zero vector");
  if (nb == 0.0) throw ZeroVector("second argument of cosine is the zero vector");
  double dot = std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
  return std::clamp(dot / (na * nb), -1.0, 1.0);
}

// --- projection ------------------------------------------------------------

ProjectionMatrix::ProjectionMatrix(int dim, bool bias)
    : dim_(dim), has_bias_(bias),
      w_(static_cast<std::size_t>(dim) * 2 * dim, 0.0),
      bias_(bias ? static_cast<std::size_t>(dim) : 0, 0.0) {
  if (dim <= 0) throw DimensionMismatch("projection dimension must be positive");
}

ProjectionMatrix ProjectionMatrix::HalfSum(int dim) {
  ProjectionMatrix m(dim, false);
  for (int i = 0; i < dim; ++i) {
    m.at(i, i) = 0.5;
    m.at(i, dim + i) = 0.5;
  }
  return m;
}

ProjectionMatrix ProjectionMatrix::TextOnly(int dim) {
  ProjectionMatrix m(dim, false);
  for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
  return m;
}

ProjectionMatrix ProjectionMatrix::LogicOnly(int dim) {
  ProjectionMatrix m(dim, false);
  for (int i = 0; i < dim; ++i) m.at(i, dim + i) = 1.0;
  return m;
}

namespace {

constexpr char kMagic[4] = {'S', 'Y', 'M', 'W'};
constexpr std::uint32_t kVersion = 1;

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutF64(std::string& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, sizeof bits);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

class Reader {
 public:
  Reader(const std::string& data, const std::string& path) : data_(data), path_(path) {}

  std::uint64_t Little(int bytes) {
    if (pos_ + bytes > data_.size()) throw IoError(path_ + ": truncated projection file");
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    }
    pos_ += bytes;
    return v;
  }
  double F64() {
    std::uint64_t bits = Little(8);
    double d;
    std::memcpy(&d, &bits, sizeof d);
    return d;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  const std::string& data_;
  const std::string& path_;
  std::size_t pos_ = 0;
};

}  // namespace

void ProjectionMatrix::Save(const std::string& path) const {
  std::string out(kMagic, 4);
  PutU32(out, kVersion);
  PutU32(out, static_cast<std::uint32_t>(dim_));
  out.push_back(has_bias_ ? 1 : 0);
  for (double x : w_) PutF64(out, x);
  for (double x : bias_) PutF64(out, x);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("short write to " + path);
}

ProjectionMatrix ProjectionMatrix::Load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read " + path);
  std::string data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (data.size() < 4 || std::memcmp(data.data(), kMagic, 4) != 0) {
    throw IoError(path + ": not a projection file");
  }
  Reader r(data, path);
  r.Little(4);
  std::uint32_t version = static_cast<std::uint32_t>(r.Little(4));
  if (version != kVersion) {
    throw IoError(path + ": unsupported projection version " + std::to_string(version));
  }
  std::uint64_t dim = r.Little(4);
  std::uint64_t flag = r.Little(1);
  if (dim == 0 || dim > (1u << 16) || flag > 1) throw IoError(path + ": corrupt header");
  ProjectionMatrix m(static_cast<int>(dim), flag == 1);
  for (double& x : m.w_) x = r.F64();
  for (double& x : m.bias_) x = r.F64();
  if (!r.done()) throw IoError(path + ": trailing bytes");
  for (double x : m.w_) {
    if (!std::isfinite(x)) throw IoError(path + ": non-finite weight");
  }
  return m;
}

Vector JointQuery(std::span<const double> ex, std::span<const double> ephi,
                  const ProjectionMatrix& w) {
  const std::size_t d = static_cast<std::size_t>(w.dim());
  if (ex.size() != d || ephi.size() != d) {
    throw DimensionMismatch("joint query inputs of size " + std::to_string(ex.size()) +
                            " and " + std::to_string(ephi.size()) + " against W with D=" +
                            std::to_string(d));
  }
  Vector q(d, 0.0);
  const std::vector<double>& m = w.weights();
  for (std::size_t r = 0; r < d; ++r) {
    const double* row = m.data() + r * 2 * d;
    double s = w.has_bias() ? w.bias()[r] : 0.0;
    for (std::size_t c = 0; c < d; ++c) s += row[c] * ex[c];
    for (std::size_t c = 0; c < d; ++c) s += row[d + c] * ephi[c];
    q[r] = s;
  }
  return q;
}

// --- loss --------------------------------------------------------------------

MnrResult MnrLoss(std::span<const Vector> queries, std::span<const Vector> positives,
                  double tau) {
  const std::size_t b = queries.size();
  if (b < 2 || positives.size() != b) {
    throw InsufficientData("ranking loss needs at least two (query, positive) pairs");
  }
  if (!(tau > 0.0)) throw ConfigError("temperature must be positive");
  MnrResult out;
  out.grad_q.assign(b, Vector(queries[0].size(), 0.0));
  std::vector<double> norm_e(b);
  for (std::size_t j = 0; j < b; ++j) norm_e[j] = Norm(positives[j]);

  std::vector<double> cos(b), prob(b);
  for (std::size_t p = 0; p < b; ++p) {
    const Vector& q = queries[p];
    double nq = Norm(q);
    for (std::size_t j = 0; j < b; ++j) cos[j] = Cosine(q, positives[j]);
    double top = *std::max_element(cos.begin(), cos.end()) / tau;
    double z = 0.0;
    for (std::size_t j = 0; j < b; ++j) {
      prob[j] = std::exp(cos[j] / tau - top);
      z += prob[j];
    }
    for (double& x : prob) x /= z;
    out.loss -= (cos[p] / tau - top - std::log(z)) / static_cast<double>(b);

    // d/dq cos(q, e) = e / (|q||e|) - cos * q / |q|^2
    Vector& g = out.grad_q[p];
    for (std::size_t j = 0; j < b; ++j) {
      double coef = (prob[j] - (j == p ? 1.0 : 0.0)) / (tau * static_cast<double>(b));
      if (coef == 0.0) continue;
      const Vector& e = positives[j];
      double a = coef / (nq * norm_e[j]);
      double c = coef * cos[j] / (nq * nq);
      for (std::size_t k = 0; k < g.size(); ++k) g[k] += a * e[k] - c * q[k];
    }
  }
  return out;
}

// --- training ----------------------------------------------------------------

ProjectionMatrix InitialProjection(int dim, const TrainingConfig& cfg) {
  ProjectionMatrix w = ProjectionMatrix::HalfSum(dim);
  if (cfg.bias) {
    ProjectionMatrix with_bias(dim, true);
    with_bias.weights() = w.weights();
    w = std::move(with_bias);
  }
  Rng rng(cfg.seed);
  for (double& x : w.weights()) x += cfg.init_noise * rng.Gaussian();
  return w;
}

namespace {

std::vector<std::vector<std::size_t>> MakeBatches(const std::vector<std::size_t>& order,
                                                  std::size_t b) {
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t i = 0; i < order.size(); i += b) {
    std::size_t end = std::min(order.size(), i + b);
    if (end - i == 1 && !batches.empty()) {
      batches.back().push_back(order[i]);
    } else {
      batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                           order.begin() + static_cast<std::ptrdiff_t>(end));
    }
  }
  return batches;
}

std::vector<double> Concat(const Triple& t) {
  std::vector<double> z(t.ex);
  z.insert(z.end(), t.ephi.begin(), t.ephi.end());
  return z;
}

// Loss of one batch; accumulates dloss/dW into `grad` when non-null.
double BatchStep(std::span<const Triple> triples, const std::vector<std::size_t>& batch,
                 const ProjectionMatrix& w, double tau, ProjectionMatrix* grad) {
  std::vector<Vector> qs, ps;
  for (std::size_t i : batch) {
    qs.push_back(JointQuery(triples[i].ex, triples[i].ephi, w));
    ps.push_back(triples[i].ey);
  }
  MnrResult r = MnrLoss(qs, ps, tau);
  if (grad != nullptr) {
    const int d = w.dim();
    for (std::size_t p = 0; p < batch.size(); ++p) {
      std::vector<double> z = Concat(triples[batch[p]]);
      const Vector& g = r.grad_q[p];
      for (int row = 0; row < d; ++row) {
        if (g[row] == 0.0) continue;
        double* out = grad->weights().data() + static_cast<std::size_t>(row) * 2 * d;
        for (int c = 0; c < 2 * d; ++c) out[c] += g[row] * z[c];
        if (grad->has_bias()) grad->bias()[row] += g[row];
      }
    }
  }
  return r.loss;
}

double OrderedLoss(std::span<const Triple> triples, const ProjectionMatrix& w,
                   const TrainingConfig& cfg) {
  std::vector<std::size_t> order(triples.size());
  std::iota(order.begin(), order.end(), 0);
  auto batches = MakeBatches(order, static_cast<std::size_t>(cfg.batch_size));
  double total = 0.0;
  for (const auto& batch : batches) total += BatchStep(triples, batch, w, cfg.temperature, nullptr);
  return total / static_cast<double>(batches.size());
}

}  // namespace

TrainingResult TrainProjection(std::span<const Triple> triples, const TrainingConfig& cfg) {
  if (cfg.batch_size < 2) throw ConfigError("batch size must be at least 2");
  if (!(cfg.temperature > 0.0)) throw ConfigError("temperature must be positive");
  if (cfg.epochs < 0) throw ConfigError("epochs must be non-negative");
  if (triples.size() < static_cast<std::size_t>(cfg.batch_size)) {
    throw InsufficientData("training needs at least B=" + std::to_string(cfg.batch_size) +
                           " triples, got " + std::to_string(triples.size()));
  }
  const std::size_t d = triples[0].ex.size();
  for (const Triple& t : triples) {
    if (t.ex.size() != d || t.ephi.size() != d || t.ey.size() != d) {
      throw DimensionMismatch("training triples must share one dimension");
    }
  }

  TrainingResult result;
  result.w = InitialProjection(static_cast<int>(d), cfg);
  result.initial_loss = OrderedLoss(triples, result.w, cfg);

  Rng rng(cfg.seed ^ 0x53485546464c45ULL);
  std::vector<std::size_t> order(triples.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.Shuffle(order);
    auto batches = MakeBatches(order, static_cast<std::size_t>(cfg.batch_size));
    double total = 0.0;
    for (const auto& batch : batches) {
      ProjectionMatrix grad(static_cast<int>(d), cfg.bias);
      total += BatchStep(triples, batch, result.w, cfg.temperature, &grad);
      for (std::size_t k = 0; k < grad.weights().size(); ++k) {
        result.w.weights()[k] -= cfg.learning_rate * grad.weights()[k];
      }
      for (std::size_t k = 0; k < grad.bias().size(); ++k) {
        result.w.bias()[k] -= cfg.learning_rate * grad.bias()[k];
      }
    }
    result.loss_trace.push_back(total / static_cast<double>(batches.size()));
  }
  result.final_loss = OrderedLoss(triples, result.w, cfg);
  return result;
}

}  // namespace symdirec::embeddings
