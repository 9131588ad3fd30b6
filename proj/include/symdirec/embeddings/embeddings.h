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

#ifndef SYMDIREC_EMBEDDINGS_EMBEDDINGS_H_
#define SYMDIREC_EMBEDDINGS_EMBEDDINGS_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symdirec/error.h"

namespace symdirec::embeddings {

using Vector = std::vector<double>;

SYMDIREC_DEFINE_ERROR(InsufficientData);

inline constexpr int kDefaultDim = 256;

// Signed feature hashing of lower-cased character 3-grams into `dim` buckets,
// L2-normalized. Texts shorter than three bytes hash as a single gram; the
// empty text maps to the zero vector.
Vector HashEmbed(std::string_view text, int dim = kDefaultDim);

double Norm(std::span<const double> v);

// Throws ZeroVector naming the argument ("first"/"second") that has no length.
double Cosine(std::span<const double> a, std::span<const double> b);

// Row-major D x 2D matrix, optionally with a length-D bias.
class ProjectionMatrix {
 public:
  ProjectionMatrix() = default;
  ProjectionMatrix(int dim, bool bias);

  // [I | I] / 2: the query is the mean of the text and logic embeddings.
  static ProjectionMatrix HalfSum(int dim);
  // [I | 0] and [0 | I].
  static ProjectionMatrix TextOnly(int dim);
  static ProjectionMatrix LogicOnly(int dim);

  int dim() const { return dim_; }
  int cols() const { return 2 * dim_; }
  bool has_bias() const { return has_bias_; }

  double& at(int r, int c) { return w_[static_cast<std::size_t>(r) * cols() + c]; }
  double at(int r, int c) const { return w_[static_cast<std::size_t>(r) * cols() + c]; }
  std::vector<double>& weights() { return w_; }
  const std::vector<double>& weights() const { return w_; }
  std::vector<double>& bias() { return bias_; }
  const std::vector<double>& bias() const { return bias_; }

  // Binary layout: "SYMW", u32 version, u32 D, u8 bias flag, then the
  // weights (and bias) as little-endian f64, row-major.
  void Save(const std::string& path) const;
  static ProjectionMatrix Load(const std::string& path);

  bool operator==(const ProjectionMatrix&) const = default;

 private:
  int dim_ = 0;
  bool has_bias_ = false;
  std::vector<double> w_;
  std::vector<double> bias_;
};

// q = W [ex ; ephi] (+ bias).
Vector JointQuery(std::span<const double> ex, std::span<const double> ephi,
                  const ProjectionMatrix& w);

struct MnrResult {
  double loss = 0.0;
  std::vector<Vector> grad_q;  // dloss/dq_p for each query
};

// Multiple-negatives ranking loss with cosine logits scaled by 1/tau: each
// query's positive is contrasted with the other positives in the batch.
MnrResult MnrLoss(std::span<const Vector> queries, std::span<const Vector> positives,
                  double tau);

struct TrainingConfig {
  int batch_size = 16;
  int epochs = 100;
  double learning_rate = 0.1;
  double temperature = 0.05;
  std::uint64_t seed = 0;
  bool bias = false;
  double init_noise = 0.01;
};

struct Triple {
  Vector ex;
  Vector ephi;
  Vector ey;
};

struct TrainingResult {
  ProjectionMatrix w;
  // Loss over the triples in their given order, batched by B, under the
  // initial and the final W.
  double initial_loss = 0.0;
  double final_loss = 0.0;
  std::vector<double> loss_trace;  // mean batch loss seen during each epoch
};

// Mini-batch gradient descent on W only; embeddings stay fixed. Batches are
// reshuffled every epoch; a final batch of one joins its predecessor.
TrainingResult TrainProjection(std::span<const Triple> triples, const TrainingConfig& cfg);

// Seeded starting point of TrainProjection.
ProjectionMatrix InitialProjection(int dim, const TrainingConfig& cfg);

}  // namespace symdirec::embeddings

#endif  // SYMDIREC_EMBEDDINGS_EMBEDDINGS_H_
