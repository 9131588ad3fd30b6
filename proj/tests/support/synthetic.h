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

#ifndef SYMDIREC_TESTS_SUPPORT_SYNTHETIC_H_
#define SYMDIREC_TESTS_SUPPORT_SYNTHETIC_H_

// Synthetic embedding data shared by unit and acceptance tests.

#include <cmath>
#include <string>
#include <vector>

#include "symdirec/embeddings/embeddings.h"
#include "symdirec/util/hash.h"

namespace symdirec::testing {

inline embeddings::Vector RandomVector(Rng& rng, int dim) {
  embeddings::Vector v(static_cast<std::size_t>(dim));
  for (double& x : v) x = rng.Gaussian();
  return v;
}

// Each target embedding equals its text embedding; the logic embeddings are
// unrelated noise the projection has to learn to discount.
inline std::vector<embeddings::Triple> SeparableTriples(int n, int dim, std::uint64_t seed) {
  static const char* kNouns[] = {"adder", "mux", "decoder", "encoder", "comparator",
                                 "parity", "shifter", "latch"};
  Rng rng(seed);
  std::vector<embeddings::Triple> out;
  for (int i = 0; i < n; ++i) {
    std::string text = std::string(kNouns[i % 8]) + " unit " + std::to_string(i) +
                       " variant " + std::to_string(rng.Below(1000));
    embeddings::Triple t;
    t.ex = embeddings::HashEmbed(text, dim);
    t.ephi = embeddings::HashEmbed("y" + std::to_string(rng.Below(97)) + " = a ^ b", dim);
    t.ey = t.ex;
    out.push_back(std::move(t));
  }
  return out;
}

// Fraction of triples whose own target is the best-scoring one.
inline double Top1Accuracy(const std::vector<embeddings::Triple>& triples,
                           const embeddings::ProjectionMatrix& w) {
  int hits = 0;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    embeddings::Vector q = embeddings::JointQuery(triples[i].ex, triples[i].ephi, w);
    std::size_t best = 0;
    double best_score = -2.0;
    for (std::size_t j = 0; j < triples.size(); ++j) {
      double s = embeddings::Cosine(q, triples[j].ey);
      if (s > best_score) {
        best_score = s;
        best = j;
      }
    }
    if (best == i) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(triples.size());
}

// Loss gradient by central differences over every query component.
inline std::vector<embeddings::Vector> FiniteDifferenceGrad(
    std::vector<embeddings::Vector> qs, const std::vector<embeddings::Vector>& ps,
    double tau, double h = 1e-5) {
  std::vector<embeddings::Vector> g(qs.size(), embeddings::Vector(qs[0].size()));
  for (std::size_t p = 0; p < qs.size(); ++p) {
    for (std::size_t k = 0; k < qs[p].size(); ++k) {
      double keep = qs[p][k];
      qs[p][k] = keep + h;
      double up = embeddings::MnrLoss(qs, ps, tau).loss;
      qs[p][k] = keep - h;
      double down = embeddings::MnrLoss(qs, ps, tau).loss;
      qs[p][k] = keep;
      g[p][k] = (up - down) / (2 * h);
    }
  }
  return g;
}

inline double RelativeError(const std::vector<embeddings::Vector>& a,
                            const std::vector<embeddings::Vector>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t p = 0; p < a.size(); ++p) {
    for (std::size_t k = 0; k < a[p].size(); ++k) {
      num += (a[p][k] - b[p][k]) * (a[p][k] - b[p][k]);
      den += b[p][k] * b[p][k];
    }
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

}  // namespace symdirec::testing

#endif  // SYMDIREC_TESTS_SUPPORT_SYNTHETIC_H_
