// Copyright (c) 2026 The idfvc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IDFVC_METRICS_METRICS_H_
#define IDFVC_METRICS_METRICS_H_

#include <span>
#include <string>
#include <vector>

#include "idfvc/nn/tensor.h"

namespace idfvc::metrics {

// Embedding rows with one speaker id each.
struct EmbeddingSet {
  EmbeddingSet() = default;
  EmbeddingSet(nn::Tensor vectors, std::vector<std::size_t> speakers);

  std::size_t size() const { return speakers.size(); }
  std::span<const float> row(std::size_t i) const;

  nn::Tensor vectors;  // [N x d]
  std::vector<std::size_t> speakers;
};

// a.b / (|a| |b|); ValidationError when either norm is <= 1e-9.
double cosine(std::span<const float> a, std::span<const float> b);

// Mean over generated rows of the cosine to the mean reference embedding of
// the same speaker.
double secs(const EmbeddingSet& generated, const EmbeddingSet& reference);

// Mean cosine over all unordered same-speaker pairs.
double sec(const EmbeddingSet& set);

// Mean cosine over all unordered different-speaker pairs (lower is more diverse).
double sed(const EmbeddingSet& set);

std::size_t levenshtein(const std::vector<std::string>& ref, const std::vector<std::string>& hyp);

// Levenshtein(ref, hyp) / |ref| with unit costs.
double edit_error_rate(const std::vector<std::string>& ref, const std::vector<std::string>& hyp);

std::vector<std::string> word_tokens(const std::string& text);
std::vector<std::string> char_tokens(const std::string& text);

}  // namespace idfvc::metrics

#endif  // IDFVC_METRICS_METRICS_H_
