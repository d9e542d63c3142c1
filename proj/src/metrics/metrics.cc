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

#include "idfvc/metrics/metrics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "idfvc/common/errors.h"

namespace idfvc::metrics {

EmbeddingSet::EmbeddingSet(nn::Tensor vectors_, std::vector<std::size_t> speakers_)
    : vectors(std::move(vectors_)), speakers(std::move(speakers_)) {
  if (!vectors.defined() || vectors.rank() != 2 || vectors.dim(0) != speakers.size()) {
    throw ValidationError("embedding set: " + std::to_string(speakers.size()) + " labels for vectors of shape " +
                          (vectors.defined() ? nn::shape_to_string(vectors.shape()) : std::string("[]")));
  }
}

std::span<const float> EmbeddingSet::row(std::size_t i) const {
  const std::size_t d = vectors.dim(1);
  return vectors.data().subspan(i * d, d);
}

double cosine(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) {
    throw ValidationError("cosine: lengths " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += double(a[i]) * b[i];
    na += double(a[i]) * a[i];
    nb += double(b[i]) * b[i];
  }
  na = std::sqrt(na);
  nb = std::sqrt(nb);
  if (na <= 1e-9 || nb <= 1e-9) throw ValidationError("cosine: zero-norm vector");
  return std::clamp(dot / (na * nb), -1.0, 1.0);
}

double secs(const EmbeddingSet& generated, const EmbeddingSet& reference) {
  if (generated.size() == 0) throw ValidationError("secs: no generated embeddings");
  const std::size_t d = reference.vectors.dim(1);
  std::map<std::size_t, std::vector<double>> sums;
  std::map<std::size_t, std::size_t> counts;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    auto& s = sums[reference.speakers[i]];
    s.resize(d, 0.0);
    const auto r = reference.row(i);
    for (std::size_t j = 0; j < d; ++j) s[j] += r[j];
    ++counts[reference.speakers[i]];
  }
  double total = 0;
  for (std::size_t i = 0; i < generated.size(); ++i) {
    const auto it = sums.find(generated.speakers[i]);
    if (it == sums.end()) {
      throw ValidationError("secs: no reference embedding for speaker " + std::to_string(generated.speakers[i]));
    }
    std::vector<float> mean(d);
    for (std::size_t j = 0; j < d; ++j) mean[j] = static_cast<float>(it->second[j] / counts[it->first]);
    total += cosine(generated.row(i), mean);
  }
  return total / static_cast<double>(generated.size());
}

namespace {

double mean_pair_cosine(const EmbeddingSet& set, bool same, const char* name) {
  double total = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      if ((set.speakers[i] == set.speakers[j]) != same) continue;
      total += cosine(set.row(i), set.row(j));
      ++pairs;
    }
  if (pairs == 0) throw ValidationError(std::string(name) + ": no eligible embedding pair");
  return total / static_cast<double>(pairs);
}

}  // namespace

double sec(const EmbeddingSet& set) { return mean_pair_cosine(set, true, "sec"); }

double sed(const EmbeddingSet& set) { return mean_pair_cosine(set, false, "sed"); }

std::size_t levenshtein(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  std::vector<std::size_t> prev(hyp.size() + 1), cur(hyp.size() + 1);
  for (std::size_t j = 0; j <= hyp.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= ref.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= hyp.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[hyp.size()];
}

double edit_error_rate(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  if (ref.empty()) throw ValidationError("edit_error_rate: empty reference");
  return static_cast<double>(levenshtein(ref, hyp)) / static_cast<double>(ref.size());
}

std::vector<std::string> word_tokens(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::vector<std::string> char_tokens(const std::string& text) {
  std::vector<std::string> out;
  for (char c : text) out.emplace_back(1, c);
  return out;
}

}  // namespace idfvc::metrics
