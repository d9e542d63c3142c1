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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "idfvc/common/errors.h"
#include "idfvc/metrics/metrics.h"
#include "idfvc/nn/layers.h"
#include "support/edit_distance_oracle.h"

namespace idfvc::metrics {
namespace {

using nn::Tensor;

EmbeddingSet set(std::size_t d, std::vector<float> v, std::vector<std::size_t> spk) {
  const std::size_t n = spk.size();
  return EmbeddingSet(Tensor::from({n, d}, std::move(v)), std::move(spk));
}

TEST(Cosine, Examples) {
  const std::vector<float> a = {0.3f, -1.2f, 2.0f};
  EXPECT_NEAR(cosine(a, a), 1.0, 1e-12);
  EXPECT_NEAR(cosine(std::vector<float>{1, 0}, std::vector<float>{0, 1}), 0.0, 1e-12);
  EXPECT_NEAR(cosine(std::vector<float>{1, 1}, std::vector<float>{1, 0}), std::sqrt(0.5), 1e-7);
  EXPECT_THROW(cosine(std::vector<float>{0, 0}, std::vector<float>{1, 0}), ValidationError);
}

TEST(Secs, Examples) {
  EXPECT_NEAR(secs(set(2, {1, 2}, {0}), set(2, {1, 2}, {0})), 1.0, 1e-9);
  EXPECT_NEAR(secs(set(2, {1, 0}, {0}), set(2, {0, 3}, {0})), 0.0, 1e-9);
  // Speaker 0 reference mean (1, 1), speaker 1 reference mean (0, 1).
  const EmbeddingSet ref = set(2, {1, 0, 1, 2, 0, 1}, {0, 0, 1});
  const EmbeddingSet gen = set(2, {1, 0, 1, 1}, {0, 1});
  EXPECT_NEAR(secs(gen, ref), (std::sqrt(0.5) + std::sqrt(0.5)) / 2.0, 1e-7);
  EXPECT_THROW(secs(set(2, {1, 0}, {2}), ref), ValidationError);
}

TEST(SecSed, Examples) {
  EXPECT_NEAR(sec(set(2, {1, 1, 1, 1, 1, 1}, {0, 0, 1})), 1.0, 1e-9);
  EXPECT_NEAR(sec(set(2, {1, 0, 0, 1}, {0, 0})), 0.0, 1e-9);
  // Pairs (0,1), (0,2), (1,2): cosines sqrt(.5), 0, sqrt(.5).
  EXPECT_NEAR(sec(set(2, {1, 0, 1, 1, 0, 1}, {0, 0, 0})), 2 * std::sqrt(0.5) / 3, 1e-7);
  EXPECT_THROW(sec(set(2, {1, 0, 0, 1}, {0, 1})), ValidationError);

  EXPECT_NEAR(sed(set(2, {2, 1, 2, 1, 2, 1}, {0, 1, 2})), 1.0, 1e-9);
  EXPECT_NEAR(sed(set(2, {1, 0, 0, 1}, {0, 1})), 0.0, 1e-9);
  // 2 x 2: speaker 0 {(1,0),(1,1)}, speaker 1 {(0,1),(1,1)}; cross pairs 0, sqrt(.5), sqrt(.5), 1.
  EXPECT_NEAR(sed(set(2, {1, 0, 1, 1, 0, 1, 1, 1}, {0, 0, 1, 1})), (2 * std::sqrt(0.5) + 1) / 4, 1e-7);
  EXPECT_THROW(sed(set(2, {1, 0, 0, 1}, {0, 0})), ValidationError);
}

TEST(SecSed, ScaleInvariantBoundedAndCollapseSignature) {
  nn::Rng rng(6);
  Tensor v = nn::randn({12, 5}, 1.0f, rng);
  std::vector<std::size_t> spk = {0, 0, 0, 1, 1, 1, 2, 2, 2, 3, 3, 3};
  const EmbeddingSet base(v, spk);
  std::vector<float> scaled(v.data().begin(), v.data().end());
  std::uniform_real_distribution<float> factor(0.01f, 100.0f);
  for (std::size_t i = 0; i < 12; ++i) {
    const float f = factor(rng);
    for (std::size_t j = 0; j < 5; ++j) scaled[i * 5 + j] *= f;
  }
  const EmbeddingSet moved(Tensor::from({12, 5}, scaled), spk);
  EXPECT_NEAR(sec(base), sec(moved), 1e-6);
  EXPECT_NEAR(sed(base), sed(moved), 1e-6);
  for (double m : {sec(base), sed(base), secs(base, base)}) {
    EXPECT_GE(m, -1.0);
    EXPECT_LE(m, 1.0);
  }
  const EmbeddingSet collapsed = set(3, std::vector<float>(12 * 3, 0.4f), spk);
  EXPECT_DOUBLE_EQ(sec(collapsed), sed(collapsed));
  EXPECT_NEAR(sec(collapsed), 1.0, 1e-9);
}

TEST(EditErrorRate, Examples) {
  EXPECT_EQ(edit_error_rate(word_tokens("a b c"), word_tokens("a b c")), 0.0);
  EXPECT_NEAR(edit_error_rate(word_tokens("a b c"), word_tokens("a x c")), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(edit_error_rate(char_tokens("abc"), char_tokens("")), 1.0);
  EXPECT_THROW(edit_error_rate({}, word_tokens("a")), ValidationError);
}

TEST(EditErrorRate, MatchesDynamicProgrammingOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const auto [ref, hyp] = testing::random_token_pair(rng);
    ASSERT_EQ(levenshtein(ref, hyp), testing::dp_edit_distance(ref, hyp)) << "trial " << trial;
    const double rate = edit_error_rate(ref, hyp);
    EXPECT_EQ(rate, static_cast<double>(testing::dp_edit_distance(ref, hyp)) / ref.size());
    EXPECT_GE(rate, 0.0);
  }
}

}  // namespace
}  // namespace idfvc::metrics
