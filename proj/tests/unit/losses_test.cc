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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "idfvc/common/errors.h"
#include "idfvc/losses/losses.h"
#include "idfvc/nn/grad_check.h"
#include "idfvc/nn/ops.h"
#include "idfvc/nn/optimizer.h"
#include "support/loss_reference.h"

namespace idfvc::losses {
namespace {

using nn::Tensor;
using namespace idfvc::testing;

Tensor mat(std::size_t r, std::size_t c, std::vector<float> v, bool grad = false) {
  return Tensor::from({r, c}, std::move(v), grad);
}

TEST(Contrastive, ClosedForms) {
  EXPECT_NEAR(contrastive_loss(mat(1, 3, {1, 2, 3}), mat(1, 3, {-1, 0, 2}), SpeakerLabels({0}, 2)).item(), 0.0, 1e-6);
  Tensor same = Tensor::filled({5, 3}, 0.7f);
  EXPECT_NEAR(contrastive_loss(same, same, SpeakerLabels({0, 1, 2, 3, 4}, 5)).item(), std::log(5.0), 1e-6);
  Tensor eye = mat(2, 2, {1, 0, 0, 1});
  EXPECT_NEAR(contrastive_loss(eye, eye, SpeakerLabels({0, 1}, 2), 1.0f).item(), std::log1p(std::exp(-1.0)), 1e-6);
  EXPECT_THROW(contrastive_loss(eye, eye, SpeakerLabels({0, 1}, 2), 0.0f), ValidationError);
  EXPECT_THROW(contrastive_loss(eye, eye, SpeakerLabels({0, 1}, 2), -1.0f), ValidationError);
}

TEST(Contrastive, MatchesReferenceAndIsPermutationInvariant) {
  nn::Rng rng(4);
  Tensor face = nn::randn({8, 6}, 1.0f, rng), speech = nn::randn({8, 6}, 1.0f, rng);
  const std::vector<std::size_t> ids = {0, 1, 2, 0, 1, 3, 3, 2};
  const float l = contrastive_loss(face, speech, SpeakerLabels(ids, 4)).item();
  EXPECT_NEAR(l, reference_contrastive(dense(face), dense(speech), ids, 0.07), 1e-4);
  std::vector<std::size_t> perm(8);
  std::iota(perm.begin(), perm.end(), 0);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::size_t> pids;
    for (std::size_t p : perm) pids.push_back(ids[p]);
    const float lp =
        contrastive_loss(nn::gather_rows(face, perm), nn::gather_rows(speech, perm), SpeakerLabels(pids, 4)).item();
    EXPECT_NEAR(lp, l, 1e-5f * std::max(1.0f, l));
  }
}

TEST(Contrastive, DecreasesWhenPositiveSimilarityIncreases) {
  // Unit rows on a circle; rotating speech_0 toward face_0 raises sim(0, 0) only.
  const std::vector<std::size_t> ids = {0, 1, 2};
  auto loss_at = [&](double angle) {
    Tensor face = mat(3, 2, {1, 0, 0, 1, -1, 0});
    Tensor speech = mat(3, 2, {float(std::cos(angle)), float(std::sin(angle)), 0.6f, 0.8f, -0.8f, -0.6f});
    return contrastive_loss(face, speech, SpeakerLabels(ids, 3), 0.5f).item();
  };
  float prev = loss_at(1.2);
  for (double a : {1.0, 0.8, 0.6, 0.4, 0.2}) {
    const float cur = loss_at(a);
    EXPECT_LT(cur, prev) << "angle " << a;
    prev = cur;
  }
}

TEST(IdSupervision, ClosedForms) {
  nn::Rng rng(1);
  nn::ParameterRegistry reg;
  nn::LinearLayer head(reg, "h", 2, 8, rng);
  std::fill(head.weight.mutable_data().begin(), head.weight.mutable_data().end(), 0.0f);
  EXPECT_NEAR(id_supervision_loss(mat(3, 2, {1, 2, 3, 4, 5, 6}), head, SpeakerLabels({0, 3, 7}, 8)).item(),
              std::log(8.0), 1e-6);

  nn::ParameterRegistry reg2;
  nn::LinearLayer two(reg2, "h", 1, 2, rng);
  two.weight.mutable_data()[0] = 2.0f;
  two.weight.mutable_data()[1] = 0.0f;
  EXPECT_NEAR(id_supervision_loss(mat(1, 1, {1}), two, SpeakerLabels({0}, 2)).item(), 0.126928, 1e-6);
  two.weight.mutable_data()[0] = 30.0f;
  EXPECT_NEAR(id_supervision_loss(mat(1, 1, {1}), two, SpeakerLabels({0}, 2)).item(), 0.0, 1e-6);
  EXPECT_THROW(SpeakerLabels({0, 2}, 2), ValidationError);
  EXPECT_THROW(id_supervision_loss(mat(1, 1, {1}), two, SpeakerLabels({0}, 3)), ValidationError);
}

GaussianParams gaussian(Tensor mean, Tensor logvar) { return GaussianParams{std::move(mean), std::move(logvar)}; }

TEST(Club, ClosedForms) {
  // N = 1: the only term is i = j.
  EXPECT_EQ(club_mi_upper(gaussian(mat(1, 2, {0.3f, -1}), mat(1, 2, {0.2f, 0.1f})), mat(1, 2, {4, 5})).item(), 0.0f);
  // q independent of spk: every row of the Gaussian is the same.
  Tensor con = mat(4, 1, {0.1f, -2, 0.7f, 3});
  EXPECT_NEAR(club_mi_upper(gaussian(Tensor::filled({4, 1}, 0.4f), Tensor::filled({4, 1}, -0.3f)), con).item(), 0.0,
              1e-6);
  // Unit variance, mean = spk, spk = con = (0, 1): the two off-diagonal terms
  // each contribute 0 - (-1/2), so (1/4)(1/2 + 1/2) = 0.25.
  Tensor sc = mat(2, 1, {0, 1});
  const double expected = reference_club({dense(sc), dense(Tensor::zeros({2, 1}))}, dense(sc));
  EXPECT_NEAR(expected, 0.25, 1e-12);
  EXPECT_NEAR(club_mi_upper(gaussian(sc, Tensor::zeros({2, 1})), sc).item(), expected, 1e-6);
}

TEST(Club, MatchesDoubleSumOracle) {
  for (std::size_t n : {1u, 2u, 5u, 17u, 32u}) {
    nn::Rng rng(100 + n);
    nn::ParameterRegistry reg;
    VariationalNet q(reg, "q", 6, 4, 16, rng);
    Tensor spk = nn::randn({n, 6}, 1.0f, rng), con = nn::randn({n, 4}, 1.0f, rng);
    const double ref = reference_club(reference_qnet(q, dense(spk)), dense(con));
    EXPECT_NEAR(club_mi_upper(spk, con, q).item(), ref, 1e-5) << "N=" << n;
  }
}

TEST(Club, CorrelatedPairsScoreAboveShuffledPairs) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    nn::Rng rng(seed);
    const std::size_t n = 1024;
    Tensor spk = nn::randn({n, 1}, 1.0f, rng);
    // Noise variance 0.19: correlation 1/sqrt(1.19) ~ 0.92.
    Tensor con = nn::add(spk, nn::randn({n, 1}, std::sqrt(0.19f), rng));
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Tensor shuffled = nn::gather_rows(con, perm);

    auto fitted = [&](const Tensor& c) {
      nn::ParameterRegistry reg;
      nn::Rng qrng(seed * 7);
      VariationalNet q(reg, "q", 1, 1, 32, qrng);
      nn::Adam opt(reg, 1e-2f);
      fit_qnet(q, opt, spk, c, 400);
      return club_mi_upper(spk, c, q).item();
    };
    const float dep = fitted(con), indep = fitted(shuffled);
    EXPECT_GE(dep - indep, 0.3f) << "seed " << seed;
    EXPECT_NEAR(indep, 0.0f, 0.1f) << "seed " << seed;
    // With the exact conditional the bound is (var(c) + var(s) - 0.19) / (2 * 0.19) = 5.26.
    EXPECT_NEAR(dep, 5.26f, 1.5f) << "seed " << seed;
  }
}

TEST(QnetNll, ClosedFormsAndBounds) {
  EXPECT_NEAR(qnet_nll(gaussian(mat(1, 1, {0.3f}), mat(1, 1, {0})), mat(1, 1, {0.3f})).item(),
              0.5 * std::log(2 * M_PI), 1e-6);
  const float near = qnet_nll(gaussian(mat(1, 1, {0}), mat(1, 1, {0})), mat(1, 1, {0.5f})).item();
  const float far = qnet_nll(gaussian(mat(1, 1, {0}), mat(1, 1, {0})), mat(1, 1, {1.0f})).item();
  EXPECT_GT(far, near);
  nn::Rng rng(2);
  nn::ParameterRegistry reg;
  VariationalNet q(reg, "q", 2, 2, 4, rng);
  auto b = q.logvar_out.bias.mutable_data();
  b[0] = 50.0f;
  b[1] = -50.0f;
  GaussianParams g = q.forward(mat(1, 2, {0.1f, 0.2f}));
  EXPECT_EQ(g.logvar.data()[0], 8.0f);
  EXPECT_EQ(g.logvar.data()[1], -8.0f);
  EXPECT_TRUE(std::isfinite(qnet_nll(mat(1, 2, {0.1f, 0.2f}), mat(1, 2, {3, -3}), q).item()));
}

TEST(Recon, ClosedForms) {
  Tensor a = mat(2, 2, {1, 2, 3, 4});
  EXPECT_EQ(recon_loss(a, a).item(), 0.0f);
  EXPECT_EQ(recon_loss(Tensor::filled({3, 5}, 1.0f), Tensor::zeros({3, 5})).item(), 1.0f);
  EXPECT_EQ(recon_loss(a, mat(2, 2, {1, 2, 3, 0})).item(), 4.0f);
  EXPECT_THROW(recon_loss(a, Tensor::zeros({2, 3})), DimensionError);
}

TEST(FvMapping, ClosedForms) {
  Tensor m = mat(3, 2, {0.1f, 0.2f, 0.1f, 0.2f, 0.1f, 0.2f});
  EXPECT_EQ(fv_mapping_loss(m, m, SpeakerLabels({1, 1, 1}, 2)).item(), 0.0f);
  Tensor apart = mat(2, 2, {0, 0, 1.5f, 0});
  EXPECT_NEAR(fv_mapping_loss(apart, apart, SpeakerLabels({0, 1}, 2)).item(), 0.0, 1e-7);
  Tensor close = mat(2, 2, {0, 0, 0.4f, 0});
  EXPECT_NEAR(fv_mapping_loss(close, close, SpeakerLabels({0, 1}, 2)).item(), 0.6, 1e-6);
  // Three codes, two speakers: pairs (0,2) and (1,2), both at distance 0.4.
  Tensor tri = mat(3, 1, {0, 0, 0.4f});
  EXPECT_NEAR(fv_mapping_loss(tri, tri, SpeakerLabels({0, 0, 1}, 2)).item(), 0.6, 1e-6);
}

TEST(Total, WeightedSumAndLinearity) {
  LossWeights w;
  auto parts = [](float rec, float con, float mi, float idf, float ids, float fv) {
    return LossTerms{Tensor::scalar(rec), Tensor::scalar(con), Tensor::scalar(mi),
                     Tensor::scalar(idf), Tensor::scalar(ids), Tensor::scalar(fv)};
  };
  EXPECT_EQ(total_loss(parts(0, 0, 0, 0, 0, 0), w).item(), 0.0f);
  EXPECT_NEAR(total_loss(parts(1, 1, 1, 1, 1, 1), w).item(), 2.31, 1e-6);
  EXPECT_EQ(total_loss(parts(2, 0, 0, 0, 0, 0), w).item(), 2.0f);

  const float base = total_loss(parts(0.3f, 1.7f, 0.2f, 0.9f, 1.1f, 0.4f), w).item();
  const float weights[] = {1.0f, w.con, w.mi, w.idf, w.ids, w.fv};
  const float values[] = {0.3f, 1.7f, 0.2f, 0.9f, 1.1f, 0.4f};
  for (int k = 0; k < 6; ++k) {
    float v[6];
    std::copy(values, values + 6, v);
    v[k] *= 2.0f;
    const float doubled = total_loss(parts(v[0], v[1], v[2], v[3], v[4], v[5]), w).item();
    EXPECT_NEAR(doubled - base, weights[k] * values[k], 1e-6) << "term " << k;
  }
  try {
    total_loss(parts(1, 1, std::nanf(""), 1, 1, 1), w);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("L_MI"), std::string::npos);
  }
  w.mi = -1.0f;
  EXPECT_THROW(total_loss(parts(1, 1, 1, 1, 1, 1), w), ValidationError);
}

TEST(LossGradients, AllLossesPassGradCheck) {
  nn::Rng rng(77);
  const std::size_t n = 6;
  const std::vector<std::size_t> ids = {0, 1, 0, 2, 1, 2};
  const SpeakerLabels labels(ids, 3);

  {
    nn::ParameterRegistry reg;
    Tensor face = reg.add("face", nn::randn({n, 5}, 1.0f, rng));
    Tensor speech = reg.add("speech", nn::randn({n, 5}, 1.0f, rng));
    auto loss = [&] { return contrastive_loss(face, speech, labels, 0.5f); };
    auto ref = [&] { return reference_contrastive(dense(face), dense(speech), ids, 0.5); };
    EXPECT_LT(nn::grad_check(loss, reg, {}, ref).max_relative_error, 1e-3) << "contrastive";
  }
  {
    nn::ParameterRegistry reg;
    Tensor x = reg.add("x", nn::randn({n, 4}, 1.0f, rng));
    nn::LinearLayer head(reg, "head", 4, 3, rng);
    auto loss = [&] { return id_supervision_loss(x, head, labels); };
    auto ref = [&] { return reference_cross_entropy(linear(dense(x), head, false), ids); };
    EXPECT_LT(nn::grad_check(loss, reg, {}, ref).max_relative_error, 1e-3) << "id supervision";
  }
  {
    nn::ParameterRegistry reg;
    VariationalNet q(reg, "q", 4, 3, 8, rng);
    Tensor spk = reg.add("spk", nn::randn({n, 4}, 1.0f, rng));
    Tensor con = reg.add("con", nn::randn({n, 3}, 1.0f, rng));
    auto club = [&] { return club_mi_upper(spk, con, q); };
    auto club_ref = [&] { return reference_club(reference_qnet(q, dense(spk)), dense(con)); };
    EXPECT_LT(nn::grad_check(club, reg, {}, club_ref).max_relative_error, 1e-3) << "club";
    auto nll = [&] { return qnet_nll(spk, con, q); };
    auto nll_ref = [&] { return reference_qnet_nll(reference_qnet(q, dense(spk)), dense(con)); };
    EXPECT_LT(nn::grad_check(nll, reg, {}, nll_ref).max_relative_error, 1e-3) << "qnet nll";
  }
  {
    nn::ParameterRegistry reg;
    Tensor mel = nn::randn({4, 5}, 1.0f, rng);
    Tensor hat = reg.add("hat", nn::randn({4, 5}, 1.0f, rng));
    auto loss = [&] { return recon_loss(mel, hat); };
    auto ref = [&] { return mean_sq_diff(dense(mel), dense(hat)); };
    EXPECT_LT(nn::grad_check(loss, reg, {}, ref).max_relative_error, 1e-3) << "recon";
  }
  {
    nn::ParameterRegistry reg;
    Tensor mapped = reg.add("mapped", nn::randn({n, 3}, 0.3f, rng));
    Tensor target = nn::randn({n, 3}, 1.0f, rng);
    auto loss = [&] { return fv_mapping_loss(mapped, target, labels); };
    auto ref = [&] { return reference_fv_mapping(dense(mapped), dense(target), ids, 1.0); };
    EXPECT_LT(nn::grad_check(loss, reg, {}, ref).max_relative_error, 1e-3) << "fv mapping";
  }
  {
    nn::ParameterRegistry reg;
    Tensor p = reg.add("parts", nn::randn({6}, 1.0f, rng));
    const LossWeights w;
    auto loss = [&] {
      return total_loss({nn::slice_rows(nn::reshape(p, {6, 1}), 0, 1), nn::slice_rows(nn::reshape(p, {6, 1}), 1, 1),
                         nn::slice_rows(nn::reshape(p, {6, 1}), 2, 1), nn::slice_rows(nn::reshape(p, {6, 1}), 3, 1),
                         nn::slice_rows(nn::reshape(p, {6, 1}), 4, 1), nn::slice_rows(nn::reshape(p, {6, 1}), 5, 1)},
                        w);
    };
    auto ref = [&] {
      const auto v = p.data();
      return double(v[0]) + w.con * double(v[1]) + w.mi * double(v[2]) + w.idf * double(v[3]) +
             w.ids * double(v[4]) + w.fv * double(v[5]);
    };
    EXPECT_LT(nn::grad_check(loss, reg, {}, ref).max_relative_error, 1e-3) << "total";
  }
}

}  // namespace
}  // namespace idfvc::losses
