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
#include "idfvc/model/content.h"
#include "idfvc/model/decoder.h"
#include "idfvc/model/fv_map.h"
#include "idfvc/model/id_facevc.h"
#include "idfvc/model/pitch_embedding.h"
#include "idfvc/model/safpq.h"
#include "idfvc/model/vq.h"
#include "idfvc/nn/grad_check.h"
#include "idfvc/nn/ops.h"
#include "idfvc/nn/optimizer.h"
#include "support/dense_reference.h"

namespace idfvc::model {
namespace {

using nn::Tensor;

using namespace idfvc::testing;

void expect_close(const Tensor& t, const Dense& ref, double tol) {
  ASSERT_EQ(t.numel(), ref.v.size());
  for (std::size_t i = 0; i < ref.v.size(); ++i) EXPECT_NEAR(t.data()[i], ref.v[i], tol) << "index " << i;
}

Tensor mat(std::size_t r, std::size_t c, std::vector<float> v) { return Tensor::from({r, c}, std::move(v)); }

TEST(AverageFaceFrames, Examples) {
  EXPECT_EQ(average_face_frames(mat(1, 2, {0.3f, -2.0f})).data()[1], -2.0f);
  Tensor same = average_face_frames(mat(2, 2, {1.5f, 2.5f, 1.5f, 2.5f}));
  EXPECT_FLOAT_EQ(same.data()[0], 1.5f);
  EXPECT_FLOAT_EQ(same.data()[1], 2.5f);
  Tensor avg = average_face_frames(mat(2, 2, {1, 3, 3, 5}));
  EXPECT_FLOAT_EQ(avg.data()[0], 2.0f);
  EXPECT_FLOAT_EQ(avg.data()[1], 4.0f);
  EXPECT_THROW(average_face_frames(Tensor()), ValidationError);
}

TEST(Safpq, MatchesDenseReferenceSeed7) {
  nn::Rng rng(7);
  nn::ParameterRegistry reg;
  FacePromptSet prompts(reg, "q", 4, 8, rng);
  SafpqParams params(reg, "s", 8, 8, 8, 1, 8, 8, true, rng);
  Tensor face = nn::randn({3, 8}, 1.0f, rng);
  expect_close(safpq_forward(params, prompts, face), reference_safpq(params, prompts, dense(face)), 1e-5);
}

TEST(Safpq, SingleKeyRowsEqualProjectedFace) {
  nn::Rng rng(1);
  nn::ParameterRegistry reg;
  FacePromptSet prompts(reg, "q", 5, 6, rng);
  SafpqParams params(reg, "s", 6, 4, 4, 1, 8, 3, true, rng);
  auto wv = params.cross_attention.wv.mutable_data();
  std::fill(wv.begin(), wv.end(), 0.0f);
  for (std::size_t i = 0; i < 4; ++i) wv[i * 4 + i] = 1.0f;
  Tensor face = mat(1, 4, {0.1f, -0.7f, 2.0f, 0.4f});
  Tensor a_self = params.self_attention.forward(prompts.prompts, prompts.prompts);
  Tensor a_cross = params.cross_attention.forward(a_self, face);
  for (std::size_t p = 0; p < 5; ++p)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_FLOAT_EQ(a_cross.at(p, j), face.data()[j]);
}

TEST(Safpq, OutputShapeForAnyPromptAndSequenceLength) {
  for (std::size_t p : {1u, 2u, 7u}) {
    for (std::size_t l : {1u, 4u, 9u}) {
      nn::Rng rng(p * 10 + l);
      nn::ParameterRegistry reg;
      FacePromptSet prompts(reg, "q", p, 6, rng);
      SafpqParams params(reg, "s", 6, 5, 4, 2, 8, 3, true, rng);
      Tensor out = safpq_forward(params, prompts, nn::randn({l, 5}, 1.0f, rng));
      EXPECT_EQ(out.shape(), (nn::Shape{1, 3}));
    }
  }
}

TEST(Safpq, RejectsMismatchedFaceWidth) {
  nn::Rng rng(2);
  nn::ParameterRegistry reg;
  FacePromptSet prompts(reg, "q", 2, 6, rng);
  SafpqParams params(reg, "s", 6, 5, 4, 1, 8, 3, true, rng);
  EXPECT_THROW(safpq_forward(params, prompts, nn::randn({2, 4}, 1.0f, rng)), DimensionError);
}

TEST(Safpq, PermutationEquivariantInPromptAxis) {
  nn::Rng rng(5);
  nn::ParameterRegistry reg;
  FacePromptSet prompts(reg, "q", 5, 6, rng);
  SafpqParams face(reg, "f", 6, 4, 8, 2, 8, 3, true, rng);
  SafpqParams spk(reg, "s", 6, 6, 8, 2, 8, 3, false, rng);
  Tensor f = nn::randn({3, 4}, 1.0f, rng);
  Tensor audio = nn::randn({7, 6}, 1.0f, rng);
  const std::vector<std::size_t> perm = {3, 0, 4, 1, 2};
  FacePromptSet permuted;
  permuted.prompts = nn::gather_rows(prompts.prompts, perm);

  Tensor base = safpq_rows(face, prompts, f);
  Tensor moved = safpq_rows(face, permuted, f);
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(moved.at(i, j), base.at(perm[i], j), 1e-6f);

  Tensor sbase = speaker_safpq_rows(spk, prompts, audio);
  Tensor smoved = speaker_safpq_rows(spk, permuted, audio);
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(smoved.at(i, j), sbase.at(perm[i], j), 1e-6f);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(smoved.at(5, j), sbase.at(5, j), 1e-6f);
}

TEST(SpeakerSafpq, ShapeZeroCaseAndDenseReference) {
  nn::Rng rng(7);
  nn::ParameterRegistry reg;
  FacePromptSet prompts(reg, "q", 4, 8, rng);
  SafpqParams params(reg, "s", 8, 8, 8, 1, 8, 5, false, rng);
  for (std::size_t l : {1u, 3u, 11u}) {
    EXPECT_EQ(speaker_safpq_forward(params, prompts, nn::randn({l, 8}, 1.0f, rng)).shape(), (nn::Shape{1, 5}));
  }

  Tensor audio = nn::randn({3, 8}, 1.0f, rng);
  Dense input = dense(prompts.prompts);
  const Dense pooled = mean_rows(dense(audio));
  input.v.insert(input.v.end(), pooled.v.begin(), pooled.v.end());
  input.r += 1;
  const Dense ref = mean_rows(
      linear(linear(reference_block(params.self_attention, input, input), params.ffn.inner, true), params.ffn.outer,
             false));
  expect_close(speaker_safpq_forward(params, prompts, audio), ref, 1e-5);
  expect_close(speaker_safpq_forward(params, prompts, audio), reference_speaker_safpq(params, prompts, dense(audio)),
               1e-5);

  auto q = prompts.prompts.mutable_data();
  std::fill(q.begin(), q.end(), 0.0f);
  Tensor out = speaker_safpq_forward(params, prompts, Tensor::zeros({4, 8}));
  for (float v : out.data()) EXPECT_EQ(v, 0.0f);
}

TEST(Safpq, GradCheck) {
  nn::Rng rng(21);
  nn::ParameterRegistry reg;
  FacePromptSet prompts(reg, "q", 4, 8, rng);
  SafpqParams face(reg, "f", 8, 6, 8, 2, 8, 5, true, rng);
  SafpqParams spk(reg, "s", 8, 8, 8, 1, 8, 5, false, rng);
  Tensor f = nn::randn({3, 6}, 1.0f, rng);
  Tensor audio = nn::randn({5, 8}, 1.0f, rng);
  Tensor w = nn::randn({1, 5}, 1.0f, rng);
  auto loss = [&] {
    return nn::add(nn::sum(nn::mul(safpq_forward(face, prompts, f), w)),
                   nn::sum(nn::square(speaker_safpq_forward(spk, prompts, audio))));
  };
  auto reference = [&] {
    const Dense s = reference_speaker_safpq(spk, prompts, dense(audio));
    return dot(reference_safpq(face, prompts, dense(f)), dense(w)) + dot(s, s);
  };
  EXPECT_LT(nn::grad_check(loss, reg, {}, reference).max_relative_error, 1e-3);
}

TEST(Vq, WorkedExamples) {
  nn::ParameterRegistry reg;
  Codebook cb;
  cb.entries = reg.add("cb", mat(2, 2, {0, 0, 1, 1}));
  EXPECT_EQ(vq_quantize(mat(1, 2, {0.2f, 0.1f}), cb).indices[0], 0u);
  VqResult exact = vq_quantize(mat(1, 2, {1, 1}), cb);
  EXPECT_EQ(exact.indices[0], 1u);
  EXPECT_EQ(exact.commitment.item(), 0.0f);
  EXPECT_EQ(vq_quantize(mat(1, 2, {0.5f, 0.5f}), cb).indices[0], 0u);
  EXPECT_THROW(vq_quantize(mat(1, 2, {0, 0}), Codebook()), ValidationError);
}

TEST(Vq, MatchesBruteForceScan) {
  nn::Rng rng(99);
  nn::ParameterRegistry reg;
  Codebook cb(reg, "cb", 64, 16, rng);
  Tensor z = nn::randn({1000, 16}, 0.5f, rng);
  VqResult r = vq_quantize(z, cb);
  const auto zd = z.data();
  const auto cd = cb.entries.data();
  for (std::size_t i = 0; i < 1000; ++i) {
    std::size_t best = 0;
    double best_d = 1e300;
    for (std::size_t k = 0; k < 64; ++k) {
      double d = 0;
      for (std::size_t j = 0; j < 16; ++j) d += std::pow(double(zd[i * 16 + j]) - cd[k * 16 + j], 2);
      if (d < best_d) best_d = d, best = k;
    }
    ASSERT_EQ(r.indices[i], best) << "row " << i;
    for (std::size_t j = 0; j < 16; ++j) ASSERT_EQ(r.quantized.at(i, j), cd[best * 16 + j]);
  }
}

TEST(Vq, CodebookEntriesAreDistinct) {
  nn::Rng rng(4);
  nn::ParameterRegistry reg;
  Codebook cb(reg, "cb", 64, 16, rng);
  for (std::size_t i = 0; i < 64; ++i)
    for (std::size_t j = i + 1; j < 64; ++j) {
      bool same = true;
      for (std::size_t c = 0; c < 16; ++c) same = same && cb.entries.at(i, c) == cb.entries.at(j, c);
      EXPECT_FALSE(same);
    }
  EXPECT_THROW(Codebook(reg, "small", 1, 4, rng), ValidationError);
}

TEST(Vq, StraightThroughGradientMatchesQuantizedGradient) {
  nn::Rng rng(8);
  nn::ParameterRegistry reg;
  Codebook cb(reg, "cb", 8, 4, rng);
  Tensor z = nn::randn({6, 4}, 0.5f, rng, true);
  Tensor w = nn::randn({6, 4}, 1.0f, rng);
  VqResult r = vq_quantize(z, cb);
  // Capture the gradient reaching the quantized node through an identity hook.
  Tensor q_leaf = Tensor::from(r.quantized.shape(), std::vector<float>(r.quantized.data().begin(),
                                                                       r.quantized.data().end()), true);
  nn::sum(nn::square(nn::mul(q_leaf, w))).backward();
  nn::sum(nn::square(nn::mul(r.quantized, w))).backward();
  ASSERT_TRUE(z.has_grad());
  for (std::size_t i = 0; i < z.numel(); ++i) EXPECT_EQ(z.grad()[i], q_leaf.grad()[i]);
}

// The straight-through path is not the true derivative of the quantizer, so
// each piece is checked where finite differences are meaningful: the commitment
// term w.r.t. the encoder, the codebook term w.r.t. the codebook, and the
// downstream loss w.r.t. the quantized values it consumes.
TEST(Vq, LossGradCheck) {
  nn::Rng rng(12);
  nn::ParameterRegistry enc_reg, cb_reg, dec_reg;
  Codebook cb(cb_reg, "cb", 8, 4, rng);
  nn::LinearLayer enc(enc_reg, "enc", 3, 4, rng);
  nn::LinearLayer dec(dec_reg, "dec", 4, 2, rng);
  Tensor x = nn::randn({10, 3}, 1.0f, rng);
  Tensor y = nn::randn({10, 2}, 1.0f, rng);
  const auto base = vq_quantize(enc.forward(x), cb).indices;
  auto commitment = [&] {
    VqResult r = vq_quantize(enc.forward(x), cb);
    EXPECT_EQ(r.indices, base);
    return r.commitment;
  };
  EXPECT_LT(nn::grad_check(commitment, enc_reg).max_relative_error, 1e-3);
  auto codebook = [&] { return vq_quantize(enc.forward(x), cb).codebook_loss; };
  EXPECT_LT(nn::grad_check(codebook, cb_reg).max_relative_error, 1e-3);
  auto downstream = [&] {
    VqResult r = vq_quantize(enc.forward(x), cb);
    return nn::mean(nn::square(nn::sub(dec.forward(r.quantized), y)));
  };
  EXPECT_LT(nn::grad_check(downstream, dec_reg).max_relative_error, 1e-3);
}

TEST(Cpc, InfoNceClosedForms) {
  EXPECT_NEAR(infonce_loss(Tensor::filled({5, 5}, 0.3f)).item(), std::log(5.0), 1e-6);
  EXPECT_NEAR(infonce_loss(mat(2, 2, {30, 0, 0, 30})).item(), 0.0, 1e-6);
  EXPECT_NEAR(infonce_loss(mat(2, 2, {1, 0, 0, 1})).item(), std::log1p(std::exp(-1.0)), 1e-6);
}

TEST(Cpc, LossIsNonnegativeAndValidatesLength) {
  nn::Rng rng(3);
  nn::ParameterRegistry reg;
  CpcPredictors pred(reg, "cpc", 4, 2, rng);
  std::vector<Tensor> seqs = {nn::randn({6, 4}, 1.0f, rng), nn::randn({5, 4}, 1.0f, rng)};
  EXPECT_GE(cpc_loss(seqs, pred).item(), 0.0f);
  EXPECT_THROW(cpc_loss({nn::randn({2, 4}, 1.0f, rng)}, pred), ValidationError);
  seqs[0] = nn::randn({6, 4}, 1.0f, rng, true);
  reg.add("seq", seqs[0]);
  EXPECT_LT(nn::grad_check([&] { return cpc_loss(seqs, pred); }, reg).max_relative_error, 1e-3);
}

TEST(PitchEmbedding, BinningRules) {
  nn::Rng rng(1);
  nn::ParameterRegistry reg;
  PitchEmbedding pe(reg, "p", 4, 3, -1.0f, 1.0f, rng);
  EXPECT_EQ(pe.bin_of(0.1f), 2u);
  EXPECT_EQ(pe.bin_of(0.0f), 2u);
  EXPECT_EQ(pe.bin_of(0.5f), 3u);
  EXPECT_EQ(pe.bin_of(-0.5f), 1u);
  EXPECT_EQ(pe.bin_of(-5.0f), 0u);
  EXPECT_EQ(pe.bin_of(1.0f), 3u);
  EXPECT_EQ(pe.bin_of(7.0f), 3u);
  for (std::size_t i = 1; i < pe.edges.size(); ++i) EXPECT_LT(pe.edges[i - 1], pe.edges[i]);

  Tensor rows = pitch_embed({0.4f, -0.2f, 1.2f}, {false, false, false}, pe);
  for (std::size_t t = 0; t < 3; ++t)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(rows.at(t, j), pe.table.at(4, j));
  Tensor mixed = pitch_embed({0.1f, 9.0f}, {true, false}, pe);
  EXPECT_EQ(mixed.at(0, 1), pe.table.at(2, 1));
  EXPECT_EQ(mixed.at(1, 1), pe.table.at(4, 1));
}

TEST(Decoder, ShapeZeroCaseAndLengthMismatch) {
  nn::Rng rng(2);
  nn::ParameterRegistry reg;
  MelDecoder dec(reg, "d", 5, 4, 3, 16, 10, rng);
  EXPECT_EQ(dec.forward(Tensor::zeros({1, 5}), Tensor::zeros({7, 4}), Tensor::zeros({7, 3})).shape(),
            (nn::Shape{7, 10}));
  Tensor zero = dec.forward(Tensor::zeros({5}), Tensor::zeros({3, 4}), Tensor::zeros({3, 3}));
  for (float v : zero.data()) EXPECT_EQ(v, 0.0f);
  EXPECT_THROW(dec.forward(Tensor::zeros({5}), Tensor::zeros({3, 4}), Tensor::zeros({4, 3})), DimensionError);
  EXPECT_THROW(dec.forward(Tensor::zeros({6}), Tensor::zeros({3, 4}), Tensor::zeros({3, 3})), DimensionError);
}

TEST(Decoder, LengthPreserving) {
  nn::Rng rng(3);
  nn::ParameterRegistry reg;
  MelDecoder dec(reg, "d", 4, 3, 2, 8, 6, rng);
  nn::NoGradGuard guard;
  Tensor spk = nn::randn({1, 4}, 1.0f, rng);
  Tensor con = nn::randn({512, 3}, 1.0f, rng);
  Tensor pitch = nn::randn({512, 2}, 1.0f, rng);
  for (std::size_t t = 1; t <= 512; ++t) {
    Tensor out = dec.forward(spk, nn::slice_rows(con, 0, t), nn::slice_rows(pitch, 0, t));
    ASSERT_EQ(out.dim(0), t);
  }
}

TEST(Decoder, GradCheck) {
  nn::Rng rng(31);
  nn::ParameterRegistry reg;
  MelDecoder dec(reg, "d", 6, 4, 3, 12, 8, rng);
  Tensor spk = reg.add("spk", nn::randn({1, 6}, 1.0f, rng));
  Tensor con = reg.add("con", nn::randn({5, 4}, 1.0f, rng));
  Tensor pitch = nn::randn({5, 3}, 1.0f, rng);
  Tensor target = nn::randn({5, 8}, 1.0f, rng);
  auto loss = [&] { return nn::mean(nn::square(nn::sub(dec.forward(spk, con, pitch), target))); };
  auto reference = [&] {
    return mean_sq_diff(reference_decoder(dec, dense(spk), dense(con), dense(pitch)), dense(target));
  };
  EXPECT_LT(nn::grad_check(loss, reg, {}, reference).max_relative_error, 1e-3);
}

TEST(Decoder, OverfitsSingleSample) {
  ModelConfig cfg;
  nn::Rng rng(17);
  nn::ParameterRegistry reg;
  MelDecoder dec(reg, "d", cfg.speaker_dim, cfg.content_dim, cfg.pitch_dim, cfg.decoder_hidden, cfg.mel_dim, rng);
  Tensor spk = nn::randn({1, cfg.speaker_dim}, 0.5f, rng);
  Tensor con = nn::randn({32, cfg.content_dim}, 0.5f, rng);
  Tensor pitch = nn::randn({32, cfg.pitch_dim}, 0.5f, rng);
  Tensor target = nn::uniform({32, cfg.mel_dim}, 0.0f, 1.0f, rng);
  nn::Adam opt(reg, 1e-3f);
  float last = 0.0f;
  for (int step = 0; step < 500; ++step) {
    Tensor loss = nn::mean(nn::square(nn::sub(dec.forward(spk, con, pitch), target)));
    last = loss.item();
    loss.backward();
    opt.step();
  }
  EXPECT_LT(last, 0.01f);
}

TEST(FvMap, SingleSlotOrthogonalQueryAndReference) {
  nn::Rng rng(7);
  {
    nn::ParameterRegistry reg;
    FvMap one(reg, "m", 1, 4, rng);
    Tensor out = one.forward(nn::randn({3, 4}, 2.0f, rng));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 4; ++j) EXPECT_FLOAT_EQ(out.at(i, j), one.values.at(0, j));
  }
  {
    nn::ParameterRegistry reg;
    FvMap m(reg, "m", 3, 4, rng);
    auto k = m.keys.mutable_data();
    std::fill(k.begin(), k.end(), 0.0f);
    k[0] = 1.0f, k[4 + 1] = 2.0f, k[8 + 2] = -1.0f;
    Tensor out = m.forward(mat(1, 4, {0, 0, 0, 3}));
    for (std::size_t j = 0; j < 4; ++j) {
      const float mean = (m.values.at(0, j) + m.values.at(1, j) + m.values.at(2, j)) / 3.0f;
      EXPECT_NEAR(out.at(0, j), mean, 1e-6f);
    }
  }
  {
    nn::Rng seeded(7);
    nn::ParameterRegistry reg;
    FvMap m(reg, "m", 4, 8, seeded);
    Tensor u = nn::randn({2, 8}, 1.0f, seeded);
    expect_close(m.forward(u), reference_fv_map(m, dense(u)), 1e-5);
    Tensor target = nn::randn({2, 8}, 1.0f, seeded);
    auto loss = [&] { return nn::sum(nn::mul(m.forward(u), target)); };
    auto reference = [&] { return dot(reference_fv_map(m, dense(u)), dense(target)); };
    EXPECT_LT(nn::grad_check(loss, reg, {}, reference).max_relative_error, 1e-3);
  }
}

TEST(IdFaceVc, BuildsWithDefaultsAndRejectsBadConfig) {
  ModelConfig cfg;
  IdFaceVc model(cfg, 1);
  EXPECT_GT(model.params().size(), 20u);
  nn::Rng rng(5);
  Tensor mel = nn::uniform({12, cfg.mel_dim}, 0.0f, 1.0f, rng);
  EXPECT_EQ(model.speaker_code(mel).shape(), (nn::Shape{1, cfg.speaker_dim}));
  Tensor q = model.face_query(nn::randn({8, cfg.face_dim}, 1.0f, rng));
  EXPECT_EQ(q.shape(), (nn::Shape{1, cfg.speaker_dim}));
  EXPECT_EQ(model.map_face(q).shape(), (nn::Shape{1, cfg.speaker_dim}));

  cfg.heads = 3;
  EXPECT_THROW(IdFaceVc(cfg, 1), ValidationError);
  cfg.heads = 1;
  cfg.codebook_size = 1;
  EXPECT_THROW(IdFaceVc(cfg, 1), ValidationError);
}

TEST(IdFaceVc, SameSeedSameParameters) {
  ModelConfig cfg;
  IdFaceVc a(cfg, 42), b(cfg, 42), c(cfg, 43);
  bool all_equal = true, any_diff = false;
  for (const auto& [name, t] : a.params()) {
    const Tensor& u = b.params().at(name);
    const Tensor& w = c.params().at(name);
    for (std::size_t i = 0; i < t.numel(); ++i) {
      all_equal = all_equal && t.data()[i] == u.data()[i];
      any_diff = any_diff || t.data()[i] != w.data()[i];
    }
  }
  EXPECT_TRUE(all_equal);
  EXPECT_TRUE(any_diff);
}

TEST(MelNormalization, FittedStatisticsStandardizeEachBand) {
  // Two bands: constant 2 (zero spread, so the minimum scale applies) and
  // values {1, 3, 5, 7} with mean 4 and population deviation sqrt(5).
  Tensor a = mat(2, 2, {2.0f, 1.0f, 2.0f, 3.0f});
  Tensor b = mat(2, 2, {2.0f, 5.0f, 2.0f, 7.0f});
  MelScaler s = fit_mel_scaler({a, b}, 0.5f);
  EXPECT_FLOAT_EQ(s.mean.at(0, 0), 2.0f);
  EXPECT_FLOAT_EQ(s.mean.at(0, 1), 4.0f);
  EXPECT_FLOAT_EQ(s.scale.at(0, 0), 0.5f);
  EXPECT_NEAR(s.scale.at(0, 1), std::sqrt(5.0f), 1e-6f);
  Tensor n = normalize_mel(b, s);
  EXPECT_NEAR(n.at(1, 1), 3.0f / std::sqrt(5.0f), 1e-6f);
  EXPECT_FLOAT_EQ(n.at(0, 0), 0.0f);
}

TEST(MelNormalization, RoundTripAndFloor) {
  const float floor = std::log(1e-5f);
  MelScaler s{mat(1, 3, {-4.0f, -4.0f, -4.0f}), mat(1, 3, {2.0f, 2.0f, 2.0f})};
  Tensor mel = mat(1, 3, {floor, 0.0f, -3.0f});
  Tensor back = denormalize_mel(normalize_mel(mel, s), s, floor);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(back.data()[i], mel.data()[i], 1e-5f);
  EXPECT_EQ(denormalize_mel(mat(1, 3, {-10.0f, 0.0f, 0.0f}), s, floor).at(0, 0), floor);
  EXPECT_THROW(normalize_mel(mat(1, 2, {0.0f, 0.0f}), s), DimensionError);
}

TEST(MelNormalization, ModelBuffersStartAsIdentityAndAreNotTrainable) {
  IdFaceVc m(ModelConfig{}, 5);
  Tensor mel = Tensor::filled({2, 80}, -3.0f);
  EXPECT_EQ(m.normalize(mel).data()[7], -3.0f);
  EXPECT_FALSE(m.params().at("mel.mean").requires_grad());
  MelScaler s = fit_mel_scaler({Tensor::filled({3, 80}, 1.0f)});
  m.set_mel_scaler(s);
  EXPECT_EQ(m.params().at("mel.mean").data()[0], 1.0f);
  EXPECT_THROW(m.set_mel_scaler({Tensor::zeros({1, 3}), Tensor::filled({1, 3}, 1.0f)}), DimensionError);
}

}  // namespace
}  // namespace idfvc::model
