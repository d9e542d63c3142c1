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

#ifndef IDFVC_MODEL_SAFPQ_H_
#define IDFVC_MODEL_SAFPQ_H_

#include <string>
#include <vector>

#include "idfvc/nn/layers.h"
#include "idfvc/nn/tensor.h"

// Self-adaptive face-prompted query module (SAFPQ):
//
//   A_self  = softmax(Q Wq_s (Q Wk_s)^T / sqrt(d_k)) Q Wv_s
//   A_cross = softmax(A_self Wq_c (F Wk_c)^T / sqrt(d_k)) F Wv_c
//   F_query = mean over prompt rows of FFN(A_cross)
//
// The speaker-side variant drops the cross-attention stage and instead
// appends the mean-pooled audio feature to Q as one extra pseudo-prompt row.

namespace idfvc::model {

struct FacePromptSet {
  FacePromptSet() = default;
  FacePromptSet(nn::ParameterRegistry& registry, const std::string& name, std::size_t count,
                std::size_t width, nn::Rng& rng);

  std::size_t count() const { return prompts.dim(0); }
  std::size_t width() const { return prompts.dim(1); }

  nn::Tensor prompts;  // Q, [P x d]
};

// Bias-free projections for one attention block, optionally split into heads.
struct AttentionWeights {
  AttentionWeights() = default;
  AttentionWeights(nn::ParameterRegistry& registry, const std::string& name, std::size_t query_in,
                   std::size_t key_in, std::size_t width, std::size_t heads, nn::Rng& rng);

  // queries [Tq x query_in], keys [Tk x key_in] -> [Tq x width]
  nn::Tensor forward(const nn::Tensor& queries, const nn::Tensor& keys) const;

  nn::Tensor wq, wk, wv;
  std::size_t heads = 1;
};

struct FeedForward {
  FeedForward() = default;
  FeedForward(nn::ParameterRegistry& registry, const std::string& name, std::size_t in,
              std::size_t hidden, std::size_t out, nn::Rng& rng);

  nn::Tensor forward(const nn::Tensor& x) const;  // tanh hidden layer

  nn::LinearLayer inner, outer;
};

struct SafpqParams {
  SafpqParams() = default;
  // `with_cross` = false builds the speaker-side variant.
  SafpqParams(nn::ParameterRegistry& registry, const std::string& name, std::size_t prompt_width,
              std::size_t input_dim, std::size_t attention_dim, std::size_t heads, std::size_t ffn_hidden,
              std::size_t output_dim, bool with_cross, nn::Rng& rng);

  AttentionWeights self_attention;
  AttentionWeights cross_attention;  // undefined for the speaker variant
  FeedForward ffn;
  std::size_t input_dim = 0;
};

// Element-wise mean over frames: [T x D] -> [1 x D]. ValidationError when T = 0.
nn::Tensor average_face_frames(const nn::Tensor& frames);

// FFN rows before prompt pooling, [P x out].
nn::Tensor safpq_rows(const SafpqParams& params, const FacePromptSet& prompts, const nn::Tensor& face_seq);
// F_query [1 x out] from a facial embedding sequence [L x D_face].
nn::Tensor safpq_forward(const SafpqParams& params, const FacePromptSet& prompts, const nn::Tensor& face_seq);
// Batched over samples; every row of `faces` is a length-1 sequence. -> [N x out]
nn::Tensor safpq_forward_batch(const SafpqParams& params, const FacePromptSet& prompts, const nn::Tensor& faces);

// Speaker-side rows before pooling, [(P + 1) x out]; the last row belongs to the audio pseudo-prompt.
nn::Tensor speaker_safpq_rows(const SafpqParams& params, const FacePromptSet& prompts, const nn::Tensor& audio_feat);
// F_spk [1 x out] from audio features [L x D_aud].
nn::Tensor speaker_safpq_forward(const SafpqParams& params, const FacePromptSet& prompts, const nn::Tensor& audio_feat);

}  // namespace idfvc::model

#endif  // IDFVC_MODEL_SAFPQ_H_
