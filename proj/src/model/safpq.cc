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

#include "idfvc/model/safpq.h"

#include "idfvc/common/errors.h"
#include "idfvc/nn/ops.h"

namespace idfvc::model {

using nn::Tensor;

FacePromptSet::FacePromptSet(nn::ParameterRegistry& registry, const std::string& name, std::size_t count,
                             std::size_t width, nn::Rng& rng)
    : prompts(registry.add(name, nn::xavier_uniform(count, width, rng))) {
  if (count < 1) throw ValidationError("prompt count must be >= 1");
}

AttentionWeights::AttentionWeights(nn::ParameterRegistry& registry, const std::string& name,
                                   std::size_t query_in, std::size_t key_in, std::size_t width,
                                   std::size_t heads_, nn::Rng& rng)
    : wq(registry.add(name + ".wq", nn::xavier_uniform(query_in, width, rng))),
      wk(registry.add(name + ".wk", nn::xavier_uniform(key_in, width, rng))),
      wv(registry.add(name + ".wv", nn::xavier_uniform(key_in, width, rng))),
      heads(heads_) {
  if (heads == 0 || width % heads != 0) {
    throw ValidationError("attention width " + std::to_string(width) + " is not divisible by " +
                          std::to_string(heads) + " heads");
  }
}

Tensor AttentionWeights::forward(const Tensor& queries, const Tensor& keys) const {
  if (queries.rank() != 2 || queries.dim(1) != wq.dim(0)) {
    throw DimensionError("attention: queries " + nn::shape_to_string(queries.shape()) + " vs Wq " +
                         nn::shape_to_string(wq.shape()));
  }
  if (keys.rank() != 2 || keys.dim(1) != wk.dim(0)) {
    throw DimensionError("attention: keys " + nn::shape_to_string(keys.shape()) + " vs Wk " +
                         nn::shape_to_string(wk.shape()));
  }
  Tensor q = nn::matmul(queries, wq);
  Tensor k = nn::matmul(keys, wk);
  Tensor v = nn::matmul(keys, wv);
  if (heads == 1) return nn::scaled_dot_attention(q, k, v);
  const std::size_t width = wq.dim(1) / heads;
  std::vector<Tensor> outs;
  for (std::size_t h = 0; h < heads; ++h) {
    outs.push_back(nn::scaled_dot_attention(nn::slice_cols(q, h * width, width), nn::slice_cols(k, h * width, width),
                                            nn::slice_cols(v, h * width, width)));
  }
  return nn::concat(outs, 1);
}

FeedForward::FeedForward(nn::ParameterRegistry& registry, const std::string& name, std::size_t in,
                         std::size_t hidden, std::size_t out, nn::Rng& rng)
    : inner(registry, name + ".inner", in, hidden, rng), outer(registry, name + ".outer", hidden, out, rng) {}

Tensor FeedForward::forward(const Tensor& x) const { return outer.forward(nn::tanh(inner.forward(x))); }

SafpqParams::SafpqParams(nn::ParameterRegistry& registry, const std::string& name, std::size_t prompt_width,
                         std::size_t input_dim_, std::size_t attention_dim, std::size_t heads,
                         std::size_t ffn_hidden, std::size_t output_dim, bool with_cross, nn::Rng& rng)
    : self_attention(registry, name + ".self", prompt_width, prompt_width, attention_dim, heads, rng),
      input_dim(input_dim_) {
  if (with_cross) {
    cross_attention = AttentionWeights(registry, name + ".cross", attention_dim, input_dim, attention_dim, heads, rng);
  }
  ffn = FeedForward(registry, name + ".ffn", attention_dim, ffn_hidden, output_dim, rng);
}

Tensor average_face_frames(const Tensor& frames) {
  if (!frames.defined() || frames.rank() != 2) {
    throw ValidationError("average_face_frames: expected a [T x D] tensor with T >= 1");
  }
  return nn::mean_axis(frames, 0);
}

Tensor safpq_rows(const SafpqParams& params, const FacePromptSet& prompts, const Tensor& face_seq) {
  if (!params.cross_attention.wq.defined()) {
    throw ValidationError("safpq_forward: parameters were built without cross-attention");
  }
  if (face_seq.rank() != 2 || face_seq.dim(1) != params.input_dim) {
    throw DimensionError("safpq_forward: face sequence " + nn::shape_to_string(face_seq.shape()) +
                         " does not have width " + std::to_string(params.input_dim));
  }
  Tensor a_self = params.self_attention.forward(prompts.prompts, prompts.prompts);
  Tensor a_cross = params.cross_attention.forward(a_self, face_seq);
  return params.ffn.forward(a_cross);
}

Tensor safpq_forward(const SafpqParams& params, const FacePromptSet& prompts, const Tensor& face_seq) {
  return nn::mean_axis(safpq_rows(params, prompts, face_seq), 0);
}

Tensor safpq_forward_batch(const SafpqParams& params, const FacePromptSet& prompts, const Tensor& faces) {
  if (faces.rank() != 2 || faces.dim(1) != params.input_dim) {
    throw DimensionError("safpq_forward_batch: faces " + nn::shape_to_string(faces.shape()) +
                         " do not have width " + std::to_string(params.input_dim));
  }
  // The prompt self-attention does not depend on the face, so it is shared.
  Tensor a_self = params.self_attention.forward(prompts.prompts, prompts.prompts);
  std::vector<Tensor> rows;
  rows.reserve(faces.dim(0));
  for (std::size_t i = 0; i < faces.dim(0); ++i) {
    Tensor a_cross = params.cross_attention.forward(a_self, nn::slice_rows(faces, i, 1));
    rows.push_back(nn::mean_axis(params.ffn.forward(a_cross), 0));
  }
  return nn::concat(rows, 0);
}

Tensor speaker_safpq_rows(const SafpqParams& params, const FacePromptSet& prompts, const Tensor& audio_feat) {
  if (audio_feat.rank() != 2 || audio_feat.dim(1) != prompts.width()) {
    throw DimensionError("speaker_safpq_forward: audio features " + nn::shape_to_string(audio_feat.shape()) +
                         " must have the prompt width " + std::to_string(prompts.width()));
  }
  Tensor input = nn::concat({prompts.prompts, nn::mean_axis(audio_feat, 0)}, 0);
  Tensor a_self = params.self_attention.forward(input, input);
  return params.ffn.forward(a_self);
}

Tensor speaker_safpq_forward(const SafpqParams& params, const FacePromptSet& prompts, const Tensor& audio_feat) {
  return nn::mean_axis(speaker_safpq_rows(params, prompts, audio_feat), 0);
}

}  // namespace idfvc::model
