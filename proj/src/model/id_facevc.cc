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

#include "idfvc/model/id_facevc.h"

#include <algorithm>
#include <cmath>

#include "idfvc/common/errors.h"
#include "idfvc/nn/ops.h"

namespace idfvc::model {

using nn::Tensor;

void ModelConfig::validate() const {
  auto positive = [](std::size_t v, const char* name) {
    if (v == 0) throw ValidationError(std::string("model config: ") + name + " must be positive");
  };
  positive(face_dim, "face_dim");
  positive(audio_dim, "audio_dim");
  positive(speaker_dim, "speaker_dim");
  positive(content_dim, "content_dim");
  positive(prompts, "prompts");
  positive(mel_dim, "mel_dim");
  positive(memory_slots, "memory_slots");
  positive(attention_dim, "attention_dim");
  positive(heads, "heads");
  positive(ffn_hidden, "ffn_hidden");
  positive(content_hidden, "content_hidden");
  positive(decoder_hidden, "decoder_hidden");
  positive(pitch_bins, "pitch_bins");
  positive(pitch_dim, "pitch_dim");
  positive(cpc_steps, "cpc_steps");
  positive(qnet_hidden, "qnet_hidden");
  if (codebook_size < 2) throw ValidationError("model config: codebook_size must be >= 2");
  if (speakers < 2) throw ValidationError("model config: speakers must be >= 2");
  if (attention_dim % heads != 0) throw ValidationError("model config: attention_dim must be divisible by heads");
  if (!(pitch_lo < pitch_hi)) throw ValidationError("model config: pitch_lo must be below pitch_hi");
}

MelScaler fit_mel_scaler(const std::vector<Tensor>& mels, float min_scale) {
  if (mels.empty()) throw ValidationError("fit_mel_scaler: no mels");
  const std::size_t d = mels.front().dim(1);
  std::vector<double> sum(d, 0.0), sq(d, 0.0);
  double n = 0.0;
  for (const auto& m : mels) {
    if (m.rank() != 2 || m.dim(1) != d) throw DimensionError("fit_mel_scaler: mels disagree on band count");
    for (std::size_t t = 0; t < m.dim(0); ++t) {
      for (std::size_t k = 0; k < d; ++k) {
        const double v = m.at(t, k);
        sum[k] += v;
        sq[k] += v * v;
      }
    }
    n += static_cast<double>(m.dim(0));
  }
  std::vector<float> mean(d), scale(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double mu = sum[k] / n;
    mean[k] = static_cast<float>(mu);
    scale[k] = std::max(min_scale, static_cast<float>(std::sqrt(std::max(0.0, sq[k] / n - mu * mu))));
  }
  return {Tensor::from({1, d}, std::move(mean)), Tensor::from({1, d}, std::move(scale))};
}

namespace {

void check_scaler(const Tensor& mel, const MelScaler& s) {
  if (mel.rank() != 2 || mel.dim(1) != s.mean.dim(1)) {
    throw DimensionError("mel " + nn::shape_to_string(mel.shape()) + " does not have " +
                         std::to_string(s.mean.dim(1)) + " bands");
  }
}

}  // namespace

Tensor normalize_mel(const Tensor& mel, const MelScaler& s) {
  check_scaler(mel, s);
  const std::size_t t = mel.dim(0), d = mel.dim(1);
  std::vector<float> out(t * d);
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t k = 0; k < d; ++k) out[i * d + k] = (mel.at(i, k) - s.mean.at(0, k)) / s.scale.at(0, k);
  }
  return Tensor::from({t, d}, std::move(out));
}

Tensor denormalize_mel(const Tensor& normalized, const MelScaler& s, float log_floor) {
  check_scaler(normalized, s);
  const std::size_t t = normalized.dim(0), d = normalized.dim(1);
  std::vector<float> out(t * d);
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      out[i * d + k] = std::max(log_floor, normalized.at(i, k) * s.scale.at(0, k) + s.mean.at(0, k));
    }
  }
  return Tensor::from({t, d}, std::move(out));
}

namespace {
const ModelConfig& checked(const ModelConfig& c) {
  c.validate();
  return c;
}
}  // namespace

IdFaceVc::IdFaceVc(const ModelConfig& config, std::uint64_t seed) : config_(checked(config)) {
  nn::Rng rng(seed);
  const ModelConfig& c = config_;
  face_prompts = FacePromptSet(params_, "face.prompts", c.prompts, c.audio_dim, rng);
  face_safpq = SafpqParams(params_, "face.safpq", c.audio_dim, c.face_dim, c.attention_dim, c.heads, c.ffn_hidden,
                           c.speaker_dim, true, rng);
  speaker_prompts = FacePromptSet(params_, "speaker.prompts", c.prompts, c.audio_dim, rng);
  speaker_safpq = SafpqParams(params_, "speaker.safpq", c.audio_dim, c.audio_dim, c.attention_dim, c.heads,
                              c.ffn_hidden, c.speaker_dim, false, rng);
  audio_proj = nn::LinearLayer(params_, "speaker.audio_proj", c.mel_dim, c.audio_dim, rng);
  content_encoder = ContentEncoder(params_, "content.encoder", c.mel_dim, c.content_hidden, c.content_dim, rng);
  codebook = Codebook(params_, "content.codebook", c.codebook_size, c.content_dim, rng);
  cpc = CpcPredictors(params_, "content.cpc", c.content_dim, c.cpc_steps, rng);
  mel_scaler.mean = params_.add("mel.mean", Tensor::zeros({1, c.mel_dim}));
  mel_scaler.scale = params_.add("mel.scale", Tensor::filled({1, c.mel_dim}, 1.0f));
  mel_scaler.mean.set_requires_grad(false);
  mel_scaler.scale.set_requires_grad(false);
  pitch = PitchEmbedding(params_, "pitch.table", c.pitch_bins, c.pitch_dim, c.pitch_lo, c.pitch_hi, rng);
  decoder = MelDecoder(params_, "decoder", c.speaker_dim, c.content_dim, c.pitch_dim, c.decoder_hidden, c.mel_dim,
                       rng);
  fv_map = FvMap(params_, "fv_map", c.memory_slots, c.speaker_dim, rng);
  face_head = nn::LinearLayer(params_, "head.face", c.speaker_dim, c.speakers, rng);
  speech_head = nn::LinearLayer(params_, "head.speech", c.speaker_dim, c.speakers, rng);
}

Tensor IdFaceVc::audio_features(const Tensor& mel_norm) const { return nn::tanh(audio_proj.forward(mel_norm)); }

Tensor IdFaceVc::speaker_code(const Tensor& mel_norm) const {
  return nn::l2_normalize_rows(speaker_safpq_forward(speaker_safpq, speaker_prompts, audio_features(mel_norm)));
}

void IdFaceVc::set_mel_scaler(const MelScaler& scaler) {
  if (scaler.mean.shape() != mel_scaler.mean.shape() || scaler.scale.shape() != mel_scaler.scale.shape()) {
    throw DimensionError("set_mel_scaler: statistics must be [1 x " + std::to_string(config_.mel_dim) + "]");
  }
  for (float v : scaler.scale.data()) {
    if (!(v > 0.0f) || !std::isfinite(v)) throw ValidationError("set_mel_scaler: scales must be positive");
  }
  std::copy(scaler.mean.data().begin(), scaler.mean.data().end(), mel_scaler.mean.mutable_data().begin());
  std::copy(scaler.scale.data().begin(), scaler.scale.data().end(), mel_scaler.scale.mutable_data().begin());
}

Tensor IdFaceVc::face_query(const Tensor& face_frames) const {
  return safpq_forward(face_safpq, face_prompts, average_face_frames(face_frames));
}

Tensor IdFaceVc::face_query_batch(const Tensor& faces) const {
  return safpq_forward_batch(face_safpq, face_prompts, faces);
}

Tensor IdFaceVc::map_face(const Tensor& f_query) const { return fv_map.forward(nn::l2_normalize_rows(f_query)); }

}  // namespace idfvc::model
