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

#ifndef IDFVC_MODEL_ID_FACEVC_H_
#define IDFVC_MODEL_ID_FACEVC_H_

#include <cstdint>
#include <vector>

#include "idfvc/model/config.h"
#include "idfvc/model/content.h"
#include "idfvc/model/decoder.h"
#include "idfvc/model/fv_map.h"
#include "idfvc/model/pitch_embedding.h"
#include "idfvc/model/safpq.h"
#include "idfvc/model/vq.h"
#include "idfvc/nn/layers.h"

namespace idfvc::model {

// Per-band affine map between log-mel and the network's working scale. The
// statistics are stored with the model (never trained) and set from the
// training data by fit_mel_scaler.
struct MelScaler {
  nn::Tensor mean;   // [1 x D_mel]
  nn::Tensor scale;  // [1 x D_mel], positive
};

// Per-band mean and standard deviation over all frames; bands whose deviation
// is below min_scale use min_scale.
MelScaler fit_mel_scaler(const std::vector<nn::Tensor>& mels, float min_scale = 1e-3f);
// (mel - mean) / scale, row by row. Not differentiable (inputs are data).
nn::Tensor normalize_mel(const nn::Tensor& mel, const MelScaler& scaler);
// Inverse map, clamped so no value drops below the log floor.
nn::Tensor denormalize_mel(const nn::Tensor& normalized, const MelScaler& scaler, float log_floor);

class IdFaceVc {
  // Declared first so they exist before the layers register into them.
  ModelConfig config_;
  nn::ParameterRegistry params_;

 public:
  IdFaceVc(const ModelConfig& config, std::uint64_t seed);
  IdFaceVc(const IdFaceVc&) = delete;
  IdFaceVc& operator=(const IdFaceVc&) = delete;

  const ModelConfig& config() const { return config_; }
  nn::ParameterRegistry& params() { return params_; }
  const nn::ParameterRegistry& params() const { return params_; }

  // Installs scaler statistics (copied into the mel.* buffers).
  void set_mel_scaler(const MelScaler& scaler);
  nn::Tensor normalize(const nn::Tensor& mel) const { return normalize_mel(mel, mel_scaler); }
  nn::Tensor denormalize(const nn::Tensor& normalized, float log_floor) const {
    return denormalize_mel(normalized, mel_scaler, log_floor);
  }

  // Frame-wise audio features for the speaker encoder, [T x D_aud].
  nn::Tensor audio_features(const nn::Tensor& mel_norm) const;
  // F_spk [1 x d_spk] from a normalized mel: the speaker SAFPQ output scaled to
  // unit length, so the decoder condition and the mapping target stay bounded.
  nn::Tensor speaker_code(const nn::Tensor& mel_norm) const;
  // F_query [1 x d_spk] from face frames [T_f x D_face] (frames are averaged first).
  nn::Tensor face_query(const nn::Tensor& face_frames) const;
  // F_query for a batch of already averaged faces [N x D_face] -> [N x d_spk].
  nn::Tensor face_query_batch(const nn::Tensor& faces) const;
  // Speaker code predicted from F_query rows; the query is unit-normalized first.
  nn::Tensor map_face(const nn::Tensor& f_query) const;

  FacePromptSet face_prompts;
  SafpqParams face_safpq;
  FacePromptSet speaker_prompts;
  SafpqParams speaker_safpq;
  nn::LinearLayer audio_proj;
  ContentEncoder content_encoder;
  Codebook codebook;
  CpcPredictors cpc;
  PitchEmbedding pitch;
  MelDecoder decoder;
  FvMap fv_map;
  nn::LinearLayer face_head;    // identity classifier on F_query
  nn::LinearLayer speech_head;  // identity classifier on F_spk
  MelScaler mel_scaler;         // buffers "mel.mean" / "mel.scale"; start as the identity map
};

}  // namespace idfvc::model

#endif  // IDFVC_MODEL_ID_FACEVC_H_
