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

#ifndef IDFVC_MODEL_DECODER_H_
#define IDFVC_MODEL_DECODER_H_

#include <string>

#include "idfvc/nn/layers.h"
#include "idfvc/nn/tensor.h"

namespace idfvc::model {

// Per-frame mel decoder over [spk, con_t, pitch_t]:
//   h1 = tanh(L1 x), h2 = h1 + tanh(L2 h1), mel_t = L3 h2
struct MelDecoder {
  MelDecoder() = default;
  MelDecoder(nn::ParameterRegistry& registry, const std::string& name, std::size_t speaker_dim,
             std::size_t content_dim, std::size_t pitch_dim, std::size_t hidden, std::size_t mel_dim,
             nn::Rng& rng);

  // spk [1 x d_spk] or [d_spk], con [T x d_con], pitch [T x d_pitch] -> [T x D_mel]
  nn::Tensor forward(const nn::Tensor& spk, const nn::Tensor& con, const nn::Tensor& pitch) const;

  nn::LinearLayer l1, l2, l3;
};

}  // namespace idfvc::model

#endif  // IDFVC_MODEL_DECODER_H_
