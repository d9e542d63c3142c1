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

#include "idfvc/model/decoder.h"

#include "idfvc/common/errors.h"
#include "idfvc/nn/ops.h"

namespace idfvc::model {

using nn::Tensor;

MelDecoder::MelDecoder(nn::ParameterRegistry& registry, const std::string& name, std::size_t speaker_dim,
                       std::size_t content_dim, std::size_t pitch_dim, std::size_t hidden, std::size_t mel_dim,
                       nn::Rng& rng)
    : l1(registry, name + ".l1", speaker_dim + content_dim + pitch_dim, hidden, rng),
      l2(registry, name + ".l2", hidden, hidden, rng),
      l3(registry, name + ".l3", hidden, mel_dim, rng) {}

Tensor MelDecoder::forward(const Tensor& spk, const Tensor& con, const Tensor& pitch) const {
  if (con.rank() != 2 || pitch.rank() != 2 || con.dim(0) != pitch.dim(0)) {
    throw DimensionError("decode_mel: content " + nn::shape_to_string(con.shape()) + " and pitch " +
                         nn::shape_to_string(pitch.shape()) + " differ in length");
  }
  const std::size_t spk_dim = spk.numel();
  if (spk_dim + con.dim(1) + pitch.dim(1) != l1.in_features() || (spk.rank() == 2 && spk.dim(0) != 1)) {
    throw DimensionError("decode_mel: speaker " + nn::shape_to_string(spk.shape()) + ", content " +
                         nn::shape_to_string(con.shape()) + " and pitch " + nn::shape_to_string(pitch.shape()) +
                         " do not match the decoder input width " + std::to_string(l1.in_features()));
  }
  Tensor spk_rows = nn::broadcast_rows(nn::reshape(spk, {1, spk_dim}), con.dim(0));
  Tensor x = nn::concat({spk_rows, con, pitch}, 1);
  Tensor h1 = nn::tanh(l1.forward(x));
  Tensor h2 = nn::add(h1, nn::tanh(l2.forward(h1)));
  return l3.forward(h2);
}

}  // namespace idfvc::model
