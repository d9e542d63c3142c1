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

#ifndef IDFVC_MODEL_CONFIG_H_
#define IDFVC_MODEL_CONFIG_H_

#include <cstddef>

namespace idfvc::model {

// Network widths. The defaults are desk-scale toy sizes.
struct ModelConfig {
  std::size_t face_dim = 64;        // D_face
  std::size_t audio_dim = 64;       // D_aud, also the prompt width
  std::size_t speaker_dim = 32;     // d_spk
  std::size_t content_dim = 16;     // d_con
  std::size_t codebook_size = 64;   // K_codes
  std::size_t prompts = 4;          // P
  std::size_t mel_dim = 80;         // D_mel
  std::size_t memory_slots = 16;    // M
  std::size_t attention_dim = 32;   // d_k summed over heads
  std::size_t heads = 1;
  std::size_t ffn_hidden = 64;
  std::size_t content_hidden = 64;
  std::size_t decoder_hidden = 128;
  std::size_t pitch_bins = 16;
  std::size_t pitch_dim = 8;
  float pitch_lo = -3.0f;
  float pitch_hi = 3.0f;
  std::size_t cpc_steps = 2;
  std::size_t speakers = 4;         // C, classes of the identity heads
  std::size_t qnet_hidden = 64;

  // Throws ValidationError on inconsistent widths.
  void validate() const;
};

}  // namespace idfvc::model

#endif  // IDFVC_MODEL_CONFIG_H_
