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

#ifndef IDFVC_DSP_PITCH_H_
#define IDFVC_DSP_PITCH_H_

#include <vector>

#include "idfvc/dsp/audio.h"

namespace idfvc::dsp {

struct F0Track {
  std::vector<float> f0_hz;              // 0 for unvoiced frames
  std::vector<bool> voiced;
  std::vector<float> normalized_log_f0;  // z-scored log F0 over voiced frames; 0 when unvoiced
};

struct PitchSearch {
  float min_hz = 60.0f;
  float max_hz = 500.0f;
  float voicing_threshold = 0.3f;  // normalized autocorrelation peak
};

// Per-frame autocorrelation pitch on the same framing as mel_spectrogram
// (window cfg.window, hop cfg.hop). Requires sample_rate >= 8000.
F0Track extract_f0(const Waveform& wave, const StftConfig& cfg, const PitchSearch& search = {});

}  // namespace idfvc::dsp

#endif  // IDFVC_DSP_PITCH_H_
