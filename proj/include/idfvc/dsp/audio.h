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

#ifndef IDFVC_DSP_AUDIO_H_
#define IDFVC_DSP_AUDIO_H_

#include <cmath>
#include <string>
#include <vector>

namespace idfvc::dsp {

struct Waveform {
  std::vector<float> samples;  // nominally in [-1, 1]
  int sample_rate = 16000;

  double duration_seconds() const { return static_cast<double>(samples.size()) / sample_rate; }
};

// Front-end configuration shared by the mel analysis, Griffin-Lim and F0
// extraction. Defaults are 16 kHz speech settings.
struct StftConfig {
  int sample_rate = 16000;
  int fft_size = 1024;
  int hop = 256;
  int window = 1024;
  int n_mels = 80;
  float fmin = 0.0f;
  float fmax = 8000.0f;
  float log_floor = std::log(1e-5f);

  int n_bins() const { return fft_size / 2 + 1; }
  // Throws ValidationError when the configuration is inconsistent.
  void validate() const;
  // Frames produced for a signal of `length` samples (0 if shorter than a window).
  std::size_t frame_count(std::size_t length) const;
};

// 16-bit PCM mono RIFF/WAVE, little-endian.
Waveform read_wav(const std::string& path);
void write_wav(const std::string& path, const Waveform& wave);

}  // namespace idfvc::dsp

#endif  // IDFVC_DSP_AUDIO_H_
