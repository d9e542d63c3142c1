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

#ifndef IDFVC_DSP_SPECTRAL_H_
#define IDFVC_DSP_SPECTRAL_H_

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "idfvc/dsp/audio.h"
#include "idfvc/nn/tensor.h"

namespace idfvc::dsp {

// Slaney mel scale: linear below 1 kHz, logarithmic above.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Periodic Hann window.
std::vector<float> hann_window(int length);

struct Spectrogram {
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::vector<std::complex<double>> values;  // [frames x bins]

  std::complex<double>& at(std::size_t t, std::size_t k) { return values[t * bins + k]; }
  const std::complex<double>& at(std::size_t t, std::size_t k) const { return values[t * bins + k]; }
};

// Frames start at t * hop with no centering; see StftConfig::frame_count.
Spectrogram stft(std::span<const float> samples, const StftConfig& cfg);
// Weighted overlap-add inverse; output has (frames - 1) * hop + window samples.
std::vector<float> istft(const Spectrogram& spec, const StftConfig& cfg);

// Triangular filterbank [n_mels x n_bins] with unit peaks.
nn::Tensor mel_filterbank(const StftConfig& cfg);
std::vector<double> mel_center_frequencies(const StftConfig& cfg);

// Hann STFT magnitude -> mel filterbank -> natural log, floored at cfg.log_floor.
// Returns [T x n_mels]. ValidationError when the waveform is shorter than a window.
nn::Tensor mel_spectrogram(const Waveform& wave, const StftConfig& cfg);

// Linear-magnitude estimate [T x n_bins] whose mel projection matches `mel`
// (non-negative least squares by multiplicative updates).
std::vector<float> mel_to_linear(const nn::Tensor& mel, const StftConfig& cfg, int iterations = 200);

// Mel inversion followed by `iters` rounds of Griffin-Lim phase estimation from
// a seeded random initial phase.
Waveform griffin_lim(const nn::Tensor& mel, const StftConfig& cfg, int iters, std::uint64_t seed);

}  // namespace idfvc::dsp

#endif  // IDFVC_DSP_SPECTRAL_H_
