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

#include "idfvc/dsp/pitch.h"

#include <algorithm>
#include <cmath>

#include "idfvc/common/errors.h"

namespace idfvc::dsp {

F0Track extract_f0(const Waveform& wave, const StftConfig& cfg, const PitchSearch& search) {
  if (wave.sample_rate < 8000) {
    throw ValidationError("extract_f0: sample rate " + std::to_string(wave.sample_rate) + " Hz is below 8000 Hz");
  }
  const std::size_t frames = cfg.frame_count(wave.samples.size());
  const std::size_t win = static_cast<std::size_t>(cfg.window), hop = static_cast<std::size_t>(cfg.hop);
  const double fs = wave.sample_rate;
  const std::size_t min_lag = static_cast<std::size_t>(std::floor(fs / search.max_hz));
  const std::size_t max_lag = std::min(static_cast<std::size_t>(std::ceil(fs / search.min_hz)), win - 2);

  F0Track track;
  track.f0_hz.assign(frames, 0.0f);
  track.voiced.assign(frames, false);
  track.normalized_log_f0.assign(frames, 0.0f);

  std::vector<double> x(win), r(max_lag + 2);
  for (std::size_t t = 0; t < frames; ++t) {
    const float* frame = wave.samples.data() + t * hop;
    double mean = 0.0;
    for (std::size_t n = 0; n < win; ++n) mean += frame[n];
    mean /= static_cast<double>(win);
    double energy = 0.0;
    for (std::size_t n = 0; n < win; ++n) {
      x[n] = frame[n] - mean;
      energy += x[n] * x[n];
    }
    if (energy < 1e-10 * static_cast<double>(win)) continue;

    // Biased autocorrelation: the (N - lag) taper favours the first period
    // over its multiples.
    for (std::size_t lag = min_lag - 1; lag <= max_lag + 1; ++lag) {
      double acc = 0.0;
      for (std::size_t n = 0; n + lag < win; ++n) acc += x[n] * x[n + lag];
      r[lag] = acc / energy;
    }
    double best = 0.0;
    for (std::size_t lag = min_lag; lag <= max_lag; ++lag) {
      if (r[lag] > r[lag - 1] && r[lag] >= r[lag + 1]) best = std::max(best, r[lag]);
    }
    if (best <= search.voicing_threshold) continue;
    // Earliest local peak close to the best one guards against octave drops.
    std::size_t chosen = 0;
    for (std::size_t lag = min_lag; lag <= max_lag; ++lag) {
      if (r[lag] > r[lag - 1] && r[lag] >= r[lag + 1] && r[lag] >= 0.9 * best) {
        chosen = lag;
        break;
      }
    }
    const double a = r[chosen - 1], b = r[chosen], c = r[chosen + 1];
    const double curvature = a - 2.0 * b + c;
    const double offset = curvature < 0.0 ? 0.5 * (a - c) / curvature : 0.0;
    const double period = static_cast<double>(chosen) + std::clamp(offset, -0.5, 0.5);
    track.f0_hz[t] = static_cast<float>(fs / period);
    track.voiced[t] = true;
  }

  double sum = 0.0, sum_sq = 0.0;
  std::size_t n_voiced = 0;
  for (std::size_t t = 0; t < frames; ++t) {
    if (!track.voiced[t]) continue;
    const double lf = std::log(track.f0_hz[t]);
    sum += lf;
    sum_sq += lf * lf;
    ++n_voiced;
  }
  if (n_voiced > 0) {
    const double mean = sum / static_cast<double>(n_voiced);
    const double var = std::max(0.0, sum_sq / static_cast<double>(n_voiced) - mean * mean);
    const double sd = std::sqrt(var);
    for (std::size_t t = 0; t < frames; ++t) {
      if (!track.voiced[t]) continue;
      const double centered = std::log(track.f0_hz[t]) - mean;
      track.normalized_log_f0[t] = static_cast<float>(sd > 1e-6 ? centered / sd : 0.0);
    }
  }
  return track;
}

}  // namespace idfvc::dsp
