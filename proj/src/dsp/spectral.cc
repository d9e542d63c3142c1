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

#include "idfvc/dsp/spectral.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "idfvc/common/errors.h"

namespace idfvc::dsp {

namespace {

constexpr double kLinearHzPerMel = 200.0 / 3.0;
constexpr double kLogRegionHz = 1000.0;
constexpr double kLogRegionMel = kLogRegionHz / kLinearHzPerMel;  // 15
const double kLogStep = std::log(6.4) / 27.0;

// Owns FFTW buffers and plans for one transform size.
class RealFft {
 public:
  explicit RealFft(int n) : n_(n) {
    in_ = fftw_alloc_real(static_cast<std::size_t>(n));
    out_ = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
    forward_ = fftw_plan_dft_r2c_1d(n, in_, out_, FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_c2r_1d(n, out_, in_, FFTW_ESTIMATE);
  }
  ~RealFft() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
    fftw_free(in_);
    fftw_free(out_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  double* real() { return in_; }
  std::complex<double>* spectrum() { return reinterpret_cast<std::complex<double>*>(out_); }
  void forward() { fftw_execute(forward_); }
  // Unnormalized: the caller divides by n.
  void inverse() { fftw_execute(inverse_); }
  int size() const { return n_; }

 private:
  int n_;
  double* in_;
  fftw_complex* out_;
  fftw_plan forward_, inverse_;
};

struct Band {
  std::size_t first = 0, last = 0;  // inclusive bin range with nonzero weight
};

std::vector<Band> band_ranges(const nn::Tensor& fb) {
  const std::size_t mels = fb.dim(0), bins = fb.dim(1);
  std::vector<Band> bands(mels);
  for (std::size_t m = 0; m < mels; ++m) {
    bool seen = false;
    for (std::size_t k = 0; k < bins; ++k) {
      if (fb.data()[m * bins + k] > 0.0f) {
        if (!seen) bands[m].first = k;
        bands[m].last = k;
        seen = true;
      }
    }
  }
  return bands;
}

}  // namespace

double hz_to_mel(double hz) {
  if (hz < kLogRegionHz) return hz / kLinearHzPerMel;
  return kLogRegionMel + std::log(hz / kLogRegionHz) / kLogStep;
}

double mel_to_hz(double mel) {
  if (mel < kLogRegionMel) return mel * kLinearHzPerMel;
  return kLogRegionHz * std::exp(kLogStep * (mel - kLogRegionMel));
}

std::vector<float> hann_window(int length) {
  std::vector<float> w(static_cast<std::size_t>(length));
  for (int n = 0; n < length; ++n) {
    w[static_cast<std::size_t>(n)] =
        static_cast<float>(0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / length));
  }
  return w;
}

Spectrogram stft(std::span<const float> samples, const StftConfig& cfg) {
  cfg.validate();
  Spectrogram spec;
  spec.frames = cfg.frame_count(samples.size());
  spec.bins = static_cast<std::size_t>(cfg.n_bins());
  spec.values.resize(spec.frames * spec.bins);
  if (spec.frames == 0) return spec;
  const auto window = hann_window(cfg.window);
  RealFft fft(cfg.fft_size);
  for (std::size_t t = 0; t < spec.frames; ++t) {
    const std::size_t start = t * static_cast<std::size_t>(cfg.hop);
    std::fill(fft.real(), fft.real() + cfg.fft_size, 0.0);
    for (int n = 0; n < cfg.window; ++n) {
      fft.real()[n] = static_cast<double>(samples[start + static_cast<std::size_t>(n)]) * window[static_cast<std::size_t>(n)];
    }
    fft.forward();
    std::copy_n(fft.spectrum(), spec.bins, spec.values.begin() + static_cast<std::ptrdiff_t>(t * spec.bins));
  }
  return spec;
}

std::vector<float> istft(const Spectrogram& spec, const StftConfig& cfg) {
  cfg.validate();
  if (spec.frames == 0) return {};
  const std::size_t hop = static_cast<std::size_t>(cfg.hop), win = static_cast<std::size_t>(cfg.window);
  const std::size_t length = (spec.frames - 1) * hop + win;
  std::vector<double> acc(length, 0.0), norm(length, 0.0);
  const auto window = hann_window(cfg.window);
  RealFft fft(cfg.fft_size);
  for (std::size_t t = 0; t < spec.frames; ++t) {
    std::copy_n(spec.values.begin() + static_cast<std::ptrdiff_t>(t * spec.bins), spec.bins, fft.spectrum());
    fft.inverse();
    for (std::size_t n = 0; n < win; ++n) {
      const double w = window[n];
      acc[t * hop + n] += fft.real()[n] / cfg.fft_size * w;
      norm[t * hop + n] += w * w;
    }
  }
  std::vector<float> out(length);
  for (std::size_t i = 0; i < length; ++i) out[i] = norm[i] > 1e-8 ? static_cast<float>(acc[i] / norm[i]) : 0.0f;
  return out;
}

std::vector<double> mel_center_frequencies(const StftConfig& cfg) {
  const double lo = hz_to_mel(cfg.fmin), hi = hz_to_mel(cfg.fmax);
  std::vector<double> centers(static_cast<std::size_t>(cfg.n_mels));
  for (int m = 0; m < cfg.n_mels; ++m) {
    centers[static_cast<std::size_t>(m)] = mel_to_hz(lo + (hi - lo) * (m + 1) / (cfg.n_mels + 1));
  }
  return centers;
}

nn::Tensor mel_filterbank(const StftConfig& cfg) {
  cfg.validate();
  const std::size_t mels = static_cast<std::size_t>(cfg.n_mels), bins = static_cast<std::size_t>(cfg.n_bins());
  const double lo = hz_to_mel(cfg.fmin), hi = hz_to_mel(cfg.fmax);
  std::vector<double> edges(mels + 2);
  for (std::size_t i = 0; i < mels + 2; ++i) edges[i] = mel_to_hz(lo + (hi - lo) * static_cast<double>(i) / (mels + 1));
  std::vector<float> weights(mels * bins, 0.0f);
  for (std::size_t m = 0; m < mels; ++m) {
    const double left = edges[m], center = edges[m + 1], right = edges[m + 2];
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * cfg.sample_rate / cfg.fft_size;
      const double rise = (f - left) / (center - left);
      const double fall = (right - f) / (right - center);
      weights[m * bins + k] = static_cast<float>(std::max(0.0, std::min(rise, fall)));
    }
  }
  return nn::Tensor::from({mels, bins}, std::move(weights));
}

nn::Tensor mel_spectrogram(const Waveform& wave, const StftConfig& cfg) {
  cfg.validate();
  if (wave.sample_rate != cfg.sample_rate) {
    throw ValidationError("mel_spectrogram: waveform rate " + std::to_string(wave.sample_rate) +
                          " Hz differs from config rate " + std::to_string(cfg.sample_rate) + " Hz");
  }
  if (wave.samples.size() < static_cast<std::size_t>(cfg.window)) {
    throw ValidationError("mel_spectrogram: waveform has " + std::to_string(wave.samples.size()) +
                          " samples, fewer than one window (" + std::to_string(cfg.window) + ")");
  }
  const Spectrogram spec = stft(wave.samples, cfg);
  const nn::Tensor fb = mel_filterbank(cfg);
  const auto bands = band_ranges(fb);
  const std::size_t mels = fb.dim(0), bins = fb.dim(1);
  std::vector<float> out(spec.frames * mels);
  for (std::size_t t = 0; t < spec.frames; ++t) {
    for (std::size_t m = 0; m < mels; ++m) {
      double energy = 0.0;
      for (std::size_t k = bands[m].first; k <= bands[m].last; ++k) {
        energy += fb.data()[m * bins + k] * std::abs(spec.at(t, k));
      }
      const double logv = energy > 0.0 ? std::log(energy) : -INFINITY;
      out[t * mels + m] = static_cast<float>(std::max(logv, static_cast<double>(cfg.log_floor)));
    }
  }
  return nn::Tensor::from({spec.frames, mels}, std::move(out));
}

std::vector<float> mel_to_linear(const nn::Tensor& mel, const StftConfig& cfg, int iterations) {
  cfg.validate();
  if (mel.rank() != 2 || mel.dim(1) != static_cast<std::size_t>(cfg.n_mels)) {
    throw DimensionError("mel_to_linear: expected [T x " + std::to_string(cfg.n_mels) + "], got " +
                         nn::shape_to_string(mel.shape()));
  }
  const nn::Tensor fb = mel_filterbank(cfg);
  const auto bands = band_ranges(fb);
  const std::size_t frames = mel.dim(0), mels = fb.dim(0), bins = fb.dim(1);
  const float* w = fb.data().data();
  std::vector<float> linear(frames * bins, 0.0f);
  std::vector<double> target(mels), numer(bins), s(bins), proj(mels), denom(bins);
  for (std::size_t t = 0; t < frames; ++t) {
    bool any = false;
    for (std::size_t m = 0; m < mels; ++m) {
      const float v = mel.data()[t * mels + m];
      // Floored bands carry no energy.
      target[m] = v > cfg.log_floor + 1e-4f ? std::exp(static_cast<double>(v)) : 0.0;
      any = any || target[m] > 0.0;
    }
    if (!any) continue;
    // Start from each band's energy spread evenly over its bins.
    std::fill(numer.begin(), numer.end(), 0.0);
    std::fill(s.begin(), s.end(), 0.0);
    for (std::size_t m = 0; m < mels; ++m) {
      double row_sum = 0.0;
      for (std::size_t k = bands[m].first; k <= bands[m].last; ++k) row_sum += w[m * bins + k];
      for (std::size_t k = bands[m].first; k <= bands[m].last; ++k) {
        numer[k] += w[m * bins + k] * target[m];
        s[k] += w[m * bins + k] * target[m] / row_sum;
      }
    }
    for (int it = 0; it < iterations; ++it) {
      for (std::size_t m = 0; m < mels; ++m) {
        double acc = 0.0;
        for (std::size_t k = bands[m].first; k <= bands[m].last; ++k) acc += w[m * bins + k] * s[k];
        proj[m] = acc;
      }
      std::fill(denom.begin(), denom.end(), 0.0);
      for (std::size_t m = 0; m < mels; ++m) {
        for (std::size_t k = bands[m].first; k <= bands[m].last; ++k) denom[k] += w[m * bins + k] * proj[m];
      }
      for (std::size_t k = 0; k < bins; ++k) s[k] = denom[k] > 0.0 ? s[k] * numer[k] / denom[k] : 0.0;
    }
    for (std::size_t k = 0; k < bins; ++k) linear[t * bins + k] = static_cast<float>(s[k]);
  }
  return linear;
}

Waveform griffin_lim(const nn::Tensor& mel, const StftConfig& cfg, int iters, std::uint64_t seed) {
  if (iters < 1) throw ValidationError("griffin_lim: iters must be >= 1");
  const std::vector<float> magnitude = mel_to_linear(mel, cfg);
  const std::size_t frames = mel.dim(0), bins = static_cast<std::size_t>(cfg.n_bins());

  Spectrogram spec;
  spec.frames = frames;
  spec.bins = bins;
  spec.values.resize(frames * bins);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (std::size_t i = 0; i < spec.values.size(); ++i) spec.values[i] = std::polar(static_cast<double>(magnitude[i]), phase(rng));

  std::vector<float> signal = istft(spec, cfg);
  for (int it = 0; it < iters; ++it) {
    const Spectrogram rebuilt = stft(signal, cfg);
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
      const double mag = std::abs(rebuilt.values[i]);
      const std::complex<double> unit = mag > 1e-12 ? rebuilt.values[i] / mag : std::complex<double>(1.0, 0.0);
      spec.values[i] = static_cast<double>(magnitude[i]) * unit;
    }
    signal = istft(spec, cfg);
  }
  return Waveform{std::move(signal), cfg.sample_rate};
}

}  // namespace idfvc::dsp
