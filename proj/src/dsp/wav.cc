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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "idfvc/common/errors.h"
#include "idfvc/dsp/audio.h"

namespace idfvc::dsp {

namespace {

void put_u32(std::vector<char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u16(std::vector<char>& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t get_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

}  // namespace

void StftConfig::validate() const {
  if (sample_rate <= 0) throw ValidationError("stft: sample_rate must be positive");
  if (fft_size <= 0 || (fft_size & (fft_size - 1)) != 0) {
    throw ValidationError("stft: fft_size must be a positive power of two");
  }
  if (!(hop > 0 && hop <= window && window <= fft_size)) {
    throw ValidationError("stft: need 0 < hop <= window <= fft_size");
  }
  if (n_mels < 1) throw ValidationError("stft: n_mels must be >= 1");
  if (!(fmin >= 0.0f && fmin < fmax && fmax <= sample_rate / 2.0f)) {
    throw ValidationError("stft: need 0 <= fmin < fmax <= sample_rate / 2");
  }
  if (!std::isfinite(log_floor)) throw ValidationError("stft: log_floor must be finite");
}

std::size_t StftConfig::frame_count(std::size_t length) const {
  const std::size_t win = static_cast<std::size_t>(window);
  if (length < win) return 0;
  return 1 + (length - win) / static_cast<std::size_t>(hop);
}

Waveform read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open wav file '" + path + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw ValidationError("'" + path + "' is not a RIFF/WAVE file");
  }
  std::size_t pos = 12;
  bool have_fmt = false;
  Waveform wave;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t size = get_u32(bytes.data() + pos + 4);
    const unsigned char* body = bytes.data() + pos + 8;
    if (pos + 8 + size > bytes.size()) {
      throw ValidationError("'" + path + "': chunk at byte " + std::to_string(pos) + " is truncated");
    }
    if (std::memcmp(bytes.data() + pos, "fmt ", 4) == 0) {
      if (size < 16) throw ValidationError("'" + path + "': short fmt chunk");
      const std::uint16_t format = get_u16(body);
      const std::uint16_t channels = get_u16(body + 2);
      const std::uint16_t bits = get_u16(body + 14);
      if (format != 1 || channels != 1 || bits != 16) {
        throw ValidationError("'" + path + "': only 16-bit PCM mono is supported");
      }
      wave.sample_rate = static_cast<int>(get_u32(body + 4));
      have_fmt = true;
    } else if (std::memcmp(bytes.data() + pos, "data", 4) == 0) {
      if (!have_fmt) throw ValidationError("'" + path + "': data chunk before fmt chunk");
      const std::size_t n = size / 2;
      wave.samples.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto s = static_cast<std::int16_t>(get_u16(body + 2 * i));
        wave.samples[i] = static_cast<float>(s) / 32768.0f;
      }
      return wave;
    }
    pos += 8 + size + (size & 1);
  }
  throw ValidationError("'" + path + "': no data chunk");
}

void write_wav(const std::string& path, const Waveform& wave) {
  if (wave.sample_rate <= 0) throw ValidationError("write_wav: sample_rate must be positive");
  const auto n = static_cast<std::uint32_t>(wave.samples.size());
  std::vector<char> out;
  out.reserve(44 + 2 * n);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_u32(out, 36 + 2 * n);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put_u32(out, 16);
  put_u16(out, 1);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(wave.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(wave.sample_rate) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_u32(out, 2 * n);
  for (float s : wave.samples) {
    const float c = std::clamp(std::isfinite(s) ? s : 0.0f, -1.0f, 1.0f);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(std::lrint(c * 32767.0f))));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write wav file '" + path + "'");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("short write to '" + path + "'");
}

}  // namespace idfvc::dsp
