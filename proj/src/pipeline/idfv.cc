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

#include "idfvc/pipeline/idfv.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "idfvc/common/errors.h"

namespace idfvc::pipeline {

namespace {

constexpr std::uint8_t kMagic[4] = {0x49, 0x44, 0x46, 0x56};
constexpr std::uint8_t kVersion = 0x01;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}

[[noreturn]] void malformed(const std::string& origin, std::size_t offset, const std::string& what) {
  throw ValidationError(origin + ": " + what + " at byte " + std::to_string(offset));
}

}  // namespace

std::vector<std::uint8_t> encode_idfv(const nn::Tensor& t) {
  if (t.rank() > 255) throw ValidationError("idfv: rank above 255");
  std::vector<std::uint8_t> out(kMagic, kMagic + 4);
  out.push_back(kVersion);
  out.push_back(static_cast<std::uint8_t>(t.rank()));
  for (std::size_t d : t.shape()) {
    if (d > 0xffffffffu) throw ValidationError("idfv: dimension exceeds 32 bits");
    put_u32(out, static_cast<std::uint32_t>(d));
  }
  out.reserve(out.size() + 4 * t.numel());
  for (float v : t.data()) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

nn::Tensor decode_idfv(const std::vector<std::uint8_t>& b, const std::string& origin) {
  if (b.size() < 4) malformed(origin, b.size(), "truncated magic");
  for (std::size_t i = 0; i < 4; ++i) {
    if (b[i] != kMagic[i]) malformed(origin, i, "bad magic");
  }
  if (b.size() < 6) malformed(origin, b.size(), "truncated header");
  if (b[4] != kVersion) malformed(origin, 4, "unsupported version " + std::to_string(b[4]));
  const std::size_t rank = b[5];
  if (rank == 0) malformed(origin, 5, "rank 0");
  std::size_t pos = 6;
  nn::Shape shape(rank);
  std::size_t numel = 1;
  for (std::size_t i = 0; i < rank; ++i) {
    if (pos + 4 > b.size()) malformed(origin, b.size(), "truncated dimensions");
    shape[i] = get_u32(&b[pos]);
    if (shape[i] == 0) malformed(origin, pos, "zero dimension");
    numel *= shape[i];
    pos += 4;
  }
  const std::size_t expected = pos + 4 * numel;
  if (b.size() < expected) {
    malformed(origin, b.size(), "truncated payload (expected " + std::to_string(expected) + " bytes)");
  }
  if (b.size() > expected) malformed(origin, expected, "trailing bytes");
  std::vector<float> values(numel);
  for (std::size_t i = 0; i < numel; ++i, pos += 4) values[i] = std::bit_cast<float>(get_u32(&b[pos]));
  return nn::Tensor::from(shape, std::move(values));
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to '" + path + "'");
}

void write_text_file(const std::string& path, const std::string& text) {
  write_file_bytes(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

std::string read_text_file(const std::string& path) {
  const auto bytes = read_file_bytes(path);
  return std::string(bytes.begin(), bytes.end());
}

void write_idfv(const std::string& path, const nn::Tensor& t) { write_file_bytes(path, encode_idfv(t)); }

nn::Tensor read_idfv(const std::string& path) { return decode_idfv(read_file_bytes(path), path); }

std::uint64_t fnv1a64(const std::vector<std::uint8_t>& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::uint8_t c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace idfvc::pipeline
