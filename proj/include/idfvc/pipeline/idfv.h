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

#ifndef IDFVC_PIPELINE_IDFV_H_
#define IDFVC_PIPELINE_IDFV_H_

#include <cstdint>
#include <string>
#include <vector>

#include "idfvc/nn/tensor.h"

// IDFV tensor files: "IDFV", version 0x01, rank byte, rank little-endian u32
// dims, then little-endian float32 payload in row-major order.

namespace idfvc::pipeline {

std::vector<std::uint8_t> encode_idfv(const nn::Tensor& t);
// ValidationError with the byte offset on a malformed buffer.
nn::Tensor decode_idfv(const std::vector<std::uint8_t>& bytes, const std::string& origin = "buffer");

void write_idfv(const std::string& path, const nn::Tensor& t);
nn::Tensor read_idfv(const std::string& path);

std::vector<std::uint8_t> read_file_bytes(const std::string& path);  // IoError when unreadable
void write_file_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

// FNV-1a, 64-bit.
std::uint64_t fnv1a64(const std::vector<std::uint8_t>& bytes);

}  // namespace idfvc::pipeline

#endif  // IDFVC_PIPELINE_IDFV_H_
