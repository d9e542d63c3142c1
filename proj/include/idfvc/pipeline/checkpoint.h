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

#ifndef IDFVC_PIPELINE_CHECKPOINT_H_
#define IDFVC_PIPELINE_CHECKPOINT_H_

#include <string>

#include "idfvc/nn/layers.h"

// A checkpoint directory holds one IDFV file per parameter and manifest.txt
// with one line per parameter: name, shape, FNV-1a 64 checksum of the file,
// file name.

namespace idfvc::pipeline {

inline constexpr const char* kManifestName = "manifest.txt";

// Throws NumericError (and writes nothing) if any value is non-finite.
void save_checkpoint(const std::string& dir, const nn::ParameterRegistry& params);

// Loads into an existing registry. Every registered parameter must be listed
// with a matching shape; checksum mismatches raise ValidationError.
void load_checkpoint(const std::string& dir, nn::ParameterRegistry& params);

}  // namespace idfvc::pipeline

#endif  // IDFVC_PIPELINE_CHECKPOINT_H_
