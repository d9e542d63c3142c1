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

#include "idfvc/pipeline/checkpoint.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>

#include "idfvc/common/errors.h"
#include "idfvc/pipeline/idfv.h"

namespace idfvc::pipeline {

namespace fs = std::filesystem;

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct ManifestEntry {
  std::string shape, checksum, file;
};

}  // namespace

void save_checkpoint(const std::string& dir, const nn::ParameterRegistry& params) {
  for (const auto& [name, t] : params) {
    for (float v : t.data()) {
      if (!std::isfinite(v)) throw NumericError("refusing to save non-finite parameter '" + name + "'");
    }
  }
  fs::create_directories(dir);
  std::ostringstream manifest;
  for (const auto& [name, t] : params) {
    const auto bytes = encode_idfv(t);
    const std::string file = name + ".idfv";
    write_file_bytes((fs::path(dir) / file).string(), bytes);
    manifest << name << ' ' << nn::shape_to_string(t.shape()) << ' ' << hex64(fnv1a64(bytes)) << ' ' << file
             << '\n';
  }
  write_text_file((fs::path(dir) / kManifestName).string(), manifest.str());
}

void load_checkpoint(const std::string& dir, nn::ParameterRegistry& params) {
  const std::string manifest_path = (fs::path(dir) / kManifestName).string();
  std::istringstream in(read_text_file(manifest_path));
  std::map<std::string, ManifestEntry> entries;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string name;
    ManifestEntry e;
    if (!(fields >> name >> e.shape >> e.checksum >> e.file)) {
      throw ValidationError(manifest_path + ": malformed line " + std::to_string(lineno));
    }
    entries[name] = e;
  }
  for (auto& [name, t] : params) {
    const auto it = entries.find(name);
    if (it == entries.end()) throw ValidationError(manifest_path + ": missing parameter '" + name + "'");
    if (it->second.shape != nn::shape_to_string(t.shape())) {
      throw ValidationError("checkpoint parameter '" + name + "' has shape " + it->second.shape + ", model expects " +
                            nn::shape_to_string(t.shape()));
    }
    const std::string path = (fs::path(dir) / it->second.file).string();
    const auto bytes = read_file_bytes(path);
    if (hex64(fnv1a64(bytes)) != it->second.checksum) {
      throw ValidationError(path + ": checksum mismatch (manifest " + it->second.checksum + ", file " +
                            hex64(fnv1a64(bytes)) + ")");
    }
    const nn::Tensor loaded = decode_idfv(bytes, path);
    if (loaded.shape() != t.shape()) throw ValidationError(path + ": shape differs from manifest");
    std::copy(loaded.data().begin(), loaded.data().end(), t.mutable_data().begin());
  }
  if (entries.size() != params.size()) {
    throw ValidationError(manifest_path + ": lists " + std::to_string(entries.size()) + " parameters, model has " +
                          std::to_string(params.size()));
  }
}

}  // namespace idfvc::pipeline
