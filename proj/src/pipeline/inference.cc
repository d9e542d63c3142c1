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

#include "idfvc/pipeline/inference.h"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "idfvc/common/errors.h"
#include "idfvc/dsp/pitch.h"
#include "idfvc/dsp/spectral.h"
#include "idfvc/metrics/metrics.h"
#include "idfvc/nn/ops.h"
#include "json.hpp"

namespace idfvc::pipeline {

using nn::Tensor;

namespace {

void check_face(const model::IdFaceVc& model, const Tensor& face) {
  if (!face.defined() || face.rank() != 2 || face.dim(1) != model.config().face_dim) {
    throw ValidationError("face frames must be [T x " + std::to_string(model.config().face_dim) + "], got " +
                          (face.defined() ? nn::shape_to_string(face.shape()) : std::string("nothing")));
  }
}

PreparedUtterance prepare_source(const model::IdFaceVc& model, const TrainConfig& config,
                                 const dsp::Waveform& source) {
  if (source.sample_rate != config.stft.sample_rate) {
    throw ValidationError("source audio is " + std::to_string(source.sample_rate) + " Hz, model expects " +
                          std::to_string(config.stft.sample_rate));
  }
  Utterance u;
  u.mel = dsp::mel_spectrogram(source, config.stft);
  if (u.mel.dim(1) != model.config().mel_dim) throw ValidationError("source mel width differs from the model");
  u.pitch = pitch_track(source, config.stft);
  u.face = Tensor::zeros({1, model.config().face_dim});
  return prepare(u, model);
}

}  // namespace

Tensor face_speaker_code(const model::IdFaceVc& model, const Tensor& face_frames) {
  check_face(model, face_frames);
  nn::NoGradGuard no_grad;
  return model.map_face(model.face_query(face_frames));
}

Tensor blend_queries(const Tensor& query_a, const Tensor& query_b, float alpha) {
  if (!(alpha >= 0.0f && alpha <= 1.0f)) throw ValidationError("alpha must lie in [0, 1]");
  return nn::add(nn::scale(query_a, 1.0f - alpha), nn::scale(query_b, alpha));
}

Tensor interp_speaker_code(const model::IdFaceVc& model, const Tensor& face_a, const Tensor& face_b, float alpha) {
  check_face(model, face_a);
  check_face(model, face_b);
  nn::NoGradGuard no_grad;
  return model.map_face(blend_queries(model.face_query(face_a), model.face_query(face_b), alpha));
}

Tensor convert_normalized(const model::IdFaceVc& model, const Tensor& speaker_code, const PreparedUtterance& source) {
  nn::NoGradGuard no_grad;
  const model::VqResult vq = model::vq_quantize(model.content_encoder.forward(source.mel_norm), model.codebook);
  const Tensor pitch = model::pitch_embed(source.log_f0, source.voiced, model.pitch);
  return model.decoder.forward(speaker_code, vq.quantized, pitch);
}

Conversion synthesize(const model::IdFaceVc& model, const TrainConfig& config, const Tensor& speaker_code,
                      const dsp::Waveform& source) {
  const PreparedUtterance src = prepare_source(model, config, source);
  Conversion out;
  out.mel = model.denormalize(convert_normalized(model, speaker_code, src), config.stft.log_floor);
  out.wave = dsp::griffin_lim(out.mel, config.stft, static_cast<int>(config.griffin_lim_iters), config.seed);
  return out;
}

Conversion infer(const model::IdFaceVc& model, const TrainConfig& config, const Tensor& face_frames,
                 const dsp::Waveform& source) {
  return synthesize(model, config, face_speaker_code(model, face_frames), source);
}

EvalReport evaluate(const model::IdFaceVc& model, const TrainConfig& config, const Corpus& corpus) {
  const SpeakerSplit split = split_speakers(corpus.speakers, config.holdout_fraction);
  std::map<std::size_t, std::vector<const Utterance*>> by_speaker;
  std::vector<const Utterance*> targets;
  for (const auto& u : corpus.utterances) {
    if (split.is_heldout(u.speaker)) {
      targets.push_back(&u);
    } else {
      by_speaker[u.speaker].push_back(&u);
    }
  }
  // Sources interleaved across training speakers, so every held-out speaker is
  // converted from every source speaker in equal measure and source identity
  // cannot masquerade as target consistency.
  std::vector<PreparedUtterance> sources;
  for (std::size_t round = 0;; ++round) {
    bool any = false;
    for (const auto& [speaker, utts] : by_speaker) {
      if (round < utts.size()) sources.push_back(prepare(*utts[round], model)), any = true;
    }
    if (!any) break;
  }
  if (targets.empty() || sources.empty()) throw ValidationError("evaluation needs held-out and training utterances");

  nn::NoGradGuard no_grad;
  const float floor = config.stft.log_floor;
  std::vector<Tensor> generated, reference;
  std::vector<std::size_t> speakers;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const Utterance& t = *targets[i];
    check_face(model, t.face);
    const Tensor code = model.map_face(model.face_query(t.face));
    const Tensor out = convert_normalized(model, code, sources[i % sources.size()]);
    // Re-embed what a listener would get: the mel after clamping at the floor.
    generated.push_back(model.speaker_code(model.normalize(model.denormalize(out, floor))));
    reference.push_back(model.speaker_code(model.normalize(t.mel)));
    speakers.push_back(t.speaker);
  }
  const metrics::EmbeddingSet gen(nn::concat(generated, 0), speakers);
  const metrics::EmbeddingSet ref(nn::concat(reference, 0), speakers);
  EvalReport r;
  r.secs = metrics::secs(gen, ref);
  r.sec = metrics::sec(gen);
  r.sed = metrics::sed(gen);
  r.n_utterances = targets.size();
  r.n_speakers = split.heldout.size();
  return r;
}

std::string report_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["secs"] = r.secs;
  j["sec"] = r.sec;
  j["sed"] = r.sed;
  j["n_utterances"] = r.n_utterances;
  j["n_speakers"] = r.n_speakers;
  return j.dump(2) + "\n";
}

std::string mel_to_csv(const Tensor& mel) {
  if (!mel.defined() || mel.rank() != 2) throw ValidationError("mel_to_csv: expected a [T x D] tensor");
  std::ostringstream out;
  char buf[32];
  for (std::size_t t = 0; t < mel.dim(0); ++t) {
    for (std::size_t d = 0; d < mel.dim(1); ++d) {
      std::snprintf(buf, sizeof buf, "%.9g", mel.at(t, d));
      out << (d ? "," : "") << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace idfvc::pipeline
