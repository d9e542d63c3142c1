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

#ifndef IDFVC_PIPELINE_INFERENCE_H_
#define IDFVC_PIPELINE_INFERENCE_H_

#include <string>

#include "idfvc/dsp/audio.h"
#include "idfvc/model/id_facevc.h"
#include "idfvc/pipeline/config.h"
#include "idfvc/pipeline/corpus.h"
#include "idfvc/pipeline/trainer.h"

namespace idfvc::pipeline {

// Speaker code predicted from face frames: average, SAFPQ, fv_map.
nn::Tensor face_speaker_code(const model::IdFaceVc& model, const nn::Tensor& face_frames);

// (1 - alpha) F_query_A + alpha F_query_B; alpha outside [0, 1] is a ValidationError.
// The blend is normalized inside map_face, so alpha = 0 and alpha = 1 give
// exactly the single-face codes.
nn::Tensor blend_queries(const nn::Tensor& query_a, const nn::Tensor& query_b, float alpha);
nn::Tensor interp_speaker_code(const model::IdFaceVc& model, const nn::Tensor& face_a, const nn::Tensor& face_b,
                               float alpha);

// Decodes a normalized mel [T x D_mel] from a speaker code and the content
// and pitch of a source utterance.
nn::Tensor convert_normalized(const model::IdFaceVc& model, const nn::Tensor& speaker_code,
                              const PreparedUtterance& source);

struct Conversion {
  nn::Tensor mel;  // log-mel [T x D_mel]
  dsp::Waveform wave;
};

// Source content and pitch come from `source`; the speaker from `speaker_code`.
Conversion synthesize(const model::IdFaceVc& model, const TrainConfig& config, const nn::Tensor& speaker_code,
                      const dsp::Waveform& source);

// Full inference path: face frames + source waveform.
Conversion infer(const model::IdFaceVc& model, const TrainConfig& config, const nn::Tensor& face_frames,
                 const dsp::Waveform& source);

struct EvalReport {
  double secs = 0, sec = 0, sed = 0;
  std::size_t n_utterances = 0, n_speakers = 0;
};

// Converts every held-out utterance's face with a training utterance as the
// source (round-robin), re-embeds the outputs with the speaker encoder and
// scores them: SECS against the held-out speakers' real speech, SEC/SED among
// the conversions.
EvalReport evaluate(const model::IdFaceVc& model, const TrainConfig& config, const Corpus& corpus);

// Flat JSON object with exactly the report keys.
std::string report_json(const EvalReport& report);

// One CSV row per frame, one column per mel band.
std::string mel_to_csv(const nn::Tensor& mel);

}  // namespace idfvc::pipeline

#endif  // IDFVC_PIPELINE_INFERENCE_H_
