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

#include "idfvc/pipeline/trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "idfvc/common/errors.h"
#include "idfvc/nn/ops.h"
#include "idfvc/pipeline/checkpoint.h"
#include "idfvc/pipeline/idfv.h"

namespace idfvc::pipeline {

namespace fs = std::filesystem;
using nn::Tensor;

namespace {

constexpr const char* kConfigName = "config.txt";

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void check_compatible(const TrainConfig& c, const Corpus& corpus) {
  if (corpus.speakers != c.model.speakers) {
    throw ValidationError("corpus has " + std::to_string(corpus.speakers) + " speakers, config expects " +
                          std::to_string(c.model.speakers));
  }
  if (corpus.face_dim != c.model.face_dim) {
    throw ValidationError("corpus faces have width " + std::to_string(corpus.face_dim) + ", config expects " +
                          std::to_string(c.model.face_dim));
  }
  for (const auto& u : corpus.utterances) {
    if (u.mel.dim(1) != c.model.mel_dim) {
      throw ValidationError(u.id + ": mel has " + std::to_string(u.mel.dim(1)) + " bands, config expects " +
                            std::to_string(c.model.mel_dim));
    }
    if (u.mel.dim(0) <= c.model.cpc_steps) {
      throw ValidationError(u.id + ": too few frames for " + std::to_string(c.model.cpc_steps) + " CPC steps");
    }
  }
}

}  // namespace

PreparedUtterance prepare(const Utterance& u, const model::IdFaceVc& model) {
  PreparedUtterance p;
  p.speaker = u.speaker;
  p.face_mean = model::average_face_frames(u.face);
  p.mel_norm = model.normalize(u.mel);
  const std::size_t t = u.pitch.dim(0);
  p.log_f0.resize(t);
  p.voiced.resize(t);
  for (std::size_t i = 0; i < t; ++i) {
    p.log_f0[i] = u.pitch.at(i, 0);
    p.voiced[i] = u.pitch.at(i, 1) > 0.5f;
  }
  return p;
}

Trainer::Trainer(const TrainConfig& config, const Corpus& corpus)
    : config_(config), split_(split_speakers(config.model.speakers, config.holdout_fraction)),
      shuffle_rng_(config.seed ^ 0x5bd1e995ull) {
  config_.validate();
  check_compatible(config_, corpus);
  model_ = std::make_unique<model::IdFaceVc>(config_.model, config_.seed);
  std::vector<Tensor> train_mels;
  for (const auto& u : corpus.utterances) {
    if (!split_.is_heldout(u.speaker)) train_mels.push_back(u.mel);
  }
  if (train_mels.size() < 2) throw ValidationError("need at least 2 training utterances");
  model_->set_mel_scaler(model::fit_mel_scaler(train_mels));
  for (const auto& u : corpus.utterances) {
    (split_.is_heldout(u.speaker) ? heldout_ : train_).push_back(prepare(u, *model_));
  }
  for (std::size_t i = 0; i < train_.size(); ++i) by_speaker_[train_[i].speaker].push_back(i);
  nn::Rng q_rng(config_.seed + 1);
  q_ = losses::VariationalNet(q_params_, "qnet", config_.model.speaker_dim, config_.model.content_dim,
                              config_.model.qnet_hidden, q_rng);
  reseed_codes(true);
  opt_ = nn::make_optimizer(config_.optimizer, model_->params(), config_.learning_rate);
  q_opt_ = nn::make_optimizer(config_.optimizer, q_params_, config_.q_learning_rate);
}

StepLosses Trainer::step(const std::vector<std::size_t>& batch) {
  const model::IdFaceVc& m = *model_;
  std::vector<Tensor> faces, spk_rows, con_rows, z_seqs, mel_hat, mel_ref, commit, codebook;
  std::vector<std::size_t> ids;
  for (std::size_t i : batch) {
    const PreparedUtterance& u = train_.at(i);
    ids.push_back(u.speaker);
    faces.push_back(u.face_mean);
    Tensor spk = m.speaker_code(train_.at(reference_for(i)).mel_norm);
    Tensor z = m.content_encoder.forward(u.mel_norm);
    model::VqResult vq = model::vq_quantize(z, m.codebook);
    Tensor pitch = model::pitch_embed(u.log_f0, u.voiced, m.pitch);
    mel_hat.push_back(m.decoder.forward(spk, vq.quantized, pitch));
    mel_ref.push_back(u.mel_norm);
    spk_rows.push_back(spk);
    con_rows.push_back(nn::mean_axis(z, 0));
    z_seqs.push_back(z);
    commit.push_back(vq.commitment);
    codebook.push_back(vq.codebook_loss);
  }
  const losses::SpeakerLabels labels(ids, config_.model.speakers);
  const Tensor spk = nn::concat(spk_rows, 0);
  const Tensor con = nn::concat(con_rows, 0);
  const Tensor f_query = m.face_query_batch(nn::concat(faces, 0));

  losses::fit_qnet(q_, *q_opt_, spk, con, config_.q_steps);

  losses::LossTerms terms;
  terms.rec = losses::recon_loss(nn::concat(mel_ref, 0), nn::concat(mel_hat, 0));
  terms.con = losses::contrastive_loss(f_query, spk, labels, config_.tau);
  terms.mi = losses::club_mi_upper(spk, con, q_);
  terms.idf = losses::id_supervision_loss(f_query, m.face_head, labels);
  terms.ids = losses::id_supervision_loss(spk, m.speech_head, labels);
  terms.fv = losses::fv_mapping_loss(m.map_face(f_query), spk, labels);
  const Tensor total = losses::total_loss(terms, config_.weights);

  const float inv = 1.0f / static_cast<float>(batch.size());
  Tensor objective = nn::add(total, nn::scale(model::cpc_loss(z_seqs, m.cpc), config_.cpc_weight));
  objective = nn::add(objective, nn::scale(nn::sum(nn::concat(commit, 0)), config_.commitment_weight * inv));
  objective = nn::add(objective, nn::scale(nn::sum(nn::concat(codebook, 0)), inv));
  if (!std::isfinite(objective.item())) throw NumericError("non-finite content-encoder auxiliary loss");

  opt_->zero_grad();
  objective.backward();
  opt_->step();
  q_params_.zero_grad();  // the MI term also reached q; its own optimizer handles q

  return {terms.rec.item(), terms.con.item(), terms.mi.item(), terms.idf.item(),
          terms.ids.item(), terms.fv.item(),  total.item()};
}

std::size_t Trainer::reference_for(std::size_t index) {
  const auto& pool = by_speaker_.at(train_.at(index).speaker);
  if (pool.size() == 1) return index;
  std::size_t pick = pool[shuffle_rng_() % (pool.size() - 1)];
  // Skip the utterance itself: the pool minus `index` has size - 1 entries.
  if (pick == index) pick = pool.back();
  return pick;
}

std::size_t Trainer::reseed_codes(bool all) {
  nn::NoGradGuard no_grad;
  std::vector<Tensor> frames;
  for (const auto& u : train_) frames.push_back(model_->content_encoder.forward(u.mel_norm));
  const Tensor z = nn::concat(frames, 0);
  Tensor& entries = model_->codebook.entries;
  const std::size_t k = entries.dim(0), d = entries.dim(1);
  std::vector<bool> used(k, false);
  if (!all) {
    for (std::size_t i : model::nearest_codes(z, entries)) used[i] = true;
  }
  std::size_t replaced = 0;
  auto data = entries.mutable_data();
  for (std::size_t c = 0; c < k; ++c) {
    if (used[c]) continue;
    const std::size_t row = shuffle_rng_() % z.dim(0);
    for (std::size_t j = 0; j < d; ++j) data[c * d + j] = z.at(row, j);
    ++replaced;
  }
  // Two codes copied from identical frames would tie forever; nudge them apart.
  for (std::size_t c = 1; c < k; ++c) {
    for (std::size_t o = 0; o < c; ++o) {
      if (std::equal(data.begin() + c * d, data.begin() + (c + 1) * d, data.begin() + o * d)) {
        data[c * d] = std::nextafter(data[c * d], 1e30f);
      }
    }
  }
  return replaced;
}

std::vector<StepLosses> Trainer::run_epoch(std::size_t) {
  // Each speaker's utterances are shuffled (Fisher-Yates with our own draws, so
  // the order does not depend on the standard library), then dealt round-robin
  // across speakers. Batches are therefore balanced over speakers, which gives
  // every row of the contrastive loss the same number of positives.
  std::vector<std::vector<std::size_t>> lists;
  for (const auto& [speaker, pool] : by_speaker_) {
    std::vector<std::size_t> l = pool;
    for (std::size_t i = l.size(); i > 1; --i) std::swap(l[i - 1], l[shuffle_rng_() % i]);
    lists.push_back(std::move(l));
  }
  std::vector<std::size_t> order;
  for (std::size_t r = 0; order.size() < train_.size(); ++r) {
    for (const auto& l : lists) {
      if (r < l.size()) order.push_back(l[r]);
    }
  }
  // Incomplete tail batches are dropped (the order changes every epoch) so that
  // every step sees the same number of contrastive candidates. A training set
  // smaller than one batch is used whole.
  const std::size_t batch = std::min(config_.batch_size, order.size());
  std::vector<StepLosses> out;
  for (std::size_t b = 0; b + batch <= order.size(); b += batch) {
    out.push_back(step(std::vector<std::size_t>(order.begin() + b, order.begin() + b + batch)));
  }
  reseed_codes(false);
  return out;
}

Codes encode_codes(const model::IdFaceVc& model, const std::vector<PreparedUtterance>& utts) {
  nn::NoGradGuard no_grad;
  std::vector<Tensor> spk, con;
  for (const auto& u : utts) {
    spk.push_back(model.speaker_code(u.mel_norm));
    con.push_back(nn::mean_axis(model.content_encoder.forward(u.mel_norm), 0));
  }
  return {nn::concat(spk, 0), nn::concat(con, 0)};
}

double refit_club(const Codes& codes, std::size_t hidden, std::uint64_t seed, std::size_t steps, float lr) {
  if (!nn::grad_enabled()) throw ValidationError("refit_club: cannot fit q while gradients are disabled");
  nn::ParameterRegistry params;
  nn::Rng rng(seed);
  losses::VariationalNet q(params, "qnet", codes.spk.dim(1), codes.con.dim(1), hidden, rng);
  nn::Adam opt(params, lr);
  losses::fit_qnet(q, opt, codes.spk, codes.con, steps);
  nn::NoGradGuard no_grad;
  return losses::club_mi_upper(codes.spk, codes.con, q).item();
}

void save_model(const std::string& dir, const TrainConfig& config, const model::IdFaceVc& model) {
  save_checkpoint(dir, model.params());
  write_text_file((fs::path(dir) / kConfigName).string(), format_config(config));
}

LoadedModel load_model(const std::string& dir) {
  LoadedModel out;
  out.config = load_config((fs::path(dir) / kConfigName).string());
  out.model = std::make_unique<model::IdFaceVc>(out.config.model, out.config.seed);
  load_checkpoint(dir, out.model->params());
  return out;
}

TrainSummary train(const TrainConfig& config, const Corpus& corpus, const std::string& out_dir,
                   std::ostream* log) {
  Trainer trainer(config, corpus);
  fs::create_directories(out_dir);
  std::ostringstream csv;
  csv << "step,L_rec,L_con,L_MI,L_id-f,L_id-s,L_F,total\n";
  TrainSummary summary;
  std::size_t step = 0;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto steps = trainer.run_epoch(epoch);
    double sum = 0.0;
    for (const auto& s : steps) {
      ++step;
      csv << step << ',' << csv_number(s.rec) << ',' << csv_number(s.con) << ',' << csv_number(s.mi) << ','
          << csv_number(s.idf) << ',' << csv_number(s.ids) << ',' << csv_number(s.fv) << ','
          << csv_number(s.total) << '\n';
      sum += s.total;
    }
    if (!steps.empty()) summary.last_step = steps.back();
    summary.epoch_mean_total.push_back(steps.empty() ? 0.0 : sum / steps.size());
    char name[16];
    std::snprintf(name, sizeof name, "%03zu", epoch);
    save_model((fs::path(out_dir) / "epochs" / name).string(), config, trainer.model());
    if (log) *log << "epoch " << epoch << " mean total " << csv_number(summary.epoch_mean_total.back()) << '\n';
  }
  write_text_file((fs::path(out_dir) / "losses.csv").string(), csv.str());
  save_model((fs::path(out_dir) / "checkpoint").string(), config, trainer.model());
  return summary;
}

}  // namespace idfvc::pipeline
