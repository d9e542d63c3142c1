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

#include "idfvc/losses/losses.h"

#include <cmath>

#include "idfvc/common/errors.h"
#include "idfvc/nn/ops.h"

namespace idfvc::losses {

using nn::Tensor;

void LossWeights::validate() const {
  const std::pair<const char*, float> all[] = {{"lambda_con", con}, {"lambda_mi", mi}, {"lambda_idf", idf},
                                               {"lambda_ids", ids}, {"lambda_fv", fv}};
  for (const auto& [name, v] : all) {
    if (!std::isfinite(v) || v < 0.0f) throw ValidationError(std::string(name) + " must be finite and >= 0");
  }
}

SpeakerLabels::SpeakerLabels(std::vector<std::size_t> ids_, std::size_t classes_)
    : ids(std::move(ids_)), classes(classes_) {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= classes) {
      throw ValidationError("speaker label " + std::to_string(ids[i]) + " at position " + std::to_string(i) +
                            " is outside [0, " + std::to_string(classes) + ")");
    }
  }
}

Tensor SpeakerLabels::one_hot() const {
  std::vector<float> v(ids.size() * classes, 0.0f);
  for (std::size_t i = 0; i < ids.size(); ++i) v[i * classes + ids[i]] = 1.0f;
  return Tensor::from({ids.size(), classes}, std::move(v));
}

Tensor SpeakerLabels::same_speaker() const {
  const std::size_t n = ids.size();
  std::vector<float> v(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) v[i * n + j] = ids[i] == ids[j] ? 1.0f : 0.0f;
  return Tensor::from({n, n}, std::move(v));
}

namespace {

void require_batch(const Tensor& t, std::size_t n, const char* what) {
  if (t.rank() != 2 || t.dim(0) != n) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(n) + " rows, got " +
                         nn::shape_to_string(t.shape()));
  }
}

void require_finite(const Tensor& t, const char* what) {
  for (float v : t.data()) {
    if (!std::isfinite(v)) throw NumericError(std::string(what) + " is not finite");
  }
}

}  // namespace

Tensor contrastive_loss(const Tensor& face, const Tensor& speech, const SpeakerLabels& labels, float tau) {
  if (!(tau > 0.0f)) throw ValidationError("contrastive_loss: temperature must be > 0");
  const std::size_t n = labels.size();
  if (n == 0) throw ValidationError("contrastive_loss: empty batch");
  require_batch(face, n, "contrastive_loss face");
  require_batch(speech, n, "contrastive_loss speech");
  if (face.dim(1) != speech.dim(1)) {
    throw DimensionError("contrastive_loss: " + nn::shape_to_string(face.shape()) + " vs " +
                         nn::shape_to_string(speech.shape()));
  }
  Tensor sim = nn::matmul(nn::l2_normalize_rows(face), nn::transpose(nn::l2_normalize_rows(speech)));
  Tensor log_p = nn::log_softmax(nn::scale(sim, 1.0f / tau), 1);
  return nn::scale(nn::sum(nn::mul(log_p, labels.same_speaker())), -1.0f / static_cast<float>(n));
}

Tensor id_supervision_loss(const Tensor& features, const nn::LinearLayer& head, const SpeakerLabels& labels) {
  if (head.out_features() < 2) throw ValidationError("id_supervision_loss: need at least 2 classes");
  if (labels.classes != head.out_features()) {
    throw ValidationError("id_supervision_loss: labels have " + std::to_string(labels.classes) +
                          " classes but the head predicts " + std::to_string(head.out_features()));
  }
  require_batch(features, labels.size(), "id_supervision_loss");
  return nn::cross_entropy(head.forward(features), labels.one_hot());
}

VariationalNet::VariationalNet(nn::ParameterRegistry& registry, const std::string& name, std::size_t spk_dim,
                               std::size_t con_dim, std::size_t hidden, nn::Rng& rng)
    : mean_hidden(registry, name + ".mean.hidden", spk_dim, hidden, rng),
      mean_out(registry, name + ".mean.out", hidden, con_dim, rng),
      logvar_hidden(registry, name + ".logvar.hidden", spk_dim, hidden, rng),
      logvar_out(registry, name + ".logvar.out", hidden, con_dim, rng) {}

GaussianParams VariationalNet::forward(const Tensor& spk) const {
  GaussianParams g;
  g.mean = mean_out.forward(nn::tanh(mean_hidden.forward(spk)));
  g.logvar = nn::clamp(logvar_out.forward(nn::tanh(logvar_hidden.forward(spk))), -kLogvarLimit, kLogvarLimit);
  return g;
}

namespace {

void require_gaussian(const GaussianParams& g, const Tensor& con, const char* what) {
  if (!g.mean.defined() || g.mean.rank() != 2 || g.mean.shape() != g.logvar.shape()) {
    throw DimensionError(std::string(what) + ": malformed Gaussian parameters");
  }
  if (con.rank() != 2 || con.shape() != g.mean.shape()) {
    throw DimensionError(std::string(what) + ": content " + nn::shape_to_string(con.shape()) + " vs q output " +
                         nn::shape_to_string(g.mean.shape()));
  }
}

}  // namespace

Tensor conditional_log_density(const GaussianParams& g, const Tensor& con) {
  require_gaussian(g, con, "club");
  const std::size_t n = con.dim(0);
  // -1/2 sum_d (c_jd - mu_id)^2 / var_id - 1/2 sum_d logvar_id, expanded so the
  // whole [N x N] matrix is three products.
  Tensor inv_var = nn::exp(nn::scale(g.logvar, -1.0f));
  Tensor con_t = nn::transpose(con);
  Tensor quad = nn::matmul(inv_var, nn::square(con_t));
  Tensor cross = nn::matmul(nn::mul(g.mean, inv_var), con_t);
  Tensor own = nn::sum_axis(nn::add(nn::mul(nn::square(g.mean), inv_var), g.logvar), 1);  // [N x 1]
  Tensor sq = nn::add(nn::sub(quad, nn::scale(cross, 2.0f)), nn::matmul(own, Tensor::filled({1, n}, 1.0f)));
  Tensor out = nn::scale(sq, -0.5f);
  require_finite(out, "club: conditional log density");
  return out;
}

Tensor club_mi_upper(const GaussianParams& g, const Tensor& con) {
  Tensor logq = conditional_log_density(g, con);
  const std::size_t n = logq.dim(0);
  std::vector<float> eye(n * n, 0.0f);
  for (std::size_t i = 0; i < n; ++i) eye[i * n + i] = 1.0f;
  Tensor positive = nn::scale(nn::sum(nn::mul(logq, Tensor::from({n, n}, std::move(eye)))), 1.0f / n);
  return nn::sub(positive, nn::mean(logq));
}

Tensor club_mi_upper(const Tensor& spk, const Tensor& con, const VariationalNet& q) {
  return club_mi_upper(q.forward(spk), con);
}

Tensor qnet_nll(const GaussianParams& g, const Tensor& con) {
  require_gaussian(g, con, "qnet_nll");
  const std::size_t n = con.dim(0);
  const float half_log_2pi = 0.5f * std::log(2.0f * static_cast<float>(M_PI));
  Tensor per = nn::add(nn::mul(nn::square(nn::sub(con, g.mean)), nn::exp(nn::scale(g.logvar, -1.0f))), g.logvar);
  Tensor nll = nn::add_scalar(nn::scale(nn::sum(per), 0.5f / static_cast<float>(n)),
                              half_log_2pi * static_cast<float>(con.dim(1)));
  require_finite(nll, "qnet_nll");
  return nll;
}

Tensor qnet_nll(const Tensor& spk, const Tensor& con, const VariationalNet& q) { return qnet_nll(q.forward(spk), con); }

float fit_qnet(const VariationalNet& q, nn::Optimizer& opt, const Tensor& spk, const Tensor& con,
               std::size_t steps) {
  const Tensor s = spk.detach(), c = con.detach();
  float last = 0.0f;
  opt.zero_grad();
  for (std::size_t i = 0; i < steps; ++i) {
    Tensor nll = qnet_nll(s, c, q);
    last = nll.item();
    nll.backward();
    opt.step();
  }
  return last;
}

Tensor recon_loss(const Tensor& mel, const Tensor& mel_hat) {
  if (mel.shape() != mel_hat.shape()) {
    throw DimensionError("recon_loss: " + nn::shape_to_string(mel.shape()) + " vs " +
                         nn::shape_to_string(mel_hat.shape()));
  }
  return nn::mean(nn::square(nn::sub(mel_hat, mel)));
}

Tensor fv_mapping_loss(const Tensor& mapped, const Tensor& target, const SpeakerLabels& labels, float margin) {
  if (mapped.shape() != target.shape()) {
    throw DimensionError("fv_mapping_loss: " + nn::shape_to_string(mapped.shape()) + " vs " +
                         nn::shape_to_string(target.shape()));
  }
  require_batch(mapped, labels.size(), "fv_mapping_loss");
  Tensor mse = nn::mean(nn::square(nn::sub(mapped, target.detach())));
  std::vector<std::size_t> left, right;
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = i + 1; j < labels.size(); ++j)
      if (labels.ids[i] != labels.ids[j]) left.push_back(i), right.push_back(j);
  if (left.empty()) return mse;
  Tensor diff = nn::sub(nn::gather_rows(mapped, left), nn::gather_rows(mapped, right));
  // The tiny offset keeps the distance differentiable for coincident codes.
  Tensor dist = nn::sqrt(nn::add_scalar(nn::sum_axis(nn::square(diff), 1), 1e-12f));
  Tensor hinge = nn::relu(nn::add_scalar(nn::scale(dist, -1.0f), margin));
  return nn::add(mse, nn::mean(hinge));
}

Tensor total_loss(const LossTerms& p, const LossWeights& w) {
  w.validate();
  const std::pair<const char*, const Tensor*> terms[] = {{"L_rec", &p.rec}, {"L_con", &p.con}, {"L_MI", &p.mi},
                                                         {"L_id-f", &p.idf}, {"L_id-s", &p.ids}, {"L_F", &p.fv}};
  for (const auto& [name, t] : terms) {
    if (!t->defined() || t->numel() != 1) throw ValidationError(std::string("total_loss: ") + name + " is not a scalar");
    if (!std::isfinite(t->item())) throw NumericError(std::string("total_loss: ") + name + " is not finite");
  }
  Tensor total = nn::add(p.rec, nn::scale(p.con, w.con));
  total = nn::add(total, nn::scale(p.mi, w.mi));
  total = nn::add(total, nn::scale(p.idf, w.idf));
  total = nn::add(total, nn::scale(p.ids, w.ids));
  return nn::add(total, nn::scale(p.fv, w.fv));
}

}  // namespace idfvc::losses
