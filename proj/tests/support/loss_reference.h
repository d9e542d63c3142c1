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

#ifndef IDFVC_TESTS_SUPPORT_LOSS_REFERENCE_H_
#define IDFVC_TESTS_SUPPORT_LOSS_REFERENCE_H_

// Float64 double-loop oracles for the training objectives.

#include <cmath>
#include <vector>

#include "idfvc/losses/losses.h"
#include "support/dense_reference.h"

namespace idfvc::testing {

inline double row_norm(const Dense& a, std::size_t i) {
  double s = 0;
  for (std::size_t j = 0; j < a.c; ++j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

inline double reference_contrastive(const Dense& face, const Dense& speech, const std::vector<std::size_t>& ids,
                                    double tau) {
  const std::size_t n = face.r;
  double loss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> s(n);
    for (std::size_t j = 0; j < n; ++j) {
      double dot = 0;
      for (std::size_t k = 0; k < face.c; ++k) dot += face(i, k) * speech(j, k);
      s[j] = dot / (row_norm(face, i) * row_norm(speech, j)) / tau;
    }
    const auto lp = log_softmax(s);
    for (std::size_t j = 0; j < n; ++j)
      if (ids[i] == ids[j]) loss -= lp[j];
  }
  return loss / static_cast<double>(n);
}

inline double reference_cross_entropy(const Dense& logits, const std::vector<std::size_t>& ids) {
  double loss = 0;
  for (std::size_t i = 0; i < logits.r; ++i) {
    std::vector<double> row(logits.v.begin() + i * logits.c, logits.v.begin() + (i + 1) * logits.c);
    loss -= log_softmax(row)[ids[i]];
  }
  return loss / static_cast<double>(logits.r);
}

struct DenseGaussian {
  Dense mean, logvar;
};

inline DenseGaussian reference_qnet(const losses::VariationalNet& q, const Dense& spk) {
  DenseGaussian g{linear(linear(spk, q.mean_hidden, true), q.mean_out, false),
                  linear(linear(spk, q.logvar_hidden, true), q.logvar_out, false)};
  for (double& v : g.logvar.v) v = std::clamp(v, -8.0, 8.0);
  return g;
}

// Full Gaussian log density, constants included.
inline double log_gaussian(const DenseGaussian& g, std::size_t i, const Dense& con, std::size_t j) {
  double s = 0;
  for (std::size_t d = 0; d < con.c; ++d) {
    const double lv = g.logvar(i, d), diff = con(j, d) - g.mean(i, d);
    s += -0.5 * std::log(2.0 * M_PI) - 0.5 * lv - 0.5 * diff * diff / std::exp(lv);
  }
  return s;
}

inline double reference_club(const DenseGaussian& g, const Dense& con) {
  const std::size_t n = con.r;
  double total = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) total += log_gaussian(g, i, con, i) - log_gaussian(g, i, con, j);
  return total / static_cast<double>(n * n);
}

inline double reference_qnet_nll(const DenseGaussian& g, const Dense& con) {
  double total = 0;
  for (std::size_t i = 0; i < con.r; ++i) total -= log_gaussian(g, i, con, i);
  return total / static_cast<double>(con.r);
}

inline double reference_fv_mapping(const Dense& mapped, const Dense& target, const std::vector<std::size_t>& ids,
                                   double margin) {
  double loss = mean_sq_diff(mapped, target);
  double hinge = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < mapped.r; ++i)
    for (std::size_t j = i + 1; j < mapped.r; ++j) {
      if (ids[i] == ids[j]) continue;
      double d = 0;
      for (std::size_t k = 0; k < mapped.c; ++k) d += (mapped(i, k) - mapped(j, k)) * (mapped(i, k) - mapped(j, k));
      hinge += std::max(0.0, margin - std::sqrt(d + 1e-12));
      ++pairs;
    }
  return pairs ? loss + hinge / static_cast<double>(pairs) : loss;
}

}  // namespace idfvc::testing

#endif  // IDFVC_TESTS_SUPPORT_LOSS_REFERENCE_H_
