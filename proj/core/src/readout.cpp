// Copyright 2026 The paracz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "paracz/readout.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include <boost/math/special_functions/erf.hpp>

#include "paracz/error.hpp"
#include "paracz/units.hpp"

namespace paracz {
namespace {

constexpr int kPairs[3][2] = {{0, 1}, {1, 2}, {0, 2}};

double distance(const IQPoint& a, const IQPoint& b) { return std::hypot(a.i - b.i, a.q - b.q); }

// Ball reached by each basis state (gg, eg, ge, ee).
constexpr int kBallOf[4] = {0, 1, 1, 2};

}  // namespace

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::kGG: return "gg";
    case Outcome::kMiddle: return "middle";
    case Outcome::kEE: return "ee";
  }
  return "?";
}

void BallModel::validate() const {
  for (double s : sigma)
    if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("ball sigmas must be positive");
  for (const auto& c : centroids)
    if (!std::isfinite(c.i) || !std::isfinite(c.q)) throw ValidationError("centroid not finite");
  for (const auto& pr : kPairs)
    if (distance(centroids[pr[0]], centroids[pr[1]]) == 0.0)
      throw ValidationError("ball centroids must be distinct");
}

std::vector<IQPoint> simulate_shots(const Populations& populations, const BallModel& model,
                                    int shots, std::mt19937_64& rng) {
  model.validate();
  double total = 0.0;
  for (double p : populations) {
    if (p < 0.0) throw ValidationError("populations must be non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("populations must sum to 1");
  if (shots < 0) throw ValidationError("shot count must be non-negative");
  std::discrete_distribution<int> state(populations.begin(), populations.end());
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<IQPoint> out;
  out.reserve(shots);
  for (int s = 0; s < shots; ++s) {
    const int b = kBallOf[state(rng)];
    const double x = noise(rng);
    const double y = noise(rng);
    out.push_back({model.centroids[b].i + model.sigma[b] * x,
                   model.centroids[b].q + model.sigma[b] * y});
  }
  return out;
}

TriangleMetrics triangle_metrics(const BallModel& model) {
  model.validate();
  const auto& c = model.centroids;
  TriangleMetrics m;
  for (int v = 0; v < 3; ++v) m.lengths[v] = distance(c[(v + 1) % 3], c[(v + 2) % 3]);
  const double cross = (c[1].i - c[0].i) * (c[2].q - c[0].q) - (c[1].q - c[0].q) * (c[2].i - c[0].i);
  const double longest = *std::max_element(m.lengths.begin(), m.lengths.end());
  if (std::abs(cross) <= 1e-12 * longest * longest)
    throw CollinearError("readout centroids are collinear");
  for (int v = 0; v < 3; ++v) {
    const IQPoint& a = c[v];
    const IQPoint& b = c[(v + 1) % 3];
    const IQPoint& d = c[(v + 2) % 3];
    const double ux = b.i - a.i, uy = b.q - a.q, wx = d.i - a.i, wy = d.q - a.q;
    m.angles[v] = std::atan2(std::abs(ux * wy - uy * wx), ux * wx + uy * wy);
  }
  return m;
}

double pair_error(double separation, double sigma) {
  if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");
  return 0.5 * std::erfc(separation / (2.0 * std::sqrt(2.0) * sigma));
}

double separation_for_error(double error, double sigma) {
  if (!(error > 0.0 && error <= 0.5)) throw ValidationError("pair error must lie in (0, 0.5]");
  return 2.0 * std::sqrt(2.0) * sigma * boost::math::erfc_inv(2.0 * error);
}

double fidelity_from_pair_errors(const std::array<double, 3>& errors) {
  return 1.0 - (errors[0] + errors[1] + errors[2]);
}

SeparationFidelity separation_fidelity(const BallModel& model) {
  model.validate();
  SeparationFidelity f;
  for (int k = 0; k < 3; ++k) {
    const int a = kPairs[k][0], b = kPairs[k][1];
    f.pair_errors[k] = pair_error(distance(model.centroids[a], model.centroids[b]),
                                  0.5 * (model.sigma[a] + model.sigma[b]));
  }
  f.fidelity = fidelity_from_pair_errors(f.pair_errors);
  for (int ball = 0; ball < 3; ++ball) {
    f.ball_fidelity[ball] = 1.0;
    for (int k = 0; k < 3; ++k)
      if (kPairs[k][0] == ball || kPairs[k][1] == ball) f.ball_fidelity[ball] -= f.pair_errors[k];
  }
  return f;
}

Outcome classify(const IQPoint& point, const BallModel& model) {
  int best = 0;
  double best_d = distance(point, model.centroids[0]) / model.sigma[0];
  for (int b = 1; b < 3; ++b) {
    const double d = distance(point, model.centroids[b]) / model.sigma[b];
    if (d < best_d) {
      best_d = d;
      best = b;
    }
  }
  return static_cast<Outcome>(best);
}

Eigen::Matrix3d confusion_matrix(const BallModel& model) {
  model.validate();
  constexpr int n = 400;
  constexpr double span = 7.0;
  Eigen::Matrix3d k = Eigen::Matrix3d::Zero();
  for (int b = 0; b < 3; ++b) {
    const double s = model.sigma[b];
    const double h = 2.0 * span / n;
    double total = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double x = -span + (i + 0.5) * h;
        const double y = -span + (j + 0.5) * h;
        const double w = std::exp(-0.5 * (x * x + y * y));
        const IQPoint p{model.centroids[b].i + s * x, model.centroids[b].q + s * y};
        k(static_cast<int>(classify(p, model)), b) += w;
        total += w;
      }
    k.col(b) /= total;
  }
  return k;
}

std::array<long, 3> count_outcomes(const std::vector<IQPoint>& shots, const BallModel& model) {
  model.validate();
  std::array<long, 3> c{0, 0, 0};
  for (const auto& p : shots) ++c[static_cast<int>(classify(p, model))];
  return c;
}

Populations shuffle(const Populations& p, bool pi_L, bool pi_R) {
  Populations out{};
  for (int s = 0; s < 4; ++s) {
    const int l = (s == 1 || s == 3) ? 1 : 0;
    const int r = (s == 2 || s == 3) ? 1 : 0;
    const int nl = pi_L ? 1 - l : l;
    const int nr = pi_R ? 1 - r : r;
    const int t = nl && nr ? 3 : nl ? 1 : nr ? 2 : 0;
    out[t] += p[s];
  }
  return out;
}

ShuffleRecovery shuffle_recover(const ShuffleCounts& counts, const BallModel& model) {
  const Eigen::Matrix3d k = confusion_matrix(model);
  struct Setting {
    std::array<long, 3> c;
    bool l, r;
  };
  std::vector<Setting> settings{{counts.bare, false, false}};
  if (counts.pi_L) settings.push_back({*counts.pi_L, true, false});
  if (counts.pi_R) settings.push_back({*counts.pi_R, false, true});

  const int rows = 3 * static_cast<int>(settings.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, 4);
  Eigen::VectorXd f(rows);
  for (std::size_t s = 0; s < settings.size(); ++s) {
    const long total = settings[s].c[0] + settings[s].c[1] + settings[s].c[2];
    if (total <= 0) throw ValidationError("every measurement setting needs shots");
    for (int x = 0; x < 4; ++x) {
      Populations unit{};
      unit[x] = 1.0;
      const Populations moved = shuffle(unit, settings[s].l, settings[s].r);
      for (int y = 0; y < 4; ++y)
        for (int o = 0; o < 3; ++o) a(3 * s + o, x) += k(o, kBallOf[y]) * moved[y];
    }
    for (int o = 0; o < 3; ++o) f(3 * s + o) = static_cast<double>(settings[s].c[o]) / total;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cond = sv.size() == 4 && sv(3) > 0.0 ? sv(0) / sv(3)
                                                    : std::numeric_limits<double>::infinity();
  if (!(cond < 1e8))
    throw SingularSystemError("measurement settings cannot separate eg from ge");
  const Eigen::VectorXd x = svd.solve(f);
  ShuffleRecovery r;
  r.condition_number = cond;
  double total = 0.0;
  for (int i = 0; i < 4; ++i) {
    r.populations[i] = std::clamp(x(i), 0.0, 1.0);
    total += r.populations[i];
  }
  if (!(total > 0.0)) throw SingularSystemError("recovered populations vanish");
  for (double& p : r.populations) p /= total;
  return r;
}

Populations readout_decay(const Populations& p, double t_ro, double t1_L, double t1_R) {
  if (!(t_ro >= 0.0) || !(t1_L > 0.0) || !(t1_R > 0.0))
    throw ValidationError("readout time and T1 must be positive");
  const double kl = std::exp(-t_ro / t1_L);
  const double kr = std::exp(-t_ro / t1_R);
  Populations out{};
  // gg, eg, ge, ee
  out[3] = p[3] * kl * kr;
  out[1] = p[1] * kl + p[3] * kl * (1.0 - kr);
  out[2] = p[2] * kr + p[3] * (1.0 - kl) * kr;
  out[0] = p[0] + p[1] * (1.0 - kl) + p[2] * (1.0 - kr) + p[3] * (1.0 - kl) * (1.0 - kr);
  return out;
}

void write_shots_csv(std::ostream& out, const std::vector<IQPoint>& shots, const char* setting) {
  out << std::setprecision(12);
  for (const auto& p : shots) out << p.i << ',' << p.q << ',' << setting << '\n';
}

}  // namespace paracz
