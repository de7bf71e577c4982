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
#ifndef PARACZ_READOUT_HPP_
#define PARACZ_READOUT_HPP_

#include <array>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace paracz {

// Readout populations are ordered (gg, eg, ge, ee), first letter = qubit L.
using Populations = std::array<double, 4>;

enum class Outcome { kGG = 0, kMiddle = 1, kEE = 2 };

const char* to_string(Outcome o);

struct IQPoint {
  double i = 0.0;
  double q = 0.0;
};

// Three Gaussian response balls: gg, the shared eg/ge ball, ee.
struct BallModel {
  std::array<IQPoint, 3> centroids;
  std::array<double, 3> sigma{1.0, 1.0, 1.0};

  void validate() const;
};

struct TriangleMetrics {
  std::array<double, 3> angles{};   // interior angle at each centroid
  std::array<double, 3> lengths{};  // side opposite each centroid
};

// Pairs are ordered (gg, middle), (middle, ee), (gg, ee).
struct SeparationFidelity {
  double fidelity = 0.0;                  // 1 - sum of pair errors
  std::array<double, 3> pair_errors{};
  std::array<double, 3> ball_fidelity{};  // 1 - errors of the two pairs touching the ball
};

std::vector<IQPoint> simulate_shots(const Populations& populations, const BallModel& model,
                                    int shots, std::mt19937_64& rng);

// Throws CollinearError when the centroids span no area.
TriangleMetrics triangle_metrics(const BallModel& model);

// 1/2 erfc(S / (2 sqrt2 sigma)) and its inverse.
double pair_error(double separation, double sigma);
double separation_for_error(double error, double sigma);

SeparationFidelity separation_fidelity(const BallModel& model);
double fidelity_from_pair_errors(const std::array<double, 3>& errors);

// Nearest centroid in units of each ball's sigma; ties go to the lower outcome.
Outcome classify(const IQPoint& point, const BallModel& model);

// confusion(o, b) = probability that a shot from ball b is classified o,
// integrated on a grid.
Eigen::Matrix3d confusion_matrix(const BallModel& model);

struct ShuffleCounts {
  std::array<long, 3> bare{};
  std::optional<std::array<long, 3>> pi_L;
  std::optional<std::array<long, 3>> pi_R;
};

struct ShuffleRecovery {
  Populations populations{};
  double condition_number = 0.0;
};

std::array<long, 3> count_outcomes(const std::vector<IQPoint>& shots, const BallModel& model);

// Populations after a pi pulse on qubit L and/or R.
Populations shuffle(const Populations& p, bool pi_L, bool pi_R);

// Throws SingularSystemError when the settings cannot separate eg from ge.
ShuffleRecovery shuffle_recover(const ShuffleCounts& counts, const BallModel& model);

// Relaxation during a readout window of length t_ro.
Populations readout_decay(const Populations& p, double t_ro, double t1_L, double t1_R);

void write_shots_csv(std::ostream& out, const std::vector<IQPoint>& shots, const char* setting);

}  // namespace paracz

#endif  // PARACZ_READOUT_HPP_
