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
#include <doctest.h>

#include <cmath>
#include <random>

#include "paracz/error.hpp"
#include "paracz/readout.hpp"
#include "paracz/units.hpp"

using namespace paracz;
using doctest::Approx;

namespace {

BallModel equilateral(double side, double sigma = 1.0) {
  BallModel m;
  m.centroids = {IQPoint{0.0, 0.0}, IQPoint{side, 0.0}, IQPoint{0.5 * side, 0.5 * std::sqrt(3.0) * side}};
  m.sigma = {sigma, sigma, sigma};
  return m;
}

// Triangle with side a opposite gg, b opposite middle, c opposite ee.
BallModel triangle(double a, double b, double c) {
  const double x = (b * b + c * c - a * a) / (2.0 * c);
  BallModel m;
  m.centroids = {IQPoint{0.0, 0.0}, IQPoint{c, 0.0}, IQPoint{x, std::sqrt(b * b - x * x)}};
  return m;
}

BallModel transformed(const BallModel& m, double angle, double dx, double dy) {
  BallModel out = m;
  for (auto& p : out.centroids) {
    const double i = std::cos(angle) * p.i - std::sin(angle) * p.q + dx;
    const double q = std::sin(angle) * p.i + std::cos(angle) * p.q + dy;
    p = {i, q};
  }
  return out;
}

ShuffleCounts measure(const Populations& p, const BallModel& m, int shots, std::mt19937_64& rng,
                      bool with_pi_R) {
  ShuffleCounts c;
  c.bare = count_outcomes(simulate_shots(p, m, shots, rng), m);
  c.pi_L = count_outcomes(simulate_shots(shuffle(p, true, false), m, shots, rng), m);
  if (with_pi_R) c.pi_R = count_outcomes(simulate_shots(shuffle(p, false, true), m, shots, rng), m);
  return c;
}

}  // namespace

TEST_CASE("pair errors and separation fidelity") {
  CHECK(fidelity_from_pair_errors({0.030, 0.022, 0.027}) == Approx(0.921).epsilon(1e-12));
  CHECK(pair_error(4.0, 1.0) == Approx(0.0227501319481792).epsilon(1e-12));
  CHECK(pair_error(0.0, 0.3) == Approx(0.5));
  CHECK(separation_for_error(pair_error(2.7, 0.8), 0.8) == Approx(2.7).epsilon(1e-10));

  // Centroids placed so the pairs (gg, middle), (middle, ee), (gg, ee) err 3.0%, 2.2%, 2.7%.
  BallModel m = triangle(separation_for_error(0.022, 1.0), separation_for_error(0.027, 1.0),
                         separation_for_error(0.030, 1.0));
  const SeparationFidelity f = separation_fidelity(m);
  CHECK(f.pair_errors[0] == Approx(0.030).epsilon(1e-9));
  CHECK(f.pair_errors[1] == Approx(0.022).epsilon(1e-9));
  CHECK(f.pair_errors[2] == Approx(0.027).epsilon(1e-9));
  CHECK(f.fidelity == Approx(0.921).epsilon(1e-9));
  CHECK(f.ball_fidelity[0] == Approx(1.0 - 0.030 - 0.027).epsilon(1e-9));

  CHECK(separation_fidelity(equilateral(60.0)).fidelity == Approx(1.0));

  // Unequal sigmas use their mean.
  BallModel w = equilateral(4.0);
  w.sigma = {0.5, 1.5, 1.0};
  CHECK(separation_fidelity(w).pair_errors[0] == Approx(pair_error(4.0, 1.0)));
}

TEST_CASE("separation fidelity is monotone in each separation") {
  double last = 0.0;
  for (double s = 0.5; s < 8.0; s += 0.25) {
    BallModel m = triangle(4.0, 4.0, s);
    const double f = separation_fidelity(m).fidelity;
    CHECK(f >= last);
    last = f;
  }
}

TEST_CASE("triangle metrics") {
  const TriangleMetrics e = triangle_metrics(equilateral(3.0));
  for (int k = 0; k < 3; ++k) {
    CHECK(e.angles[k] == Approx(kPi / 3.0));
    CHECK(e.lengths[k] == Approx(3.0));
  }
  BallModel r;
  r.centroids = {IQPoint{0.0, 0.0}, IQPoint{2.0, 0.0}, IQPoint{0.0, 2.0}};
  const TriangleMetrics t = triangle_metrics(r);
  CHECK(t.angles[0] == Approx(kPi / 2.0));
  CHECK(t.angles[1] == Approx(kPi / 4.0));
  CHECK(t.angles[2] == Approx(kPi / 4.0));
  CHECK(t.lengths[0] == Approx(2.0 * std::sqrt(2.0)));
  CHECK(t.angles[0] + t.angles[1] + t.angles[2] == Approx(kPi).epsilon(1e-12));

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int n = 0; n < 50; ++n) {
    BallModel m;
    for (auto& p : m.centroids) p = {u(rng), u(rng)};
    const TriangleMetrics a = triangle_metrics(m);
    const TriangleMetrics b = triangle_metrics(transformed(m, u(rng), u(rng), u(rng)));
    CHECK(std::abs(a.angles[0] + a.angles[1] + a.angles[2] - kPi) < 1e-9);
    for (int k = 0; k < 3; ++k) {
      CHECK(b.angles[k] == Approx(a.angles[k]).epsilon(1e-9));
      CHECK(b.lengths[k] == Approx(a.lengths[k]).epsilon(1e-9));
    }
  }

  BallModel line;
  line.centroids = {IQPoint{0.0, 0.0}, IQPoint{1.0, 1.0}, IQPoint{3.0, 3.0}};
  CHECK_THROWS_AS(triangle_metrics(line), CollinearError);
}

TEST_CASE("classification") {
  const BallModel m = equilateral(4.0);
  for (int b = 0; b < 3; ++b) CHECK(classify(m.centroids[b], m) == static_cast<Outcome>(b));
  CHECK(classify({2.0, 0.0}, m) == Outcome::kGG);
  CHECK(classify({3.0, std::sqrt(3.0)}, m) == Outcome::kMiddle);

  // Accuracy per prepared ball against 1 minus its two pair errors.
  std::mt19937_64 rng(12);
  const int n = 100000;
  const SeparationFidelity f = separation_fidelity(m);
  for (int b = 0; b < 3; ++b) {
    Populations p{};
    p[b == 0 ? 0 : b == 1 ? 1 : 3] = 1.0;
    const auto c = count_outcomes(simulate_shots(p, m, n, rng), m);
    CHECK(static_cast<double>(c[b]) / n == Approx(f.ball_fidelity[b]).epsilon(0.01));
  }
}

TEST_CASE("shot simulation") {
  BallModel m = equilateral(4.0);
  std::mt19937_64 rng(1);
  m.sigma = {1e-12, 1e-12, 1e-12};
  for (const IQPoint& p : simulate_shots({1.0, 0.0, 0.0, 0.0}, m, 100, rng))
    CHECK(std::hypot(p.i - m.centroids[0].i, p.q - m.centroids[0].q) < 1e-9);
  for (const IQPoint& p : simulate_shots({0.0, 0.5, 0.5, 0.0}, m, 100, rng))
    CHECK(classify(p, m) == Outcome::kMiddle);

  m = equilateral(4.0, 0.7);
  const int n = 100000;
  const auto shots = simulate_shots({0.0, 0.0, 0.0, 1.0}, m, n, rng);
  double si = 0.0, sq = 0.0;
  for (const auto& p : shots) {
    si += p.i;
    sq += p.q;
  }
  CHECK(std::abs(si / n - m.centroids[2].i) < 4.0 * 0.7 / std::sqrt(n));
  CHECK(std::abs(sq / n - m.centroids[2].q) < 4.0 * 0.7 / std::sqrt(n));
  CHECK_THROWS_AS(simulate_shots({0.5, 0.5, 0.5, 0.0}, m, 10, rng), ValidationError);
}

TEST_CASE("shuffle recovery") {
  const BallModel m = equilateral(12.0);
  std::mt19937_64 rng(3);
  CHECK(shuffle({0.1, 0.2, 0.3, 0.4}, true, false) == Populations{0.2, 0.1, 0.4, 0.3});

  ShuffleRecovery r = shuffle_recover(measure({0.0, 1.0, 0.0, 0.0}, m, 1000, rng, false), m);
  CHECK(r.populations[1] == Approx(1.0).epsilon(1e-6));
  CHECK(r.condition_number > 1.0);

  for (const Populations p : {Populations{0.25, 0.25, 0.25, 0.25}, Populations{0.4, 0.3, 0.2, 0.1}}) {
    const int shots = 10000;
    r = shuffle_recover(measure(p, equilateral(4.0), shots, rng, true), equilateral(4.0));
    double total = 0.0;
    for (int s = 0; s < 4; ++s) {
      total += r.populations[s];
      CHECK(r.populations[s] >= 0.0);
      // Multinomial 3 sigma, inflated by the inversion.
      CHECK(std::abs(r.populations[s] - p[s]) <
            3.0 * std::sqrt(p[s] * (1.0 - p[s]) / shots) * r.condition_number);
    }
    CHECK(total == Approx(1.0));
  }

  ShuffleCounts bare_only;
  bare_only.bare = {100, 50, 20};
  CHECK_THROWS_AS(shuffle_recover(bare_only, m), SingularSystemError);
}

TEST_CASE("readout decay") {
  const Populations p = readout_decay({0.0, 0.0, 0.0, 1.0}, 500e-9, 15e-6, 15e-6);
  const double k = std::exp(-0.5 / 15.0);
  CHECK(p[3] == Approx(k * k));
  CHECK(1.0 - readout_decay({0.0, 1.0, 0.0, 0.0}, 500e-9, 15e-6, 15e-6)[1] == Approx(0.0328).epsilon(0.01));
  CHECK(p[0] + p[1] + p[2] + p[3] == Approx(1.0));
  CHECK(readout_decay({0.1, 0.2, 0.3, 0.4}, 0.0, 1e-6, 1e-6) == Populations{0.1, 0.2, 0.3, 0.4});
  CHECK_THROWS_AS(readout_decay(p, 1e-7, 0.0, 1e-6), ValidationError);
}
