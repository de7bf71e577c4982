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

#ifndef PARACZ_UNITS_HPP_
#define PARACZ_UNITS_HPP_

#include <numbers>

namespace paracz {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

namespace constants {
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kPlanck = 6.62607015e-34;             // J s
inline constexpr double kHbar = kPlanck / kTwoPi;
inline constexpr double kFluxQuantum = kPlanck / (2.0 * kElementaryCharge);
}  // namespace constants

// Angular frequency (rad/s) from a frequency in Hz, and back.
constexpr double angular(double hz) { return kTwoPi * hz; }
constexpr double hertz(double rad_per_s) { return rad_per_s / kTwoPi; }

constexpr double kHz(double f) { return angular(f * 1e3); }
constexpr double MHz(double f) { return angular(f * 1e6); }
constexpr double GHz(double f) { return angular(f * 1e9); }

constexpr double ns(double t) { return t * 1e-9; }
constexpr double us(double t) { return t * 1e-6; }

enum class Qubit { L = 0, R = 1 };

constexpr int index(Qubit q) { return static_cast<int>(q); }
constexpr Qubit other(Qubit q) { return q == Qubit::L ? Qubit::R : Qubit::L; }
constexpr const char* name(Qubit q) { return q == Qubit::L ? "L" : "R"; }

}  // namespace paracz

#endif  // PARACZ_UNITS_HPP_
