// Copyright 2026 The retrobell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <numbers>

namespace retrobell {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces an angle to (-pi, pi].
inline double reduce_angle(double x) {
    double r = std::remainder(x, kTwoPi);
    if (r <= -kPi) {
        r += kTwoPi;
    }
    return r;
}

/// Reduces an angle to [0, 2pi).
inline double reduce_angle_positive(double x) {
    double r = std::remainder(x, kTwoPi);
    if (r < 0.0) {
        r += kTwoPi;
    }
    if (r >= kTwoPi) {
        r -= kTwoPi;
    }
    return r;
}

inline double degrees_to_radians(double deg) { return deg * (kPi / 180.0); }

}  // namespace retrobell
