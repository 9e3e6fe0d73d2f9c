// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The isacee Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "isacee/steering.hpp"

#include <stdexcept>

namespace isacee {

CVec steering(double theta, int n) {
  if (n < 1) throw std::invalid_argument("steering: n must be at least 1");
  CVec a(n);
  const double c = std::cos(theta);
  for (int m = 0; m < n; ++m) a(m) = std::polar(1.0, -kPi * m * c);
  return a;
}

CVec steering_derivative(double theta, int n) {
  if (n < 1) throw std::invalid_argument("steering_derivative: n must be at least 1");
  CVec d(n);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  for (int m = 0; m < n; ++m) d(m) = cplx(0.0, kPi * m * s) * std::polar(1.0, -kPi * m * c);
  return d;
}

SteeringPair steering_pair(double theta, int M, int N_rx) {
  return {steering(theta, M), steering(theta, N_rx), steering_derivative(theta, M)};
}

}  // namespace isacee
