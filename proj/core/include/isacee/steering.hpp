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

#pragma once

#include "isacee/types.hpp"

namespace isacee {

/// Half-wavelength ULA response: entry m is exp(-j*pi*m*cos(theta)).
CVec steering(double theta, int n);

/// d/dtheta of steering(theta, n).
CVec steering_derivative(double theta, int n);

struct SteeringPair {
  CVec a_t;
  CVec a_r;
  CVec da_t;
};

SteeringPair steering_pair(double theta, int M, int N_rx);

}  // namespace isacee
