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

// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <cstdlib>
#include <iostream>
#include <string>

#include "isacee/acceptance.hpp"

int main(int argc, char** argv) {
  isacee::AcceptanceOptions opts;
  if (argc > 1) {
    opts.criteria.clear();
    for (int i = 1; i < argc; ++i) opts.criteria.insert(std::stoi(argv[i]));
  }
  bool ok = true;
  for (const auto& r : isacee::run_acceptance(opts)) {
    std::cout << isacee::format_result(r) << std::endl;
    ok = ok && r.pass;
  }
  return ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
