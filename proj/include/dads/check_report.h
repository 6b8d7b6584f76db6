/******************************************************************************
 * Copyright 2026 The DADS Toolkit Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#pragma once

#include <string>
#include <vector>

namespace dads {

/// Outcome of one sampled or trajectory check.  A margin >= 0 means the
/// inequality held; passed <=> worst_margin >= -tolerance.
struct CheckReport {
  std::string name;
  int n_samples = 0;
  double worst_margin = 0.0;
  std::vector<double> witness;
  double tolerance = 0.0;
  bool passed = true;
  std::string detail;

  void Finalize() { passed = worst_margin >= -tolerance; }
};

}  // namespace dads
