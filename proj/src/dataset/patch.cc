// Copyright 2026 The Partition Pilot Authors
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

#include <algorithm>

#include "partition_pilot/dataset.h"
#include "partition_pilot/status.h"

namespace ppilot {

float normalized_qstep(int qp) {
  const double lo = qstep_for_qp(kMinQp);
  const double hi = qstep_for_qp(kMaxQp);
  const double v = (qstep_for_qp(qp) - lo) / (hi - lo);
  return static_cast<float>(std::clamp(v, 0.0, 1.0));
}

Patch extract_patch(const Image& img, int root_x, int root_y, int qp) {
  if (root_x < 0 || root_y < 0 || root_x + kRootSize > img.width ||
      root_y + kRootSize > img.height) {
    throw Error(ErrorCode::kOutOfBounds,
                "root block at (" + std::to_string(root_x) + "," +
                    std::to_string(root_y) + ") is not inside the image");
  }
  Patch p = Patch::zeros(Component::kLuma);
  p.qstep_norm = normalized_qstep(qp);
  for (int r = 0; r < kPatchSize; ++r) {
    const int y = root_y - 1 + r;
    for (int c = 0; c < kPatchSize; ++c) {
      const int x = root_x - 1 + c;
      p.at(0, r, c) = (x < 0 || y < 0)
                          ? kBorderFill
                          : static_cast<float>(img.at(x, y)) / 255.0f;
    }
  }
  return p;
}

}  // namespace ppilot
