// Copyright 2026 The Wildcard Authors
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

#ifndef WILDCARD_GST_DESIGN_H_
#define WILDCARD_GST_DESIGN_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "wildcard/circuit.h"

namespace wildcard {

struct DesignEntry {
  Circuit circuit;
  Circuit fid_in;
  Circuit germ;
  int power = 0;
  Circuit fid_out;
  // Depth-ladder value L that produced this entry (power = L / |germ|).
  int ladder_depth = 0;
};

struct GstDesign {
  std::vector<Circuit> prep_fiducials;
  std::vector<Circuit> meas_fiducials;
  std::vector<Circuit> germs;
  std::vector<int> depths;
  std::vector<DesignEntry> entries;

  std::vector<Circuit> circuits() const;
};

// Standard six single-qubit fiducials {}, Gx, Gy, GxGx, GxGxGx, GyGyGy.
std::vector<Circuit> default_fiducials();
// 1, 2, 4, ... up to and including the largest power of two <= max_depth.
std::vector<int> depth_ladder(int max_depth);

// For each germ and each ladder depth L (in ladder order), power
// k = floor(L / |germ|) is used when k >= 1; circuits are
// fid_in + germ^k + fid_out over all fiducial pairs, deduplicated keeping the
// first occurrence. Enumeration order: germ, L, fid_in, fid_out.
GstDesign gst_design(const std::vector<Circuit>& prep_fiducials,
                     const std::vector<Circuit>& meas_fiducials,
                     const std::vector<Circuit>& germs, int max_depth);

nlohmann::json design_entry_to_json(const DesignEntry& e);
DesignEntry design_entry_from_json(const nlohmann::json& j);

}  // namespace wildcard

#endif  // WILDCARD_GST_DESIGN_H_
