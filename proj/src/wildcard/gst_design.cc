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

#include "wildcard/gst_design.h"

#include <set>

#include "wildcard/error.h"

namespace wildcard {

std::vector<Circuit> GstDesign::circuits() const {
  std::vector<Circuit> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.circuit);
  return out;
}

std::vector<Circuit> default_fiducials() {
  return {Circuit(), Circuit::parse("Gx"), Circuit::parse("Gy"), Circuit::parse("Gx;Gx"),
          Circuit::parse("Gx;Gx;Gx"), Circuit::parse("Gy;Gy;Gy")};
}

std::vector<int> depth_ladder(int max_depth) {
  if (max_depth < 1) throw_usage("max depth must be >= 1");
  std::vector<int> out;
  for (int l = 1; l <= max_depth; l *= 2) out.push_back(l);
  return out;
}

GstDesign gst_design(const std::vector<Circuit>& prep_fiducials,
                     const std::vector<Circuit>& meas_fiducials,
                     const std::vector<Circuit>& germs, int max_depth) {
  if (germs.empty()) throw_usage("GST design needs at least one germ");
  for (const auto& g : germs) {
    if (g.empty()) throw_usage("GST germs must be non-empty");
  }
  if (prep_fiducials.empty() || meas_fiducials.empty()) throw_usage("GST design needs fiducials");
  GstDesign design{prep_fiducials, meas_fiducials, germs, depth_ladder(max_depth), {}};
  std::set<Circuit> seen;
  for (const auto& germ : germs) {
    for (int l : design.depths) {
      const int power = l / static_cast<int>(germ.depth());
      if (power < 1) continue;
      const Circuit body = germ.repeated(power);
      for (const auto& fin : prep_fiducials) {
        for (const auto& fout : meas_fiducials) {
          Circuit c = fin + body + fout;
          if (!seen.insert(c).second) continue;
          design.entries.push_back({std::move(c), fin, germ, power, fout, l});
        }
      }
    }
  }
  return design;
}

nlohmann::json design_entry_to_json(const DesignEntry& e) {
  return {{"circuit", e.circuit.str()}, {"fid_in", e.fid_in.str()}, {"germ", e.germ.str()},
          {"power", e.power},           {"fid_out", e.fid_out.str()}, {"L", e.ladder_depth}};
}

DesignEntry design_entry_from_json(const nlohmann::json& j) {
  try {
    DesignEntry e;
    e.circuit = Circuit::parse(j.at("circuit").get<std::string>());
    e.fid_in = Circuit::parse(j.at("fid_in").get<std::string>());
    e.germ = Circuit::parse(j.at("germ").get<std::string>());
    e.power = j.at("power").get<int>();
    e.fid_out = Circuit::parse(j.at("fid_out").get<std::string>());
    e.ladder_depth = j.value("L", 0);
    if (e.fid_in + e.germ.repeated(e.power) + e.fid_out != e.circuit) {
      throw_data("design entry tags do not reproduce circuit " + e.circuit.str());
    }
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw_data(std::string("malformed design entry: ") + ex.what());
  }
}

}  // namespace wildcard
