//
// Copyright 2026 The inca-lab Authors
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
//

#include "inca/serialize.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "inca/harness.h"
#include "inca/topology.h"

namespace inca {
namespace {

using nlohmann::json;

json Vector(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json Rows(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    a.push_back(Vector(m.row(r).transpose()));
  }
  return a;
}

std::string Hex(uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

bool IsScalar(const json& j) { return !j.is_object() && !j.is_array(); }

void Write(const json& j, int indent, std::ostringstream& out) {
  const std::string pad(indent, ' ');
  const std::string inner(indent + 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << ",\n";
        first = false;
        out << inner << json(it.key()).dump() << ": ";
        Write(it.value(), indent + 2, out);
      }
      out << "\n" << pad << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), IsScalar);
      if (flat) {
        out << "[";
        for (size_t i = 0; i < j.size(); ++i) {
          if (i) out << ", ";
          Write(j[i], indent + 2, out);
        }
        out << "]";
        return;
      }
      out << "[\n";
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) out << ",\n";
        out << inner;
        Write(j[i], indent + 2, out);
      }
      out << "\n" << pad << "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      out << (std::isfinite(v) ? FormatDouble(v) : std::string("null"));
      return;
    }
    default:
      out << j.dump();
  }
}

}  // namespace

json ToJson(const NoiseSplit& split) {
  return {{"kind", SplitKindName(split.kind)},
          {"c", Vector(split.c)},
          {"z", Rows(split.z)},
          {"sigma_delta_sq", split.sigma_delta_sq}};
}

json ToJson(const CommSchedule& schedule) {
  json iterations = json::array();
  for (const SparseMat& w : schedule.w) {
    json entries = json::array();
    for (int j = 0; j < w.outerSize(); ++j) {
      for (SparseMat::InnerIterator it(w, j); it; ++it) {
        entries.push_back(json::array(
            {static_cast<int>(it.row()), j, it.value()}));
      }
    }
    iterations.push_back(entries);
  }
  return {{"n", schedule.n},
          {"T", schedule.T},
          {"static", schedule.is_static},
          {"digest", Hex(ScheduleDigest(schedule))},
          {"entry_order", "receiver, sender, weight"},
          {"iterations", iterations}};
}

json ToJson(const OnlineHistory& history) {
  json online = json::array();
  for (const auto& row : history.online) {
    json flags = json::array();
    for (char c : row) flags.push_back(c ? 1 : 0);
    online.push_back(flags);
  }
  return {{"n", history.n}, {"T", history.T}, {"online", online}};
}

json ToJson(const AdversarySystem& system) {
  json rows = json::array();
  for (const auto& [i, t] : system.rows) rows.push_back(json::array({i, t}));
  return {{"honest", system.honest}, {"T", system.T},
          {"rows", rows},            {"L", Rows(system.l)},
          {"N", Rows(system.n)},     {"y", Vector(system.y)}};
}

json ToJson(const CalibrationResult& r) {
  return {{"ok", r.ok},
          {"status", StatusName(r.status)},
          {"theorem", TheoremName(r.theorem)},
          {"rank", r.rank},
          {"required_rank", r.required_rank},
          {"coalition_size", r.coalition_size},
          {"w_u", r.w_u},
          {"sigma_ind_sq_bound", r.sigma_ind_sq_bound},
          {"sigma_ind_sq", r.sigma_ind_sq},
          {"sigma_delta_sq", r.sigma_delta_sq},
          {"delta_eta_norm_sq", r.delta_eta_norm_sq},
          {"delta_strip_norm_sq", r.delta_strip_norm_sq},
          {"binding_party", r.binding_party},
          {"max_residual", r.max_residual}};
}

json TranscriptJson(const ProtocolConfig& config, const CommSchedule& schedule,
                    const OnlineHistory& history, const Transcript& transcript) {
  json cfg = {{"n", config.n},
              {"T", config.T},
              {"sigma_ind_sq", config.sigma_ind_sq},
              {"seed", config.seed},
              {"split", ToJson(config.split)}};
  return {{"config", cfg},
          {"schedule_digest", Hex(ScheduleDigest(schedule))},
          {"online", ToJson(history)["online"]},
          {"messages", Rows(transcript.messages)},
          {"w", Vector(transcript.injected_weight)},
          {"tracked_weight", Vector(transcript.tracked_weight)}};
}

std::string DumpJson(const json& doc) {
  std::ostringstream out;
  Write(doc, 0, out);
  out << "\n";
  return out.str();
}

}  // namespace inca
