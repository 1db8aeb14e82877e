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

#ifndef INCA_SERIALIZE_H_
#define INCA_SERIALIZE_H_

#include <string>

#include "json.hpp"

#include "inca/accountant.h"
#include "inca/adversary.h"
#include "inca/protocol.h"
#include "inca/types.h"

namespace inca {

nlohmann::json ToJson(const NoiseSplit& split);
nlohmann::json ToJson(const CommSchedule& schedule);
nlohmann::json ToJson(const OnlineHistory& history);
nlohmann::json ToJson(const AdversarySystem& system);
nlohmann::json ToJson(const CalibrationResult& result);
// {config, schedule_digest, online, messages, w}
nlohmann::json TranscriptJson(const ProtocolConfig& config,
                              const CommSchedule& schedule,
                              const OnlineHistory& history,
                              const Transcript& transcript);

// Dump with every double printed with 17 significant digits.
std::string DumpJson(const nlohmann::json& doc);

}  // namespace inca

#endif  // INCA_SERIALIZE_H_
