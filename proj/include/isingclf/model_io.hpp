// Copyright 2026 The isingclf Authors
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

#pragma once

#include <json.hpp>

#include "isingclf/model_eval.hpp"
#include "isingclf/preprocess.hpp"

namespace isingclf {

// JSON documents for fitted preprocessing and trained models. Doubles are
// written in shortest round-trip form, so save -> load is exact.
nlohmann::ordered_json to_json(const Preprocessing& prep);
Preprocessing preprocessing_from_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& j);

}  // namespace isingclf
