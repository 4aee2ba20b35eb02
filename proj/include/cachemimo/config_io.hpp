// Copyright 2026 The cachemimo Authors
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

#include <string>

#include "cachemimo/harness.hpp"

namespace cachemimo::sim {

/// Parses a plan from JSON text. Throws ConfigError.
ExperimentPlan plan_from_json(const std::string& text);

/// Reads and parses a config file. Throws IoError if it cannot be read.
ExperimentPlan load_plan(const std::string& path);

}  // namespace cachemimo::sim
