// Copyright 2026 The partonloop Authors
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

#ifndef PARTONLOOP_RECORD_H
#define PARTONLOOP_RECORD_H

#include <cstdint>
#include <vector>

#include "partonloop/lattice.h"

namespace partonloop {

/// One single-site measurement. Bases and outcomes are in toric-code labels;
/// outcome 0 means the sweep ran without outcome simulation.
struct MeasurementEntry {
    uint32_t site;
    Basis basis;
    int8_t outcome;
    bool forced;
};

struct MeasurementRecord {
    std::vector<MeasurementEntry> entries;
};

}  // namespace partonloop

#endif
