// Copyright 2026 the genie authors
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

#include "genie/gridstore/grid_field.h"

namespace genie::simkit {

/// 1 - RMSE / range, where the reference is first averaged onto the
/// field's grid over the field's extent. A constant reference scores 1
/// when matched exactly and 0 otherwise. Errors: GeometryMismatch when the
/// reference grid does not nest in the field's grid or does not cover it.
double accuracy_score(const gridstore::GridField &field, const gridstore::GridField &reference);

/// The reference averaged onto `like`'s grid and extent.
gridstore::GridField restrict_to(const gridstore::GridField &reference, const gridstore::GridField &like);

}  // namespace genie::simkit
