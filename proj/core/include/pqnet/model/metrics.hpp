// Copyright 2026 The pqnet Authors
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

#include <filesystem>
#include <ostream>
#include <span>

#include "pqnet/model/train.hpp"

namespace pqnet::model {

/// CSV with header "epoch,seed,strategy,train_loss,test_accuracy".
void write_metrics_csv(std::ostream &out, std::span<const EpochMetrics> rows, bool header = true);
void write_metrics_csv(const std::filesystem::path &path, std::span<const EpochMetrics> rows);

} // namespace pqnet::model
