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


#include "pqnet/model/metrics.hpp"

#include <fstream>
#include <iomanip>

#include "pqnet/error.hpp"

namespace pqnet::model {

void write_metrics_csv(std::ostream &out, std::span<const EpochMetrics> rows, bool header) {
    if (header) {
        out << "epoch,seed,strategy,train_loss,test_accuracy\n";
    }
    out << std::setprecision(17);
    for (const EpochMetrics &m : rows) {
        out << m.epoch << ',' << m.seed << ',' << measure::to_string(m.strategy) << ','
            << m.train_loss << ',' << m.test_accuracy << '\n';
    }
}

void write_metrics_csv(const std::filesystem::path &path, std::span<const EpochMetrics> rows) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    write_metrics_csv(out, rows);
    if (!out) {
        throw Error("failed writing " + path.string());
    }
}

} // namespace pqnet::model
