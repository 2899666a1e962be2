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

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "pqnet/rng.hpp"
#include "pqnet/sim/circuit.hpp"
#include "pqnet/sim/state.hpp"

namespace pqnet::test {

inline sim::Statevector basis(std::size_t n, std::size_t index) {
    std::vector<sim::Complex> a(std::size_t{1} << n, 0.0);
    a[index] = 1.0;
    return sim::Statevector(n, std::move(a));
}

inline sim::Statevector random_state(std::size_t n, Rng &rng) {
    std::vector<sim::Complex> a(std::size_t{1} << n);
    double norm = 0.0;
    for (auto &z : a) {
        z = {rng.normal(), rng.normal()};
        norm += std::norm(z);
    }
    for (auto &z : a) {
        z /= std::sqrt(norm);
    }
    return sim::Statevector(n, std::move(a));
}

/// Random circuit over every gate kind; rotations take fresh slots.
inline sim::Circuit random_circuit(std::size_t n, std::size_t ops, Rng &rng) {
    using sim::GateKind;
    using sim::GateOp;
    static constexpr GateKind kOne[] = {GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::SX,
                                        GateKind::H,  GateKind::X,  GateKind::Y,  GateKind::Z};
    static constexpr GateKind kTwo[] = {GateKind::CNOT, GateKind::CRX, GateKind::CRY,
                                        GateKind::CRZ};
    std::vector<GateOp> out;
    std::uint32_t slot = 0;
    for (std::size_t i = 0; i < ops; ++i) {
        const bool two = n > 1 && rng.below(3) == 0;
        if (two) {
            const GateKind k = kTwo[rng.below(4)];
            const auto c = static_cast<std::uint32_t>(rng.below(n));
            auto t = static_cast<std::uint32_t>(rng.below(n - 1));
            t += t >= c ? 1 : 0;
            out.push_back(sim::is_rotation(k) ? GateOp::rotation(k, c, t, sim::ParamSlot{slot++})
                                              : GateOp::fixed(k, c, t));
        } else {
            const GateKind k = kOne[rng.below(8)];
            const auto q = static_cast<std::uint32_t>(rng.below(n));
            out.push_back(sim::is_rotation(k) ? GateOp::rotation(k, q, sim::ParamSlot{slot++})
                                              : GateOp::fixed(k, q));
        }
    }
    return sim::Circuit(n, std::move(out));
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
  public:
    explicit TempDir(const std::string &tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("pqnet_" + tag + "_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir &) = delete;
    TempDir &operator=(const TempDir &) = delete;

    const std::filesystem::path &path() const { return path_; }
    std::filesystem::path operator/(const std::string &name) const { return path_ / name; }

  private:
    std::filesystem::path path_;
};

} // namespace pqnet::test
