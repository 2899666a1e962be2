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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "pqnet/datagen.hpp"
#include "pqnet/model/pipeline.hpp"

namespace pqnet::ingest {

inline constexpr std::uint32_t kImageMagic = 0x00000803;
inline constexpr std::uint32_t kLabelMagic = 0x00000801;

/// 8-bit images with one label each. pixels holds count * height * width
/// intensities, image-major then row-major.
struct IdxImageSet {
    std::size_t count = 0;
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<std::uint8_t> pixels;
    std::vector<std::uint8_t> labels;

    std::span<const std::uint8_t> image(std::size_t i) const {
        return {pixels.data() + i * height * width, height * width};
    }
};

/// Parses an image file (magic 0x803) and a label file (magic 0x801), each
/// optionally gzip-compressed. Throws FormatError on bad magic, truncation,
/// dimension overflow or an image/label count mismatch.
IdxImageSet parse_idx(std::span<const std::uint8_t> image_bytes,
                      std::span<const std::uint8_t> label_bytes);

IdxImageSet load_idx(const std::filesystem::path &images, const std::filesystem::path &labels);

/// Uncompressed IDX encodings of the two halves of `set`.
std::vector<std::uint8_t> encode_idx_images(const IdxImageSet &set);
std::vector<std::uint8_t> encode_idx_labels(const IdxImageSet &set);

/// Area-weighted (box filter) resize to 16 x 16, before normalization. Each
/// output cell is the mean intensity of the source area it covers.
model::Grid downsample(std::span<const std::uint8_t> image, std::size_t height, std::size_t width);

/// downsample() followed by L2 normalization. Throws EncodingError for an
/// all-zero image.
model::Grid to_grid(std::span<const std::uint8_t> image, std::size_t height, std::size_t width);

struct AdapterOptions {
    std::vector<std::uint8_t> classes = {0, 1, 2, 3}; ///< source labels, mapped to 0..k-1
    std::size_t per_class = 0;                       ///< 0 keeps every image
    /// Added to every normalized grid entry before renormalizing, so that
    /// blank 4 x 4 patches stay encodable.
    double pedestal = 1e-3;
};

/// Converts selected images into 8-qubit states whose amplitudes are the grid
/// (so complex_to_grid recovers it). The first `per_class` images of each
/// class in file order are kept; throws InvalidArgument when a class has fewer.
datagen::Dataset to_dataset(const IdxImageSet &set, const AdapterOptions &options);

} // namespace pqnet::ingest
