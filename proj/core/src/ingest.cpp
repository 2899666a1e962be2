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


#include "pqnet/ingest.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "binary_io.hpp"
#include "pqnet/error.hpp"

namespace pqnet::ingest {

namespace {

bool is_gzip(std::span<const std::uint8_t> bytes) {
    return bytes.size() >= 2 && bytes[0] == 0x1f && bytes[1] == 0x8b;
}

std::vector<std::uint8_t> gunzip(std::span<const std::uint8_t> bytes, const char *what) {
    z_stream zs{};
    if (inflateInit2(&zs, 15 + 16) != Z_OK) {
        throw Error("zlib: inflateInit2 failed");
    }
    std::vector<std::uint8_t> out;
    std::uint8_t chunk[1 << 16];
    zs.next_in = const_cast<Bytef *>(bytes.data());
    zs.avail_in = static_cast<uInt>(bytes.size());
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        zs.next_out = chunk;
        zs.avail_out = sizeof(chunk);
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw FormatError(std::string(what) + ": corrupt gzip stream");
        }
        out.insert(out.end(), chunk, chunk + (sizeof(chunk) - zs.avail_out));
        if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
            inflateEnd(&zs);
            throw FormatError(std::string(what) + ": truncated gzip stream");
        }
    }
    inflateEnd(&zs);
    return out;
}

std::uint32_t get_be32(io::ByteReader &r) {
    const std::string b = r.get_bytes(4);
    return (std::uint32_t{static_cast<std::uint8_t>(b[0])} << 24) |
           (std::uint32_t{static_cast<std::uint8_t>(b[1])} << 16) |
           (std::uint32_t{static_cast<std::uint8_t>(b[2])} << 8) |
           std::uint32_t{static_cast<std::uint8_t>(b[3])};
}

void put_be32(std::vector<std::uint8_t> &out, std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) {
        out.push_back(static_cast<std::uint8_t>(v >> s));
    }
}

struct IdxArray {
    std::vector<std::uint32_t> dims;
    std::vector<std::uint8_t> data;
};

IdxArray parse_array(std::span<const std::uint8_t> raw, std::uint32_t magic, const char *what) {
    std::vector<std::uint8_t> inflated;
    if (is_gzip(raw)) {
        inflated = gunzip(raw, what);
        raw = inflated;
    }
    io::ByteReader r(raw, what);
    const std::uint32_t m = get_be32(r);
    if (m != magic) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "0x%08x", m);
        r.fail(std::string("bad magic ") + buf);
    }
    IdxArray a;
    std::uint64_t total = 1;
    for (std::uint32_t i = 0; i < (magic & 0xff); ++i) {
        a.dims.push_back(get_be32(r));
        total *= a.dims.back();
        if (total > (std::uint64_t{1} << 40)) {
            r.fail("dimension overflow");
        }
    }
    if (total > r.remaining()) {
        r.fail("truncated: header announces " + std::to_string(total) + " bytes, " +
               std::to_string(r.remaining()) + " present");
    }
    if (total < r.remaining()) {
        r.fail("trailing bytes after payload");
    }
    const std::string payload = r.get_bytes(static_cast<std::size_t>(total));
    a.data.assign(payload.begin(), payload.end());
    return a;
}

/// Row i holds the overlap of output cell i with each source pixel, divided
/// by the cell width.
std::vector<double> area_weights(std::size_t src, std::size_t dst) {
    std::vector<double> w(dst * src, 0.0);
    const double scale = static_cast<double>(src) / static_cast<double>(dst);
    for (std::size_t i = 0; i < dst; ++i) {
        const double lo = static_cast<double>(i) * scale;
        const double hi = lo + scale;
        for (std::size_t k = static_cast<std::size_t>(lo); k < src && static_cast<double>(k) < hi; ++k) {
            const double overlap = std::min(hi, static_cast<double>(k + 1)) - std::max(lo, static_cast<double>(k));
            if (overlap > 0.0) {
                w[i * src + k] = overlap / scale;
            }
        }
    }
    return w;
}

} // namespace

IdxImageSet parse_idx(std::span<const std::uint8_t> image_bytes,
                      std::span<const std::uint8_t> label_bytes) {
    IdxArray img = parse_array(image_bytes, kImageMagic, "idx images");
    IdxArray lab = parse_array(label_bytes, kLabelMagic, "idx labels");
    if (img.dims[0] != lab.dims[0]) {
        throw FormatError("idx pairing: " + std::to_string(img.dims[0]) + " images but " +
                          std::to_string(lab.dims[0]) + " labels");
    }
    IdxImageSet set;
    set.count = img.dims[0];
    set.height = img.dims[1];
    set.width = img.dims[2];
    set.pixels = std::move(img.data);
    set.labels = std::move(lab.data);
    return set;
}

IdxImageSet load_idx(const std::filesystem::path &images, const std::filesystem::path &labels) {
    return parse_idx(io::read_file(images), io::read_file(labels));
}

std::vector<std::uint8_t> encode_idx_images(const IdxImageSet &set) {
    std::vector<std::uint8_t> out;
    put_be32(out, kImageMagic);
    put_be32(out, static_cast<std::uint32_t>(set.count));
    put_be32(out, static_cast<std::uint32_t>(set.height));
    put_be32(out, static_cast<std::uint32_t>(set.width));
    out.insert(out.end(), set.pixels.begin(), set.pixels.end());
    return out;
}

std::vector<std::uint8_t> encode_idx_labels(const IdxImageSet &set) {
    std::vector<std::uint8_t> out;
    put_be32(out, kLabelMagic);
    put_be32(out, static_cast<std::uint32_t>(set.labels.size()));
    out.insert(out.end(), set.labels.begin(), set.labels.end());
    return out;
}

model::Grid downsample(std::span<const std::uint8_t> image, std::size_t height, std::size_t width) {
    constexpr std::size_t n = model::kGridSide;
    if (height == 0 || width == 0 || image.size() != height * width) {
        throw InvalidArgument("downsample: image size does not match its dimensions");
    }
    const std::vector<double> wy = area_weights(height, n);
    const std::vector<double> wx = area_weights(width, n);
    std::vector<double> rows(n * width, 0.0); // vertical pass
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t y = 0; y < height; ++y) {
            const double w = wy[i * height + y];
            if (w == 0.0) {
                continue;
            }
            for (std::size_t x = 0; x < width; ++x) {
                rows[i * width + x] += w * image[y * width + x];
            }
        }
    }
    model::Grid g{};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t x = 0; x < width; ++x) {
                acc += wx[j * width + x] * rows[i * width + x];
            }
            g[i * n + j] = acc;
        }
    }
    return g;
}

model::Grid to_grid(std::span<const std::uint8_t> image, std::size_t height, std::size_t width) {
    model::Grid g = downsample(image, height, width);
    double n2 = 0.0;
    for (double v : g) {
        n2 += v * v;
    }
    if (!(n2 > 0.0)) {
        throw EncodingError("to_grid: all-zero image");
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (double &v : g) {
        v *= inv;
    }
    return g;
}

datagen::Dataset to_dataset(const IdxImageSet &set, const AdapterOptions &options) {
    if (!(options.pedestal >= 0.0) || !std::isfinite(options.pedestal)) {
        throw InvalidArgument("to_dataset: pedestal must be finite and non-negative");
    }
    if (options.classes.empty() || options.classes.size() > datagen::kNumClasses) {
        throw InvalidArgument("to_dataset: between 1 and 8 classes required");
    }
    std::vector<std::vector<std::size_t>> picked(options.classes.size());
    for (std::size_t i = 0; i < set.count; ++i) {
        const auto it = std::find(options.classes.begin(), options.classes.end(), set.labels[i]);
        if (it == options.classes.end()) {
            continue;
        }
        auto &bucket = picked[static_cast<std::size_t>(it - options.classes.begin())];
        if (options.per_class == 0 || bucket.size() < options.per_class) {
            bucket.push_back(i);
        }
    }
    datagen::Dataset ds;
    ds.qubit_count = datagen::kWQubits;
    for (std::size_t k = 0; k < picked.size(); ++k) {
        if (options.per_class != 0 && picked[k].size() < options.per_class) {
            throw InvalidArgument("to_dataset: class " + std::to_string(options.classes[k]) +
                                  " has only " + std::to_string(picked[k].size()) + " images, " +
                                  std::to_string(options.per_class) + " requested");
        }
        for (std::size_t i : picked[k]) {
            model::Grid g = to_grid(set.image(i), set.height, set.width);
            double n2 = 0.0;
            for (double &v : g) {
                v += options.pedestal;
                n2 += v * v;
            }
            const double inv = 1.0 / std::sqrt(n2);
            std::vector<sim::Complex> amps(g.size());
            for (std::size_t j = 0; j < g.size(); ++j) {
                amps[j] = g[j] * inv;
            }
            ds.samples.push_back({sim::Statevector(datagen::kWQubits, std::move(amps)),
                                  static_cast<std::uint8_t>(k)});
        }
    }
    return ds;
}

} // namespace pqnet::ingest
