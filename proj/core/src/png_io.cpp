// Copyright 2026 The PartPrior Authors
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

#include "partprior/png_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>

#include "partprior/errors.hpp"

namespace partprior {

namespace {

constexpr std::array<std::uint8_t, 8> kSignature = {0x89, 'P', 'N', 'G',
                                                    0x0d, 0x0a, 0x1a, 0x0a};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return (static_cast<std::uint32_t>(p[0]) << 24) |
         (static_cast<std::uint32_t>(p[1]) << 16) |
         (static_cast<std::uint32_t>(p[2]) << 8) | p[3];
}

void append_chunk(std::vector<std::uint8_t>& out, const char type[4],
                  const std::uint8_t* data, std::size_t len) {
  put_u32(out, static_cast<std::uint32_t>(len));
  const std::size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  if (len) out.insert(out.end(), data, data + len);
  const uLong crc =
      crc32(0L, out.data() + start, static_cast<uInt>(4 + len));
  put_u32(out, static_cast<std::uint32_t>(crc));
}

std::vector<std::uint8_t> deflate_bytes(const std::vector<std::uint8_t>& raw) {
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> packed(bound);
  if (compress2(packed.data(), &bound, raw.data(),
                static_cast<uLong>(raw.size()), 6) != Z_OK)
    throw_error(ErrorKind::io, "zlib compression failed");
  packed.resize(bound);
  return packed;
}

std::vector<std::uint8_t> inflate_bytes(const std::vector<std::uint8_t>& packed,
                                        std::size_t expected) {
  std::vector<std::uint8_t> raw(expected);
  uLongf len = static_cast<uLongf>(expected);
  if (uncompress(raw.data(), &len, packed.data(),
                 static_cast<uLong>(packed.size())) != Z_OK ||
      len != expected)
    throw_error(ErrorKind::parse, "PNG: corrupt zlib stream");
  return raw;
}

// Fixed label palette: part classes get distinct colors, uncertain is
// white, unused indices fall on a gray ramp so any viewer shows
// something sensible.
std::array<std::uint8_t, 256 * 3> label_palette() {
  std::array<std::uint8_t, 256 * 3> pal{};
  for (int i = 0; i < 256; ++i)
    pal[3 * i] = pal[3 * i + 1] = pal[3 * i + 2] =
        static_cast<std::uint8_t>(i);
  const std::uint8_t colors[7][3] = {
      {0, 0, 0},       // background
      {128, 0, 0},     // head
      {0, 128, 0},     // torso
      {128, 128, 0},   // upper arm
      {0, 0, 128},     // lower arm
      {128, 0, 128},   // upper leg
      {0, 128, 128},   // lower leg
  };
  for (int c = 0; c < 7; ++c)
    for (int k = 0; k < 3; ++k) pal[3 * c + k] = colors[c][k];
  pal[3 * 255] = pal[3 * 255 + 1] = pal[3 * 255 + 2] = 255;  // uncertain
  return pal;
}

void write_png(const std::filesystem::path& path, const std::uint8_t* pixels,
               int width, int height, int channels, bool indexed) {
  const std::size_t row = static_cast<std::size_t>(width) * channels;
  std::vector<std::uint8_t> raw;
  raw.reserve((row + 1) * height);
  for (int y = 0; y < height; ++y) {
    raw.push_back(0);  // filter: none
    raw.insert(raw.end(), pixels + y * row, pixels + (y + 1) * row);
  }
  const std::vector<std::uint8_t> idat = deflate_bytes(raw);

  std::vector<std::uint8_t> out;
  out.insert(out.end(), kSignature.begin(), kSignature.end());

  std::vector<std::uint8_t> ihdr;
  put_u32(ihdr, static_cast<std::uint32_t>(width));
  put_u32(ihdr, static_cast<std::uint32_t>(height));
  ihdr.push_back(8);                                    // bit depth
  ihdr.push_back(indexed ? 3 : (channels == 3 ? 2 : 0));  // color type
  ihdr.push_back(0);                                    // compression
  ihdr.push_back(0);                                    // filter
  ihdr.push_back(0);                                    // no interlace
  append_chunk(out, "IHDR", ihdr.data(), ihdr.size());

  if (indexed) {
    const auto pal = label_palette();
    append_chunk(out, "PLTE", pal.data(), pal.size());
  }
  append_chunk(out, "IDAT", idat.data(), idat.size());
  append_chunk(out, "IEND", nullptr, 0);

  std::ofstream file(path, std::ios::binary);
  if (!file) throw_error(ErrorKind::io, "cannot open for write: " + path.string());
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
  if (!file) throw_error(ErrorKind::io, "short write: " + path.string());
}

struct DecodedPng {
  int width = 0;
  int height = 0;
  int channels = 0;  // 1 (gray or palette index), 3 (rgb)
  std::vector<std::uint8_t> pixels;
};

int paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

DecodedPng read_png(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw_error(ErrorKind::io, "cannot open: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(file)),
                                  std::istreambuf_iterator<char>());

  if (bytes.size() < 8 ||
      !std::equal(kSignature.begin(), kSignature.end(), bytes.begin()))
    throw_error(ErrorKind::parse, "not a PNG file: " + path.string());

  int width = 0, height = 0, bit_depth = 0, color_type = 0, interlace = 0;
  std::vector<std::uint8_t> idat;
  bool seen_ihdr = false, seen_iend = false;

  std::size_t pos = 8;
  while (pos + 8 <= bytes.size() && !seen_iend) {
    const std::uint32_t len = get_u32(bytes.data() + pos);
    if (pos + 12 + len > bytes.size())
      throw_error(ErrorKind::parse, "PNG: truncated chunk");
    const char* type = reinterpret_cast<const char*>(bytes.data() + pos + 4);
    const std::uint8_t* data = bytes.data() + pos + 8;

    if (std::memcmp(type, "IHDR", 4) == 0) {
      if (len != 13) throw_error(ErrorKind::parse, "PNG: bad IHDR");
      width = static_cast<int>(get_u32(data));
      height = static_cast<int>(get_u32(data + 4));
      bit_depth = data[8];
      color_type = data[9];
      interlace = data[12];
      seen_ihdr = true;
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      idat.insert(idat.end(), data, data + len);
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      seen_iend = true;
    }
    // PLTE and ancillary chunks are skipped: indices are the payload.
    pos += 12 + len;
  }

  if (!seen_ihdr || width <= 0 || height <= 0)
    throw_error(ErrorKind::parse, "PNG: missing or bad IHDR");
  if (bit_depth != 8)
    throw_error(ErrorKind::parse, "PNG: only 8-bit files are supported");
  if (interlace != 0)
    throw_error(ErrorKind::parse, "PNG: interlaced files are not supported");

  int channels;
  switch (color_type) {
    case 0: channels = 1; break;  // gray
    case 2: channels = 3; break;  // rgb
    case 3: channels = 1; break;  // palette indices
    case 6: channels = 4; break;  // rgba (alpha dropped later)
    default:
      throw_error(ErrorKind::parse, "PNG: unsupported color type");
  }

  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  std::vector<std::uint8_t> raw =
      inflate_bytes(idat, (stride + 1) * static_cast<std::size_t>(height));

  DecodedPng out;
  out.width = width;
  out.height = height;
  out.channels = channels == 4 ? 3 : channels;
  out.pixels.resize(stride * static_cast<std::size_t>(height));

  // Undo per-scanline filters in place.
  std::vector<std::uint8_t> prev(stride, 0);
  for (int y = 0; y < height; ++y) {
    const std::uint8_t filter = raw[(stride + 1) * y];
    std::uint8_t* line = raw.data() + (stride + 1) * y + 1;
    for (std::size_t x = 0; x < stride; ++x) {
      const int a = x >= static_cast<std::size_t>(channels)
                        ? line[x - channels]
                        : 0;
      const int b = prev[x];
      const int c = x >= static_cast<std::size_t>(channels)
                        ? prev[x - channels]
                        : 0;
      int v = line[x];
      switch (filter) {
        case 0: break;
        case 1: v += a; break;
        case 2: v += b; break;
        case 3: v += (a + b) / 2; break;
        case 4: v += paeth(a, b, c); break;
        default:
          throw_error(ErrorKind::parse, "PNG: unknown filter type");
      }
      line[x] = static_cast<std::uint8_t>(v);
    }
    std::memcpy(prev.data(), line, stride);
    std::memcpy(out.pixels.data() + stride * y, line, stride);
  }

  if (channels == 4) {  // strip alpha
    std::vector<std::uint8_t> rgb(static_cast<std::size_t>(width) * height * 3);
    for (std::size_t i = 0; i < static_cast<std::size_t>(width) * height; ++i)
      for (int k = 0; k < 3; ++k) rgb[i * 3 + k] = out.pixels[i * 4 + k];
    out.pixels = std::move(rgb);
  }
  return out;
}

}  // namespace

void write_label_png(const std::filesystem::path& path,
                     const LabelGrid& labels) {
  write_png(path, labels.data().data(), labels.width(), labels.height(), 1,
            /*indexed=*/true);
}

void write_label_png(const std::filesystem::path& path,
                     const TriStateMap& map) {
  write_label_png(path, map.labels());
}

LabelGrid read_label_png(const std::filesystem::path& path) {
  DecodedPng png = read_png(path);
  if (png.channels != 1)
    throw_error(ErrorKind::parse,
                "expected a single-channel label PNG: " + path.string());
  LabelGrid grid(png.width, png.height);
  grid.data() = std::move(png.pixels);
  return grid;
}

TriStateMap read_tri_state_png(const std::filesystem::path& path) {
  TriStateMap map(read_label_png(path));
  if (!map.is_partition())
    throw_error(ErrorKind::schema,
                "label PNG contains values outside 0..6 and 255: " +
                    path.string());
  return map;
}

void write_rgb_png(const std::filesystem::path& path, const RgbImage& image) {
  write_png(path, image.data().data(), image.width(), image.height(), 3,
            /*indexed=*/false);
}

RgbImage read_rgb_png(const std::filesystem::path& path) {
  DecodedPng png = read_png(path);
  RgbImage image(png.width, png.height);
  if (png.channels == 3) {
    image.data() = std::move(png.pixels);
  } else {
    for (std::size_t i = 0; i < png.pixels.size(); ++i)
      for (int k = 0; k < 3; ++k) image.data()[i * 3 + k] = png.pixels[i];
  }
  return image;
}

}  // namespace partprior
