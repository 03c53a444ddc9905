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

#include "partprior/npy_io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "partprior/errors.hpp"

namespace partprior {

namespace {
constexpr char kMagic[] = "\x93NUMPY";
}

void write_prob_map_npy(const std::filesystem::path& path,
                        const ProbMap& probs) {
  std::ostringstream dict;
  dict << "{'descr': '<f4', 'fortran_order': False, 'shape': ("
       << probs.height() << ", " << probs.width() << ", " << probs.channels()
       << "), }";
  std::string header = dict.str();
  // Pad with spaces so magic+version+len+header is a multiple of 64.
  const std::size_t base = 6 + 2 + 2;
  std::size_t total = base + header.size() + 1;
  header.append(63 - (total + 63) % 64, ' ');
  header.push_back('\n');

  std::ofstream out(path, std::ios::binary);
  if (!out) throw_error(ErrorKind::io, "cannot write: " + path.string());
  out.write(kMagic, 6);
  out.put(1).put(0);  // version 1.0
  const std::uint16_t hlen = static_cast<std::uint16_t>(header.size());
  out.put(static_cast<char>(hlen & 0xff));
  out.put(static_cast<char>(hlen >> 8));
  out.write(header.data(), static_cast<std::streamsize>(header.size()));

  std::vector<float> buf(probs.data().size());
  for (std::size_t i = 0; i < buf.size(); ++i)
    buf[i] = static_cast<float>(probs.data()[i]);
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!out) throw_error(ErrorKind::io, "short write: " + path.string());
}

ProbMap read_prob_map_npy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_error(ErrorKind::io, "cannot read: " + path.string());

  char magic[6];
  in.read(magic, 6);
  if (!in || std::memcmp(magic, kMagic, 6) != 0)
    throw_error(ErrorKind::parse, "not an .npy file: " + path.string());
  char version[2];
  in.read(version, 2);
  if (version[0] != 1)
    throw_error(ErrorKind::parse, ".npy version not supported");
  unsigned char lenb[2];
  in.read(reinterpret_cast<char*>(lenb), 2);
  const std::size_t hlen = lenb[0] | (static_cast<std::size_t>(lenb[1]) << 8);
  std::string header(hlen, '\0');
  in.read(header.data(), static_cast<std::streamsize>(hlen));
  if (!in) throw_error(ErrorKind::parse, ".npy header truncated");

  if (header.find("'<f4'") == std::string::npos)
    throw_error(ErrorKind::schema, ".npy must be little-endian float32");
  if (header.find("'fortran_order': False") == std::string::npos)
    throw_error(ErrorKind::schema, ".npy must be C-ordered");

  const std::size_t open = header.find('(');
  const std::size_t close = header.find(')', open);
  if (open == std::string::npos || close == std::string::npos)
    throw_error(ErrorKind::parse, ".npy shape missing");
  std::string shape = header.substr(open + 1, close - open - 1);
  for (char& c : shape)
    if (c == ',') c = ' ';
  std::istringstream ss(shape);
  long h = 0, w = 0, ch = 0;
  ss >> h >> w >> ch;
  if (h <= 0 || w <= 0 || ch <= 0)
    throw_error(ErrorKind::schema, ".npy shape must be (H, W, C)");

  const std::size_t count = static_cast<std::size_t>(h) * w * ch;
  std::vector<float> buf(count);
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(count * sizeof(float)));
  if (!in) throw_error(ErrorKind::parse, ".npy data truncated");

  ProbMap probs(static_cast<int>(w), static_cast<int>(h), static_cast<int>(ch));
  for (std::size_t i = 0; i < count; ++i)
    probs.data()[i] = static_cast<double>(buf[i]);
  return probs;
}

}  // namespace partprior
