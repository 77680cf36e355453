// Copyright 2026 The radar-anomaly Authors
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

#include "radar_anomaly/autodiff/checkpoint.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <type_traits>

#include "radar_anomaly/errors.hpp"

namespace radar::ad {
namespace {

constexpr std::string_view kMagic = "radar-anomaly-parameters";

template <typename T>
constexpr std::string_view dtype_name() {
  return std::is_same_v<T, float> ? "float32" : "float64";
}

template <typename V>
V parse_value(std::string_view token, std::size_t line) {
  V value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line, "bad number '" + std::string(token) + "'");
  }
  return value;
}

struct Blob {
  Shape shape;
  std::vector<double> values;
};

template <typename V>
std::vector<double> parse_values(const std::string& text, std::size_t count, std::size_t line) {
  std::vector<double> out;
  out.reserve(count);
  std::istringstream in(text);
  std::string token;
  while (in >> token) out.push_back(static_cast<double>(parse_value<V>(token, line)));
  if (out.size() != count) {
    throw ParseError(line, "expected " + std::to_string(count) + " values, got " +
                               std::to_string(out.size()));
  }
  return out;
}

}  // namespace

template <typename T>
void save_parameters(const NamedTensors<T>& params, std::ostream& out) {
  out << kMagic << ' ' << kParameterFormatVersion << ' ' << dtype_name<T>() << '\n';
  out << params.size() << '\n';
  std::array<char, 48> buf{};
  for (const auto& [name, tensor] : params) {
    out << name << ' ' << tensor.rank();
    for (std::size_t d : tensor.shape()) out << ' ' << d;
    out << '\n';
    bool first = true;
    for (T v : tensor.data()) {
      const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
      if (!first) out << ' ';
      out.write(buf.data(), ptr - buf.data());
      first = false;
    }
    out << '\n';
  }
}

template <typename T>
void save_parameters(const NamedTensors<T>& params, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write parameters '" + path.string() + "'");
  save_parameters(params, out);
}

template <typename T>
void load_parameters(std::istream& in, NamedTensors<T>& params) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError(line_no, "empty parameter file");
  std::istringstream header(line);
  std::string magic, dtype;
  int version = 0;
  header >> magic >> version >> dtype;
  if (magic != kMagic) throw ParseError(line_no, "not a parameter file");
  if (version != kParameterFormatVersion) {
    throw ParseError(line_no, "unsupported parameter format version " + std::to_string(version));
  }
  if (dtype != "float32" && dtype != "float64") {
    throw ParseError(line_no, "unknown dtype '" + dtype + "'");
  }
  ++line_no;
  if (!std::getline(in, line)) throw ParseError(line_no, "missing tensor count");
  const auto count = parse_value<std::size_t>(line, line_no);

  std::map<std::string, Blob> blobs;
  for (std::size_t t = 0; t < count; ++t) {
    ++line_no;
    if (!std::getline(in, line)) throw ParseError(line_no, "truncated parameter file");
    std::istringstream desc(line);
    std::string name;
    std::size_t rank = 0;
    if (!(desc >> name >> rank)) throw ParseError(line_no, "bad tensor descriptor");
    Blob blob;
    for (std::size_t d = 0; d < rank; ++d) {
      std::size_t dim = 0;
      if (!(desc >> dim)) throw ParseError(line_no, "bad tensor descriptor");
      blob.shape.push_back(dim);
    }
    ++line_no;
    if (!std::getline(in, line)) throw ParseError(line_no, "missing values for " + name);
    blob.values = dtype == "float32" ? parse_values<float>(line, numel(blob.shape), line_no)
                                     : parse_values<double>(line, numel(blob.shape), line_no);
    blobs.emplace(name, std::move(blob));
  }

  for (auto& [name, tensor] : params) {
    const auto it = blobs.find(name);
    if (it == blobs.end()) throw ValidationError("parameter '" + name + "' missing from file");
    if (it->second.shape != tensor.shape()) {
      throw ValidationError("parameter '" + name + "' has shape " + to_string(it->second.shape) +
                            " in file but " + to_string(tensor.shape()) + " in model");
    }
    auto data = tensor.mutable_data();
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<T>(it->second.values[i]);
  }
}

template <typename T>
void load_parameters(const std::filesystem::path& path, NamedTensors<T>& params) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open parameters '" + path.string() + "'");
  load_parameters(in, params);
}

template void save_parameters(const NamedTensors<float>&, std::ostream&);
template void save_parameters(const NamedTensors<double>&, std::ostream&);
template void save_parameters(const NamedTensors<float>&, const std::filesystem::path&);
template void save_parameters(const NamedTensors<double>&, const std::filesystem::path&);
template void load_parameters(std::istream&, NamedTensors<float>&);
template void load_parameters(std::istream&, NamedTensors<double>&);
template void load_parameters(const std::filesystem::path&, NamedTensors<float>&);
template void load_parameters(const std::filesystem::path&, NamedTensors<double>&);

}  // namespace radar::ad
