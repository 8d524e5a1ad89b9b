// Copyright 2026 The ddaug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ddaug/serialize.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ddaug {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw FormatError("pipeline document " + (where.empty() ? std::string("/") : where) + ": " + what);
}

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(where, "expected an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) fail(where + "/" + k, "unknown key '" + k + "'");
}

const json& field(const json& obj, const std::string& where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing key '") + key + "'");
  return *it;
}

double hex_value(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a hex-float string");
  try {
    return parse_hexfloat(v.get<std::string>());
  } catch (const FormatError& e) {
    fail(where, e.what());
  }
}

std::vector<double> hex_array(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of hex-float strings");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(hex_value(v[i], where + "/" + std::to_string(i)));
  return out;
}

json hex_array(const std::vector<double>& v) {
  json a = json::array();
  for (double d : v) a.push_back(hexfloat(d));
  return a;
}

std::uint64_t unsigned_value(const json& v, const std::string& where) {
  if (!v.is_number_unsigned()) fail(where, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

json spec_to_json(const ParamSpec& s) {
  json j;
  j["width"] = s.width;
  if (const auto* u = std::get_if<Uniform>(&s.dist)) {
    j["dist"] = "uniform";
    j["lo"] = hexfloat(u->lo);
    j["hi"] = hexfloat(u->hi);
  } else if (const auto* b = std::get_if<Bernoulli>(&s.dist)) {
    j["dist"] = "bernoulli";
    j["p"] = hexfloat(b->p);
  } else if (const auto* c = std::get_if<Choice>(&s.dist)) {
    j["dist"] = "choice";
    j["values"] = hex_array(c->values);
  } else {
    j["dist"] = "fixed";
    j["value"] = hexfloat(std::get<Fixed>(s.dist).value);
  }
  return j;
}

ParamSpec spec_from_json(const std::string& name, const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const json& dist = field(j, where, "dist");
  if (!dist.is_string()) fail(where + "/dist", "expected a string");
  const std::string d = dist.get<std::string>();
  ParamSpec s;
  s.name = name;
  s.width = unsigned_value(field(j, where, "width"), where + "/width");
  if (d == "uniform") {
    allow_keys(j, where, {"dist", "width", "lo", "hi"});
    s.dist = Uniform{hex_value(field(j, where, "lo"), where + "/lo"),
                     hex_value(field(j, where, "hi"), where + "/hi")};
  } else if (d == "bernoulli") {
    allow_keys(j, where, {"dist", "width", "p"});
    s.dist = Bernoulli{hex_value(field(j, where, "p"), where + "/p")};
  } else if (d == "choice") {
    allow_keys(j, where, {"dist", "width", "values"});
    s.dist = Choice{hex_array(field(j, where, "values"), where + "/values")};
  } else if (d == "fixed") {
    allow_keys(j, where, {"dist", "width", "value"});
    s.dist = Fixed{hex_value(field(j, where, "value"), where + "/value")};
  } else {
    fail(where + "/dist", "unknown distribution '" + d + "'");
  }
  return s;
}

template <typename T>
json layer_to_json(const AugLayer<T>& l) {
  json j;
  j["kind"] = kind_name(l.kind);
  j["p"] = hexfloat(l.p);
  j["dims"] = l.dims;
  j["same_on_batch"] = l.same_on_batch;
  j["specs"] = json::object();
  for (const auto& s : l.specs) j["specs"][s.name] = spec_to_json(s);
  j["static"] = json::object();
  for (const auto& [name, v] : l.static_config) j["static"][name] = hex_array(v);
  j["learnable"] = json::object();
  for (const auto& [name, t] : l.learnable)
    j["learnable"][name] = hex_array(std::vector<double>(t.data().begin(), t.data().end()));
  return j;
}

template <typename T>
AugLayer<T> layer_from_json(const json& j, const std::string& where) {
  allow_keys(j, where, {"kind", "p", "dims", "same_on_batch", "specs", "static", "learnable"});
  const json& kind = field(j, where, "kind");
  if (!kind.is_string()) fail(where + "/kind", "expected a string");
  AugLayer<T> l;
  try {
    l.kind = kind_from_name(kind.get<std::string>());
  } catch (const FormatError& e) {
    fail(where + "/kind", e.what());
  }
  l.p = hex_value(field(j, where, "p"), where + "/p");
  l.dims = unsigned_value(field(j, where, "dims"), where + "/dims");
  if (auto it = j.find("same_on_batch"); it != j.end()) {
    if (!it->is_boolean()) fail(where + "/same_on_batch", "expected a boolean");
    l.same_on_batch = it->get<bool>();
  }
  if (auto it = j.find("specs"); it != j.end()) {
    if (!it->is_object()) fail(where + "/specs", "expected an object");
    for (const auto& [name, s] : it->items()) l.specs.push_back(spec_from_json(name, s, where + "/specs/" + name));
  }
  if (auto it = j.find("static"); it != j.end()) {
    if (!it->is_object()) fail(where + "/static", "expected an object");
    for (const auto& [name, v] : it->items()) l.static_config[name] = hex_array(v, where + "/static/" + name);
  }
  if (auto it = j.find("learnable"); it != j.end()) {
    if (!it->is_object()) fail(where + "/learnable", "expected an object");
    for (const auto& [name, v] : it->items()) {
      const auto values = hex_array(v, where + "/learnable/" + name);
      if (values.empty()) fail(where + "/learnable/" + name, "empty value list");
      Tensor<T> t({values.size()}, std::vector<T>(values.begin(), values.end()));
      t.set_requires_grad(true);
      l.learnable[name] = std::move(t);
    }
  }
  try {
    l.validate();
  } catch (const ArgumentError& e) {
    fail(where, e.what());
  }
  return l;
}

}  // namespace

std::string hexfloat(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hexfloat(const std::string& text) {
  if (text.empty()) throw FormatError("empty number");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) throw FormatError("malformed number '" + text + "'");
  return v;
}

template <typename T>
std::string save_pipeline(const Pipeline<T>& pipe) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["rng"] = {{"algorithm", RngState::kAlgorithm}, {"seed", pipe.rng.seed}, {"counter", pipe.rng.counter}};
  doc["layers"] = json::array();
  for (const auto& l : pipe.layers) doc["layers"].push_back(layer_to_json(l));
  return doc.dump(2) + "\n";
}

template <typename T>
void save_pipeline(const Pipeline<T>& pipe, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << save_pipeline(pipe);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

template <typename T>
Pipeline<T> load_pipeline(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("pipeline document is not valid JSON: ") + e.what());
  }
  allow_keys(doc, "", {"format_version", "rng", "layers"});
  const json& version = field(doc, "", "format_version");
  if (!version.is_number_integer() || version.get<long long>() != kFormatVersion)
    fail("/format_version", "unsupported version " + version.dump() + " (expected " +
                                std::to_string(kFormatVersion) + ")");

  const json& rng = field(doc, "", "rng");
  allow_keys(rng, "/rng", {"algorithm", "seed", "counter"});
  const json& algo = field(rng, "/rng", "algorithm");
  if (!algo.is_string() || algo.get<std::string>() != RngState::kAlgorithm)
    fail("/rng/algorithm", "generator " + algo.dump() + " does not match '" + RngState::kAlgorithm + "'");

  Pipeline<T> pipe;
  pipe.rng.seed = unsigned_value(field(rng, "/rng", "seed"), "/rng/seed");
  pipe.rng.counter = unsigned_value(field(rng, "/rng", "counter"), "/rng/counter");

  const json& layers = field(doc, "", "layers");
  if (!layers.is_array()) fail("/layers", "expected an array");
  for (std::size_t i = 0; i < layers.size(); ++i)
    pipe.layers.push_back(layer_from_json<T>(layers[i], "/layers/" + std::to_string(i)));
  try {
    pipe.validate();
  } catch (const ArgumentError& e) {
    fail("/layers", e.what());
  }
  return pipe;
}

template <typename T>
Pipeline<T> load_pipeline_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_pipeline<T>(ss.str());
}

#define DDAUG_INSTANTIATE(T)                                                          \
  template std::string save_pipeline<T>(const Pipeline<T>&);                          \
  template void save_pipeline<T>(const Pipeline<T>&, const std::filesystem::path&);   \
  template Pipeline<T> load_pipeline<T>(const std::string&);                          \
  template Pipeline<T> load_pipeline_file<T>(const std::filesystem::path&);

DDAUG_INSTANTIATE(float)
DDAUG_INSTANTIATE(double)
#undef DDAUG_INSTANTIATE

}  // namespace ddaug
