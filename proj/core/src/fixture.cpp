#include "latentprobe/fixture.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "latentprobe/error.hpp"

namespace latentprobe {

namespace {

using nlohmann::json;

FixtureMethod parse_method(const json& j) {
  FixtureMethod m;
  m.name = j.at("name").get<std::string>();
  if (j.contains("anisotropy")) m.anisotropy = j["anisotropy"].get<double>();
  if (j.contains("skewness")) m.skewness = j["skewness"].get<double>();
  if (j.contains("max_hub")) m.max_hub = j["max_hub"].get<double>();
  if (j.contains("lsh16")) {
    const json& b = j["lsh16"];
    m.unique_buckets = b.at("unique_buckets").get<double>();
    m.entropy_bits = b.at("entropy_bits").get<double>();
    m.max_bucket_pct = b.at("max_bucket_pct").get<double>();
  }
  if (j.contains("retrieval")) {
    for (const auto& [index_name, metrics] : j["retrieval"].items()) {
      for (const auto& [metric_name, pair] : metrics.items()) {
        // strip the trailing "_x100" so columns read e.g. ivf_p_at_10
        std::string key = metric_name;
        if (key.size() > 5 && key.ends_with("_x100")) key.resize(key.size() - 5);
        m.retrieval[index_name + "_" + key] = {pair.at(0).get<double>(),
                                               pair.at(1).get<double>()};
      }
    }
  }
  return m;
}

}  // namespace

Fixture parse_fixture(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("fixture: invalid JSON: ") + e.what());
  }
  Fixture f;
  try {
    f.version = j.at("fixture_version").get<int>();
    for (const auto& [key, value] : j.items()) {
      if (!value.is_object() || !value.contains("methods")) continue;
      std::vector<FixtureMethod> methods;
      for (const json& m : value["methods"]) methods.push_back(parse_method(m));
      f.datasets[key] = std::move(methods);
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("fixture: missing or mistyped field: ") +
                     e.what());
  }
  return f;
}

Fixture load_fixture_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open fixture file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_fixture(buffer.str());
}

Fixture builtin_fixture() { return parse_fixture(builtin_fixture_json()); }

std::vector<double> fixture_column(const std::vector<FixtureMethod>& methods,
                                   const std::string& column) {
  std::vector<double> values;
  values.reserve(methods.size());
  for (const FixtureMethod& m : methods) {
    std::optional<double> v;
    if (column == "anisotropy") v = m.anisotropy;
    else if (column == "skewness") v = m.skewness;
    else if (column == "max_hub") v = m.max_hub;
    else if (column == "unique_buckets") v = m.unique_buckets;
    else if (column == "entropy_bits") v = m.entropy_bits;
    else if (column == "max_bucket_pct") v = m.max_bucket_pct;
    else {
      auto it = m.retrieval.find(column);
      if (it != m.retrieval.end()) v = it->second.first;
    }
    if (!v) {
      throw InputError("fixture: method '" + m.name + "' has no column '" +
                       column + "'");
    }
    values.push_back(*v);
  }
  return values;
}

}  // namespace latentprobe
