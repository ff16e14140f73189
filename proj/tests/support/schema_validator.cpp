#include "support/schema_validator.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace lptest {

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open json file: " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

namespace {

using nlohmann::json;

struct Validator {
  const json& root;
  std::vector<std::string> errors;

  void fail(const std::string& path, const std::string& msg) {
    errors.push_back(path + ": " + msg);
  }

  const json& resolve(const json& schema) {
    if (schema.contains("$ref")) {
      const std::string ref = schema["$ref"].get<std::string>();
      const std::string prefix = "#/definitions/";
      if (ref.rfind(prefix, 0) == 0) {
        return root.at("definitions").at(ref.substr(prefix.size()));
      }
    }
    return schema;
  }

  static bool matches_type(const json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "integer") {
      return v.is_number_integer() ||
             (v.is_number_float() &&
              v.get<double>() == std::floor(v.get<double>()));
    }
    if (t == "number") return v.is_number();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    return false;
  }

  void check(const json& raw_schema, const json& v, const std::string& path) {
    const json& schema = resolve(raw_schema);

    if (schema.contains("type")) {
      const std::string t = schema["type"].get<std::string>();
      if (!matches_type(v, t)) {
        fail(path, "expected type " + t + ", got " + std::string(v.type_name()));
        return;
      }
    }
    if (schema.contains("enum")) {
      bool found = false;
      for (const json& option : schema["enum"]) {
        if (option == v) found = true;
      }
      if (!found) fail(path, "value " + v.dump() + " not in enum");
    }
    if (v.is_number()) {
      const double x = v.get<double>();
      if (schema.contains("minimum") && x < schema["minimum"].get<double>()) {
        fail(path, "below minimum " + schema["minimum"].dump());
      }
      if (schema.contains("maximum") && x > schema["maximum"].get<double>()) {
        fail(path, "above maximum " + schema["maximum"].dump());
      }
      if (schema.contains("exclusiveMinimum") &&
          x <= schema["exclusiveMinimum"].get<double>()) {
        fail(path, "not above exclusiveMinimum " +
                       schema["exclusiveMinimum"].dump());
      }
    }
    if (v.is_object()) {
      for (const json& req : schema.value("required", json::array())) {
        if (!v.contains(req.get<std::string>())) {
          fail(path, "missing required property " + req.dump());
        }
      }
      const json props = schema.value("properties", json::object());
      for (const auto& [key, member] : v.items()) {
        if (props.contains(key)) {
          check(props[key], member, path + "/" + key);
        } else if (schema.contains("additionalProperties")) {
          const json& extra = schema["additionalProperties"];
          if (extra.is_boolean() && !extra.get<bool>()) {
            fail(path, "unexpected property " + key);
          } else if (extra.is_object()) {
            check(extra, member, path + "/" + key);
          }
        }
      }
    }
    if (v.is_array()) {
      if (schema.contains("minItems") &&
          v.size() < schema["minItems"].get<std::size_t>()) {
        fail(path, "fewer than minItems " + schema["minItems"].dump());
      }
      if (schema.contains("items")) {
        for (std::size_t i = 0; i < v.size(); ++i) {
          check(schema["items"], v[i], path + "/" + std::to_string(i));
        }
      }
    }
  }
};

}  // namespace

std::vector<std::string> schema_errors(const json& schema,
                                       const json& instance) {
  Validator v{schema, {}};
  v.check(schema, instance, "#");
  return v.errors;
}

}  // namespace lptest
