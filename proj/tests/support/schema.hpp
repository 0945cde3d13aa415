#pragma once

#include <fstream>
#include <string>

#include "json.hpp"

namespace mcs::test {

/// Minimal structural validator for the shipped schemas: supports type
/// (including type lists), required, properties, items and
/// additionalProperties. Enough to enforce the documented output shapes.
inline bool validate_schema(const nlohmann::json& value, const nlohmann::json& schema,
                            std::string& error, const std::string& path = "$") {
  using nlohmann::json;

  if (schema.contains("type")) {
    auto matches = [&](const std::string& type) {
      if (type == "object") return value.is_object();
      if (type == "array") return value.is_array();
      if (type == "string") return value.is_string();
      if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
      if (type == "number") return value.is_number();
      if (type == "boolean") return value.is_boolean();
      if (type == "null") return value.is_null();
      return false;
    };
    bool ok = false;
    if (schema["type"].is_array()) {
      for (const auto& t : schema["type"]) ok = ok || matches(t.get<std::string>());
    } else {
      ok = matches(schema["type"].get<std::string>());
    }
    if (!ok) {
      error = path + ": type mismatch (got " + std::string(value.type_name()) + ")";
      return false;
    }
  }

  if (value.is_object()) {
    if (schema.contains("required")) {
      for (const auto& key : schema["required"]) {
        if (!value.contains(key.get<std::string>())) {
          error = path + ": missing required key '" + key.get<std::string>() + "'";
          return false;
        }
      }
    }
    const json props = schema.value("properties", json::object());
    for (const auto& [key, member] : value.items()) {
      if (props.contains(key)) {
        if (!validate_schema(member, props[key], error, path + "." + key)) return false;
      } else if (schema.contains("additionalProperties") &&
                 schema["additionalProperties"].is_object()) {
        if (!validate_schema(member, schema["additionalProperties"], error, path + "." + key)) {
          return false;
        }
      }
    }
  }

  if (value.is_array() && schema.contains("items")) {
    std::size_t index = 0;
    for (const auto& item : value) {
      if (!validate_schema(item, schema["items"], error,
                           path + "[" + std::to_string(index++) + "]")) {
        return false;
      }
    }
  }
  return true;
}

inline nlohmann::json load_schema(const std::string& name) {
  const std::string path = std::string(MCS_SCHEMA_DIR) + "/" + name;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing schema " + path);
  return nlohmann::json::parse(in);
}

}  // namespace mcs::test
