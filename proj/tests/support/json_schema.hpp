#pragma once

// Minimal JSON Schema checker covering the subset used by the shipped
// schemas: type (including ["number","null"]), enum, numeric bounds,
// required/properties/additionalProperties, items/minItems. Lives in test
// code only; the production config validation is hand-rolled with precise
// field names.

#include <json.hpp>

#include <string>
#include <vector>

namespace mfgs::testing {

using nlohmann::json;

inline bool type_matches(const json& value, const std::string& type) {
    if (type == "object") return value.is_object();
    if (type == "array") return value.is_array();
    if (type == "string") return value.is_string();
    if (type == "integer") return value.is_number_integer();
    if (type == "number") return value.is_number();
    if (type == "boolean") return value.is_boolean();
    if (type == "null") return value.is_null();
    return false;
}

inline void validate_schema(const json& value, const json& schema, const std::string& where,
                            std::vector<std::string>& errors) {
    if (schema.contains("type")) {
        const json& t = schema["type"];
        bool ok = false;
        if (t.is_string()) ok = type_matches(value, t.get<std::string>());
        else
            for (const auto& alt : t) ok = ok || type_matches(value, alt.get<std::string>());
        if (!ok) {
            errors.push_back(where + ": type mismatch");
            return;
        }
    }
    if (value.is_null()) return; // nullable fields carry no further constraints

    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& alt : schema["enum"]) ok = ok || alt == value;
        if (!ok) errors.push_back(where + ": not in enum");
    }
    if (value.is_number()) {
        const double v = value.get<double>();
        if (schema.contains("minimum") && v < schema["minimum"].get<double>())
            errors.push_back(where + ": below minimum");
        if (schema.contains("exclusiveMinimum") && v <= schema["exclusiveMinimum"].get<double>())
            errors.push_back(where + ": not above exclusiveMinimum");
        if (schema.contains("maximum") && v > schema["maximum"].get<double>())
            errors.push_back(where + ": above maximum");
        if (schema.contains("exclusiveMaximum") && v >= schema["exclusiveMaximum"].get<double>())
            errors.push_back(where + ": not below exclusiveMaximum");
    }
    if (value.is_array()) {
        if (schema.contains("minItems") && value.size() < schema["minItems"].get<std::size_t>())
            errors.push_back(where + ": too few items");
        if (schema.contains("items"))
            for (std::size_t i = 0; i < value.size(); ++i)
                validate_schema(value[i], schema["items"], where + "[" + std::to_string(i) + "]",
                                errors);
    }
    if (value.is_object()) {
        if (schema.contains("required"))
            for (const auto& req : schema["required"])
                if (!value.contains(req.get<std::string>()))
                    errors.push_back(where + ": missing required '" + req.get<std::string>() + "'");
        const json props = schema.value("properties", json::object());
        for (const auto& [key, sub] : value.items()) {
            if (props.contains(key)) {
                validate_schema(sub, props[key], where + "." + key, errors);
            } else if (schema.contains("additionalProperties") &&
                       schema["additionalProperties"].is_boolean() &&
                       !schema["additionalProperties"].get<bool>()) {
                errors.push_back(where + ": unexpected property '" + key + "'");
            }
        }
    }
}

inline std::vector<std::string> schema_errors(const json& value, const json& schema) {
    std::vector<std::string> errors;
    validate_schema(value, schema, "$", errors);
    return errors;
}

} // namespace mfgs::testing
