#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>

#include "json.hpp"
#include "puppetwire/error.hpp"

namespace puppetwire::detail {

/// Reads the fields of one JSON object, rejecting wrong types and, on
/// finish(), any field that was never read.
class FieldReader {
 public:
  FieldReader(const nlohmann::json& object, std::string path, Code shape_error, Code unknown_field_error)
      : object_(object), path_(std::move(path)), shape_error_(shape_error), unknown_error_(unknown_field_error) {
    if (!object_.is_object()) fail(shape_error_, "expected an object");
  }

  const nlohmann::json* find(std::string_view name) {
    const auto it = object_.find(std::string(name));
    if (it == object_.end()) return nullptr;
    seen_.insert(std::string(name));
    return &*it;
  }

  const nlohmann::json& required(std::string_view name) {
    const auto* value = find(name);
    if (value == nullptr) fail(shape_error_, "missing field '" + std::string(name) + "'");
    return *value;
  }

  std::string string(std::string_view name) { return as_string(name, required(name)); }

  double number(std::string_view name) { return as_number(name, required(name)); }

  std::int64_t integer(std::string_view name) { return as_integer(name, required(name)); }

  bool boolean(std::string_view name) {
    const auto& v = required(name);
    if (!v.is_boolean()) fail(shape_error_, "field '" + std::string(name) + "' must be a boolean");
    return v.get<bool>();
  }

  std::string as_string(std::string_view name, const nlohmann::json& v) const {
    if (!v.is_string()) fail(shape_error_, "field '" + std::string(name) + "' must be a string");
    return v.get<std::string>();
  }

  double as_number(std::string_view name, const nlohmann::json& v) const {
    if (!v.is_number()) fail(shape_error_, "field '" + std::string(name) + "' must be a number");
    return v.get<double>();
  }

  std::int64_t as_integer(std::string_view name, const nlohmann::json& v) const {
    if (!v.is_number_integer()) fail(shape_error_, "field '" + std::string(name) + "' must be an integer");
    if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
      fail(shape_error_, "field '" + std::string(name) + "' is out of range");
    }
    return v.get<std::int64_t>();
  }

  /// Throws if the object carries a field nobody asked for.
  void finish() const {
    for (const auto& [name, value] : object_.items()) {
      if (!seen_.contains(name)) fail(unknown_error_, "unknown field '" + name + "'");
    }
  }

  [[noreturn]] void fail(Code code, const std::string& what) const {
    throw Error(code, path_ + ": " + what, {Diagnostic{code, {}, path_, what}});
  }

  const std::string& path() const { return path_; }

 private:
  const nlohmann::json& object_;
  std::string path_;
  Code shape_error_;
  Code unknown_error_;
  std::set<std::string> seen_;
};

}  // namespace puppetwire::detail
