#pragma once

#include <string_view>
#include <type_traits>

#include <fmt/format.h>
#include <json.hpp>

#include "lineup/dataset.hpp"
#include "lineup/error.hpp"

namespace lineup::detail {

using json = nlohmann::json;

inline json parse_json(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("{}: {}", what, e.what()));
  }
}

template <typename T>
T field(const json& obj, const char* key, std::string_view what) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw SchemaError(fmt::format("{}: missing field '{}'", what, key));
  }
  const json& value = obj.at(key);
  if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T> &&
                !std::is_same_v<T, bool>) {
    if (!value.is_number_unsigned()) {
      throw SchemaError(fmt::format("{}: field '{}' must be a nonnegative integer",
                                    what, key));
    }
  }
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw SchemaError(fmt::format("{}: field '{}' has the wrong type", what, key));
  }
}

json dataset_to_json_value(const Dataset& data);
Dataset dataset_from_json_value(const json& value);

}  // namespace lineup::detail
