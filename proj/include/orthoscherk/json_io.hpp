#pragma once

#include <json.hpp>
#include <string>

namespace orthoscherk {

using Json = nlohmann::ordered_json;

// Deterministic serialization: keys in insertion order, every floating-point
// number printed with 17 significant digits, non-finite numbers as null.
std::string dump_json(const Json& j, int indent = 2);

}  // namespace orthoscherk
