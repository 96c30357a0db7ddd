#pragma once

#include <json.hpp>

namespace ppmkit {

// Insertion-ordered so that emitted documents are byte-stable.
using Json = nlohmann::ordered_json;

}  // namespace ppmkit
