#pragma once

// JSON encoding of property values shared by the snapshot dump and the
// triple literal encoding.

#include <json.hpp>

#include "lcag/value.hpp"

namespace lcag::detail {

using ojson = nlohmann::ordered_json;

ojson uncertainty_to_json(const Uncertainty& u);
Uncertainty uncertainty_from_json(const ojson& j);

ojson quantity_to_json(const Quantity& q);
Quantity quantity_from_json(const ojson& j);

/// Text -> string, Int -> integer, Real -> float, Bool -> bool,
/// RealArray -> array of floats, Quantity -> {"q","u","unc"}.
ojson value_to_json(const PropertyValue& value);
PropertyValue value_from_json(const ojson& j);

ojson props_to_json(const PropertyMap& props);
PropertyMap props_from_json(const ojson& j);

/// Compact single-line dump; reals use shortest round-trip form.
std::string dump_compact(const ojson& j);

}  // namespace lcag::detail
