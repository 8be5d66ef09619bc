#include "value_codec.hpp"

#include <limits>

#include "lcag/error.hpp"

namespace lcag::detail {

namespace {

double require_number(const ojson& j, const char* what) {
  if (!j.is_number()) throw ValueError(std::string(what) + " must be a number");
  return j.get<double>();
}

}  // namespace

ojson uncertainty_to_json(const Uncertainty& u) {
  ojson j = ojson::object();
  j["kind"] = std::string(to_string(u.kind()));
  switch (u.kind()) {
    case Uncertainty::Kind::none:
      break;
    case Uncertainty::Kind::uniform:
      j["lo"] = u.lo();
      j["hi"] = u.hi();
      break;
    case Uncertainty::Kind::normal:
      j["mean"] = u.mean();
      j["sd"] = u.sd();
      break;
  }
  return j;
}

Uncertainty uncertainty_from_json(const ojson& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ValueError("uncertainty must be an object with a string 'kind'");
  }
  const auto kind = parse_uncertainty_kind(j["kind"].get<std::string>());
  if (!kind) throw ValueError("unknown uncertainty kind '" + j["kind"].get<std::string>() + "'");
  switch (*kind) {
    case Uncertainty::Kind::none:
      if (j.size() != 1) throw ValueError("uncertainty 'none' takes no parameters");
      return {};
    case Uncertainty::Kind::uniform:
      if (j.size() != 3 || !j.contains("lo") || !j.contains("hi")) {
        throw ValueError("uniform uncertainty needs exactly 'lo' and 'hi'");
      }
      return Uncertainty::uniform(require_number(j["lo"], "lo"), require_number(j["hi"], "hi"));
    case Uncertainty::Kind::normal:
      if (j.size() != 3 || !j.contains("mean") || !j.contains("sd")) {
        throw ValueError("normal uncertainty needs exactly 'mean' and 'sd'");
      }
      return Uncertainty::normal(require_number(j["mean"], "mean"), require_number(j["sd"], "sd"));
  }
  return {};
}

ojson quantity_to_json(const Quantity& q) {
  ojson j = ojson::object();
  j["q"] = q.magnitude;
  j["u"] = q.unit;
  j["unc"] = uncertainty_to_json(q.uncertainty);
  return j;
}

Quantity quantity_from_json(const ojson& j) {
  if (!j.is_object() || j.size() != 3 || !j.contains("q") || !j.contains("u") || !j.contains("unc")) {
    throw ValueError("quantity must be an object with exactly 'q', 'u' and 'unc'");
  }
  if (!j["u"].is_string()) throw ValueError("quantity unit must be a string");
  Quantity q{require_number(j["q"], "quantity magnitude"), j["u"].get<std::string>(),
             uncertainty_from_json(j["unc"])};
  validate_value(q);
  return q;
}

ojson value_to_json(const PropertyValue& value) {
  struct Visitor {
    ojson operator()(const std::string& s) const { return s; }
    ojson operator()(std::int64_t i) const { return i; }
    ojson operator()(double d) const { return d; }
    ojson operator()(bool b) const { return b; }
    ojson operator()(const RealArray& a) const {
      ojson arr = ojson::array();
      for (double d : a) arr.push_back(d);
      return arr;
    }
    ojson operator()(const Quantity& q) const { return quantity_to_json(q); }
  };
  return std::visit(Visitor{}, value);
}

PropertyValue value_from_json(const ojson& j) {
  PropertyValue out;
  if (j.is_string()) {
    out = j.get<std::string>();
  } else if (j.is_boolean()) {
    out = j.get<bool>();
  } else if (j.is_number_unsigned()) {
    const auto u = j.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      throw ValueError("integer out of 64-bit signed range");
    }
    out = static_cast<std::int64_t>(u);
  } else if (j.is_number_integer()) {
    out = j.get<std::int64_t>();
  } else if (j.is_number_float()) {
    out = j.get<double>();
  } else if (j.is_array()) {
    RealArray arr;
    arr.reserve(j.size());
    for (const auto& e : j) arr.push_back(require_number(e, "array element"));
    out = std::move(arr);
  } else if (j.is_object()) {
    out = quantity_from_json(j);
  } else {
    throw ValueError("unsupported property value " + j.dump());
  }
  validate_value(out);
  return out;
}

ojson props_to_json(const PropertyMap& props) {
  ojson j = ojson::object();
  for (const auto& [key, value] : props) j[key] = value_to_json(value);
  return j;
}

PropertyMap props_from_json(const ojson& j) {
  if (!j.is_object()) throw ValueError("props must be an object");
  PropertyMap props;
  for (const auto& [key, value] : j.items()) {
    if (key.empty()) throw ValueError("property keys must be non-empty");
    if (!props.emplace(key, value_from_json(value)).second) {
      throw ValueError("duplicate property key '" + key + "'");
    }
  }
  return props;
}

std::string dump_compact(const ojson& j) { return j.dump(-1, ' ', false, ojson::error_handler_t::strict); }

}  // namespace lcag::detail
