#include "lcag/value.hpp"

#include <charconv>
#include <cmath>

#include "lcag/error.hpp"

namespace lcag {

Uncertainty Uncertainty::uniform(double lo, double hi) {
  Uncertainty u(Kind::uniform, lo, hi);
  validate_uncertainty(u);
  return u;
}

Uncertainty Uncertainty::normal(double mean, double sd) {
  Uncertainty u(Kind::normal, mean, sd);
  validate_uncertainty(u);
  return u;
}

std::string_view to_string(Uncertainty::Kind kind) {
  switch (kind) {
    case Uncertainty::Kind::none:
      return "none";
    case Uncertainty::Kind::uniform:
      return "uniform";
    case Uncertainty::Kind::normal:
      return "normal";
  }
  return "none";
}

std::optional<Uncertainty::Kind> parse_uncertainty_kind(std::string_view text) {
  if (text == "none") return Uncertainty::Kind::none;
  if (text == "uniform") return Uncertainty::Kind::uniform;
  if (text == "normal") return Uncertainty::Kind::normal;
  return std::nullopt;
}

std::string_view to_string(ValueKind kind) {
  switch (kind) {
    case ValueKind::text:
      return "text";
    case ValueKind::integer:
      return "int";
    case ValueKind::real:
      return "real";
    case ValueKind::boolean:
      return "bool";
    case ValueKind::real_array:
      return "realarray";
    case ValueKind::quantity:
      return "quantity";
  }
  return "text";
}

std::optional<ValueKind> parse_value_kind(std::string_view text) {
  if (text == "text") return ValueKind::text;
  if (text == "int") return ValueKind::integer;
  if (text == "real") return ValueKind::real;
  if (text == "bool") return ValueKind::boolean;
  if (text == "realarray") return ValueKind::real_array;
  if (text == "quantity") return ValueKind::quantity;
  return std::nullopt;
}

void validate_uncertainty(const Uncertainty& u) {
  switch (u.kind()) {
    case Uncertainty::Kind::none:
      return;
    case Uncertainty::Kind::uniform:
      if (!std::isfinite(u.lo()) || !std::isfinite(u.hi())) {
        throw ValueError("uniform uncertainty bounds must be finite");
      }
      if (u.lo() > u.hi()) {
        throw ValueError("uniform uncertainty requires lo <= hi, got lo=" + format_real(u.lo()) +
                         " hi=" + format_real(u.hi()));
      }
      return;
    case Uncertainty::Kind::normal:
      if (!std::isfinite(u.mean()) || !std::isfinite(u.sd())) {
        throw ValueError("normal uncertainty parameters must be finite");
      }
      if (u.sd() < 0.0) {
        throw ValueError("normal uncertainty requires sd >= 0, got " + format_real(u.sd()));
      }
      return;
  }
}

void validate_value(const PropertyValue& value) {
  if (const auto* real = std::get_if<double>(&value)) {
    if (!std::isfinite(*real)) throw ValueError("real value must be finite");
  } else if (const auto* array = std::get_if<RealArray>(&value)) {
    for (std::size_t i = 0; i < array->size(); ++i) {
      if (!std::isfinite((*array)[i])) {
        throw ValueError("real array element " + std::to_string(i) + " must be finite");
      }
    }
  } else if (const auto* q = std::get_if<Quantity>(&value)) {
    if (!std::isfinite(q->magnitude)) throw ValueError("quantity magnitude must be finite");
    if (q->unit.empty()) throw ValueError("quantity unit must be non-empty");
    validate_uncertainty(q->uncertainty);
  }
}

void validate_properties(const PropertyMap& props) {
  for (const auto& [key, value] : props) {
    if (key.empty()) throw ValueError("property keys must be non-empty");
    try {
      validate_value(value);
    } catch (const ValueError& e) {
      throw ValueError("property '" + key + "': " + e.what());
    }
  }
}

std::string format_real(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, end);
}

std::string format_value(const PropertyValue& value) {
  struct Visitor {
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const { return format_real(d); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const RealArray& a) const {
      std::string out = "[";
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) out += ',';
        out += format_real(a[i]);
      }
      return out + "]";
    }
    std::string operator()(const Quantity& q) const {
      std::string out = format_real(q.magnitude) + " " + q.unit;
      switch (q.uncertainty.kind()) {
        case Uncertainty::Kind::none:
          break;
        case Uncertainty::Kind::uniform:
          out += " ~U(" + format_real(q.uncertainty.lo()) + "," + format_real(q.uncertainty.hi()) + ")";
          break;
        case Uncertainty::Kind::normal:
          out += " ~N(" + format_real(q.uncertainty.mean()) + "," + format_real(q.uncertainty.sd()) + ")";
          break;
      }
      return out;
    }
  };
  return std::visit(Visitor{}, value);
}

}  // namespace lcag
