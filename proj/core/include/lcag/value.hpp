#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lcag {

/// Probabilistic annotation on a quantity. `a`/`b` hold (lo, hi) for uniform
/// and (mean, sd) for normal; both are zero for `none`.
class Uncertainty {
 public:
  enum class Kind { none, uniform, normal };

  Uncertainty() = default;

  static Uncertainty uniform(double lo, double hi);
  static Uncertainty normal(double mean, double sd);

  Kind kind() const noexcept { return kind_; }
  double lo() const noexcept { return a_; }
  double hi() const noexcept { return b_; }
  double mean() const noexcept { return a_; }
  double sd() const noexcept { return b_; }

  bool operator==(const Uncertainty&) const = default;

 private:
  Uncertainty(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

  Kind kind_ = Kind::none;
  double a_ = 0.0;
  double b_ = 0.0;
};

std::string_view to_string(Uncertainty::Kind kind);
std::optional<Uncertainty::Kind> parse_uncertainty_kind(std::string_view text);

/// A physical amount: magnitude plus a free-form unit symbol.
struct Quantity {
  double magnitude = 0.0;
  std::string unit;
  Uncertainty uncertainty;

  bool operator==(const Quantity&) const = default;
};

using RealArray = std::vector<double>;

/// Alternatives are ordered to match ValueKind.
using PropertyValue = std::variant<std::string, std::int64_t, double, bool, RealArray, Quantity>;

/// Property maps are ordered so that every serialization is deterministic.
using PropertyMap = std::map<std::string, PropertyValue, std::less<>>;

enum class ValueKind { text, integer, real, boolean, real_array, quantity };

inline ValueKind kind_of(const PropertyValue& value) noexcept {
  return static_cast<ValueKind>(value.index());
}

/// "text", "int", "real", "bool", "realarray", "quantity".
std::string_view to_string(ValueKind kind);
std::optional<ValueKind> parse_value_kind(std::string_view text);

/// Throws ValueError when the value breaks an invariant: non-finite reals,
/// empty or non-finite quantities, inverted uniform bounds, negative sd.
void validate_value(const PropertyValue& value);
void validate_uncertainty(const Uncertainty& uncertainty);

/// Throws ValueError for empty keys or any invalid value.
void validate_properties(const PropertyMap& props);

/// Shortest decimal text that parses back to exactly `x`.
std::string format_real(double x);

/// Human-readable rendering used by diagnostics and CSV output.
std::string format_value(const PropertyValue& value);

}  // namespace lcag
