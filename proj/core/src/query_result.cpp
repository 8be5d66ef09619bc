#include "lcag/csv.hpp"
#include "lcag/query.hpp"
#include "value_codec.hpp"

namespace lcag {

namespace {

/// Kind rank for the total order; null sorts last.
int rank(const Value& v) {
  return std::visit(
      [](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) return 0;
        if constexpr (std::is_same_v<T, std::int64_t> || std::is_same_v<T, double>) return 1;
        if constexpr (std::is_same_v<T, std::string>) return 2;
        if constexpr (std::is_same_v<T, Quantity>) return 3;
        if constexpr (std::is_same_v<T, RealArray>) return 4;
        if constexpr (std::is_same_v<T, NodeId>) return 5;
        if constexpr (std::is_same_v<T, EdgeId>) return 6;
        return 7;
      },
      v);
}

std::optional<long double> number_of(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<long double>(*i);
  if (const auto* d = std::get_if<double>(&v)) return static_cast<long double>(*d);
  return std::nullopt;
}

std::strong_ordering strong(std::partial_ordering p) {
  if (p == std::partial_ordering::less) return std::strong_ordering::less;
  if (p == std::partial_ordering::greater) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::strong_ordering order_reals(double a, double b) { return strong(a <=> b); }

std::strong_ordering order_arrays(const RealArray& a, const RealArray& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (auto c = order_reals(a[i], b[i]); c != 0) return c;
  }
  return a.size() <=> b.size();
}

detail::ojson cell_json(const Value& v) {
  return std::visit(
      [](const auto& x) -> detail::ojson {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, NodeId> || std::is_same_v<T, EdgeId>) {
          return to_string(x);
        } else {
          return detail::value_to_json(PropertyValue(x));
        }
      },
      v);
}

}  // namespace

Value to_value(const PropertyValue& v) {
  return std::visit([](const auto& x) -> Value { return x; }, v);
}

std::optional<std::partial_ordering> compare_values(const Value& a, const Value& b) {
  if (std::holds_alternative<std::monostate>(a) || std::holds_alternative<std::monostate>(b)) return std::nullopt;

  const auto* qa = std::get_if<Quantity>(&a);
  const auto* qb = std::get_if<Quantity>(&b);
  if (qa && qb) {
    if (qa->unit != qb->unit) return std::nullopt;
    return qa->magnitude <=> qb->magnitude;
  }
  auto na = qa ? std::optional<long double>(qa->magnitude) : number_of(a);
  auto nb = qb ? std::optional<long double>(qb->magnitude) : number_of(b);
  if (na && nb) {
    const auto* ia = std::get_if<std::int64_t>(&a);
    const auto* ib = std::get_if<std::int64_t>(&b);
    if (ia && ib) return *ia <=> *ib;
    return *na <=> *nb;
  }
  if (a.index() != b.index()) return std::nullopt;
  return std::visit(
      [&](const auto& x) -> std::optional<std::partial_ordering> {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, std::string> || std::is_same_v<T, bool> || std::is_same_v<T, NodeId> ||
                      std::is_same_v<T, EdgeId>) {
          return x <=> y;
        } else if constexpr (std::is_same_v<T, RealArray>) {
          return order_arrays(x, y);
        } else {
          return std::nullopt;
        }
      },
      a);
}

std::strong_ordering order_values(const Value& a, const Value& b) {
  if (int ra = rank(a), rb = rank(b); ra != rb) return ra <=> rb;
  if (auto na = number_of(a)) {
    auto nb = number_of(b);
    const auto* ia = std::get_if<std::int64_t>(&a);
    const auto* ib = std::get_if<std::int64_t>(&b);
    if (ia && ib) return *ia <=> *ib;
    if (auto c = strong(*na <=> *nb); c != 0) return c;
    return (ia ? 0 : 1) <=> (ib ? 0 : 1);
  }
  return std::visit(
      [&](const auto& x) -> std::strong_ordering {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, std::monostate>) {
          return std::strong_ordering::equal;
        } else if constexpr (std::is_same_v<T, Quantity>) {
          if (auto c = x.unit <=> y.unit; c != 0) return c;
          if (auto c = order_reals(x.magnitude, y.magnitude); c != 0) return c;
          const auto& ux = x.uncertainty;
          const auto& uy = y.uncertainty;
          if (auto c = ux.kind() <=> uy.kind(); c != 0) return c;
          if (auto c = order_reals(ux.lo(), uy.lo()); c != 0) return c;
          return order_reals(ux.hi(), uy.hi());
        } else if constexpr (std::is_same_v<T, RealArray>) {
          return order_arrays(x, y);
        } else if constexpr (std::is_same_v<T, double>) {
          return order_reals(x, y);
        } else {
          return x <=> y;
        }
      },
      a);
}

std::string format_cell(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, NodeId> || std::is_same_v<T, EdgeId>) {
          return to_string(x);
        } else {
          return format_value(PropertyValue(x));
        }
      },
      v);
}

std::string ResultTable::to_csv() const {
  std::string out = csv::join(columns) + "\n";
  for (const auto& row : rows) {
    std::vector<std::string> cells;
    cells.reserve(row.size());
    for (const auto& v : row) cells.push_back(format_cell(v));
    out += csv::join(cells) + "\n";
  }
  return out;
}

std::string ResultTable::to_json_lines() const {
  std::string out;
  for (const auto& row : rows) {
    detail::ojson record = detail::ojson::object();
    for (std::size_t i = 0; i < columns.size(); ++i) record[columns[i]] = cell_json(row[i]);
    out += detail::dump_compact(record) + "\n";
  }
  return out;
}

}  // namespace lcag
