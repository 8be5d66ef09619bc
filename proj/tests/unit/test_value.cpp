#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <random>

#include "lcag/error.hpp"
#include "lcag/value.hpp"

using namespace lcag;

namespace {

TEST(Value, KindsFollowVariantOrder) {
  EXPECT_EQ(kind_of(PropertyValue{std::string("x")}), ValueKind::text);
  EXPECT_EQ(kind_of(PropertyValue{std::int64_t{1}}), ValueKind::integer);
  EXPECT_EQ(kind_of(PropertyValue{1.0}), ValueKind::real);
  EXPECT_EQ(kind_of(PropertyValue{true}), ValueKind::boolean);
  EXPECT_EQ(kind_of(PropertyValue{RealArray{}}), ValueKind::real_array);
  EXPECT_EQ(kind_of(PropertyValue{Quantity{1.0, "kg", {}}}), ValueKind::quantity);
  for (auto k : {ValueKind::text, ValueKind::integer, ValueKind::real, ValueKind::boolean, ValueKind::real_array,
                 ValueKind::quantity}) {
    EXPECT_EQ(parse_value_kind(to_string(k)), k);
  }
  EXPECT_FALSE(parse_value_kind("float"));
}

TEST(Value, UncertaintyInvariants) {
  EXPECT_NO_THROW(Uncertainty::uniform(1.0, 1.0));
  EXPECT_THROW(Uncertainty::uniform(2.0, 1.0), ValueError);
  EXPECT_THROW(Uncertainty::normal(1.0, -0.1), ValueError);
  EXPECT_THROW(Uncertainty::normal(NAN, 1.0), ValueError);
  auto u = Uncertainty::normal(1.5, 0.25);
  EXPECT_EQ(u.kind(), Uncertainty::Kind::normal);
  EXPECT_EQ(u.mean(), 1.5);
  EXPECT_EQ(u.sd(), 0.25);
  EXPECT_EQ(parse_uncertainty_kind("uniform"), Uncertainty::Kind::uniform);
  EXPECT_FALSE(parse_uncertainty_kind("triangular"));
}

TEST(Value, QuantityNeedsUnit) {
  EXPECT_THROW(validate_value(Quantity{1.0, "", {}}), ValueError);
  EXPECT_NO_THROW(validate_value(Quantity{-1.0, "kg", {}}));
}

TEST(Value, EmptyKeyRejected) { EXPECT_THROW(validate_properties({{"", std::int64_t{1}}}), ValueError); }

TEST(Value, FormatRealIsShortestRoundTrip) {
  EXPECT_EQ(format_real(0.1), "0.1");
  EXPECT_EQ(format_real(3.0), "3");
  EXPECT_EQ(format_real(-0.0), "-0");
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    double x = std::bit_cast<double>(rng());
    if (!std::isfinite(x)) continue;
    EXPECT_EQ(std::stod(format_real(x)), x) << format_real(x);
  }
}

TEST(Value, FormatValueIsReadable) {
  EXPECT_EQ(format_value(Quantity{3.5, "kg", {}}), "3.5 kg");
  EXPECT_EQ(format_value(std::string("abc")), "abc");
  EXPECT_EQ(format_value(true), "true");
}

}  // namespace
