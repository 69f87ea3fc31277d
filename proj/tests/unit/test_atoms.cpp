#include "doctest.h"

#include "vnfp/atoms.hpp"

using namespace vnfp;

namespace {

AtomTable table() {
  AtomTable t;
  AtomAttrs a;
  a.abelian = true;
  a.diffuse = true;
  a.separability = Separability::Nonseparable;
  t.declare("A", a);
  t.declare("B", a);
  AtomAttrs x;
  x.abelian = true;
  x.diffuse = true;
  x.separability = Separability::Separable;
  t.declare("X", x);
  AtomAttrs n;
  n.separability = Separability::Nonseparable;
  t.declare("N", n);
  return t;
}

}  // namespace

TEST_CASE("attribute completion") {
  AtomAttrs a;
  a.abelian = true;
  a.diffuse = true;
  a.separability = Separability::Nonseparable;
  const AtomAttrs c = complete_attrs(a);
  CHECK(c.self_symmetric);
  REQUIRE(c.ns_mass);
  CHECK(*c.ns_mass == ExtScalar(1));

  AtomAttrs s;
  s.separability = Separability::Separable;
  REQUIRE(complete_attrs(s).ns_mass);
  CHECK(complete_attrs(s).ns_mass->is_zero());

  AtomAttrs bad;
  bad.separability = Separability::Separable;
  bad.ns_mass = ExtScalar(1, 2);
  CHECK_THROWS_AS(complete_attrs(bad), Error);
}

TEST_CASE("atom table") {
  AtomTable t = table();
  CHECK(t.contains("LZ"));
  CHECK(t.contains("A"));
  CHECK_FALSE(t.contains("Q"));
  CHECK_THROWS_AS(t.at("Q"), Error);
  CHECK_THROWS_AS(t.declare("A", AtomAttrs{}), Error);
  CHECK(t.user_atoms() == std::vector<std::string>{"A", "B", "N", "X"});
  CHECK(is_lz_like(t.at("X")));
  CHECK_FALSE(is_lz_like(t.at("A")));

  AtomTable other;
  other.declare("A", t.at("A"));
  other.declare("C2", AtomAttrs{});
  t.merge(other);
  CHECK(t.contains("C2"));
}

TEST_CASE("normalize_profile") {
  const AtomTable t = table();
  CHECK(normalize_profile({{"A", ExtScalar(1, 4)}, {"A", ExtScalar(1, 4)}, {"B", ExtScalar(1, 2)}}, t) ==
        AtomProfile{{{"A", ExtScalar(1, 2)}, {"B", ExtScalar(1, 2)}}});
  CHECK(normalize_profile({{"A", 1}}, t) == AtomProfile::single("A"));
  CHECK(normalize_profile({{"A", ExtScalar(1, 2)}, {"X", ExtScalar(1, 2)}}, t) ==
        AtomProfile{{{"A", ExtScalar(1, 2)}, {"LZ", ExtScalar(1, 2)}}});
  CHECK_THROWS_AS(normalize_profile({{"A", ExtScalar(1, 3)}, {"B", ExtScalar(1, 3)}}, t), Error);
  CHECK_THROWS_AS(normalize_profile({{"N", ExtScalar(1, 2)}, {"N", ExtScalar(1, 2)}}, t), Error);
  CHECK_THROWS_AS(normalize_profile({{"Q", 1}}, t), Error);
}

TEST_CASE("profile masses and mixing") {
  const AtomTable t = table();
  const AtomProfile half{{{"A", ExtScalar(1, 2)}, {"LZ", ExtScalar(1, 2)}}};
  CHECK(half.lz_weight() == ExtScalar(1, 2));
  CHECK(half.has_non_lz());
  CHECK(profile_ns_mass(half, t) == ExtScalar(1, 2));
  CHECK_FALSE(profile_ns_mass(AtomProfile::single("N"), t).has_value());
  CHECK(mix_profiles(AtomProfile::single("A"), ExtScalar(1, 3), AtomProfile::single("B"), t) ==
        AtomProfile{{{"A", ExtScalar(1, 3)}, {"B", ExtScalar(2, 3)}}});
  CHECK(mix_profiles(AtomProfile::single("A"), ExtScalar(1, 3), half, t) ==
        AtomProfile{{{"A", ExtScalar(2, 3)}, {"LZ", ExtScalar(1, 3)}}});
}
