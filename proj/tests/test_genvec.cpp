#include <cstdint>
#include <optional>
#include <vector>

#include "doctest.h"
#include "isoprod/genvec.hpp"
#include "isoprod/group.hpp"
#include "isoprod/signature.hpp"
#include "oracles.hpp"

using namespace isoprod;

namespace {

GeneratingVector make_vec(const Group& g, const Signature& sig,
                          std::vector<int> elliptic,
                          std::vector<int> hyperbolic = {}) {
  GeneratingVector v;
  v.group = &g;
  v.sig = sig;
  v.elliptic = std::move(elliptic);
  v.hyperbolic = std::move(hyperbolic);
  return v;
}

int coords(const Group& g, std::vector<int> c) {
  return g.index_of_coordinates(c);
}

}  // namespace

TEST_SUITE("genvec") {

TEST_CASE("long relation and the two admissibility notions") {
  const Group s4 = make_symmetric_group(4);
  const int t12 = *s4.index_of_image({1, 0, 2, 3});
  const int t23 = *s4.index_of_image({0, 2, 1, 3});
  const int t34 = *s4.index_of_image({0, 1, 3, 2});
  const int c4inv = *s4.index_of_image({3, 0, 1, 2});  // (1 4 3 2)

  // (1 2)(2 3)(3 4) composes (right to left) to (1 2 3 4), so appending its
  // inverse closes the genus-0 long relation.
  const Signature m = Signature::parse("(0|2^3,4)");
  const auto v = make_vec(s4, m, {t12, t23, t34, c4inv});
  CHECK(long_relation_holds(v));
  CHECK(admissible_strict(v));
  CHECK(admissible_mod_order(v));

  // Reordering the entries keeps the relation-as-multiset notion but breaks
  // the positional one: (2,2,4,2) against the pattern (2,2,2,4).
  auto reordered = v;
  std::swap(reordered.elliptic[2], reordered.elliptic[3]);
  // Conjugation fixes the product only in braid form; adjust by hand so the
  // relation still holds: x3' = x4, x4' = x4^{-1} x3 x4.
  reordered.elliptic[3] = s4.conjugate(s4.inv(c4inv), t34);
  CHECK(long_relation_holds(reordered));
  CHECK_FALSE(admissible_strict(reordered));
  CHECK(admissible_mod_order(reordered));

  // Breaking the relation or generation fails both notions.
  auto broken = v;
  broken.elliptic[0] = t23;
  CHECK_FALSE(long_relation_holds(broken));
  CHECK_FALSE(admissible_strict(broken));
  CHECK_FALSE(admissible_mod_order(broken));

  const Group z4 = make_abelian_group({4});
  // 1 + 1 + 2 == 0 mod 4 with orders (4,4,2) but <1> = Z4: admissible.
  const auto cyc =
      make_vec(z4, Signature::parse("(0|2,4^2)"), {2, 1, 1});
  CHECK(admissible_strict(cyc));
  // Orders (2,4,4) listed against pattern (2,4,4) but placed (4,4,2).
  const auto misplaced =
      make_vec(z4, Signature::parse("(0|2,4^2)"), {1, 1, 2});
  CHECK(long_relation_holds(misplaced));
  CHECK_FALSE(admissible_strict(misplaced));
  CHECK(admissible_mod_order(misplaced));

  // Genus-1 relation includes the commutator: in a nonabelian group pick
  // x1 x2 = [a,b]^{-1} with a, b noncommuting.
  const Group s3 = make_symmetric_group(3);
  const int a = *s3.index_of_image({1, 0, 2});   // (1 2)
  const int b = *s3.index_of_image({0, 2, 1});   // (2 3)
  const int k = s3.commutator(a, b);             // a 3-cycle
  const Signature n3 = Signature::parse("(1|3)");
  const auto w = make_vec(s3, n3, {s3.inv(k)}, {a, b});
  CHECK(long_relation_holds(w));
  CHECK(admissible_strict(w));
  const auto w_bad = make_vec(s3, n3, {k}, {a, b});
  CHECK_FALSE(long_relation_holds(w_bad));
}

TEST_CASE("enumeration equals the all-slots odometer oracle") {
  struct Case {
    Group group;
    Signature sig;
    std::optional<std::size_t> frozen_count;
  };
  const std::vector<Case> cases = {
      {make_abelian_group({2, 2}), Signature::parse("(0|2^6)"), 180},
      {make_abelian_group({2, 2, 2}), Signature::parse("(0|2^5)"), 1680},
      {make_abelian_group({2, 4}), Signature::parse("(0|2^2,4^2)"), 32},
      {make_abelian_group({2, 8}), Signature::parse("(0|2,8^2)"), 16},
      {make_abelian_group({2, 2}), Signature::parse("(1|2^2)"), 36},
      {make_abelian_group({2, 2, 2}), Signature::parse("(1|2^2)"), 168},
      {make_abelian_group({2, 4}), Signature::parse("(1|2^2)"), 120},
      {make_abelian_group({2, 8}), Signature::parse("(1|2^2)"), 480},
      {make_symmetric_group(3), Signature::parse("(0|2^6)"), std::nullopt},
      {make_symmetric_group(3), Signature::parse("(1|3)"), std::nullopt},
      {make_symmetric_group(3), Signature::parse("(0|3,6^2)"), 0},
  };
  for (const Case& c : cases) {
    CAPTURE(c.group.name());
    CAPTURE(c.sig.str());
    const auto got = enumerate_generating_vectors(c.group, c.sig);
    const auto expected = oracles::enumerate_vectors_brute(c.group, c.sig);
    CHECK(got == expected);
    if (c.frozen_count) CHECK(got.size() == *c.frozen_count);
    for (const auto& v : got) CHECK(admissible_strict(v));
  }

  // No involution triple in Z4 multiplies to the identity.
  CHECK(enumerate_generating_vectors(make_abelian_group({4}),
                                     Signature::parse("(0|2^3)"))
            .empty());
}

TEST_CASE("stabilizer union is the union of conjugated cyclic subgroups") {
  const auto naive_union = [](const GeneratingVector& v) {
    const Group& g = *v.group;
    std::vector<char> in(static_cast<std::size_t>(g.order()), 0);
    in[0] = 1;
    for (int x : v.elliptic)
      for (int t = 0; t < g.order(); ++t) {
        int p = g.conjugate(t, x);
        while (p != 0) {
          in[static_cast<std::size_t>(p)] = 1;
          p = g.mul(p, g.conjugate(t, x));
        }
      }
    return in;
  };
  const auto mask_bit = [](const std::vector<std::uint64_t>& mask, int i) {
    return (mask[static_cast<std::size_t>(i) / 64] >>
            (static_cast<std::size_t>(i) % 64)) &
           1u;
  };

  const Group z24 = make_abelian_group({2, 4});
  const auto fiber = make_vec(z24, Signature::parse("(0|2^2,4^2)"),
                              {coords(z24, {1, 0}), coords(z24, {1, 0}),
                               coords(z24, {0, 1}), coords(z24, {0, 3})});
  REQUIRE(admissible_strict(fiber));
  const Group s3 = make_symmetric_group(3);
  const int a = *s3.index_of_image({1, 0, 2});
  const int k = *s3.index_of_image({2, 0, 1});
  const auto perm = make_vec(
      s3, Signature::parse("(0|2^2,3^2)"),
      {a, a, k, s3.inv(k)});
  REQUIRE(admissible_strict(perm));

  for (const auto& v : {fiber, perm}) {
    const auto expected = naive_union(v);
    const auto mask = stabilizer_union_mask(v);
    for (int i = 0; i < v.group->order(); ++i)
      CHECK(mask_bit(mask, i) == (expected[static_cast<std::size_t>(i)] != 0));
  }

  // A genus-1 vector over an abelian group: conjugation is trivial, so the
  // union is just the union of the cyclic subgroups of the entries.
  const auto base = make_vec(z24, Signature::parse("(1|2^2)"),
                             {coords(z24, {1, 2}), coords(z24, {1, 2})},
                             {coords(z24, {0, 1}), 0});
  REQUIRE(admissible_strict(base));
  const auto mask = stabilizer_union_mask(base);
  for (int i = 0; i < z24.order(); ++i) {
    const bool expect = i == 0 || i == coords(z24, {1, 2});
    CHECK(mask_bit(mask, i) == expect);
  }
}

TEST_CASE("freeness of the diagonal action") {
  const Group z24 = make_abelian_group({2, 4});
  const auto fiber = make_vec(z24, Signature::parse("(0|2^2,4^2)"),
                              {coords(z24, {1, 0}), coords(z24, {1, 0}),
                               coords(z24, {0, 1}), coords(z24, {0, 3})});
  const auto base_free = make_vec(z24, Signature::parse("(1|2^2)"),
                                  {coords(z24, {1, 2}), coords(z24, {1, 2})},
                                  {coords(z24, {0, 1}), 0});
  REQUIRE(admissible_strict(fiber));
  REQUIRE(admissible_strict(base_free));
  CHECK(freeness_obstruction(fiber, base_free) == std::nullopt);
  CHECK(is_free_diagonal_action(fiber, base_free));

  // Sharing the involution (1,0) kills freeness; the witness is the common
  // element of smallest index, and the test is symmetric in the two sides.
  const auto base_stuck = make_vec(z24, Signature::parse("(1|2^2)"),
                                   {coords(z24, {1, 0}), coords(z24, {1, 0})},
                                   {coords(z24, {0, 1}), 0});
  REQUIRE(admissible_strict(base_stuck));
  CHECK(freeness_obstruction(fiber, base_stuck) == coords(z24, {1, 0}));
  CHECK(freeness_obstruction(base_stuck, fiber) == coords(z24, {1, 0}));
  CHECK_FALSE(is_free_diagonal_action(fiber, base_stuck));

  // (0,2) is the square of every order-4 element, so a base vector through
  // (0,2) collides with the fiber side even without a shared generator.
  const auto base_sq = make_vec(z24, Signature::parse("(1|2^2)"),
                                {coords(z24, {0, 2}), coords(z24, {0, 2})},
                                {coords(z24, {0, 1}), coords(z24, {1, 0})});
  REQUIRE(admissible_strict(base_sq));
  CHECK(freeness_obstruction(fiber, base_sq) == coords(z24, {0, 2}));
}

TEST_CASE("building-data validation reports the first failed check") {
  const Group z22 = make_abelian_group({2, 2});
  const Signature m6 = Signature::parse("(0|2^6)");
  const Signature n2 = Signature::parse("(1|2^2)");
  const int a = coords(z22, {1, 0});
  const int b = coords(z22, {0, 1});
  const int c = coords(z22, {1, 1});

  const auto fiber_ok = make_vec(z22, m6, {b, b, b, b, c, c});
  const auto base_ok = make_vec(z22, n2, {a, a}, {b, 0});

  SUBCASE("ok populates the invariants") {
    const auto out = validate_building_data(z22, fiber_ok, base_ok);
    REQUIRE(out.status == ValidationStatus::ok);
    CHECK(static_cast<bool>(out));
    REQUIRE(out.data.has_value());
    CHECK(out.data->inv.g_C == 3);
    CHECK(out.data->inv.g_F == 3);
    CHECK(out.data->inv.group_order == 4);
    CHECK(out.data->inv.K2 == 8);
  }

  SUBCASE("fiber vector checked first") {
    auto fiber_bad = fiber_ok;
    fiber_bad.elliptic[0] = a;  // sum a+4b+... no longer zero
    const auto out = validate_building_data(z22, fiber_bad, base_ok);
    CHECK(out.status == ValidationStatus::fiber_vector_not_admissible);
    CHECK_FALSE(static_cast<bool>(out));
    CHECK_FALSE(out.data.has_value());
  }

  SUBCASE("then the base vector") {
    auto base_bad = base_ok;
    base_bad.hyperbolic = {0, 0};  // <a> alone no longer generates
    const auto out = validate_building_data(z22, fiber_ok, base_bad);
    CHECK(out.status == ValidationStatus::base_vector_not_admissible);
  }

  SUBCASE("then the genus bounds") {
    const auto fiber_small =
        make_vec(z22, Signature::parse("(0|2^4)"), {a, b, a, b});
    REQUIRE(admissible_strict(fiber_small));  // covering genus 1 < 3
    const auto out = validate_building_data(z22, fiber_small, base_ok);
    CHECK(out.status == ValidationStatus::genus_out_of_range);
  }

  SUBCASE("then the order equation") {
    const auto base_wide = make_vec(z22, Signature::parse("(1|2^4)"),
                                    {a, a, a, a}, {b, 0});
    REQUIRE(admissible_strict(base_wide));  // g_C = 5, (5-1)(3-1) != 4
    const auto out = validate_building_data(z22, fiber_ok, base_wide);
    CHECK(out.status == ValidationStatus::order_genus_mismatch);
  }

  SUBCASE("freeness last, with the offending element as witness") {
    const Group z6 = make_abelian_group({6});
    const auto fiber = make_vec(z6, Signature::parse("(0|2^2,6^2)"),
                                {3, 3, 1, 5});
    const auto base = make_vec(z6, Signature::parse("(1|2^2)"),
                               {3, 3}, {1, 0});
    REQUIRE(admissible_strict(fiber));
    REQUIRE(admissible_strict(base));
    const auto out = validate_building_data(z6, fiber, base);
    CHECK(out.status == ValidationStatus::action_not_free);
    REQUIRE(out.witness.has_value());
    CHECK(*out.witness == 3);
  }
}

}  // TEST_SUITE("genvec")
