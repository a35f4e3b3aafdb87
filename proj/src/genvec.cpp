#include "isoprod/genvec.hpp"

#include <algorithm>
#include <map>

namespace isoprod {

namespace {

// Product of commutators [h1,h2][h3,h4]... over consecutive pairs.
int commutator_product(const Group& g, const std::vector<int>& hyperbolic) {
  int acc = 0;
  for (std::size_t i = 0; i + 1 < hyperbolic.size(); i += 2)
    acc = g.mul(acc, g.commutator(hyperbolic[i], hyperbolic[i + 1]));
  return acc;
}

std::vector<int> all_entries(const GeneratingVector& v) {
  std::vector<int> out = v.elliptic;
  out.insert(out.end(), v.hyperbolic.begin(), v.hyperbolic.end());
  return out;
}

void check_shape(const GeneratingVector& v) {
  if (v.group == nullptr)
    throw std::invalid_argument("vector is not attached to a group");
  v.sig.validate();
  if (static_cast<int>(v.elliptic.size()) != v.sig.r())
    throw std::invalid_argument("elliptic entry count does not match signature");
  if (v.hyperbolic.size() != 2 * static_cast<std::size_t>(v.sig.orbit_genus))
    throw std::invalid_argument("hyperbolic entry count does not match signature");
}

}  // namespace

std::string GeneratingVector::str() const {
  std::string out = "[";
  for (std::size_t i = 0; i < elliptic.size(); ++i) {
    if (i) out += ",";
    out += group->label(elliptic[i]);
  }
  if (!hyperbolic.empty()) {
    out += " ; ";
    for (std::size_t i = 0; i < hyperbolic.size(); ++i) {
      if (i) out += ",";
      out += group->label(hyperbolic[i]);
    }
  }
  return out + "]";
}

bool long_relation_holds(const GeneratingVector& v) {
  check_shape(v);
  const Group& g = *v.group;
  int acc = 0;
  for (int x : v.elliptic) acc = g.mul(acc, x);
  acc = g.mul(acc, commutator_product(g, v.hyperbolic));
  return acc == 0;
}

bool admissible_strict(const GeneratingVector& v) {
  check_shape(v);
  const Group& g = *v.group;
  for (int i = 0; i < v.sig.r(); ++i)
    if (g.order_of(v.elliptic[static_cast<std::size_t>(i)]) !=
        v.sig.branching[static_cast<std::size_t>(i)])
      return false;
  return long_relation_holds(v) && g.generates(all_entries(v));
}

bool admissible_mod_order(const GeneratingVector& v) {
  check_shape(v);
  const Group& g = *v.group;
  std::vector<int> orders;
  orders.reserve(v.elliptic.size());
  for (int x : v.elliptic) orders.push_back(static_cast<int>(g.order_of(x)));
  std::sort(orders.begin(), orders.end());
  if (orders != v.sig.branching) return false;
  return long_relation_holds(v) && g.generates(all_entries(v));
}

std::vector<GeneratingVector> enumerate_generating_vectors(const Group& g,
                                                           const Signature& sig) {
  sig.validate();
  const int r = sig.r();
  const int n = g.order();

  std::map<int, std::vector<int>> by_order;
  for (int a = 0; a < n; ++a)
    by_order[static_cast<int>(g.order_of(a))].push_back(a);
  for (int m : sig.branching)
    if (!by_order.count(m)) return {};  // no element of a required order

  std::vector<GeneratingVector> out;
  GeneratingVector v;
  v.group = &g;
  v.sig = sig;
  v.elliptic.assign(static_cast<std::size_t>(r), 0);
  v.hyperbolic.assign(2 * static_cast<std::size_t>(sig.orbit_genus), 0);

  // With the hyperbolic entries fixed, the elliptic prefix is free and the
  // last entry is solved from the long relation.
  auto emit_if_admissible = [&] {
    if (g.generates(all_entries(v))) out.push_back(v);
  };
  auto enum_elliptic = [&](auto&& self, int pos, int prefix) -> void {
    if (r == 0) {
      if (commutator_product(g, v.hyperbolic) == 0) emit_if_admissible();
      return;
    }
    if (pos == r - 1) {
      // x_r = (x_1...x_{r-1})^{-1} * (commutator product)^{-1}
      int solved = g.mul(g.inv(prefix), g.inv(commutator_product(g, v.hyperbolic)));
      if (g.order_of(solved) != sig.branching[static_cast<std::size_t>(pos)]) return;
      v.elliptic[static_cast<std::size_t>(pos)] = solved;
      emit_if_admissible();
      return;
    }
    for (int x : by_order.at(sig.branching[static_cast<std::size_t>(pos)])) {
      v.elliptic[static_cast<std::size_t>(pos)] = x;
      self(self, pos + 1, g.mul(prefix, x));
    }
  };
  auto enum_hyperbolic = [&](auto&& self, std::size_t pos) -> void {
    if (pos == v.hyperbolic.size()) {
      enum_elliptic(enum_elliptic, 0, 0);
      return;
    }
    for (int h = 0; h < n; ++h) {
      v.hyperbolic[pos] = h;
      self(self, pos + 1);
    }
  };
  enum_hyperbolic(enum_hyperbolic, 0);

  std::sort(out.begin(), out.end(),
            [](const GeneratingVector& a, const GeneratingVector& b) {
              if (a.elliptic != b.elliptic) return a.elliptic < b.elliptic;
              return a.hyperbolic < b.hyperbolic;
            });
  return out;
}

std::vector<std::uint64_t> stabilizer_union_mask(const GeneratingVector& v) {
  check_shape(v);
  const Group& g = *v.group;
  std::vector<std::uint64_t> mask(
      (static_cast<std::size_t>(g.order()) + 63) / 64, 0);
  mask[0] |= 1;  // identity stabilizes everything
  for (int x : v.elliptic) {
    std::vector<std::uint64_t> m = g.cyclic_conjugate_union_mask(x);
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] |= m[i];
  }
  return mask;
}

std::optional<int> freeness_obstruction(const GeneratingVector& fiber_vec,
                                        const GeneratingVector& base_vec) {
  if (fiber_vec.group == nullptr || fiber_vec.group != base_vec.group)
    throw std::invalid_argument("vectors must share one parent group");
  std::vector<std::uint64_t> a = stabilizer_union_mask(fiber_vec);
  std::vector<std::uint64_t> b = stabilizer_union_mask(base_vec);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::uint64_t common = a[i] & b[i];
    if (i == 0) common &= ~std::uint64_t{1};  // ignore the identity
    if (common != 0) {
      int bit = 0;
      while (!(common >> bit & 1)) ++bit;
      return static_cast<int>(i * 64) + bit;
    }
  }
  return std::nullopt;
}

bool is_free_diagonal_action(const GeneratingVector& fiber_vec,
                             const GeneratingVector& base_vec) {
  return !freeness_obstruction(fiber_vec, base_vec).has_value();
}

const char* to_string(ValidationStatus status) {
  switch (status) {
    case ValidationStatus::ok: return "ok";
    case ValidationStatus::fiber_vector_not_admissible:
      return "fiber vector not admissible";
    case ValidationStatus::base_vector_not_admissible:
      return "base vector not admissible";
    case ValidationStatus::genus_out_of_range: return "genus out of range";
    case ValidationStatus::order_genus_mismatch: return "order/genus mismatch";
    case ValidationStatus::action_not_free: return "action not free";
  }
  return "unknown";
}

ValidationOutcome validate_building_data(const Group& g,
                                         const GeneratingVector& fiber_vec,
                                         const GeneratingVector& base_vec) {
  if (fiber_vec.group != &g || base_vec.group != &g)
    throw std::invalid_argument("vector does not belong to the given group");
  ValidationOutcome out;

  if (fiber_vec.sig.orbit_genus != 0 || !admissible_strict(fiber_vec)) {
    out.status = ValidationStatus::fiber_vector_not_admissible;
    out.detail = "fiber vector " + fiber_vec.str() +
                 " is not an admissible genus-0 system for " + fiber_vec.sig.str();
    return out;
  }
  if (base_vec.sig.orbit_genus != 1 || !admissible_strict(base_vec)) {
    out.status = ValidationStatus::base_vector_not_admissible;
    out.detail = "base vector " + base_vec.str() +
                 " is not an admissible genus-1 system for " + base_vec.sig.str();
    return out;
  }

  long long g_F = 0, g_C = 0;
  try {
    g_F = riemann_hurwitz_genus(g.order(), fiber_vec.sig);
    g_C = riemann_hurwitz_genus(g.order(), base_vec.sig);
  } catch (const std::invalid_argument& e) {
    out.status = ValidationStatus::genus_out_of_range;
    out.detail = e.what();
    return out;
  }
  if (g_C < 3 || g_F < 3) {
    out.status = ValidationStatus::genus_out_of_range;
    out.detail = "need g_C >= 3 and g_F >= 3, got g_C = " + std::to_string(g_C) +
                 ", g_F = " + std::to_string(g_F);
    return out;
  }
  if ((g_C - 1) * (g_F - 1) != g.order()) {
    out.status = ValidationStatus::order_genus_mismatch;
    out.detail = "|G| = " + std::to_string(g.order()) +
                 " but (g_C - 1)(g_F - 1) = " +
                 std::to_string((g_C - 1) * (g_F - 1));
    return out;
  }

  std::optional<int> obstruction = freeness_obstruction(fiber_vec, base_vec);
  if (obstruction) {
    out.status = ValidationStatus::action_not_free;
    out.witness = obstruction;
    out.detail = "element " + g.label(*obstruction) +
                 " stabilizes points on both curves";
    return out;
  }

  BuildingData data;
  data.group = &g;
  data.fiber_vec = fiber_vec;
  data.base_vec = base_vec;
  data.inv = surface_invariants(g.order(), fiber_vec.sig, base_vec.sig);
  out.data = std::move(data);
  return out;
}

}  // namespace isoprod
