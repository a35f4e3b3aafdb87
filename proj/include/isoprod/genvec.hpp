#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isoprod/group.hpp"
#include "isoprod/signature.hpp"

namespace isoprod {

// System of generators of a deck transformation group attached to a
// branching signature: r torsion ("elliptic") entries whose orders realize
// the branching, plus 2*orbit_genus free ("hyperbolic") entries, subject to
// the long relation and a generation requirement.
struct GeneratingVector {
  const Group* group = nullptr;
  Signature sig;
  std::vector<int> elliptic;
  std::vector<int> hyperbolic;

  bool operator==(const GeneratingVector& rhs) const {
    return group == rhs.group && sig == rhs.sig && elliptic == rhs.elliptic &&
           hyperbolic == rhs.hyperbolic;
  }
  // "[x1,...,xr ; h1,...,h2g']" using element labels; no " ; " part for
  // genus 0.
  std::string str() const;
};

// x1 ... xr [h1,h2][h3,h4]... == identity.
bool long_relation_holds(const GeneratingVector& v);

// Entry orders match the signature positionally; long relation; generation.
bool admissible_strict(const GeneratingVector& v);

// Entry orders match the signature as a multiset (braid images of
// nonabelian vectors pass through reordered states); long relation;
// generation. Every move preserves this form of admissibility.
bool admissible_mod_order(const GeneratingVector& v);

// All admissible vectors for (g, sig), sorted lexicographically by the
// concatenated index tuple (elliptic, then hyperbolic). The last elliptic
// entry is solved from the long relation; an empty result is a valid
// outcome.
std::vector<GeneratingVector> enumerate_generating_vectors(const Group& g,
                                                           const Signature& sig);

// Union of cyclic_conjugate_union over the elliptic entries: exactly the
// set of elements fixing some point of the covering curve.
std::vector<std::uint64_t> stabilizer_union_mask(const GeneratingVector& v);

// The diagonal action on the product of the two covering curves is free iff
// the two stabilizer unions intersect only in the identity. Returns the
// common element of minimal index, or nullopt when the action is free.
std::optional<int> freeness_obstruction(const GeneratingVector& fiber_vec,
                                        const GeneratingVector& base_vec);
bool is_free_diagonal_action(const GeneratingVector& fiber_vec,
                             const GeneratingVector& base_vec);

// A validated unmixed isogenous-product datum with p_g = q = 1.
struct BuildingData {
  const Group* group = nullptr;
  GeneratingVector fiber_vec;  // genus-0 quotient signature m
  GeneratingVector base_vec;   // genus-1 quotient signature n
  SurfaceInvariants inv;
};

enum class ValidationStatus {
  ok,
  fiber_vector_not_admissible,
  base_vector_not_admissible,
  genus_out_of_range,
  order_genus_mismatch,
  action_not_free,
};
const char* to_string(ValidationStatus status);

struct ValidationOutcome {
  ValidationStatus status = ValidationStatus::ok;
  std::string detail;
  std::optional<int> witness;        // offending element for action_not_free
  std::optional<BuildingData> data;  // populated when status == ok
  explicit operator bool() const { return status == ValidationStatus::ok; }
};

// Checks, in order: strict admissibility of both vectors (fiber over genus
// 0, base over genus 1); genus bounds g_C >= 3 and g_F >= 3; the order
// equation |G| = (g_C - 1)(g_F - 1); freeness of the diagonal action. The
// outcome names the first failed check.
ValidationOutcome validate_building_data(const Group& g,
                                         const GeneratingVector& fiber_vec,
                                         const GeneratingVector& base_vec);

}  // namespace isoprod
