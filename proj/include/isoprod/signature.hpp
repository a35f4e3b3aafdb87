#pragma once

#include <string>
#include <vector>

namespace isoprod {

// Orbifold branching signature (g' | m1,...,mr): quotient-curve genus g'
// plus nondecreasing branching orders, each >= 2. An empty branching list is
// written "-".
struct Signature {
  int orbit_genus = 0;
  std::vector<int> branching;

  int r() const { return static_cast<int>(branching.size()); }
  bool operator==(const Signature&) const = default;
  // Ordering by (orbit_genus, branching), used for deterministic reports.
  bool operator<(const Signature& rhs) const {
    if (orbit_genus != rhs.orbit_genus) return orbit_genus < rhs.orbit_genus;
    return branching < rhs.branching;
  }

  // Throws std::invalid_argument when the shape invariants are violated.
  void validate() const;

  std::string branching_str() const;  // "2^2,4^2", "2^3,6", "-" when empty
  std::string str() const;            // "(0 | 2^2,4^2)"

  // Accepts "(0 | 2^2,4^2)", "(1|2,2)", "(3|-)"; whitespace-insensitive.
  // Branching orders are sorted on parse.
  static Signature parse(const std::string& text);
};

// Genus of the covering curve with deck group of the given order, branched
// over a genus-(g') curve with the given signature. Exact rational
// arithmetic; throws std::invalid_argument("signature incompatible with
// order ...") when the result is not a nonnegative integer.
long long riemann_hurwitz_genus(long long group_order, const Signature& sig);

// The possible (fiber genus, elliptic-base signature) pairs for a fibration
// with rational fiber quotient and elliptic base quotient: the angle-sum
// equation 2 = (g_F - 1) * sum(1 - 1/n_j) over g_F >= 3 has exactly three
// solutions. abelian_allowed marks the options with at least two branch
// points, the only shape an abelian deck group admits (a one-point elliptic
// relation forces the branch image into the commutator subgroup).
struct BaseOption {
  int fiber_genus = 0;
  Signature base;  // orbit genus 1
  bool abelian_allowed = false;
};
std::vector<BaseOption> base_signature_options();

// Numeric-stage candidates for the abelian classification: genus-0
// signatures m with sum(1 - 1/m_i) = 2 + 2/k where |G| = 2k and
// k = g_C - 1 runs over 2..max_curve_genus-1. Sorted by r, then by
// branching lexicographically. This is a superset filter; group-theoretic
// stages prune it.
struct AbelianCandidate {
  Signature m;  // orbit genus 0
  long long group_order = 0;
  bool operator==(const AbelianCandidate&) const = default;
};
std::vector<AbelianCandidate> abelian_signature_candidates(int max_curve_genus = 64);

// Genus-0 signatures over a group of the given order compatible with the
// given fiber genus (angle sum 2 + (2*fiber_genus - 2)/group_order), with
// every entry drawn from allowed_orders (sorted, entries >= 2; pass the
// group's element orders). Sorted lexicographically within each length,
// shorter first.
std::vector<Signature> fiber_signature_candidates(
    long long group_order, int fiber_genus, const std::vector<int>& allowed_orders);

// Surface invariants of (C x F)/G for a free unmixed action: p_g = q = 1
// forces chi = 1, K^2 = 8, and |G| = (g_C - 1)(g_F - 1). Re-derives both
// genera from the quotient signatures (fiber quotient genus 0, base quotient
// genus 1) and throws std::invalid_argument on any inconsistency.
struct SurfaceInvariants {
  long long group_order = 0;
  long long g_C = 0;  // curve with elliptic quotient (Albanese base direction)
  long long g_F = 0;  // curve with rational quotient (fiber direction)
  int K2 = 8;
  int chi = 1;
  int p_g = 1;
  int q = 1;
};
SurfaceInvariants surface_invariants(long long group_order,
                                     const Signature& fiber_sig,
                                     const Signature& base_sig);

}  // namespace isoprod
