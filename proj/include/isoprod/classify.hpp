#pragma once
// End-to-end classification pipelines for unmixed quotient actions on a
// product of two curves with p_g = q = 1: the exact list of abelian
// families with component counts, an audit trail for every numeric
// candidate signature, verification of the six known nonabelian building
// data, a catalog-bounded nonabelian search, and machine replays of the
// printed reduction chains and automorphism transports.

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "isoprod/genvec.hpp"
#include "isoprod/group.hpp"
#include "isoprod/moves.hpp"
#include "isoprod/signature.hpp"

namespace isoprod {

// Invariant factor chains d1 | d2 | ... | dt with product equal to `order`,
// one chain per isomorphism type of abelian group of that order, each chain
// ascending, the list sorted lexicographically. order = 1 yields one empty
// chain (the trivial group has no factors).
std::vector<std::vector<int>> abelian_invariant_factorizations(long long order);

// Number of worker threads used by the concurrent pipelines: the value of
// ISOPROD_THREADS when set (throws std::invalid_argument if it is not a
// positive integer), otherwise the hardware concurrency. Results never
// depend on this value; only wall time does.
int worker_thread_count();

// One classified action space: a group together with a genus-0 fiber
// quotient signature m and a genus-1 base quotient signature n. Components
// are the equivalence classes of admissible free pairs under fiber braid
// moves, base moves, and Aut(G).
struct FamilyRecord {
  std::string label;             // "I".."IV" for the abelian families; search rows get "N1", "N2", ...
  const Group* group = nullptr;  // owned by the enclosing result object
  std::string group_name;
  long long group_order = 0;
  Signature fiber_sig;  // genus 0, branching m
  Signature base_sig;   // genus 1, branching n
  long long g_C = 0;    // genus of the base covering curve
  long long g_F = 0;    // genus of the fiber covering curve
  std::size_t num_pairs = 0;  // admissible pairs with free diagonal action
  int num_components = 0;
  // Abelian move sets are complete for these signatures, so the count is
  // exact; otherwise the implemented moves may refine the true equivalence
  // and the count is an upper bound.
  bool components_exact = false;
  int component_dimension = 0;  // (r - 3) + s for r fiber and s base branch points
  bool extra = false;           // search hit outside the known nonabelian table
  std::vector<PairState> class_representatives;  // minimal member per class
  std::vector<std::size_t> class_sizes;
};

// Full pipeline for a single (G, m, n): enumerate both vector spaces,
// filter pairs by freeness of the diagonal action, and partition by moves
// and automorphisms. Throws std::invalid_argument when the signatures are
// inconsistent with |G| (wrong quotient genera or a genus below 3).
// num_pairs == 0 with num_components == 0 is a valid outcome.
FamilyRecord classify_pairs(const Group& g, const Signature& fiber_sig,
                            const Signature& base_sig,
                            const OrbitOptions& opts = {});

// Fate of one numeric candidate (m, |G|) in the abelian classification.
enum class CandidateFate {
  no_admissible_fiber_vector,
  no_admissible_base_vector,
  freeness_fails,
  survives,
};
const char* to_string(CandidateFate fate);

// Per-group stage results for one candidate order.
struct GroupAudit {
  std::string group_name;
  std::vector<int> invariants;
  bool has_fiber_vector = false;
  bool has_base_vector = false;
  bool has_free_pair = false;
};

// One numeric candidate with the furthest stage any abelian group of its
// order reaches.
struct CandidateAudit {
  AbelianCandidate candidate;
  CandidateFate fate = CandidateFate::no_admissible_fiber_vector;
  std::vector<GroupAudit> groups;
  std::vector<std::string> surviving_groups;
};

// Complete abelian classification: every candidate audited, every
// surviving (G, m) classified into a labeled family.
struct AbelianClassification {
  std::vector<std::unique_ptr<Group>> groups;  // owners of the records' group pointers
  std::vector<CandidateAudit> audit;           // in candidate enumeration order
  std::vector<FamilyRecord> families;          // sorted by (|G|, m), labeled I..IV
};
AbelianClassification classify_abelian(int max_curve_genus = 64,
                                       const OrbitOptions& opts = {});

// Catalog of small groups used by the nonabelian search: every abelian
// type up to the bound plus a curated nonabelian list (symmetric,
// alternating, dihedral, dicyclic, and their products with small cyclic
// groups), deduplicated by structural fingerprint. warnings() names orders
// within the bound where nonabelian groups exist but none is in the
// catalog, so search results at those orders are incomplete by
// construction.
class GroupCatalog {
 public:
  explicit GroupCatalog(int max_order);
  int max_order() const { return max_order_; }
  std::size_t size() const { return groups_.size(); }
  const Group& at(std::size_t i) const;
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  int max_order_ = 0;
  std::vector<std::unique_ptr<Group>> groups_;
  std::vector<std::string> warnings_;
};

// Catalog-bounded search for nonabelian actions: for every nonabelian
// catalog group and base option with (g_C - 1)(g_F - 1) = |G|, enumerate
// fiber signatures from the group's element orders and keep every (G, m, n)
// admitting at least one free pair. Rows are sorted by (|G|, group, m, n)
// and labeled "N1", "N2", ...; rows absent from the known table are marked
// extra.
struct NonabelianSearchResult {
  GroupCatalog catalog;  // owns the groups the records point at
  std::vector<FamilyRecord> families;
};
NonabelianSearchResult search_nonabelian(int max_order = 60,
                                         const OrbitOptions& opts = {});

// Verification of the six known nonabelian building data, given by explicit
// permutations. valid means the datum passes full validation and reproduces
// the published (|G|, g_C, g_F).
struct KnownExampleCheck {
  std::string group_name;
  long long group_order = 0;
  Signature fiber_sig;
  Signature base_sig;
  long long g_C = 0;
  long long g_F = 0;
  bool valid = false;
  std::string detail;     // first failure; empty when valid
  std::string fiber_str;  // printed building datum
  std::string base_str;
};
struct KnownExampleVerification {
  std::vector<std::unique_ptr<Group>> groups;
  std::vector<KnownExampleCheck> checks;  // exactly six, in table order
};
KnownExampleVerification verify_known_nonabelian_examples();

// Machine replay of one printed derivation step: a reduction chain, an
// automorphism transport, a move-set identity, or a non-equivalence claim.
struct DerivationCheck {
  std::string family;  // "I".."IV", or "moves" for family-independent identities
  std::string claim;
  bool holds = false;
  std::string detail;  // divergence description when the claim fails
};
std::vector<DerivationCheck> replay_family_derivations();

}  // namespace isoprod
