#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace isoprod {

// Violation of a structural invariant the library itself guarantees.
// The CLI maps this to exit code 3.
struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

enum class GroupKind { abelian, permutation };

class Group;

// Checked element handle: pairs an index with its parent group so accidental
// cross-group arithmetic is rejected instead of silently computing garbage.
class Element {
public:
  Element() = default;
  Element(const Group* group, int index) : group_(group), index_(index) {}

  int index() const { return index_; }
  const Group* group() const { return group_; }

  Element operator*(const Element& rhs) const;
  Element inverse() const;
  long long order() const;
  std::string label() const;

  bool operator==(const Element& rhs) const;
  bool operator!=(const Element& rhs) const { return !(*this == rhs); }

private:
  const Group* group_ = nullptr;
  int index_ = -1;
};

// Finite group with elements addressed by dense indices 0..order-1.
// Index 0 is always the identity. Element indexing is deterministic:
// abelian groups use mixed-radix coordinate order, permutation groups sort
// elements lexicographically by image vector (which puts the identity first).
class Group {
public:
  int order() const { return n_; }
  GroupKind kind() const { return kind_; }
  bool is_abelian() const { return abelian_; }
  const std::string& name() const { return name_; }

  // Index arithmetic. All indices are range-checked.
  int mul(int a, int b) const;
  int inv(int a) const;
  int conjugate(int h, int a) const { return mul(mul(h, a), inv(h)); }
  // [a, b] = a b a^-1 b^-1
  int commutator(int a, int b) const {
    return mul(mul(mul(a, b), inv(a)), inv(b));
  }
  int power(int a, long long e) const;
  long long order_of(int a) const {
    check_index(a);
    return elt_order_[static_cast<std::size_t>(a)];
  }

  Element element(int index) const {
    check_index(index);
    return Element(this, index);
  }
  Element identity() const { return Element(this, 0); }

  // Display label: abelian "(1,0)" residue tuples, permutations cycle
  // notation "(1 2 3)", identity "id".
  std::string label(int a) const;

  // Abelian view (throws std::logic_error for permutation groups).
  const std::vector<int>& abelian_factors() const;
  std::vector<int> coordinates(int a) const;
  int index_of_coordinates(const std::vector<int>& coords) const;

  // Permutation view (throws std::logic_error for abelian groups).
  int degree() const;
  const std::vector<int>& image(int a) const;  // 0-based point images
  std::optional<int> index_of_image(const std::vector<int>& img) const;

  // Subgroup machinery. All returned index lists are sorted ascending.
  std::vector<int> subgroup_generated(const std::vector<int>& gens) const;
  bool generates(const std::vector<int>& gens) const;
  std::vector<int> cyclic_subgroup(int a) const;

  // Union over all h in G of the cyclic subgroup <h a h^-1>, i.e. the set of
  // elements with a fixed point when a acts with stabilizer <a>. Returned as
  // sorted indices, or as a bitmask (bit i of word i/64 = element i).
  std::vector<int> cyclic_conjugate_union(int a) const;
  std::vector<std::uint64_t> cyclic_conjugate_union_mask(int a) const;

  std::vector<std::vector<int>> conjugacy_classes() const;
  int center_order() const;

  // Coarse isomorphism fingerprint used for catalog deduplication:
  // order, element-order multiset, abelian flag, center order, class count.
  std::string fingerprint() const;

  // Structural equality: same kind, same element set with identical indexing
  // and multiplication. (Two constructions of the same permutation group on
  // the same points compare equal regardless of generating set.)
  bool same_presentation(const Group& other) const;

private:
  Group() = default;
  void check_index(int a) const {
    if (a < 0 || a >= n_)
      throw std::out_of_range("element index " + std::to_string(a) +
                              " out of range for group of order " +
                              std::to_string(n_));
  }
  void finalize();        // orders, inverses, axiom verification
  void verify_axioms() const;
  int mul_raw(int a, int b) const;

  int n_ = 0;
  GroupKind kind_ = GroupKind::abelian;
  bool abelian_ = true;
  std::string name_;

  // Dense multiplication table (order <= kDenseTableLimit), uint16 indices.
  static constexpr int kDenseTableLimit = 2048;
  std::vector<std::uint16_t> table_;
  std::vector<int> inv_;
  std::vector<long long> elt_order_;

  // Abelian storage: cyclic factor sizes, elements are mixed-radix tuples.
  std::vector<int> factors_;

  // Permutation storage: sorted 0-based image vectors.
  int degree_ = 0;
  std::vector<std::vector<int>> images_;

  friend Group make_abelian_group(const std::vector<int>& invariants);
  friend Group make_permutation_group(
      int degree, const std::vector<std::vector<int>>& generator_images,
      std::size_t closure_bound);
  friend Group direct_product(const Group& a, const Group& b);
  friend void set_group_name(Group& g, std::string name);
};

// Internal naming hook for the named constructors (S n, D n, ...).
void set_group_name(Group& g, std::string name);

// Direct product of cyclic groups of the given orders (each >= 2).
// Throws std::invalid_argument("trivial group not supported") on an empty
// list and rejects factors < 2.
Group make_abelian_group(const std::vector<int>& invariants);

// Closure of the given generators inside the symmetric group on
// {1..degree}. Generator images are 1-based (entry j = image of point j+1).
// Throws when a generator is not a permutation, when the closure exceeds
// closure_bound elements, or when the closure is trivial.
Group make_permutation_group(int degree,
                             const std::vector<std::vector<int>>& generator_images,
                             std::size_t closure_bound = 10000);

Group make_cyclic_permutation_group(int n);   // n >= 2
Group make_symmetric_group(int n);            // n >= 2
Group make_alternating_group(int n);          // n >= 3
Group make_dihedral_group(int n);             // order 2n, n >= 3
Group make_dicyclic_group(int n);             // order 4n, n >= 2 (n=2: quaternion)

// Direct product. Abelian x abelian stays abelian; any permutation factor
// promotes the result to a permutation group on disjoint point sets.
Group direct_product(const Group& a, const Group& b);

// Grammar (case- and whitespace-insensitive):
//   Z d1 x Z d2 x ...   direct product of cyclic groups, each d >= 2
//   S n                 symmetric group, n >= 2
//   A n                 alternating group, n >= 3
//   D n                 dihedral group of order 2n, n >= 3
//   Dic n               dicyclic group of order 4n, n >= 2
// Products are supported for cyclic factors only.
Group parse_group_spec(const std::string& text);

// Parses disjoint cycle notation "(1 2 3)(4 5)" (also accepts commas) into a
// 1-based image vector of the given degree; "id" or "()" is the identity.
std::vector<int> permutation_from_cycles(int degree, const std::string& cycles);

struct Automorphism {
  std::vector<int> map;  // map[a] = image of element index a
  int operator()(int a) const { return map[static_cast<std::size_t>(a)]; }
  bool operator==(const Automorphism& rhs) const { return map == rhs.map; }
};

// Complete automorphism list, sorted lexicographically by image map.
// Throws when |G| exceeds order_bound (default 64) or when the group has
// more than an internal cap of 10^6 automorphisms.
std::vector<Automorphism> automorphisms(const Group& g, int order_bound = 64);

Automorphism compose(const Automorphism& f, const Automorphism& g);  // f after g
Automorphism inverse_of(const Automorphism& f);

}  // namespace isoprod
