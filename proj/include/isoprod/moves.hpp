#pragma once
// Mapping-class moves on generating vectors and the orbit engine that
// partitions (fiber, base) vector pairs into equivalence classes under
// moves plus the simultaneous automorphism action.

#include <cstddef>
#include <vector>

#include "isoprod/genvec.hpp"

namespace isoprod {

// Braid move on a genus-0 vector at 1-based position i (1 <= i <= r-1):
//   y_i -> y_{i+1},  y_{i+1} -> y_{i+1}^{-1} y_i y_{i+1},  others fixed.
// Preserves the product of the entries, hence the long relation; for an
// abelian group it is the plain transposition of the two entries.
GeneratingVector braid_move_genus0(const GeneratingVector& v, int i);

// Moves on a genus-1 vector [x_1..x_r ; a,b]. Alpha and beta fix every
// elliptic entry and act on the hyperbolic pair:
//   alpha: b -> ba          beta: a -> ab^{-1}
GeneratingVector torus_move_alpha(const GeneratingVector& v);
GeneratingVector torus_move_beta(const GeneratingVector& v);
// With exactly two elliptic entries there are two further moves:
//   gamma: x_2 -> (ab^{-1}a^{-1}) x_2 (ab^{-1}a^{-1})^{-1},  a -> b^{-1} x_1 a
//   rho:   x_1 -> (ab)^{-1} x_2 (ab),  x_2 -> (ba)^{-1} x_1 (ba),
//          a -> a^{-1},  b -> b^{-1}
GeneratingVector torus_move_gamma(const GeneratingVector& v);
GeneratingVector torus_move_rho(const GeneratingVector& v);

// Numbered aliases used by the hand derivations on genus-1 vectors:
// 1 = alpha, 2 = beta, 3 = gamma, 4 = rho, and 5 is the composite 1,2,1,
// which over an abelian group sends (h1, h2) to (-h2, h1).
GeneratingVector numbered_base_move(const GeneratingVector& v, int k);

// Applies numbered base moves left to right: {1,3,5,3} applies 1 first.
GeneratingVector apply_move_chain(const GeneratingVector& v,
                                  const std::vector<int>& chain);

// Entrywise image under an automorphism of the vector's group.
// Admissibility is preserved exactly (orders, relation, generation).
GeneratingVector apply_automorphism(const Automorphism& phi,
                                    const GeneratingVector& v);

struct PairState {
  GeneratingVector fiber_vec;  // genus 0
  GeneratingVector base_vec;   // genus 1
  bool operator==(const PairState& other) const {
    return fiber_vec == other.fiber_vec && base_vec == other.base_vec;
  }
};

PairState apply_automorphism(const Automorphism& phi, const PairState& pair);

// The moves enabled for one (fiber signature, base signature) pipeline.
struct MoveSet {
  Signature fiber_sig;
  Signature base_sig;
  std::vector<int> fiber_braids;  // 1-based braid positions on the fiber vector
  std::vector<int> base_moves;    // numbered_base_move indices on the base vector
};

// Abelian groups get only the equal-order transpositions on the fiber
// side (the complete generating set for abelian genus-0 actions, and it
// keeps the branching order pattern intact); nonabelian groups get every
// braid, and orbit states may then carry reordered branching patterns.
// Base moves: 1,2 always; 3,4 exactly when the base has two branch points.
MoveSet make_move_set(const Group& g, const Signature& fiber_sig,
                      const Signature& base_sig);

struct OrbitClass {
  PairState representative;  // minimal input member under entrywise order
  std::vector<int> members;  // indices into the input pair list, sorted
  std::size_t size = 0;      // number of input pairs in the class
  std::size_t visited_states = 0;  // closure size incl. reordered states
};

struct OrbitOptions {
  std::size_t max_states = 10'000'000;  // memory guard for one closure
};

// Partitions the input pairs under the closure of: enabled braid moves on
// the fiber vector, enabled base moves on the base vector, and every given
// automorphism applied to both vectors simultaneously. Breadth-first
// closure with a visited set; every move is a bijection of the finite
// state space, so forward closure equals the full group orbit. Classes
// come back sorted by representative; together their members cover the
// input exactly. Throws std::runtime_error if a closure exceeds
// opts.max_states and std::invalid_argument on malformed input (vector
// over the wrong group, duplicate input pairs).
std::vector<OrbitClass> r_classes(const Group& g,
                                  const std::vector<PairState>& pairs,
                                  const MoveSet& moves,
                                  const std::vector<Automorphism>& auts,
                                  const OrbitOptions& opts = {});

}  // namespace isoprod
