#pragma once
// Brute-force oracles: independent first-principles implementations of the
// counts the library computes with shortcuts. Exponential or quadratic on
// purpose; call them at desk scale only.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "isoprod/genvec.hpp"
#include "isoprod/group.hpp"
#include "isoprod/moves.hpp"
#include "isoprod/signature.hpp"

namespace oracles {

// Element index with the given display label; fails loudly on a typo so a
// test cannot silently pin the wrong element.
inline int element_by_label(const isoprod::Group& g, const std::string& label) {
  for (int i = 0; i < g.order(); ++i)
    if (g.label(i) == label) return i;
  throw std::invalid_argument("no element labeled " + label + " in " + g.name());
}

// Every index bijection fixing 0 that preserves the multiplication table.
// Checks all (order-1)! candidates; keep |G| <= 8.
inline std::vector<isoprod::Automorphism> all_automorphisms_brute(
    const isoprod::Group& g) {
  const int n = g.order();
  if (n > 8) throw std::invalid_argument("brute automorphisms: order > 8");
  std::vector<int> rest(static_cast<std::size_t>(n - 1));
  std::iota(rest.begin(), rest.end(), 1);
  std::vector<isoprod::Automorphism> out;
  do {
    isoprod::Automorphism phi;
    phi.map.resize(static_cast<std::size_t>(n));
    phi.map[0] = 0;
    for (int i = 1; i < n; ++i)
      phi.map[static_cast<std::size_t>(i)] =
          rest[static_cast<std::size_t>(i - 1)];
    bool homo = true;
    for (int a = 0; a < n && homo; ++a)
      for (int b = 0; b < n && homo; ++b)
        homo = phi.map[static_cast<std::size_t>(g.mul(a, b))] ==
               g.mul(phi.map[static_cast<std::size_t>(a)],
                     phi.map[static_cast<std::size_t>(b)]);
    if (homo) out.push_back(std::move(phi));
  } while (std::next_permutation(rest.begin(), rest.end()));
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return x.map < y.map; });
  return out;
}

// All generating vectors by a plain odometer over every slot: positional
// order check, long relation, generation. No last-entry solving, so the
// cost is order^(r + 2g').
inline std::vector<isoprod::GeneratingVector> enumerate_vectors_brute(
    const isoprod::Group& g, const isoprod::Signature& sig) {
  const int n = g.order();
  const int r = sig.r();
  const int slots = r + 2 * sig.orbit_genus;
  double cost = 1;
  for (int i = 0; i < slots; ++i) cost *= n;
  if (cost > 5e7) throw std::invalid_argument("brute vectors: search too big");

  std::vector<isoprod::GeneratingVector> out;
  std::vector<int> tuple(static_cast<std::size_t>(slots), 0);
  for (;;) {
    bool orders_ok = true;
    for (int i = 0; i < r && orders_ok; ++i)
      orders_ok = g.order_of(tuple[static_cast<std::size_t>(i)]) ==
                  sig.branching[static_cast<std::size_t>(i)];
    if (orders_ok) {
      int prod = 0;
      for (int i = 0; i < r; ++i)
        prod = g.mul(prod, tuple[static_cast<std::size_t>(i)]);
      for (int j = 0; j < sig.orbit_genus; ++j)
        prod = g.mul(prod, g.commutator(tuple[static_cast<std::size_t>(r + 2 * j)],
                                        tuple[static_cast<std::size_t>(r + 2 * j + 1)]));
      if (prod == 0 && g.generates(tuple)) {
        isoprod::GeneratingVector v;
        v.group = &g;
        v.sig = sig;
        v.elliptic.assign(tuple.begin(), tuple.begin() + r);
        v.hyperbolic.assign(tuple.begin() + r, tuple.end());
        out.push_back(std::move(v));
      }
    }
    int k = slots - 1;
    while (k >= 0 && tuple[static_cast<std::size_t>(k)] == n - 1)
      tuple[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) break;
    ++tuple[static_cast<std::size_t>(k)];
  }
  return out;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(b)] = a;
  }
};

// Packs a pair's index tuple into a lookup key. Slots are small here
// (order <= 16, about a dozen entries), so a uint64 key always fits.
inline std::uint64_t pack_pair_key(const isoprod::PairState& p, int bits) {
  std::uint64_t key = 0;
  auto push = [&](const std::vector<int>& xs) {
    for (int x : xs) key = (key << bits) | static_cast<std::uint64_t>(x);
  };
  push(p.fiber_vec.elliptic);
  push(p.fiber_vec.hyperbolic);
  push(p.base_vec.elliptic);
  push(p.base_vec.hyperbolic);
  return key;
}

// Class sizes by pairwise union instead of orbit closure: for every input
// pair apply every single enabled move and every automorphism, and unite
// the pair with its image. The image of an abelian-pipeline pair is again
// an input pair (braids there are equal-order transpositions), which this
// oracle asserts. Returns sizes sorted ascending.
inline std::vector<std::size_t> orbit_class_sizes_union_find(
    const isoprod::Group& g, const std::vector<isoprod::PairState>& pairs,
    const isoprod::MoveSet& moves,
    const std::vector<isoprod::Automorphism>& auts) {
  int bits = 1;
  while ((1 << bits) < g.order()) ++bits;
  const std::size_t slots = pairs.empty()
                                ? 0
                                : pairs[0].fiber_vec.elliptic.size() +
                                      pairs[0].fiber_vec.hyperbolic.size() +
                                      pairs[0].base_vec.elliptic.size() +
                                      pairs[0].base_vec.hyperbolic.size();
  if (slots * static_cast<std::size_t>(bits) > 64)
    throw std::invalid_argument("union-find oracle: key does not fit");

  std::unordered_map<std::uint64_t, int> index;
  index.reserve(pairs.size() * 2);
  for (std::size_t i = 0; i < pairs.size(); ++i)
    index.emplace(pack_pair_key(pairs[i], bits), static_cast<int>(i));

  UnionFind uf(pairs.size());
  auto unite_with = [&](int from, const isoprod::PairState& image) {
    const auto it = index.find(pack_pair_key(image, bits));
    if (it == index.end())
      throw std::logic_error("union-find oracle: move image left the set");
    uf.unite(from, it->second);
  };
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const int from = static_cast<int>(i);
    for (int pos : moves.fiber_braids) {
      isoprod::PairState image = pairs[i];
      image.fiber_vec = isoprod::braid_move_genus0(image.fiber_vec, pos);
      unite_with(from, image);
    }
    for (int k : moves.base_moves) {
      isoprod::PairState image = pairs[i];
      image.base_vec = isoprod::numbered_base_move(image.base_vec, k);
      unite_with(from, image);
    }
    for (const auto& phi : auts)
      unite_with(from, isoprod::apply_automorphism(phi, pairs[i]));
  }

  std::map<int, std::size_t> sizes;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    ++sizes[uf.find(static_cast<int>(i))];
  std::vector<std::size_t> out;
  for (const auto& [root, size] : sizes) out.push_back(size);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace oracles
