#include "isoprod/moves.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace isoprod {

namespace {

// Slot-level move kernels shared by the public wrappers and the orbit
// engine. Each one reads its operands into locals first because the
// slots alias the outputs.

void braid_at(const Group& g, int* y) {
  const int y1 = y[0];
  const int y2 = y[1];
  y[0] = y2;
  y[1] = g.mul(g.mul(g.inv(y2), y1), y2);
}

void alpha_at(const Group& g, int* ab) { ab[1] = g.mul(ab[1], ab[0]); }

void beta_at(const Group& g, int* ab) { ab[0] = g.mul(ab[0], g.inv(ab[1])); }

void gamma_at(const Group& g, int* x, int* ab) {
  const int x1 = x[0];
  const int x2 = x[1];
  const int a = ab[0];
  const int b = ab[1];
  const int c = g.mul(g.mul(a, g.inv(b)), g.inv(a));
  x[1] = g.mul(g.mul(c, x2), g.inv(c));
  ab[0] = g.mul(g.mul(g.inv(b), x1), a);
}

void rho_at(const Group& g, int* x, int* ab) {
  const int x1 = x[0];
  const int x2 = x[1];
  const int a = ab[0];
  const int b = ab[1];
  const int ab_prod = g.mul(a, b);
  const int ba_prod = g.mul(b, a);
  x[0] = g.mul(g.mul(g.inv(ab_prod), x2), ab_prod);
  x[1] = g.mul(g.mul(g.inv(ba_prod), x1), ba_prod);
  ab[0] = g.inv(a);
  ab[1] = g.inv(b);
}

const Group& checked_group(const GeneratingVector& v) {
  if (v.group == nullptr) {
    throw std::invalid_argument("move: vector is not attached to a group");
  }
  return *v.group;
}

void require_torus_shape(const GeneratingVector& v, const char* what) {
  if (v.sig.orbit_genus != 1 || v.hyperbolic.size() != 2) {
    throw std::invalid_argument(std::string(what) +
                                " acts on genus-1 vectors [x_1..x_r ; a,b]");
  }
}

void require_two_branch_points(const GeneratingVector& v, const char* what) {
  if (v.elliptic.size() != 2) {
    throw std::invalid_argument(std::string(what) +
                                " needs exactly two branch points");
  }
}

}  // namespace

GeneratingVector braid_move_genus0(const GeneratingVector& v, int i) {
  const Group& g = checked_group(v);
  if (v.sig.orbit_genus != 0) {
    throw std::invalid_argument("braid move acts on genus-0 vectors");
  }
  const int r = static_cast<int>(v.elliptic.size());
  if (i < 1 || i > r - 1) {
    throw std::out_of_range("braid move position out of range");
  }
  GeneratingVector out = v;
  braid_at(g, &out.elliptic[i - 1]);
  return out;
}

GeneratingVector torus_move_alpha(const GeneratingVector& v) {
  const Group& g = checked_group(v);
  require_torus_shape(v, "torus move alpha");
  GeneratingVector out = v;
  alpha_at(g, out.hyperbolic.data());
  return out;
}

GeneratingVector torus_move_beta(const GeneratingVector& v) {
  const Group& g = checked_group(v);
  require_torus_shape(v, "torus move beta");
  GeneratingVector out = v;
  beta_at(g, out.hyperbolic.data());
  return out;
}

GeneratingVector torus_move_gamma(const GeneratingVector& v) {
  const Group& g = checked_group(v);
  require_torus_shape(v, "torus move gamma");
  require_two_branch_points(v, "torus move gamma");
  GeneratingVector out = v;
  gamma_at(g, out.elliptic.data(), out.hyperbolic.data());
  return out;
}

GeneratingVector torus_move_rho(const GeneratingVector& v) {
  const Group& g = checked_group(v);
  require_torus_shape(v, "torus move rho");
  require_two_branch_points(v, "torus move rho");
  GeneratingVector out = v;
  rho_at(g, out.elliptic.data(), out.hyperbolic.data());
  return out;
}

GeneratingVector numbered_base_move(const GeneratingVector& v, int k) {
  switch (k) {
    case 1:
      return torus_move_alpha(v);
    case 2:
      return torus_move_beta(v);
    case 3:
      return torus_move_gamma(v);
    case 4:
      return torus_move_rho(v);
    case 5:
      return apply_move_chain(v, {1, 2, 1});
    default:
      throw std::out_of_range("numbered base move index must be 1..5");
  }
}

GeneratingVector apply_move_chain(const GeneratingVector& v,
                                  const std::vector<int>& chain) {
  GeneratingVector out = v;
  for (const int k : chain) {
    out = numbered_base_move(out, k);
  }
  return out;
}

GeneratingVector apply_automorphism(const Automorphism& phi,
                                    const GeneratingVector& v) {
  const Group& g = checked_group(v);
  if (static_cast<int>(phi.map.size()) != g.order()) {
    throw std::invalid_argument(
        "apply_automorphism: map does not match the group order");
  }
  GeneratingVector out = v;
  for (int& e : out.elliptic) {
    e = phi.map[e];
  }
  for (int& e : out.hyperbolic) {
    e = phi.map[e];
  }
  return out;
}

PairState apply_automorphism(const Automorphism& phi, const PairState& pair) {
  return PairState{apply_automorphism(phi, pair.fiber_vec),
                   apply_automorphism(phi, pair.base_vec)};
}

MoveSet make_move_set(const Group& g, const Signature& fiber_sig,
                      const Signature& base_sig) {
  fiber_sig.validate();
  base_sig.validate();
  if (fiber_sig.orbit_genus != 0) {
    throw std::invalid_argument("make_move_set: fiber signature must have genus 0");
  }
  if (base_sig.orbit_genus != 1) {
    throw std::invalid_argument("make_move_set: base signature must have genus 1");
  }
  MoveSet ms{fiber_sig, base_sig, {}, {}};
  const auto& m = fiber_sig.branching;
  for (int i = 1; i + 1 <= static_cast<int>(m.size()); ++i) {
    if (!g.is_abelian() || m[i - 1] == m[i]) {
      ms.fiber_braids.push_back(i);
    }
  }
  ms.base_moves = {1, 2};
  if (base_sig.r() == 2) {
    ms.base_moves.push_back(3);
    ms.base_moves.push_back(4);
  }
  return ms;
}

namespace {

// Orbit states are flattened to [fiber elliptic | base elliptic | a, b]
// (the fiber vector has no hyperbolic part) and keyed as big-endian byte
// strings, one byte per slot up to group order 256 and two above, so
// byte-lexicographic key order equals entrywise tuple order.

std::string key_of(const std::vector<int>& s, int width) {
  std::string k(s.size() * static_cast<std::size_t>(width), '\0');
  std::size_t pos = 0;
  for (const int e : s) {
    if (width == 2) {
      k[pos++] = static_cast<char>(static_cast<unsigned>(e) >> 8);
    }
    k[pos++] = static_cast<char>(static_cast<unsigned>(e) & 0xffu);
  }
  return k;
}

std::vector<int> flatten_pair(const PairState& p) {
  std::vector<int> s;
  s.reserve(p.fiber_vec.elliptic.size() + p.base_vec.elliptic.size() + 2);
  s.insert(s.end(), p.fiber_vec.elliptic.begin(), p.fiber_vec.elliptic.end());
  s.insert(s.end(), p.base_vec.elliptic.begin(), p.base_vec.elliptic.end());
  s.insert(s.end(), p.base_vec.hyperbolic.begin(), p.base_vec.hyperbolic.end());
  return s;
}

}  // namespace

std::vector<OrbitClass> r_classes(const Group& g,
                                  const std::vector<PairState>& pairs,
                                  const MoveSet& moves,
                                  const std::vector<Automorphism>& auts,
                                  const OrbitOptions& opts) {
  if (pairs.empty()) {
    return {};
  }
  const int rf = moves.fiber_sig.r();
  const int rb = moves.base_sig.r();
  for (const PairState& p : pairs) {
    if (p.fiber_vec.group != &g || p.base_vec.group != &g) {
      throw std::invalid_argument(
          "r_classes: every vector must live over the given group");
    }
    if (p.fiber_vec.sig.orbit_genus != 0 ||
        static_cast<int>(p.fiber_vec.elliptic.size()) != rf ||
        !p.fiber_vec.hyperbolic.empty()) {
      throw std::invalid_argument(
          "r_classes: fiber vector shape does not match the move set");
    }
    if (p.base_vec.sig.orbit_genus != 1 ||
        static_cast<int>(p.base_vec.elliptic.size()) != rb ||
        p.base_vec.hyperbolic.size() != 2) {
      throw std::invalid_argument(
          "r_classes: base vector shape does not match the move set");
    }
  }
  for (const Automorphism& phi : auts) {
    if (static_cast<int>(phi.map.size()) != g.order()) {
      throw std::invalid_argument(
          "r_classes: automorphism does not match the group order");
    }
  }
  for (const int i : moves.fiber_braids) {
    if (i < 1 || i > rf - 1) {
      throw std::invalid_argument("r_classes: braid position out of range");
    }
  }
  for (const int k : moves.base_moves) {
    if (k < 1 || k > 5) {
      throw std::invalid_argument("r_classes: base move index out of range");
    }
    if ((k == 3 || k == 4) && rb != 2) {
      throw std::invalid_argument(
          "r_classes: base moves 3 and 4 need exactly two branch points");
    }
  }

  const int width = g.order() <= 256 ? 1 : 2;
  const int base_off = rf;
  const int hyp_off = rf + rb;

  std::unordered_map<std::string, int> input_of;
  input_of.reserve(pairs.size() * 2);
  std::vector<std::string> input_keys(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    input_keys[i] = key_of(flatten_pair(pairs[i]), width);
    if (!input_of.emplace(input_keys[i], static_cast<int>(i)).second) {
      throw std::invalid_argument("r_classes: input pairs must be pairwise distinct");
    }
  }

  std::vector<char> classified(pairs.size(), 0);
  std::vector<OrbitClass> out;

  for (std::size_t start = 0; start < pairs.size(); ++start) {
    if (classified[start]) {
      continue;
    }
    std::unordered_set<std::string> visited;
    std::deque<std::vector<int>> frontier;
    std::vector<int> members;
    int best_member = static_cast<int>(start);

    const auto discover = [&](std::vector<int>&& s) {
      std::string k = key_of(s, width);
      if (!visited.insert(k).second) {
        return;
      }
      if (visited.size() > opts.max_states) {
        throw std::runtime_error(
            "r_classes: orbit closure exceeded the state bound of " +
            std::to_string(opts.max_states) + " states");
      }
      const auto it = input_of.find(k);
      if (it != input_of.end()) {
        if (classified[it->second]) {
          throw internal_error(
              "r_classes: orbit closure reached a pair already classified "
              "elsewhere; the move kernels are not bijective");
        }
        classified[it->second] = 1;
        members.push_back(it->second);
        if (input_keys[it->second] < input_keys[best_member]) {
          best_member = it->second;
        }
      }
      frontier.push_back(std::move(s));
    };

    discover(flatten_pair(pairs[start]));
    while (!frontier.empty()) {
      const std::vector<int> s = std::move(frontier.front());
      frontier.pop_front();
      for (const int i : moves.fiber_braids) {
        std::vector<int> t = s;
        braid_at(g, &t[i - 1]);
        discover(std::move(t));
      }
      for (const int k : moves.base_moves) {
        std::vector<int> t = s;
        switch (k) {
          case 1:
            alpha_at(g, &t[hyp_off]);
            break;
          case 2:
            beta_at(g, &t[hyp_off]);
            break;
          case 3:
            gamma_at(g, &t[base_off], &t[hyp_off]);
            break;
          case 4:
            rho_at(g, &t[base_off], &t[hyp_off]);
            break;
          case 5:
            alpha_at(g, &t[hyp_off]);
            beta_at(g, &t[hyp_off]);
            alpha_at(g, &t[hyp_off]);
            break;
          default:
            break;
        }
        discover(std::move(t));
      }
      for (const Automorphism& phi : auts) {
        std::vector<int> t(s.size());
        for (std::size_t j = 0; j < s.size(); ++j) {
          t[j] = phi.map[s[j]];
        }
        discover(std::move(t));
      }
    }

    OrbitClass cls;
    std::sort(members.begin(), members.end());
    cls.representative = pairs[best_member];
    cls.members = std::move(members);
    cls.size = cls.members.size();
    cls.visited_states = visited.size();
    out.push_back(std::move(cls));
  }

  std::sort(out.begin(), out.end(), [&](const OrbitClass& a, const OrbitClass& b) {
    return key_of(flatten_pair(a.representative), width) <
           key_of(flatten_pair(b.representative), width);
  });
  return out;
}

}  // namespace isoprod
