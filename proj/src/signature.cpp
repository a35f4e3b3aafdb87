#include "isoprod/signature.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include <boost/rational.hpp>

namespace isoprod {

namespace {

using Rat = boost::rational<long long>;

long long floor_rat(const Rat& q) {
  long long n = q.numerator(), d = q.denominator();  // d > 0
  long long f = n / d;
  if (n % d != 0 && n < 0) --f;
  return f;
}

// Sorted lists m (nondecreasing, each >= 2) with sum over i of 1/m_i equal
// to `target`, exactly `terms` entries, entries drawn from `allowed` when
// non-null (allowed is sorted ascending).
void egyptian_rec(const Rat& target, int terms, int min_order,
                  const std::vector<int>* allowed, std::vector<int>& acc,
                  std::vector<std::vector<int>>& out) {
  if (terms == 0) {
    if (target == 0) out.push_back(acc);
    return;
  }
  if (target <= 0) return;
  if (terms == 1) {
    if (target.numerator() != 1) return;
    long long m = target.denominator();
    if (m < min_order) return;
    if (allowed &&
        !std::binary_search(allowed->begin(), allowed->end(), static_cast<int>(m)))
      return;
    acc.push_back(static_cast<int>(m));
    out.push_back(acc);
    acc.pop_back();
    return;
  }
  // Nondecreasing orders mean all remaining reciprocals are <= 1/m, so
  // target <= terms/m, i.e. m <= terms/target; and 1/m < target.
  long long hi = floor_rat(Rat(terms) / target);
  long long lo = std::max<long long>(min_order, floor_rat(Rat(1) / target) + 1);
  for (long long m = lo; m <= hi; ++m) {
    if (allowed &&
        !std::binary_search(allowed->begin(), allowed->end(), static_cast<int>(m)))
      continue;
    acc.push_back(static_cast<int>(m));
    egyptian_rec(target - Rat(1, m), terms - 1, static_cast<int>(m), allowed,
                 acc, out);
    acc.pop_back();
  }
}

// Sorted branching lists with angle sum Σ(1 - 1/m_i) == target. Each term
// lies in [1/2, 1), so the length r satisfies target < r <= 2*target.
std::vector<std::vector<int>> branchings_with_angle_sum(
    const Rat& target, const std::vector<int>* allowed) {
  std::vector<std::vector<int>> out;
  if (target <= 0) return out;
  long long r_lo = floor_rat(target) + 1;
  long long r_hi = floor_rat(2 * target);
  for (long long r = r_lo; r <= r_hi; ++r) {
    Rat recip_sum = Rat(r) - target;  // Σ 1/m_i
    std::vector<int> acc;
    egyptian_rec(recip_sum, static_cast<int>(r), 2, allowed, acc, out);
  }
  return out;
}

}  // namespace

void Signature::validate() const {
  if (orbit_genus < 0)
    throw std::invalid_argument("signature orbit genus must be nonnegative");
  for (std::size_t i = 0; i < branching.size(); ++i) {
    if (branching[i] < 2)
      throw std::invalid_argument("branching order must be at least 2");
    if (i > 0 && branching[i] < branching[i - 1])
      throw std::invalid_argument("branching orders must be nondecreasing");
  }
}

std::string Signature::branching_str() const {
  if (branching.empty()) return "-";
  std::string out;
  std::size_t i = 0;
  while (i < branching.size()) {
    std::size_t j = i;
    while (j < branching.size() && branching[j] == branching[i]) ++j;
    if (!out.empty()) out += ",";
    out += std::to_string(branching[i]);
    if (j - i > 1) out += "^" + std::to_string(j - i);
    i = j;
  }
  return out;
}

std::string Signature::str() const {
  return "(" + std::to_string(orbit_genus) + " | " + branching_str() + ")";
}

Signature Signature::parse(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.size() < 2 || s.front() != '(' || s.back() != ')')
    throw std::invalid_argument("signature must be of the form (g | m1,...): " + text);
  s = s.substr(1, s.size() - 2);
  std::size_t bar = s.find('|');
  if (bar == std::string::npos)
    throw std::invalid_argument("signature must contain '|': " + text);
  std::string genus_part = s.substr(0, bar);
  std::string list_part = s.substr(bar + 1);

  Signature sig;
  try {
    std::size_t used = 0;
    sig.orbit_genus = std::stoi(genus_part, &used);
    if (used != genus_part.size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw std::invalid_argument("bad orbit genus in signature: " + text);
  }

  if (!(list_part.empty() || list_part == "-")) {
    std::size_t start = 0;
    for (std::size_t i = 0; i <= list_part.size(); ++i) {
      if (i != list_part.size() && list_part[i] != ',') continue;
      std::string item = list_part.substr(start, i - start);
      start = i + 1;
      if (item.empty())
        throw std::invalid_argument("empty branching entry in signature: " + text);
      long long order = 0, count = 1;
      std::size_t caret = item.find('^');
      try {
        std::size_t used = 0;
        order = std::stoll(item.substr(0, caret), &used);
        if (used != (caret == std::string::npos ? item.size() : caret))
          throw std::invalid_argument("");
        if (caret != std::string::npos) {
          count = std::stoll(item.substr(caret + 1), &used);
          if (used != item.size() - caret - 1) throw std::invalid_argument("");
        }
      } catch (const std::exception&) {
        throw std::invalid_argument("bad branching entry '" + item +
                                    "' in signature: " + text);
      }
      if (order < 2)
        throw std::invalid_argument("branching order must be at least 2: " + text);
      if (count < 1 || count > 64)
        throw std::invalid_argument("branching exponent out of range: " + text);
      for (long long c = 0; c < count; ++c)
        sig.branching.push_back(static_cast<int>(order));
    }
  }
  std::sort(sig.branching.begin(), sig.branching.end());
  sig.validate();
  return sig;
}

long long riemann_hurwitz_genus(long long group_order, const Signature& sig) {
  sig.validate();
  if (group_order < 1)
    throw std::invalid_argument("group order must be positive");
  Rat total = Rat(sig.orbit_genus) - 1;
  for (int m : sig.branching) total += Rat(1, 2) * (Rat(1) - Rat(1, m));
  Rat genus = Rat(1) + Rat(group_order) * total;
  if (genus.denominator() != 1 || genus.numerator() < 0)
    throw std::invalid_argument("signature incompatible with order " +
                                std::to_string(group_order) + ": " + sig.str());
  return genus.numerator();
}

std::vector<BaseOption> base_signature_options() {
  std::vector<BaseOption> out;
  // 2 = (g_F - 1) * Σ(1 - 1/n_j): each term is >= 1/2, so g_F - 1 <= 4.
  for (int t = 2; t <= 4; ++t) {
    for (const std::vector<int>& n : branchings_with_angle_sum(Rat(2, t), nullptr)) {
      BaseOption opt;
      opt.fiber_genus = t + 1;
      opt.base.orbit_genus = 1;
      opt.base.branching = n;
      opt.abelian_allowed = n.size() >= 2;
      out.push_back(opt);
    }
  }
  std::sort(out.begin(), out.end(), [](const BaseOption& a, const BaseOption& b) {
    return a.fiber_genus < b.fiber_genus;
  });
  return out;
}

std::vector<AbelianCandidate> abelian_signature_candidates(int max_curve_genus) {
  if (max_curve_genus < 3)
    throw std::invalid_argument("curve genus cap must be at least 3");
  std::vector<AbelianCandidate> out;
  for (int k = 2; k <= max_curve_genus - 1; ++k) {
    for (const std::vector<int>& m :
         branchings_with_angle_sum(Rat(2) + Rat(2, k), nullptr)) {
      AbelianCandidate cand;
      cand.m.orbit_genus = 0;
      cand.m.branching = m;
      cand.group_order = 2LL * k;
      out.push_back(cand);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const AbelianCandidate& a, const AbelianCandidate& b) {
              if (a.m.r() != b.m.r()) return a.m.r() < b.m.r();
              if (a.m.branching != b.m.branching)
                return a.m.branching < b.m.branching;
              return a.group_order < b.group_order;
            });
  return out;
}

std::vector<Signature> fiber_signature_candidates(
    long long group_order, int fiber_genus, const std::vector<int>& allowed_orders) {
  if (group_order < 2) throw std::invalid_argument("group order must be >= 2");
  if (fiber_genus < 2) throw std::invalid_argument("fiber genus must be >= 2");
  std::vector<int> allowed = allowed_orders;
  std::sort(allowed.begin(), allowed.end());
  allowed.erase(std::unique(allowed.begin(), allowed.end()), allowed.end());
  allowed.erase(std::remove_if(allowed.begin(), allowed.end(),
                               [](int v) { return v < 2; }),
                allowed.end());
  Rat target = Rat(2) + Rat(2 * fiber_genus - 2, group_order);
  std::vector<Signature> out;
  for (const std::vector<int>& m : branchings_with_angle_sum(target, &allowed)) {
    Signature sig;
    sig.orbit_genus = 0;
    sig.branching = m;
    out.push_back(sig);
  }
  std::sort(out.begin(), out.end(), [](const Signature& a, const Signature& b) {
    if (a.r() != b.r()) return a.r() < b.r();
    return a.branching < b.branching;
  });
  return out;
}

SurfaceInvariants surface_invariants(long long group_order,
                                     const Signature& fiber_sig,
                                     const Signature& base_sig) {
  if (fiber_sig.orbit_genus != 0)
    throw std::invalid_argument("fiber quotient signature must have genus 0");
  if (base_sig.orbit_genus != 1)
    throw std::invalid_argument("base quotient signature must have genus 1");
  SurfaceInvariants inv;
  inv.group_order = group_order;
  inv.g_F = riemann_hurwitz_genus(group_order, fiber_sig);
  inv.g_C = riemann_hurwitz_genus(group_order, base_sig);
  if ((inv.g_C - 1) * (inv.g_F - 1) != group_order)
    throw std::invalid_argument(
        "order incompatible with quotient genera: |G| = " +
        std::to_string(group_order) + " but (g_C - 1)(g_F - 1) = " +
        std::to_string((inv.g_C - 1) * (inv.g_F - 1)));
  return inv;
}

}  // namespace isoprod
