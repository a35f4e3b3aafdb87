#include "isoprod/group.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>

namespace isoprod {

namespace {

long long lcm_ll(long long a, long long b) { return a / std::gcd(a, b) * b; }

// Composition of 0-based image vectors, right-to-left: (a*b)(x) = a(b(x)).
std::vector<int> compose_images(const std::vector<int>& a,
                                const std::vector<int>& b) {
  std::vector<int> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = a[static_cast<std::size_t>(b[i])];
  return out;
}

std::vector<int> invert_image(const std::vector<int>& a) {
  std::vector<int> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[static_cast<std::size_t>(a[i])] = static_cast<int>(i);
  return out;
}

constexpr long long kOrderLimit = 10000;

}  // namespace

// --- Element -----------------------------------------------------------

namespace {
const Group& require_same_group(const Element& a, const Element& b) {
  if (a.group() == nullptr || b.group() == nullptr)
    throw std::invalid_argument("element is not attached to a group");
  if (a.group() != b.group())
    throw std::invalid_argument("elements belong to different groups");
  return *a.group();
}
}  // namespace

Element Element::operator*(const Element& rhs) const {
  const Group& g = require_same_group(*this, rhs);
  return Element(&g, g.mul(index_, rhs.index_));
}

Element Element::inverse() const {
  if (group_ == nullptr)
    throw std::invalid_argument("element is not attached to a group");
  return Element(group_, group_->inv(index_));
}

long long Element::order() const {
  if (group_ == nullptr)
    throw std::invalid_argument("element is not attached to a group");
  return group_->order_of(index_);
}

std::string Element::label() const {
  if (group_ == nullptr)
    throw std::invalid_argument("element is not attached to a group");
  return group_->label(index_);
}

bool Element::operator==(const Element& rhs) const {
  require_same_group(*this, rhs);
  return index_ == rhs.index_;
}

// --- Group: arithmetic --------------------------------------------------

int Group::mul_raw(int a, int b) const {
  if (!table_.empty())
    return table_[static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) +
                  static_cast<std::size_t>(b)];
  if (kind_ == GroupKind::abelian) {
    std::vector<int> t(factors_.size());
    int ra = a, rb = b;
    for (std::size_t i = factors_.size(); i-- > 0;) {
      int d = factors_[i];
      t[i] = (ra % d + rb % d) % d;
      ra /= d;
      rb /= d;
    }
    int idx = 0;
    for (std::size_t i = 0; i < t.size(); ++i) idx = idx * factors_[i] + t[i];
    return idx;
  }
  std::vector<int> img = compose_images(images_[static_cast<std::size_t>(a)],
                                        images_[static_cast<std::size_t>(b)]);
  auto it = std::lower_bound(images_.begin(), images_.end(), img);
  if (it == images_.end() || *it != img)
    throw internal_error("multiplication left the element set");
  return static_cast<int>(it - images_.begin());
}

int Group::mul(int a, int b) const {
  check_index(a);
  check_index(b);
  return mul_raw(a, b);
}

int Group::inv(int a) const {
  check_index(a);
  return inv_[static_cast<std::size_t>(a)];
}

int Group::power(int a, long long e) const {
  check_index(a);
  long long ord = elt_order_[static_cast<std::size_t>(a)];
  e %= ord;
  if (e < 0) e += ord;
  int acc = 0;
  for (long long i = 0; i < e; ++i) acc = mul_raw(acc, a);
  return acc;
}

// --- Group: views --------------------------------------------------------

const std::vector<int>& Group::abelian_factors() const {
  if (kind_ != GroupKind::abelian)
    throw std::logic_error("abelian view requested on a permutation group");
  return factors_;
}

std::vector<int> Group::coordinates(int a) const {
  if (kind_ != GroupKind::abelian)
    throw std::logic_error("abelian view requested on a permutation group");
  check_index(a);
  std::vector<int> t(factors_.size());
  for (std::size_t i = factors_.size(); i-- > 0;) {
    t[i] = a % factors_[i];
    a /= factors_[i];
  }
  return t;
}

int Group::index_of_coordinates(const std::vector<int>& coords) const {
  if (kind_ != GroupKind::abelian)
    throw std::logic_error("abelian view requested on a permutation group");
  if (coords.size() != factors_.size())
    throw std::invalid_argument("coordinate tuple has wrong length");
  int idx = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    int d = factors_[i];
    int c = coords[i] % d;
    if (c < 0) c += d;
    idx = idx * d + c;
  }
  return idx;
}

int Group::degree() const {
  if (kind_ != GroupKind::permutation)
    throw std::logic_error("permutation view requested on an abelian group");
  return degree_;
}

const std::vector<int>& Group::image(int a) const {
  if (kind_ != GroupKind::permutation)
    throw std::logic_error("permutation view requested on an abelian group");
  check_index(a);
  return images_[static_cast<std::size_t>(a)];
}

std::optional<int> Group::index_of_image(const std::vector<int>& img) const {
  if (kind_ != GroupKind::permutation)
    throw std::logic_error("permutation view requested on an abelian group");
  auto it = std::lower_bound(images_.begin(), images_.end(), img);
  if (it == images_.end() || *it != img) return std::nullopt;
  return static_cast<int>(it - images_.begin());
}

// --- Group: labels --------------------------------------------------------

std::string Group::label(int a) const {
  check_index(a);
  if (kind_ == GroupKind::abelian) {
    std::vector<int> t = coordinates(a);
    std::string out = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(t[i]);
    }
    return out + ")";
  }
  if (a == 0) return "id";
  const std::vector<int>& img = images_[static_cast<std::size_t>(a)];
  std::vector<bool> done(img.size(), false);
  std::string out;
  for (std::size_t start = 0; start < img.size(); ++start) {
    if (done[start] || img[start] == static_cast<int>(start)) continue;
    out += "(";
    std::size_t x = start;
    bool first = true;
    while (!done[x]) {
      done[x] = true;
      out += (first ? "" : " ") + std::to_string(x + 1);
      first = false;
      x = static_cast<std::size_t>(img[x]);
    }
    out += ")";
  }
  return out;
}

// --- Group: subgroup machinery ---------------------------------------------

std::vector<int> Group::subgroup_generated(const std::vector<int>& gens) const {
  for (int g : gens) check_index(g);
  std::vector<bool> seen(static_cast<std::size_t>(n_), false);
  seen[0] = true;
  std::vector<int> queue{0};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int x = queue[head];
    for (int g : gens) {
      int y = mul_raw(x, g);
      if (!seen[static_cast<std::size_t>(y)]) {
        seen[static_cast<std::size_t>(y)] = true;
        queue.push_back(y);
      }
    }
  }
  std::vector<int> out;
  for (int i = 0; i < n_; ++i)
    if (seen[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

bool Group::generates(const std::vector<int>& gens) const {
  return static_cast<int>(subgroup_generated(gens).size()) == n_;
}

std::vector<int> Group::cyclic_subgroup(int a) const {
  check_index(a);
  std::vector<int> out{0};
  int x = a;
  while (x != 0) {
    out.push_back(x);
    x = mul_raw(x, a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint64_t> Group::cyclic_conjugate_union_mask(int a) const {
  check_index(a);
  std::vector<std::uint64_t> mask((static_cast<std::size_t>(n_) + 63) / 64, 0);
  auto set_bit = [&mask](int i) {
    mask[static_cast<std::size_t>(i) >> 6] |= std::uint64_t{1} << (i & 63);
  };
  if (abelian_) {
    for (int x : cyclic_subgroup(a)) set_bit(x);
    return mask;
  }
  std::vector<bool> conj_seen(static_cast<std::size_t>(n_), false);
  for (int h = 0; h < n_; ++h) {
    int c = conjugate(h, a);
    if (conj_seen[static_cast<std::size_t>(c)]) continue;
    conj_seen[static_cast<std::size_t>(c)] = true;
    int x = c;
    set_bit(0);
    while (x != 0) {
      set_bit(x);
      x = mul_raw(x, c);
    }
  }
  return mask;
}

std::vector<int> Group::cyclic_conjugate_union(int a) const {
  std::vector<std::uint64_t> mask = cyclic_conjugate_union_mask(a);
  std::vector<int> out;
  for (int i = 0; i < n_; ++i)
    if (mask[static_cast<std::size_t>(i) >> 6] >> (i & 63) & 1) out.push_back(i);
  return out;
}

std::vector<std::vector<int>> Group::conjugacy_classes() const {
  std::vector<bool> seen(static_cast<std::size_t>(n_), false);
  std::vector<std::vector<int>> classes;
  for (int a = 0; a < n_; ++a) {
    if (seen[static_cast<std::size_t>(a)]) continue;
    std::vector<int> cls;
    for (int h = 0; h < n_; ++h) {
      int c = conjugate(h, a);
      if (!seen[static_cast<std::size_t>(c)]) {
        seen[static_cast<std::size_t>(c)] = true;
        cls.push_back(c);
      }
    }
    std::sort(cls.begin(), cls.end());
    classes.push_back(std::move(cls));
  }
  return classes;
}

int Group::center_order() const {
  int count = 0;
  for (int a = 0; a < n_; ++a) {
    bool central = true;
    for (int b = 0; b < n_ && central; ++b)
      if (mul_raw(a, b) != mul_raw(b, a)) central = false;
    if (central) ++count;
  }
  return count;
}

std::string Group::fingerprint() const {
  std::map<long long, int> order_counts;
  for (int a = 0; a < n_; ++a) ++order_counts[elt_order_[static_cast<std::size_t>(a)]];
  std::ostringstream os;
  os << "o=" << n_ << ";ords=";
  bool first = true;
  for (auto& [ord, cnt] : order_counts) {
    if (!first) os << ",";
    first = false;
    os << ord << "x" << cnt;
  }
  os << ";ab=" << (abelian_ ? 1 : 0) << ";z=" << center_order()
     << ";cc=" << conjugacy_classes().size();
  return os.str();
}

bool Group::same_presentation(const Group& other) const {
  if (kind_ != other.kind_ || n_ != other.n_) return false;
  if (kind_ == GroupKind::abelian) return factors_ == other.factors_;
  return degree_ == other.degree_ && images_ == other.images_;
}

// --- Group: construction ----------------------------------------------------

void Group::finalize() {
  std::size_t n = static_cast<std::size_t>(n_);
  if (n_ <= kDenseTableLimit && table_.empty()) {
    // Build the dense table from the structural product first; mul_raw uses
    // the structural path while the table is still empty.
    std::vector<std::uint16_t> table(n * n);
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        table[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)] =
            static_cast<std::uint16_t>(mul_raw(a, b));
    table_ = std::move(table);
  }

  inv_.assign(n, -1);
  elt_order_.assign(n, 0);
  if (kind_ == GroupKind::abelian) {
    for (int a = 0; a < n_; ++a) {
      std::vector<int> t = coordinates(a);
      std::vector<int> neg(t.size());
      long long ord = 1;
      for (std::size_t i = 0; i < t.size(); ++i) {
        int d = factors_[i];
        neg[i] = (d - t[i]) % d;
        ord = lcm_ll(ord, d / std::gcd(d, t[i] == 0 ? d : t[i]));
      }
      inv_[static_cast<std::size_t>(a)] = index_of_coordinates(neg);
      elt_order_[static_cast<std::size_t>(a)] = ord;
    }
  } else {
    for (int a = 0; a < n_; ++a) {
      const std::vector<int>& img = images_[static_cast<std::size_t>(a)];
      std::vector<int> iv = invert_image(img);
      auto it = std::lower_bound(images_.begin(), images_.end(), iv);
      if (it == images_.end() || *it != iv)
        throw internal_error("element set is not closed under inversion");
      inv_[static_cast<std::size_t>(a)] = static_cast<int>(it - images_.begin());
      // Order = lcm of cycle lengths.
      std::vector<bool> done(img.size(), false);
      long long ord = 1;
      for (std::size_t s = 0; s < img.size(); ++s) {
        if (done[s]) continue;
        long long len = 0;
        std::size_t x = s;
        while (!done[x]) {
          done[x] = true;
          ++len;
          x = static_cast<std::size_t>(img[x]);
        }
        ord = lcm_ll(ord, len);
      }
      elt_order_[static_cast<std::size_t>(a)] = ord;
    }
  }

  // True commutativity, independent of kind.
  abelian_ = true;
  for (int a = 0; a < n_ && abelian_; ++a)
    for (int b = a + 1; b < n_ && abelian_; ++b)
      if (mul_raw(a, b) != mul_raw(b, a)) abelian_ = false;

  verify_axioms();
}

void Group::verify_axioms() const {
  for (int a = 0; a < n_; ++a) {
    if (mul_raw(0, a) != a || mul_raw(a, 0) != a)
      throw internal_error("index 0 is not a two-sided identity");
    int ia = inv_[static_cast<std::size_t>(a)];
    if (mul_raw(a, ia) != 0 || mul_raw(ia, a) != 0)
      throw internal_error("element lacks a two-sided inverse");
  }
  // Full associativity scan at desk scale; larger groups are associative
  // structurally (coordinatewise addition / function composition).
  if (n_ <= 128) {
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        for (int c = 0; c < n_; ++c)
          if (mul_raw(mul_raw(a, b), c) != mul_raw(a, mul_raw(b, c)))
            throw internal_error("multiplication table is not associative");
  }
}

Group make_abelian_group(const std::vector<int>& invariants) {
  if (invariants.empty())
    throw std::invalid_argument("trivial group not supported");
  long long order = 1;
  for (int d : invariants) {
    if (d < 2)
      throw std::invalid_argument("cyclic factor must be at least 2, got " +
                                  std::to_string(d));
    order *= d;
    if (order > kOrderLimit)
      throw std::invalid_argument("group order exceeds supported bound of " +
                                  std::to_string(kOrderLimit));
  }
  Group g;
  g.kind_ = GroupKind::abelian;
  g.factors_ = invariants;
  g.n_ = static_cast<int>(order);
  std::string name;
  for (std::size_t i = 0; i < invariants.size(); ++i) {
    if (i) name += "x";
    name += "Z" + std::to_string(invariants[i]);
  }
  g.name_ = name;
  g.finalize();
  return g;
}

Group make_permutation_group(int degree,
                             const std::vector<std::vector<int>>& generator_images,
                             std::size_t closure_bound) {
  if (degree < 1) throw std::invalid_argument("degree must be at least 1");
  std::vector<std::vector<int>> gens;
  for (const std::vector<int>& img1 : generator_images) {
    if (static_cast<int>(img1.size()) != degree)
      throw std::invalid_argument("generator image has wrong length");
    std::vector<bool> hit(static_cast<std::size_t>(degree), false);
    std::vector<int> img(img1.size());
    for (std::size_t i = 0; i < img1.size(); ++i) {
      int v = img1[i];
      if (v < 1 || v > degree || hit[static_cast<std::size_t>(v - 1)])
        throw std::invalid_argument("generator is not a permutation of 1..degree");
      hit[static_cast<std::size_t>(v - 1)] = true;
      img[i] = v - 1;
    }
    gens.push_back(std::move(img));
  }

  std::vector<int> identity(static_cast<std::size_t>(degree));
  std::iota(identity.begin(), identity.end(), 0);
  std::map<std::vector<int>, int> seen;
  std::vector<std::vector<int>> elems{identity};
  seen.emplace(identity, 0);
  for (std::size_t head = 0; head < elems.size(); ++head) {
    std::vector<int> cur = elems[head];  // copy: elems may reallocate
    for (const std::vector<int>& g : gens) {
      std::vector<int> next = compose_images(cur, g);
      if (seen.emplace(next, static_cast<int>(elems.size())).second) {
        elems.push_back(std::move(next));
        if (elems.size() > closure_bound)
          throw std::runtime_error(
              "permutation closure exceeds bound of " +
              std::to_string(closure_bound) + " elements");
      }
    }
  }
  if (elems.size() == 1)
    throw std::invalid_argument("trivial group not supported");
  if (static_cast<long long>(elems.size()) > kOrderLimit)
    throw std::invalid_argument("group order exceeds supported bound of " +
                                std::to_string(kOrderLimit));

  Group g;
  g.kind_ = GroupKind::permutation;
  g.degree_ = degree;
  std::sort(elems.begin(), elems.end());
  g.images_ = std::move(elems);
  g.n_ = static_cast<int>(g.images_.size());
  g.name_ = "perm" + std::to_string(degree) + "#" + std::to_string(g.n_);
  g.finalize();
  return g;
}

void set_group_name(Group& g, std::string name) { g.name_ = std::move(name); }

Group make_cyclic_permutation_group(int n) {
  if (n < 2) throw std::invalid_argument("cyclic group needs n >= 2");
  std::vector<int> cyc(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) cyc[static_cast<std::size_t>(i)] = (i + 1) % n + 1;
  Group g = make_permutation_group(n, {cyc});
  set_group_name(g, "Z" + std::to_string(n));
  return g;
}

Group make_symmetric_group(int n) {
  if (n < 2) throw std::invalid_argument("symmetric group needs n >= 2");
  std::vector<int> transposition(static_cast<std::size_t>(n));
  std::iota(transposition.begin(), transposition.end(), 1);
  std::swap(transposition[0], transposition[1]);
  std::vector<int> cycle(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) cycle[static_cast<std::size_t>(i)] = (i + 1) % n + 1;
  Group g = make_permutation_group(n, {transposition, cycle});
  set_group_name(g, "S" + std::to_string(n));
  return g;
}

Group make_alternating_group(int n) {
  if (n < 3) throw std::invalid_argument("alternating group needs n >= 3");
  std::vector<std::vector<int>> gens;
  gens.push_back(permutation_from_cycles(n, "(1 2 3)"));
  if (n > 3) {
    // (1..n) for odd n, (2..n) for even n: both are even permutations.
    std::vector<int> img(static_cast<std::size_t>(n));
    std::iota(img.begin(), img.end(), 1);
    int first = n % 2 == 1 ? 1 : 2;
    for (int i = first; i <= n; ++i)
      img[static_cast<std::size_t>(i - 1)] = i == n ? first : i + 1;
    gens.push_back(img);
  }
  Group g = make_permutation_group(n, gens);
  set_group_name(g, "A" + std::to_string(n));
  return g;
}

Group make_dihedral_group(int n) {
  if (n < 3) throw std::invalid_argument("dihedral group needs n >= 3");
  std::vector<int> rot(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) rot[static_cast<std::size_t>(i)] = (i + 1) % n + 1;
  std::vector<int> refl(static_cast<std::size_t>(n));
  refl[0] = 1;
  for (int x = 2; x <= n; ++x) refl[static_cast<std::size_t>(x - 1)] = n + 2 - x;
  Group g = make_permutation_group(n, {rot, refl});
  set_group_name(g, "D" + std::to_string(n));
  return g;
}

Group make_dicyclic_group(int n) {
  if (n < 2) throw std::invalid_argument("dicyclic group needs n >= 2");
  // Elements a^i b^j (i mod 2n, j mod 2) as points i + 2n*j; generators act
  // by left multiplication, so the point map is a homomorphic image.
  int two_n = 2 * n;
  int deg = 4 * n;
  auto point = [two_n](int i, int j) { return ((i % two_n) + two_n) % two_n + two_n * j; };
  std::vector<int> gen_a(static_cast<std::size_t>(deg));
  std::vector<int> gen_b(static_cast<std::size_t>(deg));
  for (int i = 0; i < two_n; ++i) {
    gen_a[static_cast<std::size_t>(point(i, 0))] = point(i + 1, 0) + 1;
    gen_a[static_cast<std::size_t>(point(i, 1))] = point(i + 1, 1) + 1;
    gen_b[static_cast<std::size_t>(point(i, 0))] = point(-i, 1) + 1;
    gen_b[static_cast<std::size_t>(point(i, 1))] = point(n - i, 0) + 1;
  }
  Group g = make_permutation_group(deg, {gen_a, gen_b});
  set_group_name(g, "Dic" + std::to_string(n));
  return g;
}

Group direct_product(const Group& a, const Group& b) {
  if (a.kind() == GroupKind::abelian && b.kind() == GroupKind::abelian) {
    std::vector<int> factors = a.abelian_factors();
    const std::vector<int>& fb = b.abelian_factors();
    factors.insert(factors.end(), fb.begin(), fb.end());
    return make_abelian_group(factors);
  }
  // Promote abelian factors to permutation groups on disjoint cycles.
  auto as_perm = [](const Group& g) -> Group {
    if (g.kind() == GroupKind::permutation) return g;
    int deg = 0;
    for (int d : g.abelian_factors()) deg += d;
    std::vector<std::vector<int>> gens;
    int base = 0;
    for (int d : g.abelian_factors()) {
      std::vector<int> img(static_cast<std::size_t>(deg));
      std::iota(img.begin(), img.end(), 1);
      for (int i = 0; i < d; ++i)
        img[static_cast<std::size_t>(base + i)] = base + (i + 1) % d + 1;
      gens.push_back(std::move(img));
      base += d;
    }
    return make_permutation_group(deg, gens);
  };
  Group pa = as_perm(a);
  Group pb = as_perm(b);
  long long order = static_cast<long long>(pa.order()) * pb.order();
  if (order > kOrderLimit)
    throw std::invalid_argument("group order exceeds supported bound of " +
                                std::to_string(kOrderLimit));
  int da = pa.degree(), db = pb.degree();
  std::vector<std::vector<int>> gens;
  // Use the groups' full element lists as generators: simplest determinate
  // choice, and the closure is exactly the direct product.
  for (int x = 0; x < pa.order(); ++x) {
    std::vector<int> img(static_cast<std::size_t>(da + db));
    for (int i = 0; i < da; ++i) img[static_cast<std::size_t>(i)] = pa.image(x)[static_cast<std::size_t>(i)] + 1;
    for (int i = 0; i < db; ++i) img[static_cast<std::size_t>(da + i)] = da + i + 1;
    gens.push_back(std::move(img));
  }
  for (int x = 0; x < pb.order(); ++x) {
    std::vector<int> img(static_cast<std::size_t>(da + db));
    for (int i = 0; i < da; ++i) img[static_cast<std::size_t>(i)] = i + 1;
    for (int i = 0; i < db; ++i) img[static_cast<std::size_t>(da + i)] = da + pb.image(x)[static_cast<std::size_t>(i)] + 1;
    gens.push_back(std::move(img));
  }
  Group g = make_permutation_group(da + db, gens,
                                   static_cast<std::size_t>(order) + 1);
  if (g.order() != order)
    throw internal_error("direct product closure has unexpected order");
  set_group_name(g, a.name() + "x" + b.name());
  return g;
}

std::vector<int> permutation_from_cycles(int degree, const std::string& cycles) {
  std::vector<int> img(static_cast<std::size_t>(degree));
  std::iota(img.begin(), img.end(), 1);
  const std::string& s = cycles;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < s.size() && (std::isspace(static_cast<unsigned char>(s[pos])) || s[pos] == ','))
      ++pos;
  };
  skip_ws();
  if (pos >= s.size() || s.compare(pos, 2, "id") == 0) return img;
  std::vector<bool> used(static_cast<std::size_t>(degree), false);
  while (pos < s.size()) {
    skip_ws();
    if (pos >= s.size()) break;
    if (s[pos] != '(')
      throw std::invalid_argument("cycle notation must use '(': " + cycles);
    ++pos;
    std::vector<int> cyc;
    for (;;) {
      skip_ws();
      if (pos < s.size() && s[pos] == ')') {
        ++pos;
        break;
      }
      std::size_t end = pos;
      while (end < s.size() && std::isdigit(static_cast<unsigned char>(s[end]))) ++end;
      if (end == pos)
        throw std::invalid_argument("bad cycle notation: " + cycles);
      int v = std::stoi(s.substr(pos, end - pos));
      pos = end;
      if (v < 1 || v > degree)
        throw std::invalid_argument("cycle point out of range: " + cycles);
      if (used[static_cast<std::size_t>(v - 1)])
        throw std::invalid_argument("point repeated across cycles: " + cycles);
      used[static_cast<std::size_t>(v - 1)] = true;
      cyc.push_back(v);
    }
    for (std::size_t i = 0; i < cyc.size(); ++i)
      img[static_cast<std::size_t>(cyc[i] - 1)] = cyc[(i + 1) % cyc.size()];
    if (cyc.size() == 1)
      throw std::invalid_argument("singleton cycle in: " + cycles);
  }
  return img;
}

Group parse_group_spec(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c)))
      s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s.empty()) throw std::invalid_argument("empty group spec");

  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == 'x') {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }

  auto parse_int_suffix = [](const std::string& part, std::size_t prefix_len,
                             const std::string& what) -> int {
    std::string digits = part.substr(prefix_len);
    if (digits.empty() ||
        !std::all_of(digits.begin(), digits.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw std::invalid_argument("unrecognized group spec near '" + what + "'");
    return std::stoi(digits);
  };

  if (parts.size() > 1) {
    std::vector<int> factors;
    for (const std::string& p : parts) {
      if (p.empty() || p[0] != 'z')
        throw std::invalid_argument(
            "group spec products are supported for cyclic factors only");
      factors.push_back(parse_int_suffix(p, 1, p));
    }
    return make_abelian_group(factors);
  }

  const std::string& p = parts[0];
  if (p.rfind("dic", 0) == 0) {
    Group g = make_dicyclic_group(parse_int_suffix(p, 3, p));
    return g;
  }
  if (p[0] == 'z') return make_abelian_group({parse_int_suffix(p, 1, p)});
  if (p[0] == 's') return make_symmetric_group(parse_int_suffix(p, 1, p));
  if (p[0] == 'a') return make_alternating_group(parse_int_suffix(p, 1, p));
  if (p[0] == 'd') return make_dihedral_group(parse_int_suffix(p, 1, p));
  throw std::invalid_argument("unrecognized group spec '" + text + "'");
}

// --- automorphisms ------------------------------------------------------------

std::vector<Automorphism> automorphisms(const Group& g, int order_bound) {
  if (g.order() > order_bound)
    throw std::runtime_error("automorphism enumeration bound exceeded (order " +
                             std::to_string(g.order()) + " > " +
                             std::to_string(order_bound) + ")");
  const int n = g.order();
  constexpr std::size_t kCountCap = 1000000;

  // Greedy minimal generating sequence: scan indices, keep enlarging.
  std::vector<int> gens;
  std::vector<int> sub{0};
  for (int i = 1; i < n && static_cast<int>(sub.size()) < n; ++i) {
    if (!std::binary_search(sub.begin(), sub.end(), i)) {
      gens.push_back(i);
      sub = g.subgroup_generated(gens);
    }
  }

  std::vector<std::vector<int>> candidates(gens.size());
  for (std::size_t k = 0; k < gens.size(); ++k) {
    long long ord = g.order_of(gens[k]);
    for (int c = 0; c < n; ++c)
      if (g.order_of(c) == ord) candidates[k].push_back(c);
  }

  std::vector<Automorphism> result;
  std::vector<int> phi(static_cast<std::size_t>(n), -1);
  phi[0] = 0;
  std::vector<int> defined{0};

  // Extend phi by the assignment gens[k] -> c, closing the partial subgroup
  // and checking phi(x * gen) = phi(x) * phi(gen) along the way. Restores
  // phi/defined on failure via the returned checkpoint size.
  auto extend = [&](std::size_t k, int c, std::size_t& checkpoint) -> bool {
    checkpoint = defined.size();
    int gk = gens[k];
    if (phi[static_cast<std::size_t>(gk)] != -1)
      throw internal_error("generator already inside the previous subgroup");
    phi[static_cast<std::size_t>(gk)] = c;
    defined.push_back(gk);
    for (std::size_t head = 0; head < defined.size(); ++head) {
      int x = defined[head];
      for (std::size_t j = 0; j <= k; ++j) {
        int h = gens[j];
        int y = g.mul(x, h);
        int iy = g.mul(phi[static_cast<std::size_t>(x)], phi[static_cast<std::size_t>(h)]);
        int& slot = phi[static_cast<std::size_t>(y)];
        if (slot == -1) {
          slot = iy;
          defined.push_back(y);
        } else if (slot != iy) {
          return false;
        }
      }
    }
    return true;
  };
  auto rollback = [&](std::size_t checkpoint) {
    while (defined.size() > checkpoint) {
      phi[static_cast<std::size_t>(defined.back())] = -1;
      defined.pop_back();
    }
  };

  auto dfs = [&](auto&& self, std::size_t k) -> void {
    if (k == gens.size()) {
      if (defined.size() != static_cast<std::size_t>(n))
        throw internal_error("generating set closure did not cover the group");
      std::vector<bool> hit(static_cast<std::size_t>(n), false);
      for (int v : phi) {
        if (hit[static_cast<std::size_t>(v)]) return;  // not injective
        hit[static_cast<std::size_t>(v)] = true;
      }
      if (result.size() >= kCountCap)
        throw std::runtime_error("automorphism count exceeds internal cap");
      result.push_back(Automorphism{phi});
      return;
    }
    for (int c : candidates[k]) {
      std::size_t checkpoint = 0;
      if (extend(k, c, checkpoint)) self(self, k + 1);
      rollback(checkpoint);
    }
  };
  dfs(dfs, 0);

  std::sort(result.begin(), result.end(),
            [](const Automorphism& a, const Automorphism& b) { return a.map < b.map; });
  return result;
}

Automorphism compose(const Automorphism& f, const Automorphism& g) {
  if (f.map.size() != g.map.size())
    throw std::invalid_argument("automorphisms of different groups");
  Automorphism out;
  out.map.resize(f.map.size());
  for (std::size_t i = 0; i < g.map.size(); ++i)
    out.map[i] = f.map[static_cast<std::size_t>(g.map[i])];
  return out;
}

Automorphism inverse_of(const Automorphism& f) {
  Automorphism out;
  out.map.resize(f.map.size());
  for (std::size_t i = 0; i < f.map.size(); ++i)
    out.map[static_cast<std::size_t>(f.map[i])] = static_cast<int>(i);
  return out;
}

}  // namespace isoprod
