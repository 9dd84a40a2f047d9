#pragma once

// Brute-force references and seeded generators shared by the unit tests and
// the acceptance binary. Nothing here calls the algorithms it is used to check.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "surfcob/decide.hpp"
#include "surfcob/diagrams.hpp"
#include "surfcob/homology.hpp"

namespace oracle {

using surfcob::Integer;
using surfcob::IntMatrix;

inline std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

inline bool coin(std::mt19937_64& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int bound) {
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = uniform(rng, -bound, bound);
  return m;
}

// Fraction-free Gaussian elimination.
inline Integer determinant(IntMatrix m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      m.swap_rows(p, k);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

// Inverse of a matrix with determinant +-1, by cofactors.
inline IntMatrix unimodular_inverse(const IntMatrix& m) {
  const std::size_t n = m.rows();
  const Integer det = determinant(m);
  IntMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      IntMatrix minor(n - 1, n - 1);
      for (std::size_t r = 0, rr = 0; r < n; ++r) {
        if (r == j) continue;
        for (std::size_t c = 0, cc = 0; c < n; ++c) {
          if (c == i) continue;
          minor(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      inv(i, j) = ((i + j) % 2 ? -1 : 1) * determinant(minor) * det;
    }
  return inv;
}

inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
  do {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (pick[i]) s.push_back(i);
    out.push_back(s);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

inline Integer gcd(Integer a, Integer b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Integer t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// d_k = g_k / g_{k-1} where g_k is the gcd of all k x k minors.
inline std::vector<Integer> invariant_factors_by_minors(const IntMatrix& a) {
  const std::size_t r = std::min(a.rows(), a.cols());
  std::vector<Integer> out;
  Integer prev = 1;
  for (std::size_t k = 1; k <= r; ++k) {
    Integer g = 0;
    for (const auto& rows : subsets(a.rows(), k))
      for (const auto& cols : subsets(a.cols(), k)) {
        IntMatrix m(k, k);
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) m(i, j) = a(rows[i], cols[j]);
        g = gcd(g, determinant(m));
      }
    if (g == 0) {
      out.resize(r, 0);
      return out;
    }
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

// Unimodular matrix built from elementary operations, with its inverse.
inline std::pair<IntMatrix, IntMatrix> random_unimodular(std::mt19937_64& rng, std::size_t n, int steps) {
  IntMatrix m = IntMatrix::identity(n), inv = IntMatrix::identity(n);
  if (n < 2) return {m, inv};
  for (int s = 0; s < steps; ++s) {
    const auto i = static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(n) - 1));
    auto j = static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(n) - 2));
    if (j >= i) ++j;
    const Integer c = uniform(rng, -2, 2);
    m.add_row(i, j, c);      // m <- E m
    inv.add_col(j, i, -c);   // inv <- inv E^-1
  }
  return {m, inv};
}

// Random complex C3 -> C2 -> C1 with d2 d3 = 0, hidden behind a change of basis.
inline surfcob::ChainComplex random_complex(std::mt19937_64& rng, surfcob::Ring ring = surfcob::Ring::Z) {
  const auto c1 = static_cast<std::size_t>(uniform(rng, 1, 4));
  const auto split = static_cast<std::size_t>(uniform(rng, 0, 3));  // C2 = Z^split (+) Z^rest
  const auto rest = static_cast<std::size_t>(uniform(rng, 0, 3));
  const auto c3 = static_cast<std::size_t>(uniform(rng, 0, 3));
  const std::size_t c2 = split + rest;
  IntMatrix d2(c1, c2), d3(c2, c3);
  for (std::size_t i = 0; i < c1; ++i)
    for (std::size_t j = 0; j < split; ++j) d2(i, j) = uniform(rng, -4, 4);
  for (std::size_t i = split; i < c2; ++i)
    for (std::size_t j = 0; j < c3; ++j) d3(i, j) = uniform(rng, -4, 4);
  auto [p1, p1i] = random_unimodular(rng, c1, 4);
  auto [p2, p2i] = random_unimodular(rng, c2, 4);
  auto [p3, p3i] = random_unimodular(rng, c3, 4);
  (void)p1i;
  (void)p3;
  surfcob::ChainComplex c;
  c.ring = ring;
  c.boundary[2] = p1 * d2 * p2i;
  c.boundary[3] = p2 * d3 * p3i;
  c.dims[0] = 0;
  c.dims[1] = c1;
  c.dims[2] = c2;
  c.dims[3] = c3;
  return c;
}

// Every uniform vector in lexicographic order (+1 first); the first one
// meeting all targets.
inline std::optional<std::vector<int>> brute_assign(const surfcob::DoublePointDiagram& d) {
  const std::size_t n = d.point_count();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<int> eps(n);
    for (std::size_t i = 0; i < n; ++i) eps[i] = (mask >> (n - 1 - i)) & 1 ? -1 : 1;
    bool ok = true;
    for (std::size_t c = 0; c < d.component_count() && ok; ++c) {
      std::int64_t s = 0;
      for (std::size_t i = 0; i < n; ++i) s += d.multiplicity(i, c) * eps[i];
      ok = s == d.components()[c].target;
    }
    if (ok) return eps;
  }
  return std::nullopt;
}

using SumVector = std::vector<std::int64_t>;

inline std::set<SumVector> reachable_sums(const surfcob::DoublePointDiagram& d) {
  const std::size_t n = d.point_count();
  std::set<SumVector> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    SumVector s(d.component_count(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const int e = (mask >> i) & 1 ? -1 : 1;
      for (std::size_t c = 0; c < d.component_count(); ++c) s[c] += d.multiplicity(i, c) * e;
    }
    out.insert(std::move(s));
  }
  return out;
}

// Whether some uniform assignment exists on d extended by any combination of
// at most `moves` legal finger moves. A finger move on (C, D) adds two points
// with the same multiplicity vector v, whose uniform contribution is one of
// 2v, 0, -2v, so the search runs over those offsets against the sums the
// original points can reach.
inline bool assignable_after_fingers(const surfcob::DoublePointDiagram& d, int moves) {
  const std::size_t m = d.component_count();
  std::vector<SumVector> pair_vectors;
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t e = c; e < m; ++e)
      if (d.can_finger(c, e)) {
        SumVector v(m, 0);
        v[c] += 1;
        v[e] += 1;
        pair_vectors.push_back(v);
      }
  const auto sums = reachable_sums(d);
  SumVector target(m);
  for (std::size_t c = 0; c < m; ++c) target[c] = d.components()[c].target;

  std::vector<SumVector> offsets{SumVector(m, 0)};
  for (int k = 0; k < moves; ++k) {
    std::vector<SumVector> next = offsets;
    for (const auto& o : offsets)
      for (const auto& v : pair_vectors)
        for (int w : {-2, 2}) {
          SumVector s = o;
          for (std::size_t c = 0; c < m; ++c) s[c] += w * v[c];
          next.push_back(std::move(s));
        }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    offsets = std::move(next);
  }
  for (const auto& o : offsets) {
    SumVector need = target;
    for (std::size_t c = 0; c < m; ++c) need[c] -= o[c];
    if (sums.count(need)) return true;
  }
  return false;
}

// Every legal move on a state, built from the move preconditions alone.
inline std::vector<surfcob::Move> legal_moves(const surfcob::DoublePointDiagram& d, const surfcob::SignTable& eps) {
  std::vector<surfcob::Move> out;
  const auto& comps = d.components();
  const auto& pts = d.double_points();
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (std::size_t e = c; e < comps.size(); ++e)
      if (d.can_finger(c, e)) out.push_back(surfcob::FingerMove{comps[c].id, comps[e].id, {}, {}});
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const int pi = d.multiplicity(i, c);
      if (pi == 0) out.push_back(surfcob::FlipZero{comps[c].id, pts[i].id});
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        if (pi > 0 && d.multiplicity(j, c) == pi && eps.sign(i, c) == -eps.sign(j, c))
          out.push_back(surfcob::SwapSigns{comps[c].id, pts[i].id, pts[j].id});
      if (pi == 2)
        for (std::size_t j = 0; j < pts.size(); ++j)
          for (std::size_t k = j + 1; k < pts.size(); ++k)
            if (d.multiplicity(j, c) == 1 && d.multiplicity(k, c) == 1 && eps.sign(j, c) == -eps.sign(i, c) &&
                eps.sign(k, c) == -eps.sign(i, c))
              out.push_back(surfcob::SwapDouble{comps[c].id, pts[i].id, pts[j].id, pts[k].id});
    }
  return out;
}

inline surfcob::AbelianGroup random_group(std::mt19937_64& rng) {
  const auto free_rank = static_cast<std::size_t>(uniform(rng, 0, 2));
  std::vector<Integer> factors;
  const auto torsion = uniform(rng, 0, 4 - static_cast<std::int64_t>(free_rank));
  Integer d = uniform(rng, 2, 3);
  for (std::int64_t k = 0; k < torsion; ++k) {
    factors.push_back(d);
    d *= uniform(rng, 1, 2);
  }
  return surfcob::AbelianGroup(free_rank, factors);
}

inline surfcob::HomologyClass random_class(std::mt19937_64& rng, const surfcob::AbelianGroup& g) {
  std::vector<Integer> coords;
  for (std::size_t i = 0; i < g.coordinate_count(); ++i) coords.push_back(uniform(rng, -3, 3));
  return surfcob::HomologyClass(g, coords);
}

// A diagonal intersection form on the free part; torsion pairs to zero.
inline std::int64_t self_intersection(const surfcob::HomologyClass& c) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < c.group().free_rank(); ++i) {
    const auto v = static_cast<std::int64_t>(c.coords()[i]);
    s += (i % 2 == 0 ? 1 : -1) * v * v;
  }
  return s;
}

// Random closed-surface decision instance whose classes and Euler numbers are
// mutually consistent: mod-2 classes are reductions of integral ones, Euler
// numbers of orientable surfaces are self-intersections, union classes are
// sums.
inline surfcob::Query random_instance(std::mt19937_64& rng) {
  using namespace surfcob;
  Query q;
  q.question = Question::ConsistencyAudit;
  auto& x = q.ambient;
  x.orientable = !coin(rng, 0.05);
  x.simply_connected = x.orientable && coin(rng, 0.8);
  x.boundary_nonempty = coin(rng, 0.3);
  x.connected = coin(rng, 0.95);
  const AbelianGroup gz = random_group(rng);
  const auto reduce = ReductionMap::canonical(gz);
  x.h2_rel_z = gz;
  x.h2_z = gz;
  x.h2_rel_f2 = reduce.target;
  x.h2_f2 = reduce.target;

  const bool orientable = coin(rng, 0.6);
  const std::int64_t chi = orientable ? 2 - 2 * uniform(rng, 0, 2) : 1 - uniform(rng, 0, 2);
  auto make = [&](const std::string& id, bool orient, std::int64_t ch, const HomologyClass& c_int,
                  std::optional<HomologyClass> c2, std::int64_t e) {
    SurfaceSpec s;
    s.id = id;
    ComponentSpec comp;
    comp.id = id + "c";
    comp.orientable = orient;
    comp.euler_characteristic = ch;
    comp.euler = e;
    s.components.push_back(comp);
    if (orient) {
      s.class_int = c_int;
      s.class_mod2 = mod2_reduce(c_int, reduce);
    } else {
      s.class_mod2 = *c2;
    }
    return s;
  };
  const HomologyClass ca = random_class(rng, gz);
  HomologyClass cb = ca;
  switch (uniform(rng, 0, 2)) {
    case 0: break;
    case 1: cb = -ca; break;
    default: cb = random_class(rng, gz);
  }
  const HomologyClass ma = random_class(rng, reduce.target);
  const HomologyClass mb = coin(rng) ? ma : random_class(rng, reduce.target);
  const std::int64_t ea = orientable ? self_intersection(ca) : 2 * uniform(rng, -2, 2);
  const std::int64_t eb = orientable ? self_intersection(cb) : (coin(rng) ? ea : 2 * uniform(rng, -2, 2));
  const bool b_orientable = coin(rng, 0.9) ? orientable : !orientable;
  const std::int64_t chi_b = b_orientable == orientable && coin(rng, 0.8) ? chi : (b_orientable ? 2 : 1);
  q.surfaces.push_back(make("A", orientable, chi, ca, ma, ea));
  q.surfaces.push_back(make("B", b_orientable, chi_b, cb, mb, b_orientable ? self_intersection(cb) : eb));
  if (x.boundary_nonempty || coin(rng)) q.union_mod2 = *q.surfaces[0].class_mod2 + *q.surfaces[1].class_mod2;
  if (orientable && b_orientable && coin(rng)) q.union_int = {cb - ca, cb + ca};
  return q;
}

}  // namespace oracle
