#include "gapjohn/oracle.hpp"

#include <algorithm>
#include <set>

#include "gapjohn/errors.hpp"

namespace gapjohn::oracle {

namespace {

using Coords = std::vector<std::int64_t>;

// Coordinates reduced into [0, m) on the torsion part.
Coords reduce(const AmbientGroup& g, Coords c) {
  const std::size_t r = static_cast<std::size_t>(g.free_rank());
  for (std::size_t i = 0; i < g.moduli().size(); ++i) {
    const std::int64_t m = g.moduli()[i];
    c[r + i] = ((c[r + i] % m) + m) % m;
  }
  return c;
}

Coords plus(const AmbientGroup& g, const Coords& a, const Coords& b) {
  Coords c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (__builtin_add_overflow(a[i], b[i], &c[i])) throw OverflowError("oracle: coordinate overflow");
  }
  return reduce(g, std::move(c));
}

FiniteSet to_set(const AmbientGroup& g, const std::set<Coords>& s) {
  std::vector<GroupElement> out;
  out.reserve(s.size());
  for (const auto& c : s) out.push_back(g.element(c));
  return FiniteSet(g, std::move(out));
}

std::int64_t floor_of(const Rational& q) {
  Integer z;
  mpz_fdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  if (!z.fits_slong_p()) throw OverflowError("oracle: dimension too large");
  return z.get_si();
}

// Visits every coefficient vector in the box [-m_i, m_i].
template <typename F>
void odometer(const std::vector<std::int64_t>& m, F&& visit) {
  std::vector<std::int64_t> n(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) n[i] = -m[i];
  while (true) {
    visit(n);
    std::size_t i = 0;
    while (i < m.size() && n[i] == m[i]) {
      n[i] = -m[i];
      ++i;
    }
    if (i == m.size()) return;
    ++n[i];
  }
}

// All formal terms of P_t as (coefficients + h index, value).
std::vector<Coords> term_values(const CosetProgression& p, const Rational& t, std::size_t cap) {
  if (t <= 0) throw PreconditionError("oracle: t must be positive");
  const AmbientGroup& g = p.group();
  std::vector<std::int64_t> m;
  Integer count = 1;
  for (const auto& n : p.dims()) {
    m.push_back(floor_of(n * t));
    count *= 2 * m.back() + 1;
  }
  count *= static_cast<unsigned long>(p.symmetry().order());
  if (count > static_cast<unsigned long>(cap)) throw CapExceeded("oracle: too many formal terms");
  std::vector<Coords> out;
  odometer(m, [&](const std::vector<std::int64_t>& n) {
    Coords v(g.arity(), 0);
    for (std::size_t i = 0; i < n.size(); ++i) {
      const Coords& step = p.steps()[i].coords;
      for (std::size_t k = 0; k < v.size(); ++k) {
        std::int64_t prod;
        if (__builtin_mul_overflow(n[i], step[k], &prod) || __builtin_add_overflow(v[k], prod, &v[k]))
          throw OverflowError("oracle: coordinate overflow");
      }
    }
    v = reduce(g, v);
    for (const auto& h : p.symmetry().elements()) out.push_back(plus(g, v, h.coords));
  });
  return out;
}

using Matrix = std::vector<std::vector<Rational>>;

// Gauss-Jordan inverse of a square matrix; nullopt if singular.
std::optional<Matrix> invert(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const Rational s = a[col][col];
    for (std::size_t k = 0; k < n; ++k) {
      a[col][k] /= s;
      inv[col][k] /= s;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] -= f * a[col][k];
        inv[r][k] -= f * inv[col][k];
      }
    }
  }
  return inv;
}

std::size_t rank_of(Matrix a) {
  std::size_t rank = 0;
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t col = 0; col < cols && rank < a.size(); ++col) {
    std::size_t piv = rank;
    while (piv < a.size() && a[piv][col] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t r = rank + 1; r < a.size(); ++r) {
      const Rational f = a[r][col] / a[rank][col];
      for (std::size_t k = col; k < cols; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

FiniteSet brute_image(const CosetProgression& p, const Rational& t, std::size_t cap) {
  std::set<Coords> s;
  for (auto& v : term_values(p, t, cap * 64)) {
    s.insert(std::move(v));
    if (s.size() > cap) throw CapExceeded("oracle: image exceeds cap");
  }
  return to_set(p.group(), s);
}

std::optional<GroupElement> brute_collision(const CosetProgression& p, const Rational& t, std::size_t cap) {
  std::vector<Coords> values = term_values(p, t, cap);
  std::sort(values.begin(), values.end());
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] == values[i - 1]) return p.group().element(values[i]);
  return std::nullopt;
}

bool brute_is_proper(const CosetProgression& p, const Rational& t, std::size_t cap) {
  return !brute_collision(p, t, cap);
}

FiniteSet brute_sumset(const FiniteSet& a, const FiniteSet& b, std::size_t cap) {
  if (!(a.group() == b.group())) throw PreconditionError("oracle: sets from different groups");
  const AmbientGroup& g = a.group();
  std::set<Coords> s;
  for (const auto& x : a)
    for (const auto& y : b) {
      s.insert(plus(g, x.coords, y.coords));
      if (s.size() > cap) throw CapExceeded("oracle: sumset exceeds cap");
    }
  return to_set(g, s);
}

FiniteSet brute_iterated_sumset(const FiniteSet& a, std::int64_t l, std::size_t cap) {
  if (l < 1) throw PreconditionError("oracle: l must be positive");
  FiniteSet s = a;
  for (std::int64_t i = 1; i < l; ++i) s = brute_sumset(s, a, cap);
  return s;
}

FiniteSet brute_subgroup(const FiniteSet& generators, std::size_t cap) {
  const AmbientGroup& g = generators.group();
  std::set<Coords> s{Coords(g.arity(), 0)};
  std::vector<Coords> frontier{Coords(g.arity(), 0)};
  while (!frontier.empty()) {
    std::vector<Coords> next;
    for (const auto& x : frontier)
      for (const auto& v : generators) {
        Coords y = plus(g, x, v.coords);
        if (s.insert(y).second) next.push_back(std::move(y));
      }
    if (s.size() > cap) throw CapExceeded("oracle: subgroup exceeds cap");
    frontier = std::move(next);
  }
  return to_set(g, s);
}

VerificationReport verify_inclusion(const FiniteSet& s1, const FiniteSet& s2, std::string claim) {
  VerificationReport r;
  r.claim = std::move(claim);
  std::set<Coords> big;
  for (const auto& x : s2) big.insert(x.coords);
  for (const auto& x : s1) {
    ++r.elements_checked;
    if (!big.count(x.coords)) {
      r.holds = false;
      r.counterexample = x;
      return r;
    }
  }
  return r;
}

TranslateSearch verify_translate_containment(const FiniteSet& s, const FiniteSet& t) {
  TranslateSearch r;
  if (t.empty()) {
    r.found = true;
    r.x = s.group().zero();
    return r;
  }
  const AmbientGroup& g = s.group();
  std::set<Coords> big;
  for (const auto& x : s) big.insert(x.coords);
  Coords neg_low = t[0].coords;
  for (auto& c : neg_low) c = -c;
  neg_low = reduce(g, neg_low);
  for (const auto& y : s) {
    const Coords x = plus(g, y.coords, neg_low);
    bool ok = true;
    for (const auto& z : t) {
      if (!big.count(plus(g, x, z.coords))) {
        ok = false;
        break;
      }
    }
    if (ok) {
      r.found = true;
      r.x = g.element(x);
      return r;
    }
  }
  return r;
}

std::vector<RationalVector> brute_body_points(const SymmetricPolytope& body, const RationalMatrix& basis,
                                              std::size_t cap) {
  const std::size_t d = body.dim();
  if (d == 0) return {RationalVector()};
  // d independent normals bound B inside a parallelotope.
  Matrix chosen;
  std::vector<Rational> rhs;
  for (const auto& c : body.constraints()) {
    Matrix trial = chosen;
    trial.emplace_back(c.a.begin(), c.a.end());
    if (rank_of(trial) == trial.size()) {
      chosen = std::move(trial);
      rhs.push_back(c.b);
    }
    if (chosen.size() == d) break;
  }
  if (chosen.size() < d) throw PreconditionError("oracle: unbounded body");
  const Matrix a_inv = *invert(chosen);
  std::vector<Rational> xmax(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) xmax[i] += abs(a_inv[i][j]) * rhs[j];

  Matrix m(d, std::vector<Rational>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m[i][j] = basis(i, j);
  const auto m_inv = invert(m);
  if (!m_inv) throw PreconditionError("oracle: singular lattice basis");
  std::vector<std::int64_t> cmax(d);
  Integer count = 1;
  for (std::size_t i = 0; i < d; ++i) {
    Rational s = 0;
    for (std::size_t k = 0; k < d; ++k) s += abs((*m_inv)[i][k]) * xmax[k];
    cmax[i] = floor_of(s);
    count *= 2 * cmax[i] + 1;
  }
  if (count > static_cast<unsigned long>(cap)) throw CapExceeded("oracle: coordinate box exceeds cap");

  std::vector<RationalVector> out;
  odometer(cmax, [&](const std::vector<std::int64_t>& c) {
    RationalVector x(d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) x[i] += m[i][j] * Rational(static_cast<long>(c[j]));
    for (const auto& con : body.constraints()) {
      Rational dot = 0;
      for (std::size_t i = 0; i < d; ++i) dot += con.a[i] * x[i];
      if (abs(dot) > con.b) return;
    }
    out.push_back(std::move(x));
  });
  return out;
}

bool brute_in_lattice(const RationalVector& x, const RationalMatrix& basis) {
  const std::size_t d = x.size();
  Matrix m(d, std::vector<Rational>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m[i][j] = basis(i, j);
  const auto m_inv = invert(m);
  if (!m_inv) throw PreconditionError("oracle: singular lattice basis");
  for (std::size_t i = 0; i < d; ++i) {
    Rational c = 0;
    for (std::size_t k = 0; k < d; ++k) c += (*m_inv)[i][k] * x[k];
    if (c.get_den() != 1) return false;
  }
  return true;
}

}  // namespace gapjohn::oracle
