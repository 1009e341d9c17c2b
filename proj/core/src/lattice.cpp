#include "gapjohn/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "gapjohn/errors.hpp"

namespace gapjohn {

Lattice::Lattice(RationalMatrix basis) : basis_(std::move(basis)) {
  if (basis_.rows() != basis_.cols()) throw PreconditionError("lattice basis must be square");
  auto inv = inverse(basis_);
  if (!inv) throw PreconditionError("lattice basis is singular");
  inverse_ = std::move(*inv);
}

Lattice Lattice::standard(std::size_t dim) { return Lattice(RationalMatrix::identity(dim)); }

Rational Lattice::covolume() const { return abs(determinant(basis_)); }

RationalVector Lattice::coordinates(const RationalVector& x) const {
  if (x.size() != dim()) throw PreconditionError("lattice coordinate dimension mismatch");
  return inverse_ * x;
}

bool Lattice::contains(const RationalVector& x) const { return is_integral(coordinates(x)); }

RationalVector Lattice::point(const std::vector<std::int64_t>& coeffs) const {
  if (coeffs.size() != dim()) throw PreconditionError("lattice point dimension mismatch");
  RationalVector c(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) c[i] = Rational(static_cast<long>(coeffs[i]));
  return basis_ * c;
}

namespace {

// (col i, col j) <- (s*col i + t*col j, u*col i + v*col j)
void combine_columns(RationalMatrix& m, std::size_t i, std::size_t j, const Integer& s, const Integer& t,
                     const Integer& u, const Integer& v) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Rational a = m(r, i);
    Rational b = m(r, j);
    m(r, i) = Rational(s) * a + Rational(t) * b;
    m(r, j) = Rational(u) * a + Rational(v) * b;
  }
}

// col j -= q * col i
void subtract_column(RationalMatrix& m, std::size_t j, const Integer& q, std::size_t i) {
  if (q == 0) return;
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, j) -= Rational(q) * m(r, i);
}

void negate_column(RationalMatrix& m, std::size_t j) {
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, j) = -m(r, j);
}

void swap_columns(RationalMatrix& m, std::size_t i, std::size_t j) {
  for (std::size_t r = 0; r < m.rows(); ++r) std::swap(m(r, i), m(r, j));
}

Integer numerator_gcd(const RationalVector& v) {
  Integer g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_num_mpz_t());
  return g;
}

}  // namespace

HnfResult hnf(const RationalMatrix& m) {
  if (!is_integral(m)) throw PreconditionError("hnf requires an integer matrix");
  HnfResult res{m, RationalMatrix::identity(m.cols()), 0};
  auto& h = res.h;
  auto& u = res.u;
  std::size_t col = 0;
  for (std::size_t r = 0; r < h.rows() && col < h.cols(); ++r) {
    for (std::size_t j = col + 1; j < h.cols(); ++j) {
      if (h(r, j) == 0) continue;
      Integer a = h(r, col).get_num();
      Integer b = h(r, j).get_num();
      Integer g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      Integer bg = -b / g;
      Integer ag = a / g;
      combine_columns(h, col, j, s, t, bg, ag);
      combine_columns(u, col, j, s, t, bg, ag);
    }
    if (h(r, col) == 0) continue;
    if (h(r, col) < 0) {
      negate_column(h, col);
      negate_column(u, col);
    }
    const Integer p = h(r, col).get_num();
    for (std::size_t j = 0; j < col; ++j) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), h(r, j).get_num_mpz_t(), p.get_mpz_t());
      subtract_column(h, j, q, col);
      subtract_column(u, j, q, col);
    }
    ++col;
  }
  res.rank = col;
  return res;
}

PrimitiveFactor primitive_factor(const RationalVector& y, const Lattice& lattice) {
  RationalVector c = lattice.coordinates(y);
  if (!is_integral(c)) throw PreconditionError("primitive_factor: vector is not in the lattice");
  Integer n = numerator_gcd(c);
  if (n == 0) throw PreconditionError("primitive_factor: zero vector");
  PrimitiveFactor f{n, y};
  for (auto& x : f.primitive) x /= Rational(n);
  return f;
}

CompletedBasis complete_basis(const RationalVector& y_primitive, const Lattice& lattice) {
  const std::size_t d = lattice.dim();
  RationalVector c = lattice.coordinates(y_primitive);
  if (!is_integral(c) || numerator_gcd(c) != 1) {
    throw PreconditionError("complete_basis: vector is not primitive in the lattice");
  }
  RationalMatrix row(1, d);
  for (std::size_t j = 0; j < d; ++j) row(0, j) = c[j];
  // c^T U0 = e_1^T, so the first row of U0^{-1} is c^T.
  const HnfResult r = hnf(row);
  const RationalMatrix w0 = inverse(r.u)->transpose();
  RationalMatrix w(d, d);
  for (std::size_t j = 0; j < d; ++j) w.set_column(j, w0.column((j + 1) % d));
  CompletedBasis out;
  out.change = w;
  out.basis = Lattice(lattice.basis() * w);
  out.normalizing = out.basis.inverse_basis();
  return out;
}

ReducedBasisReport reduced_basis(const Lattice& lattice, const RationalMatrix& gram) {
  const std::size_t n = lattice.dim();
  if (gram.rows() != n || !is_positive_definite(gram)) {
    throw PreconditionError("reduced_basis: form is not positive definite");
  }
  std::vector<RationalVector> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = lattice.basis().column(i);
  RationalMatrix u = RationalMatrix::identity(n);
  auto ip = [&](const RationalVector& x, const RationalVector& y) { return bilinear(x, gram, y); };

  std::vector<RationalVector> star(n);
  std::vector<Rational> norm(n);
  std::vector<std::vector<Rational>> mu(n, std::vector<Rational>(n));
  auto gram_schmidt = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      star[i] = b[i];
      for (std::size_t j = 0; j < i; ++j) {
        mu[i][j] = ip(b[i], star[j]) / norm[j];
        for (std::size_t k = 0; k < n; ++k) star[i][k] -= mu[i][j] * star[j][k];
      }
      norm[i] = ip(star[i], star[i]);
    }
  };

  const Rational delta(kLllDeltaNumerator, kLllDeltaDenominator);
  gram_schmidt();
  std::size_t k = 1;
  while (k < n) {
    for (std::size_t j = k; j-- > 0;) {
      const Integer q = round_nearest(mu[k][j]);
      if (q == 0) continue;
      for (std::size_t i = 0; i < n; ++i) b[k][i] -= Rational(q) * b[j][i];
      subtract_column(u, k, q, j);
      gram_schmidt();
    }
    if (norm[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norm[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      swap_columns(u, k, k - 1);
      gram_schmidt();
      k = std::max<std::size_t>(k - 1, 1);
    }
  }

  ReducedBasisReport rep;
  rep.basis = Lattice(RationalMatrix::from_columns(b, n));
  rep.change = u;
  Rational prod = 1;
  for (const auto& v : b) {
    rep.squared_lengths.push_back(ip(v, v));
    prod *= rep.squared_lengths.back();
  }
  const RationalMatrix& l = rep.basis.basis();
  rep.defect_squared = n == 0 ? Rational(1) : prod / determinant(l.transpose() * gram * l);
  rep.defect = std::sqrt(rep.defect_squared.get_d());
  return rep;
}

namespace {

void check_cap(std::size_t count, std::size_t cap) {
  if (count > cap) throw CapExceeded("lattice point enumeration exceeds cap of " + std::to_string(cap));
}

}  // namespace

void for_each_point(const SymmetricPolytope& body, const Lattice& lattice,
                    const std::function<bool(const std::vector<std::int64_t>&)>& visit) {
  const std::size_t d = lattice.dim();
  if (body.dim() != d) throw PreconditionError("enumerate_points: dimension mismatch");
  if (d == 0) {
    visit({});
    return;
  }
  // levels[k] is the shadow of the coefficient body on the first k+1 axes.
  std::vector<SymmetricPolytope> levels(d);
  levels[d - 1] = body.transform(lattice.inverse_basis());
  for (std::size_t k = d - 1; k > 0; --k) levels[k - 1] = levels[k].project();

  std::vector<std::int64_t> point(d, 0);
  std::function<bool(std::size_t)> descend = [&](std::size_t k) {
    Rational lo, hi;
    bool bounded = false;
    for (const auto& c : levels[k].constraints()) {
      if (c.a[k] == 0) continue;
      Rational s = 0;
      for (std::size_t i = 0; i < k; ++i)
        if (point[i] != 0) s += c.a[i] * Rational(static_cast<long>(point[i]));
      Rational x1 = (-1 - s) / c.a[k];
      Rational x2 = (1 - s) / c.a[k];
      if (x1 > x2) std::swap(x1, x2);
      if (!bounded || x1 > lo) lo = x1;
      if (!bounded || x2 < hi) hi = x2;
      bounded = true;
    }
    const std::int64_t first = to_int64(ceil(lo));
    const std::int64_t last = to_int64(floor(hi));
    for (std::int64_t v = first; v <= last; ++v) {
      point[k] = v;
      if (!(k + 1 == d ? visit(point) : descend(k + 1))) return false;
    }
    point[k] = 0;
    return true;
  };
  descend(0);
}

std::vector<std::vector<std::int64_t>> enumerate_points(const SymmetricPolytope& body, const Lattice& lattice,
                                                        std::size_t cap) {
  std::vector<std::vector<std::int64_t>> out;
  for_each_point(body, lattice, [&](const std::vector<std::int64_t>& p) {
    out.push_back(p);
    check_cap(out.size(), cap);
    return true;
  });
  return out;
}

std::vector<std::vector<std::int64_t>> enumerate_points_box(const SymmetricPolytope& body,
                                                            const Lattice& lattice, std::size_t cap) {
  const std::size_t d = lattice.dim();
  if (body.dim() != d) throw PreconditionError("enumerate_points_box: dimension mismatch");
  std::vector<std::vector<std::int64_t>> out;
  if (d == 0) {
    out.emplace_back();
    return out;
  }
  const SymmetricPolytope coeff_body = body.transform(lattice.inverse_basis());
  std::vector<std::int64_t> bound(d);
  const auto box = coeff_body.bounding_box();
  for (std::size_t i = 0; i < d; ++i) bound[i] = floor_to_int64(box[i]);
  std::vector<std::int64_t> point(d);
  for (std::size_t i = 0; i < d; ++i) point[i] = -bound[i];
  while (true) {
    RationalVector x(d);
    for (std::size_t i = 0; i < d; ++i) x[i] = Rational(static_cast<long>(point[i]));
    if (coeff_body.contains(x)) {
      out.push_back(point);
      check_cap(out.size(), cap);
    }
    std::size_t i = d;
    while (i > 0 && point[i - 1] == bound[i - 1]) {
      point[i - 1] = -bound[i - 1];
      --i;
    }
    if (i == 0) break;
    ++point[i - 1];
  }
  return out;
}

RationalMatrix subgroup_lattice(const AmbientGroup& group, const std::vector<GroupElement>& generators) {
  const std::size_t n = group.arity();
  const std::size_t r = static_cast<std::size_t>(group.free_rank());
  const std::size_t cols = generators.size() + group.moduli().size();
  if (n == 0) return RationalMatrix(0, 0);
  RationalMatrix m(n, std::max<std::size_t>(cols, 1));
  for (std::size_t j = 0; j < generators.size(); ++j) {
    if (!group.is_member(generators[j])) throw PreconditionError("subgroup_lattice: element of another group");
    for (std::size_t i = 0; i < n; ++i) m(i, j) = Rational(static_cast<long>(generators[j].coords[i]));
  }
  for (std::size_t k = 0; k < group.moduli().size(); ++k) {
    m(r + k, generators.size() + k) = Rational(static_cast<long>(group.moduli()[k]));
  }
  const HnfResult h = hnf(m);
  RationalMatrix out(n, h.rank);
  for (std::size_t j = 0; j < h.rank; ++j) out.set_column(j, h.h.column(j));
  return out;
}

bool same_subgroup(const AmbientGroup& group, const std::vector<GroupElement>& a,
                   const std::vector<GroupElement>& b) {
  return subgroup_lattice(group, a) == subgroup_lattice(group, b);
}

bool in_subgroup(const AmbientGroup& group, const std::vector<GroupElement>& generators, const GroupElement& x) {
  std::vector<GroupElement> more = generators;
  more.push_back(x);
  return same_subgroup(group, generators, more);
}

}  // namespace gapjohn
