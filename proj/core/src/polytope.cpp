#include "gapjohn/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "gapjohn/errors.hpp"

namespace gapjohn {

namespace {

// Normalizes to b = 1 with the first nonzero entry of a positive.  Returns
// false for the vacuous constraint a = 0.
bool normalize(SymmetricConstraint& c) {
  c.b.canonicalize();
  for (auto& x : c.a) x.canonicalize();
  auto first = std::find_if(c.a.begin(), c.a.end(), [](const Rational& x) { return x != 0; });
  if (first == c.a.end()) return false;
  const bool flip = *first < 0;
  for (auto& x : c.a) {
    x /= c.b;
    if (flip) x = -x;
  }
  c.b = 1;
  return true;
}

bool lex_less(const RationalVector& x, const RationalVector& y) {
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

// Calls f on every k-subset of {0..n-1} in lexicographic order.
void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Affine dimension of a point set (-1 for the empty set).
int affine_dim(const std::vector<RationalVector>& pts, const std::vector<std::size_t>& ids) {
  if (ids.empty()) return -1;
  if (ids.size() == 1) return 0;
  const auto& base = pts[ids[0]];
  RationalMatrix m(ids.size() - 1, base.size());
  for (std::size_t i = 1; i < ids.size(); ++i)
    for (std::size_t c = 0; c < base.size(); ++c) m(i - 1, c) = pts[ids[i]][c] - base[c];
  return static_cast<int>(matrix_rank(std::move(m)));
}

std::vector<RationalVector> enumerate_vertices(std::size_t dim, const std::vector<SymmetricConstraint>& cons) {
  if (dim == 0) return {RationalVector{}};
  std::vector<RationalVector> found;
  for_each_subset(cons.size(), dim, [&](const std::vector<std::size_t>& rows) {
    RationalMatrix a(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) a(i, j) = cons[rows[i]].a[j];
    auto inv = inverse(a);
    if (!inv) return;
    // Sign patterns with the first sign fixed; the negation covers the rest.
    const std::size_t patterns = std::size_t{1} << (dim - 1);
    for (std::size_t mask = 0; mask < patterns; ++mask) {
      RationalVector s(dim);
      s[0] = 1;
      for (std::size_t i = 1; i < dim; ++i) s[i] = (mask >> (i - 1)) & 1 ? -1 : 1;
      RationalVector x = *inv * s;
      bool feasible = true;
      for (const auto& c : cons) {
        Rational v = dot(c.a, x);
        if (v > 1 || v < -1) {
          feasible = false;
          break;
        }
      }
      if (!feasible) continue;
      RationalVector neg = x;
      for (auto& v : neg) v = -v;
      found.push_back(std::move(x));
      found.push_back(std::move(neg));
    }
  });
  std::sort(found.begin(), found.end(), lex_less);
  found.erase(std::unique(found.begin(), found.end()), found.end());
  return found;
}

}  // namespace

SymmetricPolytope::SymmetricPolytope(std::size_t dim, std::vector<SymmetricConstraint> constraints)
    : dim_(dim), cache_(std::make_shared<VertexCache>()) {
  for (auto& c : constraints) {
    if (c.a.size() != dim) throw PreconditionError("constraint dimension mismatch");
    if (c.b <= 0) throw PreconditionError("symmetric polytope constraints need b > 0");
    if (normalize(c)) constraints_.push_back(std::move(c));
  }
  std::sort(constraints_.begin(), constraints_.end(),
            [](const SymmetricConstraint& x, const SymmetricConstraint& y) { return lex_less(x.a, y.a); });
  constraints_.erase(std::unique(constraints_.begin(), constraints_.end()), constraints_.end());
  if (dim_ > 0) {
    RationalMatrix normals(constraints_.size(), dim_);
    for (std::size_t i = 0; i < constraints_.size(); ++i)
      for (std::size_t j = 0; j < dim_; ++j) normals(i, j) = constraints_[i].a[j];
    if (constraints_.empty() || matrix_rank(std::move(normals)) != dim_) {
      throw PreconditionError("polytope is unbounded: constraint normals do not span R^d");
    }
  }
}

SymmetricPolytope SymmetricPolytope::box(const std::vector<Rational>& half_widths) {
  const std::size_t d = half_widths.size();
  std::vector<SymmetricConstraint> cons;
  for (std::size_t i = 0; i < d; ++i) {
    RationalVector a(d);
    a[i] = 1;
    cons.push_back({std::move(a), half_widths[i]});
  }
  return SymmetricPolytope(d, std::move(cons));
}

SymmetricPolytope SymmetricPolytope::cube(std::size_t dim, const Rational& half_width) {
  return box(std::vector<Rational>(dim, half_width));
}

SymmetricPolytope SymmetricPolytope::cross_polytope(std::size_t dim) {
  std::vector<SymmetricConstraint> cons;
  if (dim == 0) return SymmetricPolytope(0, {});
  const std::size_t patterns = std::size_t{1} << (dim - 1);
  for (std::size_t mask = 0; mask < patterns; ++mask) {
    RationalVector a(dim);
    a[0] = 1;
    for (std::size_t i = 1; i < dim; ++i) a[i] = (mask >> (i - 1)) & 1 ? -1 : 1;
    cons.push_back({std::move(a), 1});
  }
  return SymmetricPolytope(dim, std::move(cons));
}

bool SymmetricPolytope::contains(const RationalVector& x) const {
  if (x.size() != dim_) throw PreconditionError("membership dimension mismatch");
  for (const auto& c : constraints_) {
    Rational v = dot(c.a, x);
    if (v > 1 || v < -1) return false;
  }
  return true;
}

SymmetricPolytope SymmetricPolytope::dilate(const Rational& t) const {
  if (t <= 0) throw PreconditionError("dilation factor must be positive");
  std::vector<SymmetricConstraint> cons = constraints_;
  for (auto& c : cons) c.b = t;
  return SymmetricPolytope(dim_, std::move(cons));
}

SymmetricPolytope SymmetricPolytope::transform(const RationalMatrix& u) const {
  if (u.rows() != dim_ || u.cols() != dim_) throw PreconditionError("transform dimension mismatch");
  auto inv = inverse(u);
  if (!inv) throw PreconditionError("transform matrix is singular");
  const RationalMatrix inv_t = inv->transpose();
  std::vector<SymmetricConstraint> cons;
  cons.reserve(constraints_.size());
  for (const auto& c : constraints_) cons.push_back({inv_t * c.a, 1});
  return SymmetricPolytope(dim_, std::move(cons));
}

SymmetricPolytope SymmetricPolytope::project() const {
  if (dim_ == 0) throw PreconditionError("cannot project a zero-dimensional polytope");
  const std::size_t last = dim_ - 1;
  std::vector<RationalVector> positive;
  std::vector<SymmetricConstraint> out;
  for (const auto& c : constraints_) {
    if (c.a[last] == 0) {
      out.push_back({RationalVector(c.a.begin(), c.a.end() - 1), 1});
    } else {
      // Both orientations of the pair; keep the one with positive last entry.
      RationalVector a = c.a;
      if (a[last] < 0)
        for (auto& x : a) x = -x;
      positive.push_back(std::move(a));
    }
  }
  // Combine p (last > 0) with -q (last < 0): q_d p - p_d q <= q_d + p_d.
  for (std::size_t i = 0; i < positive.size(); ++i) {
    for (std::size_t j = i + 1; j < positive.size(); ++j) {
      const auto& p = positive[i];
      const auto& q = positive[j];
      RationalVector a(last);
      for (std::size_t k = 0; k < last; ++k) a[k] = q[last] * p[k] - p[last] * q[k];
      out.push_back({std::move(a), q[last] + p[last]});
    }
  }
  if (last == 0) return SymmetricPolytope(0, {});
  return SymmetricPolytope(last, std::move(out)).pruned();
}

SymmetricPolytope SymmetricPolytope::pruned() const {
  if (dim_ == 0) return *this;
  const auto& verts = vertices();
  std::vector<SymmetricConstraint> kept;
  for (const auto& c : constraints_) {
    std::vector<std::size_t> tight;
    for (std::size_t i = 0; i < verts.size(); ++i)
      if (dot(c.a, verts[i]) == 1) tight.push_back(i);
    if (affine_dim(verts, tight) == static_cast<int>(dim_) - 1) kept.push_back(c);
  }
  SymmetricPolytope p(dim_, std::move(kept));
  p.cache_ = cache_;
  return p;
}

const std::vector<RationalVector>& SymmetricPolytope::vertices() const {
  std::call_once(cache_->once, [this] { cache_->vertices = enumerate_vertices(dim_, constraints_); });
  return cache_->vertices;
}

std::vector<Rational> SymmetricPolytope::bounding_box() const {
  std::vector<Rational> box(dim_, Rational(0));
  for (const auto& v : vertices())
    for (std::size_t i = 0; i < dim_; ++i) box[i] = std::max(box[i], Rational(abs(v[i])));
  return box;
}

Rational SymmetricPolytope::volume(std::size_t dim_limit) const {
  if (dim_ > dim_limit) throw PreconditionError("volume: dimension exceeds configured limit");
  if (dim_ == 0) return 1;
  const auto& verts = vertices();
  // Tight vertex sets of every inequality (both orientations).
  std::vector<std::vector<std::size_t>> tight;
  for (const auto& c : constraints_) {
    std::vector<std::size_t> plus, minus;
    for (std::size_t i = 0; i < verts.size(); ++i) {
      Rational v = dot(c.a, verts[i]);
      if (v == 1) plus.push_back(i);
      if (v == -1) minus.push_back(i);
    }
    tight.push_back(std::move(plus));
    tight.push_back(std::move(minus));
  }

  // Recursive pulling triangulation: cone from the face's first vertex over
  // its facets that avoid it.
  std::function<std::vector<std::vector<std::size_t>>(const std::vector<std::size_t>&, int)> triangulate =
      [&](const std::vector<std::size_t>& face, int k) -> std::vector<std::vector<std::size_t>> {
    if (k == 0) return {{face.front()}};
    const std::size_t apex = face.front();
    std::set<std::vector<std::size_t>> facets;
    for (const auto& t : tight) {
      std::vector<std::size_t> g;
      std::set_intersection(face.begin(), face.end(), t.begin(), t.end(), std::back_inserter(g));
      if (g.size() < static_cast<std::size_t>(k) || g.size() == face.size()) continue;
      if (std::binary_search(g.begin(), g.end(), apex)) continue;
      if (affine_dim(verts, g) == k - 1) facets.insert(std::move(g));
    }
    std::vector<std::vector<std::size_t>> out;
    for (const auto& g : facets) {
      for (auto s : triangulate(g, k - 1)) {
        s.push_back(apex);
        out.push_back(std::move(s));
      }
    }
    return out;
  };

  std::vector<std::size_t> all(verts.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  Rational total = 0;
  Integer factorial = 1;
  for (std::size_t i = 2; i <= dim_; ++i) factorial *= static_cast<unsigned long>(i);
  for (const auto& simplex : triangulate(all, static_cast<int>(dim_))) {
    RationalMatrix m(dim_, dim_);
    const auto& v0 = verts[simplex[0]];
    for (std::size_t i = 1; i <= dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) m(j, i - 1) = verts[simplex[i]][j] - v0[j];
    total += abs(determinant(std::move(m)));
  }
  return total / Rational(factorial);
}

namespace {

using DMatrix = std::vector<std::vector<double>>;

DMatrix invert_double(DMatrix a) {
  const std::size_t n = a.size();
  DMatrix inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    const double p = a[col][col];
    if (p == 0.0) throw PreconditionError("degenerate body in ellipsoid iteration");
    for (std::size_t c = 0; c < n; ++c) {
      a[col][c] /= p;
      inv[col][c] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        a[r][c] -= f * a[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

}  // namespace

Ellipsoid inscribed_ellipsoid(const SymmetricPolytope& body, double eps) {
  const std::size_t d = body.dim();
  if (d == 0) throw PreconditionError("inscribed ellipsoid of a zero-dimensional body");
  if (!(eps > 0 && eps < 1)) throw PreconditionError("ellipsoid tolerance must lie in (0, 1)");
  const auto& cons = body.constraints();
  const std::size_t m = cons.size();
  std::vector<std::vector<double>> pts(m, std::vector<double>(d));
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < d; ++i) pts[j][i] = cons[j].a[i].get_d();

  // Khachiyan's iteration for the minimum-volume enclosing ellipsoid of the
  // polar body conv{+-a_j}; its polar is the inscribed ellipsoid.
  const double tol = eps / 2;
  std::vector<double> u(m, 1.0 / static_cast<double>(m));
  DMatrix moment;
  for (int iter = 0; iter < 100000; ++iter) {
    moment.assign(d, std::vector<double>(d, 0.0));
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) moment[r][c] += u[j] * pts[j][r] * pts[j][c];
    DMatrix inv = invert_double(moment);
    std::size_t best = 0;
    double kappa = -1;
    for (std::size_t j = 0; j < m; ++j) {
      double g = 0;
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) g += pts[j][r] * inv[r][c] * pts[j][c];
      if (g > kappa) {
        kappa = g;
        best = j;
      }
    }
    const double dd = static_cast<double>(d);
    if (kappa <= dd * (1 + tol)) break;
    const double alpha = (kappa - dd) / (dd * (kappa - 1));
    for (auto& w : u) w *= (1 - alpha);
    u[best] += alpha;
  }

  RationalMatrix q(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = r; c < d; ++c) {
      q(r, c) = rational_from_double(static_cast<double>(d) * moment[r][c]);
      q(c, r) = q(r, c);
    }
  while (!is_positive_definite(q)) {
    for (std::size_t i = 0; i < d; ++i) q(i, i) += Rational(1, 1 << 20);
  }

  // Rescale so that max_j a_j^T Q^{-1} a_j = (1 - eps/4)^2 exactly.
  const RationalMatrix q_inv = *inverse(q);
  Rational g_max = 0;
  for (const auto& c : cons) g_max = std::max(g_max, bilinear(c.a, q_inv, c.a));
  const Rational shrink = 1 - rational_from_double(eps / 4);
  const Rational scale = g_max / (shrink * shrink);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) q(r, c) *= scale;

  Ellipsoid e;
  e.shape = q;
  e.rho_squared = 0;
  for (const auto& v : body.vertices()) e.rho_squared = std::max(e.rho_squared, bilinear(v, q, v));
  e.rho = std::sqrt(e.rho_squared.get_d());
  const Rational bound = 1 + rational_from_double(eps);
  e.within_contract = e.rho_squared <= bound * bound * Rational(static_cast<long>(d));
  return e;
}

}  // namespace gapjohn
