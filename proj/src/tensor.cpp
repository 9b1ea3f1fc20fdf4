#include "weaklie/tensor.hpp"

#include "weaklie/errors.hpp"

namespace weaklie {
namespace {

void require_same_dim(int a, int b) {
  if (a != b) throw Error("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

std::size_t ipow(int n, int k) {
  std::size_t r = 1;
  for (int i = 0; i < k; ++i) r *= static_cast<std::size_t>(n);
  return r;
}

}  // namespace

VectorField::VectorField(std::vector<Expr> components) : c_(std::move(components)) {}

VectorField VectorField::basis(int n, int a) {
  std::vector<Expr> c(static_cast<std::size_t>(n), Expr(0));
  c.at(static_cast<std::size_t>(a)) = Expr(1);
  return VectorField(std::move(c));
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  require_same_dim(a.dim(), b.dim());
  std::vector<Expr> c;
  for (int i = 0; i < a.dim(); ++i) c.push_back(a[i] + b[i]);
  return VectorField(std::move(c));
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  require_same_dim(a.dim(), b.dim());
  std::vector<Expr> c;
  for (int i = 0; i < a.dim(); ++i) c.push_back(a[i] - b[i]);
  return VectorField(std::move(c));
}

VectorField operator*(const Expr& f, const VectorField& v) {
  std::vector<Expr> c;
  for (int i = 0; i < v.dim(); ++i) c.push_back(f * v[i]);
  return VectorField(std::move(c));
}

void FrameSet::add(std::string name, VectorField field) {
  if (!fields.empty()) require_same_dim(fields.front().dim(), field.dim());
  names.push_back(std::move(name));
  fields.push_back(std::move(field));
}

TensorField::TensorField(int dim, int upper, int lower)
    : n_(dim), p_(upper), q_(lower), c_(ipow(dim, upper + lower), Expr(0)) {
  if (dim < 1 || upper < 0 || lower < 0) throw Error("invalid tensor shape");
}

TensorField::TensorField(int dim, int upper, int lower, std::vector<Expr> components)
    : n_(dim), p_(upper), q_(lower), c_(std::move(components)) {
  if (c_.size() != ipow(dim, upper + lower)) throw Error("tensor component count does not match valence");
}

TensorField TensorField::from_vector(const VectorField& v) { return TensorField(v.dim(), 1, 0, v.components()); }

TensorField TensorField::from_matrix(const std::vector<std::vector<Expr>>& m) {
  const int n = static_cast<int>(m.size());
  TensorField t(n, 0, 2);
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(m[static_cast<std::size_t>(a)].size()) != n) throw Error("matrix is not square");
    for (int b = 0; b < n; ++b) t(a, b) = m[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }
  return t;
}

std::size_t TensorField::offset(const std::vector<int>& idx) const {
  if (static_cast<int>(idx.size()) != rank()) throw Error("index count does not match tensor rank");
  std::size_t off = 0;
  for (int i : idx) {
    if (i < 0 || i >= n_) throw Error("tensor index out of range");
    off = off * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i);
  }
  return off;
}

std::vector<int> TensorField::unflatten(std::size_t offset) const {
  std::vector<int> idx(static_cast<std::size_t>(rank()));
  for (int k = rank() - 1; k >= 0; --k) {
    idx[static_cast<std::size_t>(k)] = static_cast<int>(offset % static_cast<std::size_t>(n_));
    offset /= static_cast<std::size_t>(n_);
  }
  return idx;
}

bool TensorField::structurally_zero() const {
  for (const auto& e : c_)
    if (!e.is_zero()) return false;
  return true;
}

std::vector<std::vector<Expr>> TensorField::matrix() const {
  if (rank() != 2) throw Error("matrix view needs a rank-2 tensor");
  std::vector<std::vector<Expr>> m(static_cast<std::size_t>(n_));
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b) m[static_cast<std::size_t>(a)].push_back((*this)(a, b));
  return m;
}

TensorField operator+(const TensorField& a, const TensorField& b) {
  require_same_dim(a.n_, b.n_);
  if (a.p_ != b.p_ || a.q_ != b.q_) throw Error("valence mismatch in tensor sum");
  TensorField r(a.n_, a.p_, a.q_);
  for (std::size_t k = 0; k < a.c_.size(); ++k) r.c_[k] = a.c_[k] + b.c_[k];
  return r;
}

TensorField operator-(const TensorField& a, const TensorField& b) {
  require_same_dim(a.n_, b.n_);
  if (a.p_ != b.p_ || a.q_ != b.q_) throw Error("valence mismatch in tensor difference");
  TensorField r(a.n_, a.p_, a.q_);
  for (std::size_t k = 0; k < a.c_.size(); ++k) r.c_[k] = a.c_[k] - b.c_[k];
  return r;
}

TensorField operator*(const Expr& f, const TensorField& t) {
  TensorField r(t.n_, t.p_, t.q_);
  for (std::size_t k = 0; k < t.c_.size(); ++k) r.c_[k] = f * t.c_[k];
  return r;
}

std::vector<Expr> TensorField::symmetry_residual(SlotSymmetry s) const {
  if (s.first < 0 || s.second < 0 || s.first >= rank() || s.second >= rank() || s.first == s.second) {
    throw Error("invalid symmetry slots");
  }
  if ((s.first < p_) != (s.second < p_)) throw Error("symmetry must pair two upper or two lower slots");
  std::vector<Expr> out;
  for (std::size_t k = 0; k < c_.size(); ++k) {
    std::vector<int> idx = unflatten(k);
    if (idx[static_cast<std::size_t>(s.first)] >= idx[static_cast<std::size_t>(s.second)]) continue;
    std::swap(idx[static_cast<std::size_t>(s.first)], idx[static_cast<std::size_t>(s.second)]);
    const Expr& other = at(idx);
    out.push_back(s.antisymmetric ? c_[k] + other : c_[k] - other);
  }
  if (s.antisymmetric) {
    for (std::size_t k = 0; k < c_.size(); ++k) {
      std::vector<int> idx = unflatten(k);
      if (idx[static_cast<std::size_t>(s.first)] == idx[static_cast<std::size_t>(s.second)]) out.push_back(c_[k]);
    }
  }
  return out;
}

TensorField& TensorField::declare_symmetry(SlotSymmetry s, const Chart& chart, const NumericContext& ctx) {
  ZeroCheck z = zero_test(symmetry_residual(s), chart, ctx);
  if (!z.all_zero) throw InvariantViolation("declared tensor symmetry does not hold");
  sym_.push_back(s);
  return *this;
}

ZeroCheck zero_test(const TensorField& t, const Chart& chart, const NumericContext& ctx) {
  return zero_test(t.components(), chart, ctx);
}

ZeroCheck zero_test(const VectorField& v, const Chart& chart, const NumericContext& ctx) {
  return zero_test(v.components(), chart, ctx);
}

Expr lie_derivative_scalar(const VectorField& x, const Expr& f) {
  std::vector<Expr> terms;
  for (int c = 0; c < x.dim(); ++c) {
    if (x[c].is_zero() || !depends_on_coord(f, c)) continue;
    terms.push_back(x[c] * diff(f, c));
  }
  return Expr::sum(std::move(terms));
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  require_same_dim(x.dim(), y.dim());
  std::vector<Expr> out;
  for (int a = 0; a < x.dim(); ++a) out.push_back(lie_derivative_scalar(x, y[a]) - lie_derivative_scalar(y, x[a]));
  return VectorField(std::move(out));
}

TensorField lie_derivative(const VectorField& x, const TensorField& t) {
  const int n = t.dim();
  require_same_dim(n, x.dim());
  // dxi[a][c] = d_c xi^a
  std::vector<std::vector<Expr>> dxi(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) dxi[static_cast<std::size_t>(a)].push_back(diff(x[a], c));

  TensorField r(n, t.upper(), t.lower());
  for (std::size_t k = 0; k < t.size(); ++k) {
    std::vector<int> idx = t.unflatten(k);
    std::vector<Expr> terms{lie_derivative_scalar(x, t.components()[k])};
    for (int s = 0; s < t.rank(); ++s) {
      const int orig = idx[static_cast<std::size_t>(s)];
      const bool up = s < t.upper();
      for (int c = 0; c < n; ++c) {
        const Expr& d = up ? dxi[static_cast<std::size_t>(orig)][static_cast<std::size_t>(c)]
                           : dxi[static_cast<std::size_t>(c)][static_cast<std::size_t>(orig)];
        if (d.is_zero()) continue;
        idx[static_cast<std::size_t>(s)] = c;
        const Expr& tc = t.at(idx);
        if (!tc.is_zero()) terms.push_back(up ? -(tc * d) : tc * d);
      }
      idx[static_cast<std::size_t>(s)] = orig;
    }
    r.components()[k] = Expr::sum(std::move(terms));
  }
  return r;
}

TensorField iterated_lie(const std::vector<VectorField>& xs, const TensorField& t) {
  TensorField r = t;
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) r = lie_derivative(*it, r);
  return r;
}

Expr iterated_lie(const std::vector<VectorField>& xs, const Expr& f) {
  Expr r = f;
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) r = lie_derivative_scalar(*it, r);
  return r;
}

TensorField contract(const TensorField& t, int u, int l) {
  if (u < 0 || u >= t.upper() || l < 0 || l >= t.lower()) throw Error("invalid contraction slots");
  const int n = t.dim();
  TensorField r(n, t.upper() - 1, t.lower() - 1);
  const int ls = t.upper() + l;
  for (std::size_t k = 0; k < r.size(); ++k) {
    std::vector<int> ridx = r.unflatten(k);
    std::vector<int> idx;
    idx.reserve(static_cast<std::size_t>(t.rank()));
    std::size_t src = 0;
    for (int s = 0; s < t.rank(); ++s) {
      if (s == u || s == ls) {
        idx.push_back(0);
      } else {
        idx.push_back(ridx[src++]);
      }
    }
    std::vector<Expr> terms;
    for (int c = 0; c < n; ++c) {
      idx[static_cast<std::size_t>(u)] = c;
      idx[static_cast<std::size_t>(ls)] = c;
      terms.push_back(t.at(idx));
    }
    r.components()[k] = Expr::sum(std::move(terms));
  }
  return r;
}

TensorField outer(const TensorField& a, const TensorField& b) {
  require_same_dim(a.dim(), b.dim());
  TensorField r(a.dim(), a.upper() + b.upper(), a.lower() + b.lower());
  for (std::size_t k = 0; k < r.size(); ++k) {
    std::vector<int> idx = r.unflatten(k);
    std::vector<int> ia;
    std::vector<int> ib;
    int s = 0;
    for (int i = 0; i < a.upper(); ++i) ia.push_back(idx[static_cast<std::size_t>(s++)]);
    for (int i = 0; i < b.upper(); ++i) ib.push_back(idx[static_cast<std::size_t>(s++)]);
    for (int i = 0; i < a.lower(); ++i) ia.push_back(idx[static_cast<std::size_t>(s++)]);
    for (int i = 0; i < b.lower(); ++i) ib.push_back(idx[static_cast<std::size_t>(s++)]);
    r.components()[k] = a.at(ia) * b.at(ib);
  }
  return r;
}

TensorField permute(const TensorField& t, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != t.rank()) throw Error("permutation length does not match tensor rank");
  for (int k = 0; k < t.rank(); ++k) {
    if ((k < t.upper()) != (perm[static_cast<std::size_t>(k)] < t.upper())) {
      throw Error("permutation mixes upper and lower slots");
    }
  }
  TensorField r(t.dim(), t.upper(), t.lower());
  for (std::size_t k = 0; k < r.size(); ++k) {
    std::vector<int> idx = r.unflatten(k);
    std::vector<int> src(idx.size());
    for (std::size_t s = 0; s < idx.size(); ++s) src[static_cast<std::size_t>(perm[s])] = idx[s];
    r.components()[k] = t.at(src);
  }
  return r;
}

}  // namespace weaklie
