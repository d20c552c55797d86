// Schwartz-Bruhat functions on F^d as finite sums of phase-modulated product
// balls: each term is value * prod_i psi(b_i x_i) * 1_{a_i + P^{r_i}}(x_i).
// The family is closed under pointwise algebra, coordinate scaling and exact
// Fourier transforms (a plain ball maps to a phased ball and back).
#pragma once

#include <algorithm>
#include <functional>
#include <sstream>
#include <string>

#include "plha/field.hpp"

namespace plha {

// Digits of a strictly below exponent r: the canonical representative of
// a mod P^r (zero if a lies in P^r).
inline Padic canon_mod(const Padic& a, std::int64_t r) {
  if (a.is_zero() || a.val() >= r) return Padic::zero(a.field());
  std::int64_t width = r - a.val();
  if (width >= a.precision()) return a;
  std::int64_t u = a.unit() % ipow(a.prime(), static_cast<int>(width));
  return Padic::make(a.field(), a.val(), u);
}

struct BallTerm {
  Cx coeff{0.0, 0.0};
  std::vector<Padic> center;  // a_i
  std::vector<std::int64_t> radius;  // exponent r_i: ball a_i + P^{r_i}
  std::vector<Padic> phase;   // b_i; psi(b_i x_i) factor (zero = no phase)
};

class BallFunction {
 public:
  BallFunction() = default;
  BallFunction(const FieldDesc& F, int dim) : F_(F), dim_(dim) {}

  static BallFunction zero_fn(const FieldDesc& F, int dim) { return BallFunction(F, dim); }

  // 1_{a + P^r O^d} with per-coordinate centers/radii.
  static BallFunction indicator(const FieldDesc& F, std::vector<Padic> center,
                                std::vector<std::int64_t> radius, Cx value = Cx(1, 0)) {
    BallFunction f(F, static_cast<int>(center.size()));
    BallTerm t;
    t.coeff = value;
    t.center = std::move(center);
    t.radius = std::move(radius);
    t.phase.assign(t.center.size(), Padic::zero(F));
    f.terms_.push_back(std::move(t));
    return f;
  }
  // 1_{(P^r)^d}, lattice ball centred at the origin.
  static BallFunction lattice(const FieldDesc& F, int dim, std::int64_t r = 0) {
    return indicator(F, std::vector<Padic>(static_cast<size_t>(dim), Padic::zero(F)),
                     std::vector<std::int64_t>(static_cast<size_t>(dim), r));
  }
  // 1-dim indicator of the unit shell p^n O^x as p-1 disjoint balls.
  static BallFunction unit_shell(const FieldDesc& F, std::int64_t n) {
    BallFunction f(F, 1);
    for (std::int64_t u = 1; u < F.p; ++u) {
      BallTerm t;
      t.coeff = Cx(1, 0);
      t.center = {Padic::make(F, n, u)};
      t.radius = {n + 1};
      t.phase = {Padic::zero(F)};
      f.terms_.push_back(std::move(t));
    }
    return f;
  }

  const FieldDesc& field() const { return F_; }
  int dim() const { return dim_; }
  const std::vector<BallTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add_term(BallTerm t) { terms_.push_back(std::move(t)); }

  Cx eval(const std::vector<Padic>& x) const {
    assert(static_cast<int>(x.size()) == dim_);
    AdditiveCharacter psi(F_);
    Cx s = 0.0;
    for (const auto& t : terms_) {
      Cx v = t.coeff;
      bool in = true;
      for (int i = 0; i < dim_ && in; ++i) {
        Padic d = x[static_cast<size_t>(i)] - t.center[static_cast<size_t>(i)];
        if (!(d.is_zero() || d.val() >= t.radius[static_cast<size_t>(i)])) {
          in = false;
          break;
        }
        if (!t.phase[static_cast<size_t>(i)].is_zero())
          v *= psi(t.phase[static_cast<size_t>(i)] * x[static_cast<size_t>(i)]);
      }
      if (in) s += v;
    }
    return s;
  }
  Cx eval1(const Padic& x) const { return eval({x}); }

  friend BallFunction operator+(const BallFunction& f, const BallFunction& g) {
    assert(f.dim_ == g.dim_);
    BallFunction r = f;
    for (const auto& t : g.terms_) r.terms_.push_back(t);
    return r;
  }
  friend BallFunction operator*(Cx c, const BallFunction& f) {
    BallFunction r = f;
    for (auto& t : r.terms_) t.coeff *= c;
    return r;
  }
  friend BallFunction operator-(const BallFunction& f, const BallFunction& g) {
    return f + (Cx(-1, 0) * g);
  }

  // Tensor product f(x) g(y) on F^{d_f + d_g}.
  friend BallFunction tensor(const BallFunction& f, const BallFunction& g) {
    BallFunction r(f.F_, f.dim_ + g.dim_);
    for (const auto& a : f.terms_)
      for (const auto& b : g.terms_) {
        BallTerm t;
        t.coeff = a.coeff * b.coeff;
        t.center = a.center;
        t.center.insert(t.center.end(), b.center.begin(), b.center.end());
        t.radius = a.radius;
        t.radius.insert(t.radius.end(), b.radius.begin(), b.radius.end());
        t.phase = a.phase;
        t.phase.insert(t.phase.end(), b.phase.begin(), b.phase.end());
        r.terms_.push_back(std::move(t));
      }
    return r;
  }

  // Exact Fourier transform in the listed coordinates; sign = +1 uses
  // psi(xy), sign = -1 the inverse transform with psi(-xy) (self-dual dx):
  //   psi(b x) 1_{a+P^r}(x)  ->  q^{-r} psi(ab) psi(sign * a y) 1_{-sign*b + P^{-r}}(y).
  BallFunction fourier(int sign, const std::vector<int>& coords) const {
    AdditiveCharacter psi(F_);
    BallFunction r(F_, dim_);
    double q = static_cast<double>(F_.p);
    for (auto t : terms_) {
      for (int i : coords) {
        auto ii = static_cast<size_t>(i);
        const Padic a = t.center[ii];
        const Padic b = t.phase[ii];
        const std::int64_t rad = t.radius[ii];
        t.coeff *= std::pow(q, static_cast<double>(-rad)) * psi(a * b);
        t.center[ii] = (sign > 0) ? -b : b;
        t.phase[ii] = (sign > 0) ? a : -a;
        t.radius[ii] = -rad;
      }
      r.terms_.push_back(std::move(t));
    }
    r.normalize();
    return r;
  }
  BallFunction fourier(int sign) const {
    std::vector<int> all(static_cast<size_t>(dim_));
    for (int i = 0; i < dim_; ++i) all[static_cast<size_t>(i)] = i;
    return fourier(sign, all);
  }

  // f(x * t) per coordinate (joint scaling by t in F^x).
  BallFunction scale_arg(const Padic& t) const {
    BallFunction r(F_, dim_);
    Padic tinv = t.inv();
    for (auto term : terms_) {
      for (int i = 0; i < dim_; ++i) {
        auto ii = static_cast<size_t>(i);
        term.center[ii] = term.center[ii] * tinv;
        term.radius[ii] -= t.val();
        term.phase[ii] = term.phase[ii] * t;
      }
      r.terms_.push_back(std::move(term));
    }
    return r;
  }
  // 1-dim translate x -> x + m.
  BallFunction translate_arg(const Padic& m) const {
    assert(dim_ == 1);
    AdditiveCharacter psi(F_);
    BallFunction r(F_, 1);
    for (auto term : terms_) {
      term.center[0] = term.center[0] - m;
      if (!term.phase[0].is_zero()) term.coeff *= psi(term.phase[0] * m);
      r.terms_.push_back(std::move(term));
    }
    return r;
  }

  // Same function with every cell in coordinate i split to radius at least
  // min_radius (phases are untouched; they are exact on any cell).
  BallFunction refine_coord(int i, std::int64_t min_radius) const {
    auto ii = static_cast<size_t>(i);
    BallFunction r(F_, dim_);
    for (const auto& t : terms_) {
      std::int64_t r0 = t.radius[ii];
      if (r0 >= min_radius) {
        r.terms_.push_back(t);
        continue;
      }
      std::int64_t cells = F_.pk(static_cast<int>(min_radius - r0));
      for (std::int64_t k = 0; k < cells; ++k) {
        BallTerm s = t;
        s.center[ii] = t.center[ii] + Padic::make(F_, r0, k);
        s.radius[ii] = min_radius;
        r.terms_.push_back(std::move(s));
      }
    }
    return r;
  }

  BallFunction swap_coords(int i, int j) const {
    BallFunction r = *this;
    auto ii = static_cast<size_t>(i), jj = static_cast<size_t>(j);
    for (auto& t : r.terms_) {
      std::swap(t.center[ii], t.center[jj]);
      std::swap(t.radius[ii], t.radius[jj]);
      std::swap(t.phase[ii], t.phase[jj]);
    }
    return r;
  }

  // g(x) = f(..., t x_i, ...), t in F^x.
  BallFunction scale_coord(int i, const Padic& t) const {
    BallFunction r = *this;
    auto ii = static_cast<size_t>(i);
    Padic tinv = t.inv();
    for (auto& term : r.terms_) {
      term.center[ii] = term.center[ii] * tinv;
      term.radius[ii] -= t.val();
      term.phase[ii] = term.phase[ii] * t;
    }
    return r;
  }

  // g(x) = f(..., x_i + c x_j, ...), i != j. The indicator in coordinate i
  // couples the two coordinates; coordinate j is refined until c * (cell of j)
  // sits inside a single i-cell, after which the shift is exact per cell.
  BallFunction shear_coord(int i, int j, const Padic& c) const {
    assert(i != j);
    if (c.is_zero()) return *this;
    auto ii = static_cast<size_t>(i), jj = static_cast<size_t>(j);
    BallFunction r(F_, dim_);
    for (const auto& t0 : terms_) {
      std::int64_t rj = std::max(t0.radius[jj], t0.radius[ii] - c.val());
      BallFunction one(F_, dim_);
      one.terms_.push_back(t0);
      for (auto t : one.refine_coord(j, rj).terms_) {
        t.center[ii] = t.center[ii] - c * t.center[jj];
        t.phase[jj] = t.phase[jj] + c * t.phase[ii];
        r.terms_.push_back(std::move(t));
      }
    }
    return r;
  }

  // g(x) = f(Mx) for an invertible d x d matrix M over F: M is factored into
  // elementary row operations (swap, scale, shear) and the matching coordinate
  // operations are composed.
  BallFunction substitute(const std::vector<std::vector<Padic>>& M) const {
    int d = dim_;
    assert(static_cast<int>(M.size()) == d);
    std::vector<std::vector<Padic>> A = M;
    // Row-reduce A to the identity, recording E_1, E_2, ... (applied in that
    // order, E_k ... E_1 A = 1). Then f(Mx) = ((f o E_1^{-1}) o E_2^{-1}) ...
    struct Op {
      int kind;  // 0 swap(i,j), 1 scale(i,t), 2 shear: R_i += c R_j
      int i, j;
      Padic t;
    };
    std::vector<Op> ops;
    for (int col = 0; col < d; ++col) {
      int piv = -1;
      std::int64_t best = 0;
      for (int row = col; row < d; ++row) {
        const Padic& x = A[static_cast<size_t>(row)][static_cast<size_t>(col)];
        if (x.is_zero()) continue;
        if (piv < 0 || x.val() < best) {
          piv = row;
          best = x.val();
        }
      }
      if (piv < 0) throw std::domain_error("substitute: singular matrix");
      if (piv != col) {
        std::swap(A[static_cast<size_t>(piv)], A[static_cast<size_t>(col)]);
        ops.push_back({0, piv, col, Padic::zero(F_)});
      }
      Padic a = A[static_cast<size_t>(col)][static_cast<size_t>(col)];
      if (!(a == Padic::from_int(F_, 1))) {
        Padic ainv = a.inv();
        for (int k = 0; k < d; ++k)
          A[static_cast<size_t>(col)][static_cast<size_t>(k)] =
              ainv * A[static_cast<size_t>(col)][static_cast<size_t>(k)];
        ops.push_back({1, col, col, ainv});
      }
      for (int row = 0; row < d; ++row) {
        if (row == col) continue;
        Padic m = A[static_cast<size_t>(row)][static_cast<size_t>(col)];
        if (m.is_zero()) continue;
        for (int k = 0; k < d; ++k)
          A[static_cast<size_t>(row)][static_cast<size_t>(k)] =
              A[static_cast<size_t>(row)][static_cast<size_t>(k)] -
              m * A[static_cast<size_t>(col)][static_cast<size_t>(k)];
        ops.push_back({2, row, col, -m});
      }
    }
    BallFunction g = *this;
    for (const auto& op : ops) {
      switch (op.kind) {
        case 0: g = g.swap_coords(op.i, op.j); break;
        case 1: g = g.scale_coord(op.i, op.t.inv()); break;  // E^{-1} scales by 1/t
        case 2: g = g.shear_coord(op.i, op.j, -op.t); break; // E^{-1} shears by -c
        default: break;
      }
      g.normalize();
    }
    return g;
  }

  // Integral over F^d, vol(O, dx) = 1 per coordinate (exact).
  Cx integral() const {
    AdditiveCharacter psi(F_);
    double q = static_cast<double>(F_.p);
    Cx s = 0.0;
    for (const auto& t : terms_) {
      Cx v = t.coeff;
      for (int i = 0; i < dim_; ++i) {
        auto ii = static_cast<size_t>(i);
        const Padic& b = t.phase[ii];
        if (!b.is_zero() && b.val() < -t.radius[ii]) {
          v = 0.0;  // oscillation kills the ball
          break;
        }
        v *= std::pow(q, static_cast<double>(-t.radius[ii]));
        if (!b.is_zero()) v *= psi(b * t.center[ii]);
      }
      s += v;
    }
    return s;
  }

  // Canonical form: phases reduced mod P^{-r} (constants absorbed), centers
  // reduced mod P^r, identical cells merged, negligible terms dropped.
  void normalize(double tol = 1e-13) {
    AdditiveCharacter psi(F_);
    std::map<std::string, BallTerm> acc;
    for (auto t : terms_) {
      std::ostringstream key;
      for (int i = 0; i < dim_; ++i) {
        auto ii = static_cast<size_t>(i);
        Padic bred = canon_mod(t.phase[ii], -t.radius[ii]);
        Padic bdiff = t.phase[ii] - bred;
        if (!bdiff.is_zero()) t.coeff *= psi(bdiff * t.center[ii]);
        t.phase[ii] = bred;
        t.center[ii] = canon_mod(t.center[ii], t.radius[ii]);
        key << t.radius[ii] << '|';
        auto put = [&key](const Padic& x) {
          if (x.is_zero())
            key << "z";
          else
            key << x.val() << ':' << x.unit();
          key << ';';
        };
        put(t.center[ii]);
        put(t.phase[ii]);
      }
      auto it = acc.find(key.str());
      if (it == acc.end())
        acc.emplace(key.str(), std::move(t));
      else
        it->second.coeff += t.coeff;
    }
    terms_.clear();
    for (auto& [k, t] : acc)
      if (std::abs(t.coeff) > tol) terms_.push_back(std::move(t));
  }

  // Probe points seen by this function's cells (centers and cell exits),
  // used for value-based equality tests.
  std::vector<std::vector<Padic>> probe_points(std::int64_t extra_shift = 0) const {
    std::vector<std::vector<Padic>> pts;
    for (const auto& t : terms_) {
      pts.push_back(t.center);
      std::vector<Padic> inside = t.center;
      std::vector<Padic> outside = t.center;
      for (int i = 0; i < dim_; ++i) {
        auto ii = static_cast<size_t>(i);
        inside[ii] = t.center[ii] + Padic::make(F_, t.radius[ii] + 1 + extra_shift, 1);
        outside[ii] = t.center[ii] + Padic::make(F_, t.radius[ii] - 1, 1);
      }
      pts.push_back(inside);
      pts.push_back(outside);
    }
    return pts;
  }

 private:
  FieldDesc F_;
  int dim_ = 1;
  std::vector<BallTerm> terms_;
};

// Pointwise approximate equality through both functions' probe points plus
// caller-supplied extra samples.
inline bool approx_equal(const BallFunction& f, const BallFunction& g,
                         const std::vector<std::vector<Padic>>& extra = {}, double tol = 1e-9) {
  auto check = [&](const std::vector<std::vector<Padic>>& pts) {
    for (const auto& x : pts)
      if (std::abs(f.eval(x) - g.eval(x)) > tol) return false;
    return true;
  };
  return check(f.probe_points()) && check(g.probe_points()) && check(extra);
}

// A Schwartz-Bruhat function on n x m matrices: BallFunction on F^{nm} with
// row-major coordinate bookkeeping.
struct MatrixSchwartz {
  int rows = 1, cols = 1;
  BallFunction fn;

  MatrixSchwartz() = default;
  MatrixSchwartz(int r, int c, BallFunction f) : rows(r), cols(c), fn(std::move(f)) {
    assert(fn.dim() == rows * cols);
  }
  int coord(int i, int j) const { return i * cols + j; }

  // Partial Fourier transform in all coordinates of column j.
  MatrixSchwartz partial_fourier_column(int j, int sign) const {
    std::vector<int> coords;
    for (int i = 0; i < rows; ++i) coords.push_back(coord(i, j));
    return MatrixSchwartz(rows, cols, fn.fourier(sign, coords));
  }
};

}  // namespace plha
