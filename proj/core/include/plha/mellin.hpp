// Functions on F^x with simple singularities (finite sums quasi-character *
// valuation-power * Schwartz function), their Mellin transforms as rational
// functions of X = q^{-s} per unit character, the inverse transform via
// partial fractions, and the elementary operators on such functions.
#pragma once

#include <map>

#include "plha/ball.hpp"
#include "plha/laurent.hpp"

namespace plha {

// All characters of (O/P^L)^x, reduced to their true conductors.
inline std::vector<UnitCharacter> characters_mod(const FieldDesc& F, int L) {
  if (L <= 0) return {UnitCharacter::trivial(F.p)};
  const auto& G = UnitGroupTable::get(F.p, L);
  std::vector<UnitCharacter> out;
  out.reserve(static_cast<size_t>(G.order));
  for (std::int64_t k = 0; k < G.order; ++k) out.emplace_back(F.p, L, k);
  return out;
}

// Stirling numbers of the second kind, small range.
inline double stirling2(int k, int i) {
  if (k == 0 && i == 0) return 1.0;
  if (i <= 0 || i > k) return 0.0;
  return static_cast<double>(i) * stirling2(k - 1, i) + stirling2(k - 1, i - 1);
}

// Sum_{n >= n1} n^k (beta X)^n as a LaurentRational.
inline LaurentRational power_tail(int k, Cx beta, std::int64_t n1) {
  // S_k = Sum_{n>=0} n^k Y^n = Sum_i S2(k,i) i! Y^i / (1-Y)^{i+1}, Y = beta X.
  LaurentRational S = LaurentRational::zero();
  for (int i = (k == 0 ? 0 : 1); i <= k; ++i) {
    double c = stirling2(k, i);
    for (int j = 2; j <= i; ++j) c *= j;
    S = S + LaurentRational::geometric(c * std::pow(beta, static_cast<double>(i)), i, beta, i + 1);
  }
  if (k == 0) S = LaurentRational::geometric(Cx(1, 0), 0, beta, 1);
  // Adjust the lower limit exactly.
  if (n1 > 0) {
    for (std::int64_t n = 0; n < n1; ++n)
      S = S - LaurentRational::monomial(std::pow(static_cast<double>(n), k) *
                                            std::pow(beta, static_cast<double>(n)),
                                        n);
  } else {
    for (std::int64_t n = n1; n < 0; ++n)
      S = S + LaurentRational::monomial(std::pow(static_cast<double>(n), k) *
                                            std::pow(beta, static_cast<double>(n)),
                                        n);
  }
  return S;
}

// Mellin transform data: one rational function of X per unit character.
struct MellinData {
  FieldDesc F;
  std::map<UnitCharacter, LaurentRational> comp;

  explicit MellinData(const FieldDesc& F_) : F(F_) {}

  void add(const UnitCharacter& xi, const LaurentRational& R) {
    if (R.is_zero()) return;
    auto it = comp.find(xi);
    if (it == comp.end())
      comp.emplace(xi, R);
    else {
      it->second = it->second + R;
      if (it->second.is_zero()) comp.erase(it);
    }
  }
  LaurentRational at(const UnitCharacter& xi) const {
    auto it = comp.find(xi);
    return it == comp.end() ? LaurentRational::zero() : it->second;
  }
  void prune() {
    for (auto it = comp.begin(); it != comp.end();)
      it = it->second.is_zero() ? comp.erase(it) : std::next(it);
  }
};

// One simple-singularity term chi(t) * v(t)^k * phi(t).
struct SisTerm {
  QuasiCharacter chi;
  int k = 0;
  BallFunction phi;  // dimension 1
};

class SisFunction {
 public:
  SisFunction() = default;
  explicit SisFunction(const FieldDesc& F) : F_(F) {}

  static SisFunction zero_fn(const FieldDesc& F) { return SisFunction(F); }
  static SisFunction from_ball(const FieldDesc& F, const BallFunction& phi) {
    SisFunction h(F);
    h.add_term({QuasiCharacter::trivial(F.p), 0, phi});
    return h;
  }

  const FieldDesc& field() const { return F_; }
  const std::vector<SisTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  void add_term(SisTerm t) {
    if (!t.phi.empty()) terms_.push_back(std::move(t));
  }

  Cx eval(const Padic& t) const {
    if (t.is_zero()) throw std::domain_error("SisFunction: evaluated at 0");
    Cx s = 0.0;
    for (const auto& term : terms_) {
      Cx v = term.phi.eval1(t);
      if (std::abs(v) == 0.0) continue;
      s += term.chi(t) * std::pow(static_cast<double>(t.val()), term.k) * v;
    }
    return s;
  }

  friend SisFunction operator+(const SisFunction& a, const SisFunction& b) {
    SisFunction r = a;
    for (const auto& t : b.terms_) r.terms_.push_back(t);
    return r;
  }
  friend SisFunction operator*(Cx c, const SisFunction& a) {
    SisFunction r = a;
    for (auto& t : r.terms_) t.phi = c * t.phi;
    return r;
  }

  // m_s(mu): multiply by mu(t)|t|^s; mu_ext already carries the |.|^s shift.
  SisFunction mul_char(const QuasiCharacter& mu_ext) const {
    SisFunction r = *this;
    for (auto& t : r.terms_) t.chi = t.chi * mu_ext;
    return r;
  }
  // t(delta): h(t * delta).
  SisFunction translate(const Padic& delta) const {
    SisFunction r(F_);
    for (const auto& t : terms_) {
      Cx c = t.chi(delta);
      std::int64_t d = delta.val();
      // (v+d)^k phi(t delta) expands over powers of v.
      for (int j = 0; j <= t.k; ++j) {
        Cx coef = c * binom(t.k, j) * std::pow(static_cast<double>(d), t.k - j);
        r.add_term({t.chi, j, coef * t.phi.scale_arg(delta)});
      }
    }
    return r;
  }

  // Compact support on F^x: every ball term avoids 0 (after normalization).
  bool compactly_supported() const {
    for (const auto& t : terms_) {
      BallFunction p = t.phi;
      p.normalize();
      for (const auto& bt : p.terms())
        if (bt.center[0].is_zero() || bt.center[0].val() >= bt.radius[0]) return false;
    }
    return true;
  }

 private:
  FieldDesc F_;
  std::vector<SisTerm> terms_;
};

namespace detail {

// Unit-character components of a level-L function on the unit shell:
// A(xi) = average over u of f(u) xi(u); contributions reported via sink.
template <typename Fn, typename Sink>
void unit_components(const FieldDesc& F, int L, Fn&& f, Sink&& sink) {
  if (L <= 0) L = 1;
  const auto& G = UnitGroupTable::get(F.p, L);
  // Tabulate f along powers of the generator.
  std::vector<Cx> fv(static_cast<size_t>(G.order));
  std::int64_t x = 1;
  for (std::int64_t e = 0; e < G.order; ++e) {
    fv[static_cast<size_t>(e)] = f(x);
    x = mulmod(x, G.gen, G.mod);
  }
  for (std::int64_t k = 0; k < G.order; ++k) {
    Cx s = 0.0;
    for (std::int64_t e = 0; e < G.order; ++e)
      s += fv[static_cast<size_t>(e)] * unit_root(k * e, G.order);
    s /= static_cast<double>(G.order);
    if (std::abs(s) > 1e-14) sink(UnitCharacter(F.p, L, k), s);
  }
}

}  // namespace detail

// Exact Mellin transform: per target unit character xi, the rational function
// equal to Int h(t) xi(t) |t|^s d^x t on its convergence region.
inline MellinData mellin_transform(const SisFunction& h) {
  const FieldDesc& F = h.field();
  MellinData M(F);
  AdditiveCharacter psi(F);
  for (const auto& term : h.terms()) {
    BallFunction phi = term.phi;
    phi.normalize();
    const Cx z = term.chi.z;
    const int k = term.k;
    const UnitCharacter& xi0 = term.chi.xi;
    for (const auto& bt : phi.terms()) {
      const Padic& a = bt.center[0];
      const Padic& b = bt.phase[0];
      const std::int64_t r = bt.radius[0];
      auto shell_level = [&](std::int64_t n) {
        std::int64_t L = 1;
        L = std::max<std::int64_t>(L, xi0.c);
        if (!b.is_zero()) L = std::max(L, -b.val() - n);
        return static_cast<int>(L);
      };
      if (!a.is_zero() && a.val() < r) {
        // Ball inside the single shell n0 = v(a).
        std::int64_t n0 = a.val();
        int L = std::max(shell_level(n0), static_cast<int>(r - n0));
        auto f = [&](std::int64_t u) -> Cx {
          Padic t = Padic::make(F, n0, u);
          Padic d = t - a;
          if (!(d.is_zero() || d.val() >= r)) return 0.0;
          Cx v = bt.coeff * xi0.eval_unit(u);
          if (!b.is_zero()) v *= psi(b * t);
          return v;
        };
        Cx front = std::pow(z, static_cast<double>(n0)) * std::pow(static_cast<double>(n0), k);
        detail::unit_components(F, L, f, [&](const UnitCharacter& xi, Cx A) {
          M.add(xi, LaurentRational::monomial(front * A, n0));
        });
      } else {
        // Ball = P^r: all shells n >= r.
        std::int64_t n1 = r;
        if (!b.is_zero()) n1 = std::max(n1, -b.val());
        for (std::int64_t n = r; n < n1; ++n) {
          int L = shell_level(n);
          auto f = [&](std::int64_t u) -> Cx {
            Padic t = Padic::make(F, n, u);
            Cx v = bt.coeff * xi0.eval_unit(u);
            if (!b.is_zero()) v *= psi(b * t);
            return v;
          };
          Cx front = std::pow(z, static_cast<double>(n)) * std::pow(static_cast<double>(n), k);
          detail::unit_components(F, L, f, [&](const UnitCharacter& xi, Cx A) {
            M.add(xi, LaurentRational::monomial(front * A, n));
          });
        }
        // Geometric tail: only the component xi = xi0^{-1} survives.
        M.add(xi0.inverse(), bt.coeff * power_tail(k, z, n1));
      }
    }
  }
  M.prune();
  return M;
}

// Inverse of mellin_transform (Paley-Wiener bijection): Laurent-polynomial
// parts become shell functions, pole terms become quasi-character tails.
inline SisFunction mellin_invert(const MellinData& M) {
  const FieldDesc& F = M.F;
  SisFunction h(F);
  for (const auto& [xi, R] : M.comp) {
    LaurentRational poly;
    std::vector<LaurentRational::PoleTerm> poles;
    R.partial_fractions(poly, poles);
    if (!poly.is_zero()) {
      for (std::int64_t m = poly.shift();
           m < poly.shift() + static_cast<std::int64_t>(poly.num().size()); ++m) {
        Cx c = poly.poly_coeff(m);
        if (std::abs(c) < 1e-14) continue;
        h.add_term({QuasiCharacter(xi.inverse(), Cx(1, 0)), 0, c * BallFunction::unit_shell(F, m)});
      }
    }
    for (const auto& pt : poles) {
      // a / (1-bX)^l  <-  a * binom(v+l-1, l-1) * b^v * xi^{-1}(u) on O\{0}.
      // Expand binom(v+l-1, l-1) = prod_{j=1..l-1}(v+j)/(l-1)! in powers of v.
      std::vector<double> cpoly = {1.0};
      for (int j = 1; j <= pt.l - 1; ++j) {
        std::vector<double> nxt(cpoly.size() + 1, 0.0);
        for (size_t i = 0; i < cpoly.size(); ++i) {
          nxt[i] += cpoly[i] * j;   // constant of (v + j)
          nxt[i + 1] += cpoly[i];   // v part
        }
        cpoly = nxt;
      }
      double fact = 1.0;
      for (int j = 2; j <= pt.l - 1; ++j) fact *= j;
      BallFunction O = BallFunction::lattice(F, 1, 0);
      for (size_t j = 0; j < cpoly.size(); ++j) {
        Cx coef = pt.a * cpoly[j] / fact;
        if (std::abs(coef) < 1e-16) continue;
        h.add_term({QuasiCharacter(xi.inverse(), pt.beta), static_cast<int>(j), coef * O});
      }
    }
  }
  return h;
}

// The inversion operator i(h)(t) = h(1/t) at the Mellin level:
// component xi of i(h) is the X -> 1/X substitution of component xi^{-1}.
inline MellinData mellin_invert_argument(const MellinData& M) {
  MellinData R(M.F);
  for (const auto& [xi, r] : M.comp) R.add(xi.inverse(), r.reflect_var());
  return R;
}

// Pointwise approximate equality of two sis functions on the shells
// |v| <= vrange (all unit classes at level 2).
inline bool sis_approx_equal(const SisFunction& a, const SisFunction& b, std::int64_t vrange = 6,
                             double tol = 1e-9) {
  const FieldDesc& F = a.field();
  std::int64_t pm = F.pk(2);
  for (std::int64_t n = -vrange; n <= vrange; ++n)
    for (std::int64_t u = 1; u < pm; ++u) {
      if (u % F.p == 0) continue;
      Padic t = Padic::make(F, n, u);
      if (std::abs(a.eval(t) - b.eval(t)) > tol) return false;
    }
  return true;
}

}  // namespace plha
