// Local zeta integrals as exact rational functions of X = q^{-s}: the GL(1)
// (Tate) zeta integral, the GL(3) x GL(1) Rankin-Selberg integrals in three
// shapes (torus, row-integrated, Schwartz-weighted), a two-variable double
// zeta integral stored as a finite sum of separable products, the Plancherel
// pairing over the second variable, and the unramified GL(3) x GL(2)
// Euler-factor identity as truncated series. Numeric shell-coefficient
// evaluators of the dual-side integrals back the functional-equation tests;
// the dual Whittaker function is always evaluated through gl3_eval_dual on a
// transformed argument, never via a second stored representation.
#pragma once

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "plha/gamma.hpp"
#include "plha/matrix.hpp"
#include "plha/mellin.hpp"
#include "plha/whittaker.hpp"

namespace plha {

// ---------------------------------------------------------------------------
// GL(1).

// Z(s, Phi, chi) = Int_{F^x} Phi(t) chi(t) |t|^s d^x t.
inline LaurentRational tate_zeta(const FieldDesc& F, const BallFunction& Phi,
                                 const QuasiCharacter& chi) {
  assert(Phi.dim() == 1);
  return mellin_transform(SisFunction::from_ball(F, Phi)).at(chi.xi).scale_var(chi.z);
}

// Int h(t) chi(t) |t|^{s - tshift} d^x t: the |t|^{-tshift} is folded into the
// variable (X -> chi(p)^{-1}-free form: each shell n carries (chi.z q^tshift X)^n).
inline LaurentRational sis_zeta(const SisFunction& h, const QuasiCharacter& chi, int tshift) {
  const FieldDesc& F = h.field();
  Cx scale = chi.z * std::pow(static_cast<double>(F.p), static_cast<double>(tshift));
  return mellin_transform(h).at(chi.xi).scale_var(scale);
}

// Additive integral Int_O Phi(x) dx with vol(O, dx) = 1 (finite shell sums
// plus the exactly-constant tail around 0).
inline Cx lattice_integral(const FieldDesc& F, const BallFunction& Phi0) {
  assert(Phi0.dim() == 1);
  BallFunction Phi = Phi0;
  Phi.normalize();
  if (Phi.terms().empty()) return 0.0;
  std::int64_t lev = 1;
  for (const auto& t : Phi.terms()) {
    lev = std::max(lev, t.radius[0]);
    if (!t.phase[0].is_zero()) lev = std::max(lev, -t.phase[0].val());
  }
  double q = static_cast<double>(F.p);
  Cx total = 0.0;
  for (std::int64_t n = 0; n < lev; ++n) {
    int m = static_cast<int>(std::max<std::int64_t>(1, lev - n));
    total += std::pow(q, -static_cast<double>(n)) * (1.0 - 1.0 / q) *
             shell_integral(F, n, m, [&](const Padic& x) { return Phi.eval1(x); });
  }
  total += std::pow(q, -static_cast<double>(lev)) * Phi.eval({Padic::zero(F)});
  return total;
}

// Local-constancy level of a Schwartz function on F: Phi is constant on the
// cosets x + P^m for m at least this value.
inline std::int64_t ball_constancy_level(const BallFunction& Phi0) {
  BallFunction Phi = Phi0;
  Phi.normalize();
  std::int64_t lev = 1;
  for (const auto& t : Phi.terms()) {
    lev = std::max(lev, t.radius[0]);
    if (!t.phase[0].is_zero()) lev = std::max(lev, -t.phase[0].val());
  }
  return lev;
}

// Lowest valuation attained on the support of a Schwartz function on F.
inline std::int64_t ball_support_floor(const BallFunction& Phi0) {
  BallFunction Phi = Phi0;
  Phi.normalize();
  std::int64_t vmin = 0;
  for (const auto& t : Phi.terms()) {
    const Padic& a = t.center[0];
    if (!a.is_zero() && a.val() < t.radius[0])
      vmin = std::min(vmin, a.val());
    else
      vmin = std::min(vmin, t.radius[0]);
  }
  return vmin;
}

// ---------------------------------------------------------------------------
// Row decomposition of a GL(3) section Whittaker function.
//
// The function x -> W(diag(t,1,1) nlow(x)) has compact support P^{-N}
// independent of t and is invariant under x -> x + P^n; enumerating
// representatives alpha of P^{-N}/P^n turns every (t, x)-integral below into
// a finite sum of exact one-variable Mellin transforms. The window (N, n) is
// found adaptively (the rows are exact objects, so vanishing and invariance
// are decidable checks); stability under (N, n) bumps is asserted in tests.

struct RowWindow {
  std::int64_t N = 0;  // support bound: rows vanish for v(x) < -N
  std::int64_t n = 1;  // invariance level: row(x) = row(x + P^n)
};

namespace detail {

inline bool mellin_is_zero(const MellinData& M, double tol = 1e-10) {
  double mx = 0.0;
  for (const auto& [xi, R] : M.comp)
    for (Cx c : R.num()) mx = std::max(mx, std::abs(c));
  return mx <= tol;
}

inline bool mellin_approx_equal(const MellinData& A, const MellinData& B, double tol = 1e-9) {
  for (const auto& [xi, R] : A.comp)
    if (!approx_equal(R, B.at(xi), tol)) return false;
  for (const auto& [xi, R] : B.comp)
    if (!approx_equal(R, A.at(xi), tol)) return false;
  return true;
}

}  // namespace detail

inline RowWindow row_window(const WhittakerGL3& W) {
  assert(W.kind == WhittakerGL3::Kind::Godement);
  const FieldDesc& F = W.F;
  RowWindow rw;
  // Support bound: grow N until every sampled row at valuation -(N+1) is zero.
  for (; rw.N < 8; ++rw.N) {
    bool allzero = true;
    for (std::int64_t u = 1; u < F.pk(2) && allzero; ++u) {
      if (u % F.p == 0) continue;
      Padic x = Padic::make(F, -(rw.N + 1), u);
      allzero = detail::mellin_is_zero(mellin_transform(gl3_kirillov_row(W, x)));
    }
    if (allzero) break;
  }
  if (rw.N >= 8) throw std::domain_error("row_window: support overflow");
  // Invariance level: grow n until sampled rows are coset-constant.
  std::vector<Padic> samples = {Padic::zero(F)};
  for (std::int64_t v = -rw.N; v <= 0; ++v) {
    samples.push_back(Padic::make(F, v, 1));
    samples.push_back(Padic::make(F, v, 2));
  }
  for (; rw.n < 8; ++rw.n) {
    bool stable = true;
    for (const Padic& a : samples) {
      MellinData Ma = mellin_transform(gl3_kirillov_row(W, a));
      for (std::int64_t w : {1, 2}) {
        Padic b = a + Padic::make(F, rw.n, w);
        if (!detail::mellin_approx_equal(Ma, mellin_transform(gl3_kirillov_row(W, b)))) {
          stable = false;
          break;
        }
      }
      if (!stable) break;
    }
    if (stable) break;
  }
  if (rw.n >= 8) throw std::domain_error("row_window: level overflow");
  return rw;
}

// ---------------------------------------------------------------------------
// GL(3) x GL(1) zeta integrals.

// Shapes of the integral Int W(diag(t,1,1) ...) chi(t) |t|^{s-1} d^x t:
//   kTorus:    no row coordinate (evaluation at diag(t,1,1));
//   kRow:      additive integral over the lower row coordinate x;
//   kWeighted: row integral weighted by a Schwartz function Phi(x).
enum class RsShape { kTorus, kRow, kWeighted };

// Exact rational function for section data; truncated power series (a Laurent
// polynomial of the requested degree) for spherical data with unramified chi.
inline LaurentRational rs_gl3_gl1(const WhittakerGL3& W, const QuasiCharacter& chi, RsShape shape,
                                  const BallFunction* Phi = nullptr, std::int64_t degree = 20,
                                  std::int64_t bump_N = 0, std::int64_t bump_n = 0) {
  const FieldDesc& F = W.F;
  if (shape == RsShape::kWeighted) {
    assert(Phi != nullptr && Phi->dim() == 1);
  }
  if (W.kind == WhittakerGL3::Kind::Spherical) {
    if (chi.xi.c != 0)
      throw std::domain_error("rs_gl3_gl1: spherical data requires an unramified character");
    // Unramified row fact: W(diag(t,1,1) nlow(x)) = W(diag(t,1,1)) 1_O(x), so
    // all three shapes differ by the constant Int_O (Phi or 1) dx = weight.
    Cx weight = shape == RsShape::kWeighted ? lattice_integral(F, *Phi) : Cx(1, 0);
    Cx step = chi.z * static_cast<double>(F.p);  // chi(p) q from |t|^{s-1}
    LaurentRational S = LaurentRational::zero();
    for (std::int64_t m = 0; m <= degree; ++m) {
      Cx c = weight * gl3_spherical_torus(W, m, 0) * std::pow(step, static_cast<double>(m));
      S = S + LaurentRational::monomial(c, m);
    }
    return S;
  }
  if (shape == RsShape::kTorus)
    return sis_zeta(gl3_kirillov_row(W, Padic::zero(F)), chi, 1);
  RowWindow rw = row_window(W);
  std::int64_t N = rw.N + bump_N;
  std::int64_t n = rw.n + bump_n;
  if (shape == RsShape::kWeighted) n = std::max(n, ball_constancy_level(*Phi));
  double q = static_cast<double>(F.p);
  Cx cellvol = std::pow(q, -static_cast<double>(n));
  LaurentRational S = LaurentRational::zero();
  std::int64_t count = F.pk(static_cast<int>(N + n));
  for (std::int64_t j = 0; j < count; ++j) {
    Padic alpha = Padic::make(F, -N, j);
    Cx w = cellvol;
    if (shape == RsShape::kWeighted) w *= Phi->eval({alpha});
    if (std::abs(w) < 1e-15) continue;
    S = S + w * sis_zeta(gl3_kirillov_row(W, alpha), chi, 1);
  }
  return S;
}

// ---------------------------------------------------------------------------
// The double zeta integral
//   Z(s1, s2) = Int Int W(lower(t1, t2)) chi1(t1) chi2(t2) |t1|^{s1-1} |t2|^{s2},
// as a function of (X1, X2) = (q^{-s1}, q^{-s2}) and of the unit part of chi2:
// for each unit character xi2, a finite list of separable products
// R1(X1) * R2(X2) (all denominators are univariate by construction). The pair
// (xi2, X2) parametrizes chi2 = xi2 |.|^{s2}; an extra chi2(p)-value z2 is
// applied by scaling X2.

struct ZetaResult {
  FieldDesc F;
  std::map<UnitCharacter, std::vector<std::pair<LaurentRational, LaurentRational>>> comp;

  void add(const UnitCharacter& xi, LaurentRational a, LaurentRational b) {
    if (a.is_zero() || b.is_zero()) return;
    comp[xi].push_back({std::move(a), std::move(b)});
  }
  // The rational function of X1 at a fixed chi2 = (xi2, z2) |.|^{s2}-slice,
  // evaluated at X2 = x2.
  LaurentRational at_chi2(const QuasiCharacter& chi2, Cx x2) const {
    LaurentRational S = LaurentRational::zero();
    auto it = comp.find(chi2.xi);
    if (it == comp.end()) return S;
    for (const auto& [a, b] : it->second) S = S + b.eval(chi2.z * x2) * a;
    return S;
  }
};

inline ZetaResult double_zeta(const WhittakerGL3& W, const QuasiCharacter& chi1,
                              std::int64_t bump_N = 0, std::int64_t bump_n = 0) {
  const FieldDesc& F = W.F;
  ZetaResult Z{F, {}};
  if (W.kind == WhittakerGL3::Kind::Spherical) {
    if (chi1.xi.c != 0)
      throw std::domain_error("double_zeta: spherical data requires an unramified character");
    // W(lower(t1, t2)) = W(diag(t1,1,1)) 1_O(t2): the t2-integral is the Tate
    // zeta of 1_O, whose only surviving component is the unramified one.
    LaurentRational A = rs_gl3_gl1(W, chi1, RsShape::kTorus);
    Z.add(UnitCharacter::trivial(F.p), A, LaurentRational::geometric(Cx(1, 0), 0, Cx(1, 0)));
    return Z;
  }
  RowWindow rw = row_window(W);
  std::int64_t N = rw.N + bump_N;
  std::int64_t n = rw.n + bump_n;
  std::int64_t count = F.pk(static_cast<int>(N + n));
  for (std::int64_t j = 0; j < count; ++j) {
    Padic alpha = Padic::make(F, -N, j);
    LaurentRational A = sis_zeta(gl3_kirillov_row(W, alpha), chi1, 1);
    if (A.is_zero()) continue;
    // Tate zeta of the cell indicator 1_{alpha + P^n} in the second variable.
    BallFunction cell = BallFunction::indicator(F, {alpha}, {n});
    MellinData T = mellin_transform(SisFunction::from_ball(F, cell));
    for (const auto& [xi2, R2] : T.comp) Z.add(xi2, A, R2);
  }
  return Z;
}

// Plancherel pairing over the second variable on the line Re s2 = c:
//   Sum_{xi2} Int Z(s1, s2; chi1, chi2; W) Z(1-s2, chi2^{-1}, Phi) dmu(chi2 |.|^{s2})
// recovers the Phi-weighted GL(3) x GL(1) integral. The contour integral per
// unit character is the diagonal coefficient pairing on |X2| = q^{-c}.
inline LaurentRational plancherel_pair_tate(const ZetaResult& Z, const BallFunction& Phi,
                                            double c) {
  const FieldDesc& F = Z.F;
  double q = static_cast<double>(F.p);
  double radius = std::pow(q, -c);
  LaurentRational out = LaurentRational::zero();
  for (const auto& [xi2, terms] : Z.comp) {
    // Z(1 - s2, chi2^{-1}, Phi) as a function of X2 = q^{-s2}.
    LaurentRational T =
        tate_zeta(F, Phi, QuasiCharacter(xi2.inverse(), Cx(1, 0))).reflect_var_q(q);
    if (T.is_zero()) continue;
    for (const auto& [a, b] : terms) out = out + diagonal_pair(b, T, radius) * a;
  }
  // Plancherel measure dual to d^x t with vol(O^x) = 1: each unit-character
  // component carries the contour integral weighted by (1 - 1/q).
  return (1.0 - 1.0 / q) * out;
}

// ---------------------------------------------------------------------------
// Numeric dual-side shell coefficients (functional-equation oracles).
//
// W'(g) := W~(g w31) with W~(g) = W(w3 g^iota); both sides of the functional
// equations pair a rational function of X against the power-series
// coefficients of the dual integral in Y = q^{-(1-s)}, computed below by
// finite shell enumeration.

inline Cx gl3_dual_w31(const WhittakerGL3& W, const Mat3& g, std::int64_t window_bump = 0,
                       std::int64_t level_bump = 0, int cell_bump = 0) {
  return gl3_eval_dual(W, g * weyl_w31(W.F), window_bump, level_bump, cell_bump);
}

// Coefficient of Y^v in
//   Psi(s', W', chi^{-1}; PhiW) = Int Int W'(diag(t,1,1) nlow(x)) PhiW(x) dx
//                                 chi^{-1}(t) |t|^{s'-1} d^x t,  Y = q^{-s'}:
//   q^v * shell-average over v(t) = v of chi^{-1}(t) times the x-integral.
// unit_level resolves the t-unit dependence, x_level the x-cosets; both must
// dominate the corresponding local-constancy levels (asserted by bump tests).
inline Cx dual_rs_coeff(const WhittakerGL3& W, const QuasiCharacter& chi,
                        const BallFunction& PhiW, std::int64_t v, int unit_level,
                        std::int64_t x_level, std::int64_t window_bump = 0,
                        std::int64_t level_bump = 0, int cell_bump = 0) {
  const FieldDesc& F = W.F;
  double q = static_cast<double>(F.p);
  std::int64_t L = std::max(x_level, ball_constancy_level(PhiW));
  std::int64_t vmin = ball_support_floor(PhiW);
  std::int64_t count = F.pk(static_cast<int>(L - vmin));
  double xvol = std::pow(q, -static_cast<double>(L));
  QuasiCharacter chii = chi.inverse();
  Cx avg = shell_integral(F, v, unit_level, [&](const Padic& t) {
    Mat3 d = diag3(F, t, Padic::from_int(F, 1), Padic::from_int(F, 1));
    Cx inner = 0.0;
    for (std::int64_t j = 0; j < count; ++j) {
      Padic x = Padic::make(F, vmin, j);
      Cx wt = PhiW.eval({x}) * xvol;
      if (std::abs(wt) < 1e-15) continue;
      Mat3 nl = Mat3::identity(F);
      nl.at(1, 0) = x;
      inner += wt * gl3_dual_w31(W, d * nl, window_bump, level_bump, cell_bump);
    }
    return chii(t) * inner;
  });
  return std::pow(q, static_cast<double>(v)) * avg;
}

// Coefficient of Y1^{v1} Y2^{v2} in
//   Z(s1', s2'; chi1^{-1}, chi2^{-1}; W'), (Y1, Y2) = (q^{-s1'}, q^{-s2'}):
//   q^{v1} * double shell average of W'(lower(t1,t2)) chi1^{-1} chi2^{-1}.
inline Cx dual_double_zeta_coeff(const WhittakerGL3& W, const QuasiCharacter& chi1,
                                 const QuasiCharacter& chi2, std::int64_t v1, std::int64_t v2,
                                 int unit_level, std::int64_t window_bump = 0,
                                 std::int64_t level_bump = 0, int cell_bump = 0) {
  const FieldDesc& F = W.F;
  double q = static_cast<double>(F.p);
  QuasiCharacter c1i = chi1.inverse(), c2i = chi2.inverse();
  Cx avg = shell_integral(F, v1, unit_level, [&](const Padic& t1) {
    return shell_integral(F, v2, unit_level, [&](const Padic& t2) {
      Mat3 g = Mat3::identity(F);
      g.at(0, 0) = t1;
      g.at(1, 0) = t2;
      return c1i(t1) * c2i(t2) * gl3_dual_w31(W, g, window_bump, level_bump, cell_bump);
    });
  });
  return std::pow(q, static_cast<double>(v1)) * avg;
}

// ---------------------------------------------------------------------------
// Unramified GL(3) x GL(2) Euler-factor identity.
//
// Both sides of
//   Sum over the GL(2) torus of (GL(3) spherical torus value) x (normalized
//   GL(2) flat-section spherical value) x |det|^{s-1/2}
//     = L(1+2s1, omega^{-1>chi^2)^{-1} L(s+s1, Pi x chi) L(s-s1, Pi x omega chi^{-1})
// as power series in X = q^{-s} to the requested degree, with
// beta1 = chi(p) q^{-s1} and beta2 = (omega chi^{-1})(p) q^{s1} the Satake
// parameters of the flat section.

struct SeriesPair {
  std::vector<Cx> lhs, rhs;  // coefficients of X^0 .. X^D
};

inline SeriesPair rs_unramified_gl3_gl2(const FieldDesc& F, const std::array<Cx, 3>& alpha,
                                        Cx beta1, Cx beta2, int D) {
  double q = static_cast<double>(F.p);
  WhittakerGL3 S = WhittakerGL3::spherical(F, alpha[0], alpha[1], alpha[2]);
  Cx pref = Cx(1, 0) - beta1 / (beta2 * q);  // L(1+2s1, omega^{-1}chi^2)^{-1}
  SeriesPair out;
  out.lhs.assign(static_cast<size_t>(D + 1), Cx(0, 0));
  // Torus sum: t = diag(p^{k+l}, p^l), measure weight delta^{-1} = q^k,
  // |det|^{s-1/2} = q^{(k+2l)/2} X^{k+2l}, flat-section value
  // (beta1 beta2)^l q^{-k/2} h_k(beta1, beta2).
  for (int k = 0; k <= D; ++k)
    for (int l = 0; k + 2 * l <= D; ++l) {
      Cx c = gl3_spherical_torus(S, k, l) * complete_homog(k, {beta1, beta2}) *
             std::pow(beta1 * beta2, static_cast<double>(l)) *
             std::pow(q, static_cast<double>(k + l));
      out.lhs[static_cast<size_t>(k + 2 * l)] += pref * c;
    }
  // Right side: pref * prod_{i,j} (1 - alpha_i beta_j X)^{-1} expanded.
  out.rhs.assign(static_cast<size_t>(D + 1), Cx(0, 0));
  out.rhs[0] = pref;
  for (Cx ab : {alpha[0] * beta1, alpha[1] * beta1, alpha[2] * beta1, alpha[0] * beta2,
                alpha[1] * beta2, alpha[2] * beta2}) {
    std::vector<Cx> next(out.rhs.size(), Cx(0, 0));
    for (size_t m = 0; m < out.rhs.size(); ++m) {
      Cx pw(1, 0);
      for (size_t j = m; j < out.rhs.size(); ++j) {
        next[j] += out.rhs[m] * pw;
        pw *= ab;
      }
    }
    out.rhs = next;
  }
  return out;
}

}  // namespace plha
