// Evaluable Whittaker/Kirillov functions at the level of exact finite sums:
// GL(2) spherical (Casselman-Shalika values), GL(2) sections built from a
// Schwartz function on the row space F^2, GL(2) dihedral via the Weil
// representation on S(E), GL(3) spherical (Shintani) and GL(3) sections
// induced from GL(2) x GL(1) data. Every evaluation is a finite sum; the
// Kirillov restrictions are returned as simple-singularity functions whose
// Mellin transforms are exact rational functions.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include "plha/ball.hpp"
#include "plha/ext.hpp"
#include "plha/gamma.hpp"
#include "plha/matrix.hpp"
#include "plha/mellin.hpp"

namespace plha {

// ---------------------------------------------------------------------------
// Symmetric-function helpers (Shintani / Casselman-Shalika values).

// Complete homogeneous symmetric polynomial h_k(alpha), k >= 0.
inline Cx complete_homog(std::int64_t k, const std::vector<Cx>& alpha) {
  if (k < 0) return 0.0;
  // DP over variables: h_k(a_1..a_m) = sum_j a_m^j h_{k-j}(a_1..a_{m-1}).
  std::vector<Cx> h(static_cast<size_t>(k + 1), Cx(0, 0));
  h[0] = 1.0;
  for (Cx a : alpha)
    for (std::int64_t j = 1; j <= k; ++j) h[static_cast<size_t>(j)] += a * h[static_cast<size_t>(j - 1)];
  return h[static_cast<size_t>(k)];
}

// Schur polynomial s_{(l1,l2,0)}(alpha1,alpha2,alpha3), l1 >= l2 >= 0,
// via the Jacobi-Trudi determinant det(h_{lambda_i - i + j}).
inline Cx schur3(std::int64_t l1, std::int64_t l2, const std::array<Cx, 3>& a) {
  if (l1 < l2 || l2 < 0) return 0.0;
  std::vector<Cx> al(a.begin(), a.end());
  std::array<std::int64_t, 3> lam = {l1, l2, 0};
  Cx m[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = complete_homog(lam[static_cast<size_t>(i)] - i + j, al);
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// ---------------------------------------------------------------------------
// Small SisFunction utilities.

// h(t) * psi(b t).
inline SisFunction sis_mul_phase(const SisFunction& h, const Padic& b) {
  SisFunction r(h.field());
  for (auto term : h.terms()) {
    BallFunction phi = term.phi;
    phi.normalize();
    BallFunction out(h.field(), 1);
    for (auto bt : phi.terms()) {
      bt.phase[0] = bt.phase[0] + b;
      out.add_term(std::move(bt));
    }
    term.phi = out;
    r.add_term(std::move(term));
  }
  return r;
}

namespace detail {

// Componentwise product of two Mellin-transform families (convolution on the
// function side): component xi of the result is M1(xi) * M2(xi).
inline MellinData mellin_component_product(const MellinData& M1, const MellinData& M2) {
  MellinData R(M1.F);
  for (const auto& [xi, r1] : M1.comp) {
    auto it = M2.comp.find(xi);
    if (it != M2.comp.end()) R.add(xi, r1 * it->second);
  }
  return R;
}

// The two coordinate factors of a single phased-ball term on F^2, as 1-dim
// ball functions T1 (carrying the coefficient) and T2 (coefficient 1).
inline std::pair<BallFunction, BallFunction> split_term(const FieldDesc& F, const BallTerm& t) {
  BallFunction T1(F, 1), T2(F, 1);
  BallTerm a, b;
  a.coeff = t.coeff;
  a.center = {t.center[0]};
  a.radius = {t.radius[0]};
  a.phase = {t.phase[0]};
  b.coeff = Cx(1, 0);
  b.center = {t.center[1]};
  b.radius = {t.radius[1]};
  b.phase = {t.phase[1]};
  T1.add_term(std::move(a));
  T2.add_term(std::move(b));
  return {T1, T2};
}

}  // namespace detail

// Phi(X g) for Phi on the row space F^2 (X a row vector).
inline BallFunction right_translate_row2(const BallFunction& Phi, const Mat2& g) {
  std::vector<std::vector<Padic>> M(2, std::vector<Padic>());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) M[static_cast<size_t>(i)].push_back(g.at(j, i));
  return Phi.substitute(M);
}

// Exact cross integral  Int Psi(t, t^{-1}) chi(t) d^x t  for a phased-ball
// Psi on F^2: each term confines v(t) to a finite window, and each shell is a
// finite average at the term's local-constancy level.
inline Cx cross_integral(const BallFunction& Psi0, const QuasiCharacter& chi) {
  const FieldDesc& F = Psi0.field();
  BallFunction Psi = Psi0;
  Psi.normalize();
  Cx total = 0.0;
  for (const auto& t : Psi.terms()) {
    const std::int64_t big = std::numeric_limits<std::int64_t>::max() / 8;
    std::int64_t lo = -big, hi = big;
    // t in ball(a1, r1) constrains v(t); t^{-1} in ball(a2, r2) constrains -v(t).
    const Padic& a1 = t.center[0];
    const Padic& a2 = t.center[1];
    if (!a1.is_zero() && a1.val() < t.radius[0]) {
      lo = std::max(lo, a1.val());
      hi = std::min(hi, a1.val());
    } else {
      lo = std::max(lo, t.radius[0]);
    }
    if (!a2.is_zero() && a2.val() < t.radius[1]) {
      lo = std::max(lo, -a2.val());
      hi = std::min(hi, -a2.val());
    } else {
      hi = std::min(hi, -t.radius[1]);
    }
    if (lo > hi) continue;
    assert(hi - lo <= 64 && "cross_integral: unbounded window");
    BallFunction one(F, 2);
    one.add_term(t);
    for (std::int64_t n = lo; n <= hi; ++n) {
      std::int64_t L = std::max<std::int64_t>(1, chi.xi.c);
      L = std::max(L, t.radius[0] - n);
      L = std::max(L, t.radius[1] + n);
      if (!t.phase[0].is_zero()) L = std::max(L, -t.phase[0].val() - n);
      if (!t.phase[1].is_zero()) L = std::max(L, -t.phase[1].val() + n);
      assert(L <= F.N - 2);
      total += shell_integral(F, n, static_cast<int>(L), [&](const Padic& x) {
        return one.eval({x, x.inv()}) * chi(x);
      });
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// The Weil representation on S(E) in coordinates v = v1 + v2 sqrt(rho).

// psi(x Nr v) Phi(v): exact after refining cells so the quadratic remainder
// ball falls inside the conductor of psi.
inline BallFunction weil_n(const ExtField& E, const Padic& x, const BallFunction& Phi) {
  const FieldDesc& F = E.F;
  if (x.is_zero()) return Phi;
  AdditiveCharacter psi(F);
  Padic rho = Padic::from_int(F, E.rho);
  Padic two = Padic::from_int(F, 2);
  std::int64_t rmin = x.val() >= 0 ? 0 : (-x.val() + 1) / 2;  // ceil(-v(x)/2)
  BallFunction base = Phi.refine_coord(0, rmin).refine_coord(1, rmin);
  BallFunction r(F, 2);
  for (auto t : base.terms()) {
    const Padic a1 = t.center[0], a2 = t.center[1];
    Padic nra = a1 * a1 - rho * (a2 * a2);
    t.coeff *= psi(-x * nra);
    t.phase[0] = t.phase[0] + two * x * a1;
    t.phase[1] = t.phase[1] - two * x * rho * a2;
    r.add_term(std::move(t));
  }
  r.normalize();
  return r;
}

// |Nr b|^{1/2} eta(b) Phi(b v) for b in E^x.
inline BallFunction weil_mult(const ExtField& E, const ExtCharacter& eta, const EPadic& b,
                              const BallFunction& Phi) {
  const FieldDesc& F = E.F;
  Padic rho = Padic::from_int(F, E.rho);
  std::vector<std::vector<Padic>> M = {{b.a, rho * b.b}, {b.b, b.a}};
  Padic nr = norm(E, b);
  Cx c = std::sqrt(nr.abs()) * eta(E, b);
  return c * Phi.substitute(M);
}

// |a| etaE(a) Phi(a v) for a in F^x (etaE the unramified quadratic class
// character of E/F).
inline BallFunction weil_torus(const ExtField& E, const Padic& a, const BallFunction& Phi) {
  (void)E;
  Cx c = a.abs() * ((a.val() % 2 == 0) ? 1.0 : -1.0);
  return c * Phi.scale_arg(a);
}

// lambda(E/F, psi) Phi^iota with Phi^iota(v) = Int Phi(u) psi(Tr(u conj(v))) du.
inline BallFunction weil_w(const ExtField& E, const BallFunction& Phi) {
  const FieldDesc& F = E.F;
  BallFunction G = Phi.fourier(+1, {0, 1});
  G = G.scale_coord(0, Padic::from_int(F, 2));
  G = G.scale_coord(1, Padic::from_int(F, -2 * E.rho));
  G.normalize();
  return weil_index(E) * G;
}

// pi(diag(t1, t2)) Phi for v(t1 t2) even: diag(t1,t2) = diag(Nr b, 1) diag(t2^{-1}, t2).
inline BallFunction weil_diag(const ExtField& E, const ExtCharacter& eta, const Padic& t1,
                              const Padic& t2, const BallFunction& Phi) {
  Padic m = t1 * t2;
  assert(m.val() % 2 == 0);
  std::int64_t k = m.val() / 2;
  Padic u = Padic::make(E.F, -2 * k, 1) * m;  // unit part of the norm target
  EPadic b = solve_norm_unit(E, u);
  b = escale(b, Padic::make(E.F, k, 1));
  BallFunction inner = weil_torus(E, t2.inv(), Phi);
  return weil_mult(E, eta, b, inner);
}

// pi(h) Phi for h in GL2(F) with even det valuation, via the Bruhat word.
inline BallFunction weil_apply(const ExtField& E, const ExtCharacter& eta, const Mat2& h,
                               const BallFunction& Phi) {
  const FieldDesc& F = E.F;
  const Padic a = h.at(0, 0), b = h.at(0, 1), c = h.at(1, 0), d = h.at(1, 1);
  Padic det = h.det();
  assert(!det.is_zero() && det.val() % 2 == 0);
  if (c.is_zero()) {
    // h = n(b/d) diag(a, d)
    return weil_n(E, b / d, weil_diag(E, eta, a, d, Phi));
  }
  // h = n(a/c) diag(-det/c, -c) w' n(d/c)   (w' = [[0,1],[-1,0]])
  BallFunction f = weil_n(E, d / c, Phi);
  f = weil_w(E, f);
  f = weil_diag(E, eta, -det / c, -c, f);
  return weil_n(E, a / c, f);
}

// ---------------------------------------------------------------------------
// GL(2) Whittaker data.

struct WhittakerGL2 {
  enum class Kind { Spherical, Godement, Dihedral };
  Kind kind = Kind::Spherical;
  FieldDesc F;

  // Spherical: Satake parameters.
  Cx alpha1{1, 0}, alpha2{1, 0};

  // Godement section: Phi on the row space F^2; characters mu1, mu2.
  BallFunction Phi;
  QuasiCharacter mu1, mu2;

  // Dihedral: eta on E^x (regular, conductor <= 1), one Schwartz function on
  // E per norm-coset representative eps_j in {1, p}.
  std::shared_ptr<ExtField> E;
  ExtCharacter eta;
  std::array<BallFunction, 2> Phi_eps;

  static WhittakerGL2 spherical(const FieldDesc& F_, Cx a1, Cx a2) {
    WhittakerGL2 w;
    w.kind = Kind::Spherical;
    w.F = F_;
    w.alpha1 = a1;
    w.alpha2 = a2;
    return w;
  }
  static WhittakerGL2 godement(const FieldDesc& F_, BallFunction Phi_, QuasiCharacter m1,
                               QuasiCharacter m2) {
    WhittakerGL2 w;
    w.kind = Kind::Godement;
    w.F = F_;
    w.Phi = std::move(Phi_);
    w.mu1 = m1;
    w.mu2 = m2;
    assert(w.Phi.dim() == 2);
    return w;
  }
  static WhittakerGL2 dihedral(std::shared_ptr<ExtField> E_, const ExtCharacter& eta_,
                               BallFunction P0, BallFunction P1);

  QuasiCharacter central_character() const {
    switch (kind) {
      case Kind::Spherical:
        return QuasiCharacter(UnitCharacter::trivial(F.p), alpha1 * alpha2);
      case Kind::Godement:
        return mu1 * mu2;
      case Kind::Dihedral:
        return eta.restrict_to_base(*E) * QuasiCharacter::unramified_quadratic(F.p);
    }
    throw std::logic_error("unreachable");
  }

  RepDescriptor rep() const {
    switch (kind) {
      case Kind::Spherical:
        return RepDescriptor::ps2(F, QuasiCharacter(UnitCharacter::trivial(F.p), alpha1),
                                  QuasiCharacter(UnitCharacter::trivial(F.p), alpha2));
      case Kind::Godement:
        return RepDescriptor::ps2(F, mu1, mu2);
      case Kind::Dihedral:
        return RepDescriptor::dihedral(F, eta);
    }
    throw std::logic_error("unreachable");
  }
};

// Average of Phi(y v) eta(y) over y in E^1: the projection onto the
// eta^{-1}-equivariant subspace S(E, eta^{-1}) (used to build dihedral data).
inline BallFunction norm_one_project(const ExtField& E, const ExtCharacter& eta,
                                     const BallFunction& Phi, int level = 0) {
  const FieldDesc& F = E.F;
  Padic rho = Padic::from_int(F, E.rho);
  if (level == 0) {
    // Phi(y v) must be constant in y on classes mod p^level: pushing the
    // class radius through a point of lowest valuation in the support must
    // stay inside the finest cell radius.
    std::int64_t vmin = 0, rmax = 2;
    for (const auto& t : Phi.terms())
      for (int i = 0; i < 2; ++i) {
        auto ii = static_cast<size_t>(i);
        if (!t.center[ii].is_zero()) vmin = std::min(vmin, t.center[ii].val());
        rmax = std::max(rmax, t.radius[ii]);
        if (!t.phase[ii].is_zero()) rmax = std::max(rmax, -t.phase[ii].val());
      }
    level = static_cast<int>(std::max<std::int64_t>(2, rmax - vmin));
  }
  std::int64_t pm = F.pk(level);
  BallFunction acc(F, 2);
  std::int64_t count = 0;
  for (std::int64_t a = 0; a < pm; ++a)
    for (std::int64_t b = 0; b < pm; ++b) {
      std::int64_t nr = (mulmod(a, a, pm) - mulmod(E.rho, mulmod(b, b, pm), pm)) % pm;
      if (nr < 0) nr += pm;
      if (nr != 1 % pm) continue;
      EPadic y{Padic::from_int(F, a), Padic::from_int(F, b)};
      std::vector<std::vector<Padic>> M = {{y.a, rho * y.b}, {y.b, y.a}};
      acc = acc + eta(E, y) * Phi.substitute(M);
      ++count;
    }
  assert(count > 0);
  acc = (Cx(1, 0) / static_cast<double>(count)) * acc;
  acc.normalize();
  return acc;
}

inline WhittakerGL2 WhittakerGL2::dihedral(std::shared_ptr<ExtField> E_, const ExtCharacter& eta_,
                                           BallFunction P0, BallFunction P1) {
  WhittakerGL2 w;
  w.kind = Kind::Dihedral;
  w.F = E_->F;
  w.E = std::move(E_);
  w.eta = eta_;
  if (!w.eta.is_regular(*w.E))
    throw std::domain_error("dihedral Whittaker data: character factors through the norm");
  w.Phi_eps = {std::move(P0), std::move(P1)};
  // Equivariance Phi(y v) = eta^{-1}(y) Phi(v) for y in E^1, checked at level 2:
  // the eta-weighted average must reproduce Phi.
  for (const auto& P : w.Phi_eps) {
    BallFunction proj = norm_one_project(*w.E, w.eta, P);
    if (!approx_equal(proj, P))
      throw std::domain_error("dihedral Whittaker data: not eta^{-1}-equivariant under E^1");
  }
  return w;
}

// ---------------------------------------------------------------------------
// GL(2) evaluation.

namespace detail {

// Spherical torus value W(diag(r1, r2)).
inline Cx spherical2_diag(const WhittakerGL2& W, const Padic& r1, const Padic& r2) {
  std::int64_t m = r1.val() - r2.val();
  if (m < 0) return 0.0;
  Cx omega = std::pow(W.alpha1 * W.alpha2, static_cast<double>(r2.val()));
  double q = static_cast<double>(W.F.p);
  return omega * std::pow(q, -0.5 * static_cast<double>(m)) *
         complete_homog(m, {W.alpha1, W.alpha2});
}

}  // namespace detail

inline Cx gl2_eval(const WhittakerGL2& W, const Mat2& g0) {
  const FieldDesc& F = W.F;
  AdditiveCharacter psi(F);
  switch (W.kind) {
    case WhittakerGL2::Kind::Spherical: {
      Mat2 g = g0;
      Padic det = g.det();
      if (det.is_zero()) throw std::domain_error("gl2_eval: singular matrix");
      const Padic c = g.at(1, 0), d = g.at(1, 1);
      if (!d.is_zero() && (c.is_zero() || c.val() >= d.val())) {
        // g = n(b/d) diag(det/d, d) kappa
        return psi(g.at(0, 1) / d) * detail::spherical2_diag(W, det / d, d);
      }
      // Swap the columns (an element of K) and retry.
      Mat2 tau(F);
      tau.at(0, 1) = Padic::from_int(F, 1);
      tau.at(1, 0) = Padic::from_int(F, 1);
      return gl2_eval(W, g * tau);
    }
    case WhittakerGL2::Kind::Godement: {
      Padic det = g0.det();
      BallFunction Psi = right_translate_row2(W.Phi, g0).fourier(-1, {1});
      Cx I = cross_integral(Psi, W.mu1.inverse() * W.mu2);
      return W.mu2(det) * std::sqrt(det.abs()) * I;
    }
    case WhittakerGL2::Kind::Dihedral: {
      Padic det = g0.det();
      int j = static_cast<int>(((det.val() % 2) + 2) % 2);
      Mat2 h = g0;
      if (j == 1) {
        Mat2 epsinv = diag2(F, Padic::make(F, -1, 1), Padic::from_int(F, 1));
        h = g0 * epsinv;
      }
      BallFunction f = weil_apply(*W.E, W.eta, h, W.Phi_eps[static_cast<size_t>(j)]);
      return f.eval({Padic::from_int(F, 1), Padic::zero(F)});
    }
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// GL(2) Kirillov restrictions as exact SisFunctions.

// The spherical Kirillov function y -> |y|^{1/2} h_{v(y)}(alpha) 1_{v >= 0}
// as a SisFunction (two geometric tails, or a v-power term if alpha1 = alpha2).
inline SisFunction spherical_kirillov(const FieldDesc& F, Cx a1, Cx a2) {
  SisFunction h(F);
  double q = static_cast<double>(F.p);
  BallFunction O = BallFunction::lattice(F, 1, 0);
  Cx rt = 1.0 / std::sqrt(q);
  if (std::abs(a1 - a2) > 1e-9) {
    h.add_term({QuasiCharacter(UnitCharacter::trivial(F.p), a1 * rt), 0, (a1 / (a1 - a2)) * O});
    h.add_term({QuasiCharacter(UnitCharacter::trivial(F.p), a2 * rt), 0, (-a2 / (a1 - a2)) * O});
  } else {
    // (m+1) a^m
    h.add_term({QuasiCharacter(UnitCharacter::trivial(F.p), a1 * rt), 1, BallFunction(O)});
    h.add_term({QuasiCharacter(UnitCharacter::trivial(F.p), a1 * rt), 0, BallFunction(O)});
  }
  return h;
}

// t -> W(diag(t, 1) C) as a SisFunction, exact for all three GL(2) kinds.
inline SisFunction gl2_kirillov_translated(const WhittakerGL2& W, const Mat2& C) {
  const FieldDesc& F = W.F;
  Padic detC = C.det();
  if (detC.is_zero()) throw std::domain_error("gl2_kirillov_translated: singular translate");
  switch (W.kind) {
    case WhittakerGL2::Kind::Spherical: {
      const Padic a = C.at(0, 0), b = C.at(0, 1), c = C.at(1, 0), d = C.at(1, 1);
      // diag(t,1) C has constant bottom row (c, d) and top row t (a, b).
      QuasiCharacter omega = W.central_character();
      SisFunction S = spherical_kirillov(F, W.alpha1, W.alpha2);
      if (!d.is_zero() && (c.is_zero() || c.val() >= d.val())) {
        // W = psi((b/d) t) omega(d) S(t detC / d^2) with S the Kirillov function.
        SisFunction r = omega(d) * S.translate(detC / (d * d));
        return sis_mul_phase(r, b / d);
      }
      // Column swap: W = psi((a/c) t) omega(c) S(-t detC / c^2).
      SisFunction r = omega(c) * S.translate(-detC / (c * c));
      return sis_mul_phase(r, a / c);
    }
    case WhittakerGL2::Kind::Godement: {
      BallFunction Psi = right_translate_row2(W.Phi, C).fourier(-1, {1});
      Psi.normalize();
      QuasiCharacter chi = W.mu1.inverse() * W.mu2;
      MellinData M(F);
      for (const auto& t : Psi.terms()) {
        auto [T1, T2] = detail::split_term(F, t);
        SisFunction s1 = SisFunction::from_ball(F, T1);
        SisFunction s2(F);
        s2.add_term({chi.inverse(), 0, T2});
        MellinData prod =
            detail::mellin_component_product(mellin_transform(s1), mellin_transform(s2));
        for (const auto& [xi, R] : prod.comp) M.add(xi, R);
      }
      M.prune();
      SisFunction G = mellin_invert(M);
      Cx front = W.mu2(detC) * std::sqrt(detC.abs());
      return front * G.mul_char(W.mu2.shift(Cx(0.5, 0), F.p));
    }
    case WhittakerGL2::Kind::Dihedral: {
      // Precompute Phi'_r = pi(diag(eps_r,1) C diag(eps_{j(r)},1)^{-1}) Phi_{j(r)}
      // for the two parity classes r of v(t); then
      //   W(diag(t,1)C) = |t/eps_r|^{1/2} eta(b) Phi'_r(b),  Nr(b) = t/eps_r.
      const ExtField& E = *W.E;
      double q = static_cast<double>(F.p);
      std::int64_t vdet = detC.val();
      std::array<BallFunction, 2> Phip = {BallFunction(F, 2), BallFunction(F, 2)};
      for (int r = 0; r < 2; ++r) {
        int j = static_cast<int>((((r + vdet) % 2) + 2) % 2);
        Mat2 Cr = diag2(F, Padic::make(F, r, 1), Padic::from_int(F, 1)) * C *
                  diag2(F, Padic::make(F, -j, 1), Padic::from_int(F, 1));
        Phip[static_cast<size_t>(r)] =
            weil_apply(E, W.eta, Cr, W.Phi_eps[static_cast<size_t>(j)]);
      }
      // Support window in k where t = eps_r p^{2k} u.
      SisFunction out(F);
      for (int r = 0; r < 2; ++r) {
        const BallFunction& P = Phip[static_cast<size_t>(r)];
        BallFunction Pn = P;
        Pn.normalize();
        if (Pn.terms().empty()) continue;
        std::int64_t klo = 1000, khi = -1000, lev = 2;
        for (const auto& t : Pn.terms()) {
          std::int64_t cv = std::min(
              t.center[0].is_zero() ? t.radius[0] : std::min(t.center[0].val(), t.radius[0]),
              t.center[1].is_zero() ? t.radius[1] : std::min(t.center[1].val(), t.radius[1]));
          klo = std::min(klo, cv);
          // Largest attainable min-valuation k of a support point b of this
          // cell: a coordinate with v(center) < radius pins v(b_i) exactly;
          // otherwise the cell contains 0 and points of arbitrary depth exist,
          // but eta(p)^k q^{-k} Phi'(0)-type tails vanish (Phi'(0) = 0 by
          // eta^{-1}-equivariance for regular eta) once the phases have
          // stabilised, so we may stop one step past the stabilisation depth.
          bool pinned = false;
          std::int64_t cap = 1000, stab = -1000;
          for (int ci = 0; ci < 2; ++ci) {
            if (!t.center[ci].is_zero() && t.center[ci].val() < t.radius[ci]) {
              pinned = true;
              cap = std::min(cap, t.center[ci].val());
            }
            stab = std::max(stab, t.radius[ci]);
            if (!t.phase[ci].is_zero()) stab = std::max(stab, -t.phase[ci].val());
          }
          khi = std::max(khi, pinned ? cap : stab + 1);
          lev = std::max({lev, t.radius[0] - cv, t.radius[1] - cv});
          if (!t.phase[0].is_zero()) lev = std::max(lev, -t.phase[0].val() - cv);
          if (!t.phase[1].is_zero()) lev = std::max(lev, -t.phase[1].val() - cv);
        }
        int L = static_cast<int>(std::min<std::int64_t>(lev + 1, F.N - 2));
        std::int64_t pm = F.pk(L);
        for (std::int64_t k = klo; k <= khi; ++k) {
          std::int64_t n = r + 2 * k;  // v(t)
          for (std::int64_t u = 1; u < pm; ++u) {
            if (u % F.p == 0) continue;
            EPadic bb = solve_norm_unit(E, Padic::from_int(F, u));
            bb = escale(bb, Padic::make(F, k, 1));
            Cx val = std::pow(q, -static_cast<double>(k)) * W.eta(E, bb) *
                     P.eval({bb.a, bb.b});
            if (std::abs(val) < 1e-14) continue;
            BallFunction cell =
                BallFunction::indicator(F, {Padic::make(F, n, u)}, {n + L}, val);
            out.add_term({QuasiCharacter::trivial(F.p), 0, cell});
          }
        }
      }
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

// The three Kirillov-model functions of a Godement-section GL(2) datum:
//   h(y)  = |y|^{-1/2} W(diag(y,1)),
//   hF(y) = the intermediate Fourier companion,
//   hs(y) = |y|^{1/2} W~(diag(-y,1))  (contragredient side),
// each as an exact SisFunction via the Mellin factorization of the defining
// one-dimensional integral representations.
struct KirillovTriple {
  SisFunction h, hF, hs;
};

inline KirillovTriple gl2_kirillov_triple(const WhittakerGL2& W) {
  assert(W.kind == WhittakerGL2::Kind::Godement);
  const FieldDesc& F = W.F;
  QuasiCharacter chi = W.mu1.inverse() * W.mu2;
  KirillovTriple out{SisFunction(F), SisFunction(F), SisFunction(F)};

  // h: Psi = F_2(Phi);  M(xi) = M[T1](xi) * M[chi^{-1} T2](xi);  * mu2(y).
  {
    BallFunction Psi = W.Phi.fourier(-1, {1});
    Psi.normalize();
    MellinData M(F);
    for (const auto& t : Psi.terms()) {
      auto [T1, T2] = detail::split_term(F, t);
      SisFunction s2(F);
      s2.add_term({chi.inverse(), 0, T2});
      MellinData prod = detail::mellin_component_product(
          mellin_transform(SisFunction::from_ball(F, T1)), mellin_transform(s2));
      for (const auto& [xi, R] : prod.comp) M.add(xi, R);
    }
    M.prune();
    out.h = mellin_invert(M).mul_char(W.mu2);
  }

  // hF: Psi = Phi;  M(xi) = reflect(M[chi|.| T1](xi^{-1})) * M[T2](xi);
  //     * mu1^{-1}(y)|y|.
  {
    BallFunction Psi = W.Phi;
    Psi.normalize();
    MellinData M(F);
    for (const auto& t : Psi.terms()) {
      auto [T1, T2] = detail::split_term(F, t);
      SisFunction s1(F);
      s1.add_term({chi.shift(Cx(1, 0), F.p), 0, T1});
      MellinData M1 = mellin_transform(s1);
      MellinData M2 = mellin_transform(SisFunction::from_ball(F, T2));
      for (const auto& [xi, R2] : M2.comp) {
        LaurentRational R1 = M1.at(xi.inverse());
        if (R1.is_zero()) continue;
        M.add(xi, R1.reflect_var() * R2);
      }
    }
    M.prune();
    out.hF = mellin_invert(M).mul_char(W.mu1.inverse().shift(Cx(1, 0), F.p));
  }

  // hs: Psi = Fbar_1(Phi) (kernel psi(+xy));  M(xi) = M[T1](xi) * M[chi T2](xi);
  //     * mu2^{-1}(y)|y|.
  {
    BallFunction Psi = W.Phi.fourier(+1, {0});
    Psi.normalize();
    MellinData M(F);
    for (const auto& t : Psi.terms()) {
      auto [T1, T2] = detail::split_term(F, t);
      SisFunction s2(F);
      s2.add_term({chi, 0, T2});
      MellinData prod = detail::mellin_component_product(
          mellin_transform(SisFunction::from_ball(F, T1)), mellin_transform(s2));
      for (const auto& [xi, R] : prod.comp) M.add(xi, R);
    }
    M.prune();
    out.hs = mellin_invert(M).mul_char(W.mu2.inverse().shift(Cx(1, 0), F.p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// GL(3) Whittaker data.

struct GL2Cell {
  Mat2 g;       // coset g K_m
  int level;    // m >= 0
  Cx value;
};

struct WhittakerGL3 {
  enum class Kind { Spherical, Godement };
  Kind kind = Kind::Spherical;
  FieldDesc F;

  // Spherical: Satake parameters.
  std::array<Cx, 3> alpha = {Cx(1, 0), Cx(1, 0), Cx(1, 0)};

  // Section data for Pi = pi (+) mu on GL(2) x GL(1).
  std::vector<GL2Cell> ell;
  BallFunction phi;  // on F^2
  std::shared_ptr<WhittakerGL2> W0;
  QuasiCharacter mu;

  // Enumeration controls for the u-integral of gl3_eval (window = lowest
  // valuation -w, level = cell radius); stability under +1 bumps is a test.
  std::int64_t u_window = 2;
  std::int64_t u_level = 2;
  int cell_level = 1;

  static WhittakerGL3 spherical(const FieldDesc& F_, Cx a1, Cx a2, Cx a3) {
    WhittakerGL3 w;
    w.kind = Kind::Spherical;
    w.F = F_;
    w.alpha = {a1, a2, a3};
    return w;
  }
  static WhittakerGL3 godement(const FieldDesc& F_, std::vector<GL2Cell> cells, BallFunction phi_,
                               WhittakerGL2 W0_, QuasiCharacter mu_) {
    WhittakerGL3 w;
    w.kind = Kind::Godement;
    w.F = F_;
    w.ell = std::move(cells);
    w.phi = std::move(phi_);
    w.W0 = std::make_shared<WhittakerGL2>(std::move(W0_));
    w.mu = mu_;
    assert(w.phi.dim() == 2);
    return w;
  }

  QuasiCharacter central_character() const {
    if (kind == Kind::Spherical)
      return QuasiCharacter(UnitCharacter::trivial(F.p), alpha[0] * alpha[1] * alpha[2]);
    // The section carries a mu(det g) prefactor over GL(3): it is the
    // mu-twist of the section induced from (W0, trivial), so the center
    // scales by omega_0 * mu^3.
    return W0->central_character() * mu * mu * mu;
  }
  RepDescriptor rep() const {
    if (kind == Kind::Spherical)
      return RepDescriptor::ps3(F, QuasiCharacter(UnitCharacter::trivial(F.p), alpha[0]),
                                QuasiCharacter(UnitCharacter::trivial(F.p), alpha[1]),
                                QuasiCharacter(UnitCharacter::trivial(F.p), alpha[2]));
    // The mu(det g) prefactor of the section twists the whole induced
    // representation: the realized constituents are pi (x) mu and mu itself
    // (consistent with central_character() = omega_0 mu^3).
    return RepDescriptor::induced3(W0->rep().twist(mu), mu);
  }
};

// Torus value W(diag(p^{n1+n2}, p^{n2}, 1)) by the Weyl-character (Shintani)
// formula: q^{-(n1+n2)} s_{(n1+n2, n2, 0)}(alpha), zero off the dominant cone.
inline Cx gl3_spherical_torus(const WhittakerGL3& W, std::int64_t n1, std::int64_t n2) {
  assert(W.kind == WhittakerGL3::Kind::Spherical);
  if (n1 < 0 || n2 < 0) return 0.0;
  double q = static_cast<double>(W.F.p);
  return std::pow(q, -static_cast<double>(n1 + n2)) * schur3(n1 + n2, n2, W.alpha);
}

namespace detail {

// Representatives of K / K_M (M >= 1) or of (1 + p^m M2(O)) / K_M for m >= 1,
// multiplied on the right of g0; K_M = 1 + p^M M2(O).
inline void explode_cell(const GL2Cell& cell, int M, std::vector<Mat2>& out, double& vol) {
  const FieldDesc& F = cell.g.F;
  assert(M >= 1 && M >= cell.level);
  double q = static_cast<double>(F.p);
  // [K : K_M] = |GL2(Z/p^M)| = p^{4M} (1 - 1/q)(1 - 1/q^2).
  double indexKM = std::pow(q, 4.0 * M) * (1.0 - 1.0 / q) * (1.0 - 1.0 / (q * q));
  vol = 1.0 / indexKM;
  out.clear();
  std::int64_t pM = F.pk(M);
  if (cell.level == 0) {
    // All residue matrices mod p^M with unit determinant.
    for (std::int64_t a = 0; a < pM; ++a)
      for (std::int64_t b = 0; b < pM; ++b)
        for (std::int64_t c = 0; c < pM; ++c)
          for (std::int64_t d = 0; d < pM; ++d) {
            std::int64_t det = (mulmod(a, d, pM) - mulmod(b, c, pM)) % pM;
            if (det < 0) det += pM;
            if (det % F.p == 0) continue;
            Mat2 k(F);
            k.at(0, 0) = Padic::from_int(F, a);
            k.at(0, 1) = Padic::from_int(F, b);
            k.at(1, 0) = Padic::from_int(F, c);
            k.at(1, 1) = Padic::from_int(F, d);
            out.push_back(cell.g * k);
          }
    return;
  }
  int m = cell.level;
  std::int64_t cells = F.pk(M - m);
  for (std::int64_t a = 0; a < cells; ++a)
    for (std::int64_t b = 0; b < cells; ++b)
      for (std::int64_t c = 0; c < cells; ++c)
        for (std::int64_t d = 0; d < cells; ++d) {
          Mat2 k = Mat2::identity(F);
          k.at(0, 0) = k.at(0, 0) + Padic::make(F, m, a);
          k.at(0, 1) = Padic::make(F, m, b);
          k.at(1, 0) = Padic::make(F, m, c);
          k.at(1, 1) = k.at(1, 1) + Padic::make(F, m, d);
          out.push_back(cell.g * k);
        }
}

}  // namespace detail

// W(g) for section data: finite enumeration of the GL(2) cells of ell and of
// the row-coordinate integral, with refinement-stability controlled by the
// (window, level, cell_level) bumps.
inline Cx gl3_eval(const WhittakerGL3& W, const Mat3& g, std::int64_t window_bump = 0,
                   std::int64_t level_bump = 0, int cell_bump = 0) {
  assert(W.kind == WhittakerGL3::Kind::Godement);
  const FieldDesc& F = W.F;
  AdditiveCharacter psi(F);
  Padic detg = g.det();
  if (detg.is_zero()) throw std::domain_error("gl3_eval: singular matrix");
  double q = static_cast<double>(F.p);

  std::int64_t w = W.u_window + window_bump;
  std::int64_t L = W.u_level + level_bump;
  std::int64_t cellsu = F.pk(static_cast<int>(w + L));
  double uvol = std::pow(q, -2.0 * static_cast<double>(L));

  Cx total = 0.0;
  for (const auto& cell : W.ell) {
    int M = std::max({1, cell.level, W.cell_level + cell_bump});
    std::vector<Mat2> reps;
    double vol = 0.0;
    detail::explode_cell(cell, M, reps, vol);
    for (const Mat2& h : reps) {
      Mat2 hinv = h.inverse();
      // The mu(det) weights of the inner Whittaker slot and of the GL(1) slot
      // cancel against each other; only the mu(det g) prefactor survives.
      Cx hw = cell.value;
      Cx J = 0.0;
      for (std::int64_t i1 = 0; i1 < cellsu; ++i1)
        for (std::int64_t i2 = 0; i2 < cellsu; ++i2) {
          Padic u1 = Padic::make(F, -w, i1);
          Padic u2 = Padic::make(F, -w, i2);
          Mat2 A(F);
          A.at(0, 0) = g.at(0, 0) + u1 * g.at(2, 0);
          A.at(0, 1) = g.at(0, 1) + u1 * g.at(2, 1);
          A.at(1, 0) = g.at(1, 0) + u2 * g.at(2, 0);
          A.at(1, 1) = g.at(1, 1) + u2 * g.at(2, 1);
          Padic detA = A.det();
          if (detA.is_zero()) continue;
          Mat2 Ainv = A.inverse();
          Padic b1 = g.at(0, 2) + u1 * g.at(2, 2);
          Padic b2 = g.at(1, 2) + u2 * g.at(2, 2);
          // x = h A^{-1} b
          Padic y1 = Ainv.at(0, 0) * b1 + Ainv.at(0, 1) * b2;
          Padic y2 = Ainv.at(1, 0) * b1 + Ainv.at(1, 1) * b2;
          Padic x1 = h.at(0, 0) * y1 + h.at(0, 1) * y2;
          Padic x2 = h.at(1, 0) * y1 + h.at(1, 1) * y2;
          Cx pv = W.phi.eval({x1, x2});
          if (std::abs(pv) < 1e-15) continue;
          Cx wv = gl2_eval(*W.W0, A * hinv);
          if (std::abs(wv) < 1e-15) continue;
          J += pv * wv * std::pow(detA.abs(), -1.5) * psi(-u2);
        }
      total += vol * hw * J * uvol;
    }
  }
  return W.mu(detg) * detg.abs() * total;
}

// Dual Whittaker value W~(g) = W(w3 g^iota) (single source of truth).
inline Cx gl3_eval_dual(const WhittakerGL3& W, const Mat3& g, std::int64_t window_bump = 0,
                        std::int64_t level_bump = 0, int cell_bump = 0) {
  return gl3_eval(W, weyl_w3(W.F) * g.iota(), window_bump, level_bump, cell_bump);
}

// t -> W(diag(t,1,1) nlow(x)) (nlow(x) = 1 + x e_{21}) as an exact
// SisFunction: the row integral collapses to a Fourier value of phi and the
// t-dependence sits in a translated GL(2) Kirillov function.
inline SisFunction gl3_kirillov_row(const WhittakerGL3& W, const Padic& x,
                                    int cell_bump = 0) {
  assert(W.kind == WhittakerGL3::Kind::Godement);
  const FieldDesc& F = W.F;
  BallFunction phihat = W.phi.fourier(-1, {0, 1});
  phihat.normalize();
  SisFunction out(F);
  // |t|^{-3/2} prefactor as a quasi-character shift applied at the end.
  for (const auto& cell : W.ell) {
    int M = std::max({1, cell.level, W.cell_level + cell_bump});
    std::vector<Mat2> reps;
    double vol = 0.0;
    detail::explode_cell(cell, M, reps, vol);
    for (const Mat2& h : reps) {
      Mat2 C = h.inverse();
      if (!x.is_zero()) {
        Mat2 nl = Mat2::identity(F);
        nl.at(1, 0) = x;
        C = nl * C;
      }
      Padic deth = h.det();
      Cx coef = vol * cell.value / deth.abs() * phihat.eval({C.at(1, 0), C.at(1, 1)});
      if (std::abs(coef) < 1e-15) continue;
      SisFunction k = gl2_kirillov_translated(*W.W0, C);
      out = out + coef * k;
    }
  }
  return out.mul_char(W.mu * QuasiCharacter::norm_power(F.p, Cx(0.5, 0)));
}

}  // namespace plha
