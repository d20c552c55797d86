// Hankel-type transforms on the p-adic line: the GL(1) transform as a
// composition of elementary operators with an exact Fourier transform, its
// Mellin-level extension to functions with simple singularities (determined
// by the local functional equation), the extended transform with its rank
// translation, and the GL(2) decomposition pipeline into two GL(1) steps.
#pragma once

#include <map>
#include <stdexcept>
#include <utility>

#include "plha/gamma.hpp"
#include "plha/mellin.hpp"

namespace plha {

// All transforms in this module use the Fourier kernel psi(+xy). In that
// convention the gamma factor closing the functional equation is the Tate /
// Langlands gamma with the additive character twisted by the unit -1.
inline constexpr std::int64_t kHankelPsiDelta = -1;

// A representation together with its memoized Mellin-component gamma family
// xi -> gamma(s, rep x xi, psi_delta) as rational functions of X = q^{-s}.
struct TransformSpec {
  RepDescriptor rep;
  std::int64_t psi_delta = kHankelPsiDelta;
  QuasiCharacter pretwist;  // extra |.|^a mu twist applied to every component

  explicit TransformSpec(RepDescriptor r, std::int64_t delta = kHankelPsiDelta)
      : rep(std::move(r)), psi_delta(delta), pretwist(QuasiCharacter::trivial(rep.F.p)) {}
  TransformSpec(RepDescriptor r, std::int64_t delta, QuasiCharacter tw)
      : rep(std::move(r)), psi_delta(delta), pretwist(std::move(tw)) {}

  const LaurentRational& gamma(const UnitCharacter& xi) const {
    auto key = std::make_pair(xi.c, xi.k);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    LaurentRational g = rep_gamma(rep, QuasiCharacter(xi, Cx(1, 0)) * pretwist, psi_delta);
    return cache_.emplace(key, std::move(g)).first->second;
  }

 private:
  mutable std::map<std::pair<int, std::int64_t>, LaurentRational> cache_;
};

// The spec whose transform inverts ms_transform(spec, .): contragredient
// representation, opposite additive character, and an extra |.| twist (the
// gamma duality gamma(s, pi x xi, psi) gamma(1-s, dual, psi^{-1}) = 1 enters
// with 1-s, and the |.|-twist converts the Mellin reflection -s into 1-s).
inline TransformSpec dual_transform_spec(const TransformSpec& spec) {
  QuasiCharacter tw =
      QuasiCharacter::norm_power(spec.rep.F.p, Cx(1, 0)) * spec.pretwist.inverse();
  return TransformSpec(spec.rep.contragredient(), -spec.psi_delta, std::move(tw));
}

// ---------------------------------------------------------------------------
// GL(1): exact composition of elementary operators and the Fourier transform.

// Transform of h = chi * phi with phi Schwartz-Bruhat:
//   h |-> chi^{-1}(y) |y| * (Fourier_{psi(+xy)} phi)(y),
// landing in chi^{-1} |.| S(F).
inline SisFunction vh_gl1(const FieldDesc& F, const QuasiCharacter& chi,
                          const BallFunction& phi) {
  if (phi.dim() != 1) throw std::invalid_argument("vh_gl1: expects a one-variable function");
  BallFunction ft = phi.fourier(+1);
  SisFunction out(F);
  out.add_term({chi.inverse() * QuasiCharacter::norm_power(F.p, Cx(1, 0)), 0, std::move(ft)});
  return out;
}

// ---------------------------------------------------------------------------
// Mellin-level extension: the unique transform satisfying
//   M[T h](xi^{-1}, -s) = gamma(s, rep x xi, psi) M[h](xi, s)  for all xi.

inline MellinData ms_mellin(const TransformSpec& spec, const MellinData& M) {
  MellinData out(M.F);
  for (const auto& [xi, R] : M.comp)
    out.add(xi.inverse(), (spec.gamma(xi) * R).reflect_var());
  out.prune();
  return out;
}

inline SisFunction ms_transform(const TransformSpec& spec, const SisFunction& h) {
  return mellin_invert(ms_mellin(spec, mellin_transform(h)));
}

// The inversion operator i(h)(t) = h(1/t), realized exactly at Mellin level.
inline SisFunction sis_invert_argument(const SisFunction& h) {
  return mellin_invert(mellin_invert_argument(mellin_transform(h)));
}

// ---------------------------------------------------------------------------
// Extended transform on compactly supported inputs, plus the rank translation.

inline SisFunction vh_extended(const TransformSpec& spec, const SisFunction& h) {
  if (!h.compactly_supported())
    throw std::domain_error("vh_extended: input must be compactly supported on F^x");
  return ms_transform(spec, h);
}

// The companion transform V with
//   VH = t((-1)^{n-1}) o m_{-(n-3)/2} o V o m_{(n-1)/2},
// inverted as V = m_{(n-3)/2} o t((-1)^{n-1}) o VH o m_{-(n-1)/2}.
inline SisFunction voronoi_v(const TransformSpec& spec, const SisFunction& H) {
  const FieldDesc& F = H.field();
  int n = spec.rep.rank();
  Cx a((n - 3) / 2.0, 0), b((n - 1) / 2.0, 0);
  SisFunction h = H.mul_char(QuasiCharacter::norm_power(F.p, -b));
  h = vh_extended(spec, h);
  h = h.translate(Padic::from_int(F, (n % 2 == 1) ? 1 : -1));
  return h.mul_char(QuasiCharacter::norm_power(F.p, a));
}

// ---------------------------------------------------------------------------
// GL(2) decomposition: the rank-2 transform factors through two GL(1)
// transforms with the argument inversion between them,
//   T_{mu1 (+) mu2} = T~_{mu2} o i o T~_{mu1},
// each GL(1) step realized on its Mellin-computable domain.

inline SisFunction vh_tilde_gl1(const FieldDesc& F, const QuasiCharacter& mu,
                                const SisFunction& h, std::int64_t delta = kHankelPsiDelta) {
  TransformSpec spec(RepDescriptor::gl1(F, mu), delta);
  return ms_transform(spec, h);
}

struct GL2Decomposition {
  SisFunction mid;    // T~_{mu1}(h)
  SisFunction result; // T~_{mu2}(i(T~_{mu1}(h)))
};

inline GL2Decomposition decompose_gl2_full(const FieldDesc& F, const QuasiCharacter& mu1,
                                           const QuasiCharacter& mu2, const SisFunction& h,
                                           std::int64_t delta = kHankelPsiDelta) {
  TransformSpec s1(RepDescriptor::gl1(F, mu1), delta);
  TransformSpec s2(RepDescriptor::gl1(F, mu2), delta);
  MellinData M1 = ms_mellin(s1, mellin_transform(h));
  GL2Decomposition out;
  out.mid = mellin_invert(M1);
  out.result = mellin_invert(ms_mellin(s2, mellin_invert_argument(M1)));
  return out;
}

inline SisFunction decompose_gl2(const FieldDesc& F, const QuasiCharacter& mu1,
                                 const QuasiCharacter& mu2, const SisFunction& h,
                                 std::int64_t delta = kHankelPsiDelta) {
  return decompose_gl2_full(F, mu1, mu2, h, delta).result;
}

}  // namespace plha
