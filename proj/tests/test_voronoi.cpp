#include <doctest.h>

#include <random>

#include "plha/voronoi.hpp"
#include "plha/whittaker.hpp"

using namespace plha;

namespace {

bool close(Cx a, Cx b, double tol = 1e-9) { return std::abs(a - b) <= tol; }

// Random compactly supported function on F^x: phased cells on shells |v| <= 2.
SisFunction rand_ccinf(const FieldDesc& F, std::mt19937& rng) {
  std::uniform_int_distribution<int> vd(-2, 2), rd(1, 2);
  std::uniform_int_distribution<std::int64_t> ud(1, F.p - 1);
  std::uniform_real_distribution<double> cd(-1.0, 1.0);
  BallFunction phi(F, 1);
  for (int i = 0; i < 4; ++i) {
    std::int64_t n = vd(rng);
    Padic c = Padic::make(F, n, ud(rng));
    Padic w = (i % 2 == 0) ? Padic::zero(F) : Padic::make(F, -n - rd(rng), ud(rng));
    phi.add_term({Cx(cd(rng), cd(rng)), {c}, {n + rd(rng)}, {w}});
  }
  return SisFunction::from_ball(F, phi);
}

// chi * phi as an exactly representable SisFunction (phi fine for chi).
SisFunction char_times(const FieldDesc& F, const QuasiCharacter& chi, const BallFunction& phi) {
  SisFunction h(F);
  h.add_term({chi, 0, phi});
  return h;
}

bool mellin_fe_holds(const FieldDesc& F, const SisFunction& h, const SisFunction& th,
                     const RepDescriptor& rep, double tol = 1e-8) {
  MellinData Mh = mellin_transform(h);
  MellinData Mt = mellin_transform(th);
  for (const auto& [xi, R] : Mh.comp) {
    LaurentRational lhs = Mt.at(xi.inverse()).reflect_var();
    LaurentRational g = rep_gamma(rep, QuasiCharacter(xi, Cx(1, 0)), kHankelPsiDelta);
    for (Cx X : {Cx(0.31, 0.17), Cx(0.72, -0.41), Cx(0.13, 0.06)})
      if (std::abs(lhs.eval(X) - g.eval(X) * R.eval(X)) > tol) return false;
  }
  return true;
}

WhittakerGL2 ramified_godement(const FieldDesc& F) {
  BallFunction phi = BallFunction::lattice(F, 2, 0);
  phi.add_term({Cx(0.5, 0.25),
                {Padic::from_int(F, 1), Padic::make(F, -1, 1)},
                {1, 1},
                {Padic::zero(F), Padic::zero(F)}});
  QuasiCharacter mu1(UnitCharacter(F.p, 1, 1), Cx(0.8, 0.1));
  QuasiCharacter mu2(UnitCharacter::trivial(F.p), Cx(0.3, -0.6));
  return WhittakerGL2::godement(F, phi, mu1, mu2);
}

}  // namespace

TEST_CASE("GL(1) transform: elementary values and functional equation") {
  FieldDesc F(5);
  BallFunction O = BallFunction::lattice(F, 1, 0);

  // Trivial character on 1_O: output is |y| 1_O(y).
  SisFunction t = vh_gl1(F, QuasiCharacter::trivial(F.p), O);
  double q = 5.0;
  for (std::int64_t n = -2; n <= 3; ++n)
    for (std::int64_t u : {1, 3}) {
      Cx expect = n >= 0 ? Cx(std::pow(q, -static_cast<double>(n)), 0) : Cx(0, 0);
      CHECK(close(t.eval(Padic::make(F, n, u)), expect));
    }

  // Zero input maps to zero.
  CHECK(vh_gl1(F, QuasiCharacter::trivial(F.p), BallFunction(F, 1)).empty());

  // Functional equation per unit-character component, ramified and unramified.
  BallFunction cell = BallFunction::indicator(F, {Padic::from_int(F, 2)}, {2}, Cx(1, 0)) +
                      Cx(0.4, -0.7) * BallFunction::unit_shell(F, -1);
  for (const QuasiCharacter& chi :
       {QuasiCharacter(UnitCharacter::trivial(5), Cx(0.6, 0.3)),
        QuasiCharacter(UnitCharacter(5, 1, 2), Cx(0.8, -0.2))}) {
    SisFunction h = char_times(F, chi, cell);
    SisFunction th = vh_gl1(F, chi, cell);
    CHECK(mellin_fe_holds(F, h, th, RepDescriptor::gl1(F, chi)));
  }
}

TEST_CASE("Mellin extension agrees with the GL(1) composition on compact support") {
  FieldDesc F(3);
  BallFunction cell = BallFunction::unit_shell(F, 0) +
                      Cx(0.3, 0.4) * BallFunction::indicator(F, {Padic::make(F, -1, 2)}, {1}, Cx(1, 0));
  for (const QuasiCharacter& chi :
       {QuasiCharacter(UnitCharacter::trivial(3), Cx(0.7, -0.2)),
        QuasiCharacter(UnitCharacter(3, 1, 1), Cx(0.4, 0.5))}) {
    SisFunction h = char_times(F, chi, cell);
    REQUIRE(h.compactly_supported());
    TransformSpec spec(RepDescriptor::gl1(F, chi));
    CHECK(sis_approx_equal(vh_extended(spec, h), vh_gl1(F, chi, cell), 6, 1e-8));
  }
  // Zero input maps to zero.
  TransformSpec spec(RepDescriptor::gl1(F, QuasiCharacter::trivial(3)));
  CHECK(ms_transform(spec, SisFunction(F)).empty());
}

TEST_CASE("dual transform inverts the extension (gamma duality round trip)") {
  FieldDesc F(3);
  std::mt19937 rng(17);
  auto E = std::make_shared<ExtField>(F);
  std::vector<RepDescriptor> reps = {
      RepDescriptor::gl1(F, QuasiCharacter(UnitCharacter(3, 1, 1), Cx(0.8, -0.1))),
      RepDescriptor::ps2(F, QuasiCharacter(UnitCharacter::trivial(3), Cx(0.7, 0.2)),
                         QuasiCharacter(UnitCharacter(3, 1, 1), Cx(0.3, -0.5))),
      RepDescriptor::dihedral(F, ExtCharacter(*E, 1, 3, Cx(std::cos(0.4), std::sin(0.4)))),
      RepDescriptor::ps3(F, QuasiCharacter(UnitCharacter::trivial(3), Cx(0.9, 0.1)),
                         QuasiCharacter(UnitCharacter::trivial(3), Cx(-0.2, 0.6)),
                         QuasiCharacter(UnitCharacter(3, 1, 1), Cx(0.5, 0.5))),
  };
  reps.push_back(RepDescriptor::induced3(reps[1], QuasiCharacter(UnitCharacter::trivial(3), Cx(0.4, -0.3))));
  int cases = 0;
  for (const auto& rep : reps) {
    TransformSpec spec(rep);
    for (int it = 0; it < 4; ++it) {
      SisFunction h = rand_ccinf(F, rng);
      SisFunction back = ms_transform(dual_transform_spec(spec), ms_transform(spec, h));
      CHECK(sis_approx_equal(back, h, 5, 1e-7));
      ++cases;
    }
  }
  CHECK(cases == 20);
}

TEST_CASE("GL(2) decomposition reproduces the Kirillov triple") {
  for (int which = 0; which < 2; ++which) {
    FieldDesc F(3);
    WhittakerGL2 W =
        which == 0
            ? WhittakerGL2::godement(F, BallFunction::lattice(F, 2, 0),
                                     QuasiCharacter(UnitCharacter::trivial(3), Cx(0.7, 0.3)),
                                     QuasiCharacter(UnitCharacter::trivial(3), Cx(0.2, -0.6)))
            : ramified_godement(F);
    KirillovTriple T = gl2_kirillov_triple(W);
    // First step lands on the Fourier-side function of the triple.
    SisFunction step1 = vh_tilde_gl1(F, W.mu1, T.h);
    CHECK(sis_approx_equal(step1, T.hF, 5, 1e-8));
    // Second step after argument inversion lands on the dual-side function.
    SisFunction step2 = vh_tilde_gl1(F, W.mu2, sis_invert_argument(T.hF));
    CHECK(sis_approx_equal(step2, T.hs, 5, 1e-8));
    // The assembled pipeline agrees.
    CHECK(sis_approx_equal(decompose_gl2(F, W.mu1, W.mu2, T.h), T.hs, 5, 1e-8));
  }
}

TEST_CASE("decomposition is symmetric and equals the rank-2 Mellin transform") {
  FieldDesc F(3);
  std::mt19937 rng(29);
  QuasiCharacter m1(UnitCharacter(3, 1, 1), Cx(0.6, 0.2)), m2(UnitCharacter::trivial(3), Cx(0.4, -0.5));
  TransformSpec ps2(RepDescriptor::ps2(F, m1, m2));
  for (int it = 0; it < 5; ++it) {
    SisFunction h = rand_ccinf(F, rng);
    SisFunction a = decompose_gl2(F, m1, m2, h);
    CHECK(sis_approx_equal(a, decompose_gl2(F, m2, m1, h), 5, 1e-8));
    CHECK(sis_approx_equal(a, vh_extended(ps2, h), 5, 1e-8));
  }
  // mu1 = mu2 = trivial on the unit-shell indicator.
  SisFunction ind = SisFunction::from_ball(F, BallFunction::unit_shell(F, 0));
  QuasiCharacter tv = QuasiCharacter::trivial(3);
  CHECK(sis_approx_equal(decompose_gl2(F, tv, tv, ind),
                         vh_extended(TransformSpec(RepDescriptor::ps2(F, tv, tv)), ind), 5, 1e-8));
  // Zero input maps to zero.
  CHECK(decompose_gl2(F, m1, m2, SisFunction(F)).empty());
}

TEST_CASE("rank translation between the two transform normalizations") {
  FieldDesc F(3);
  std::mt19937 rng(31);
  TransformSpec ps2(RepDescriptor::ps2(F, QuasiCharacter(UnitCharacter::trivial(3), Cx(0.8, 0.1)),
                                       QuasiCharacter(UnitCharacter(3, 1, 2), Cx(0.2, 0.4))));
  TransformSpec ps3(RepDescriptor::ps3(F, QuasiCharacter(UnitCharacter::trivial(3), Cx(0.5, 0.3)),
                                       QuasiCharacter(UnitCharacter::trivial(3), Cx(-0.4, 0.2)),
                                       QuasiCharacter(UnitCharacter(3, 1, 1), Cx(0.3, 0.3))));
  for (const TransformSpec* spec : {&ps2, &ps3}) {
    int n = spec->rep.rank();
    Cx a((n - 3) / 2.0, 0), b((n - 1) / 2.0, 0);
    Padic sgn = Padic::from_int(F, (n % 2 == 1) ? 1 : -1);
    for (int it = 0; it < 3; ++it) {
      SisFunction H = rand_ccinf(F, rng);
      // Reassemble t((-1)^{n-1}) m_{-(n-3)/2} V m_{(n-1)/2} and compare.
      SisFunction V = voronoi_v(*spec, H.mul_char(QuasiCharacter::norm_power(F.p, b)));
      SisFunction re = V.mul_char(QuasiCharacter::norm_power(F.p, -a)).translate(sgn);
      CHECK(sis_approx_equal(re, vh_extended(*spec, H), 5, 1e-8));
    }
  }
}

TEST_CASE("rank-3 gamma multiplicativity at the Mellin level") {
  FieldDesc F(3);
  QuasiCharacter m1(UnitCharacter::trivial(3), Cx(0.9, 0.1)), m2(UnitCharacter::trivial(3), Cx(-0.2, 0.6)),
      m3(UnitCharacter(3, 1, 1), Cx(0.5, 0.5));
  RepDescriptor rep = RepDescriptor::ps3(F, m1, m2, m3);
  for (int c = 0; c <= 1; ++c)
    for (std::int64_t k : (c ? std::vector<std::int64_t>{1} : std::vector<std::int64_t>{0})) {
      UnitCharacter xi(3, c, k);
      LaurentRational g = rep_gamma(rep, QuasiCharacter(xi, Cx(1, 0)), kHankelPsiDelta);
      LaurentRational prod = tate_gamma(F, m1 * QuasiCharacter(xi, Cx(1, 0)), kHankelPsiDelta) *
                             tate_gamma(F, m2 * QuasiCharacter(xi, Cx(1, 0)), kHankelPsiDelta) *
                             tate_gamma(F, m3 * QuasiCharacter(xi, Cx(1, 0)), kHankelPsiDelta);
      for (Cx X : {Cx(0.3, 0.2), Cx(0.7, -0.4)}) CHECK(close(g.eval(X), prod.eval(X), 1e-9));
    }
}
