#include <doctest.h>

#include <random>

#include "plha/whittaker.hpp"

using namespace plha;

namespace {

bool close(Cx a, Cx b, double tol = 1e-9) { return std::abs(a - b) <= tol; }

Padic rand_padic(const FieldDesc& F, std::mt19937& rng, std::int64_t vlo, std::int64_t vhi) {
  std::uniform_int_distribution<std::int64_t> vd(vlo, vhi);
  std::uniform_int_distribution<std::int64_t> ud(1, F.pk(3) - 1);
  std::int64_t u = ud(rng);
  while (u % F.p == 0) u = ud(rng);
  return Padic::make(F, vd(rng), u);
}

Mat2 rand_mat2(const FieldDesc& F, std::mt19937& rng, std::int64_t vlo = -1,
               std::int64_t vhi = 1) {
  for (;;) {
    Mat2 m(F);
    std::uniform_int_distribution<int> zd(0, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        m.at(i, j) = zd(rng) == 0 ? Padic::zero(F) : rand_padic(F, rng, vlo, vhi);
    if (!m.det().is_zero()) return m;
  }
}

// Random element of K = GL2(O) (integral entries, unit determinant).
Mat2 rand_k2(const FieldDesc& F, std::mt19937& rng) {
  for (;;) {
    Mat2 m(F);
    std::uniform_int_distribution<std::int64_t> ed(0, F.pk(3) - 1);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m.at(i, j) = Padic::from_int(F, ed(rng));
    Padic d = m.det();
    if (!d.is_zero() && d.val() == 0) return m;
  }
}

Cx brute_homog(std::int64_t n, const std::vector<Cx>& a) {
  // Direct monomial sum for three variables.
  Cx s = 0.0;
  for (std::int64_t i = 0; i <= n; ++i)
    for (std::int64_t j = 0; i + j <= n; ++j)
      s += std::pow(a[0], static_cast<double>(i)) * std::pow(a[1], static_cast<double>(j)) *
           std::pow(a[2], static_cast<double>(n - i - j));
  return s;
}

}  // namespace

TEST_CASE("symmetric function engine: complete homogeneous and Schur values") {
  std::vector<Cx> a = {Cx(0.7, 0.3), Cx(-0.4, 0.8), Cx(0.9, -0.1)};
  for (std::int64_t n = 0; n <= 20; ++n) CHECK(close(complete_homog(n, a), brute_homog(n, a), 1e-8));
  // Bialternant ratio s_lambda = det(a_i^{lambda_j + 3 - j}) / Vandermonde.
  std::array<Cx, 3> al = {a[0], a[1], a[2]};
  auto bialt = [&](std::int64_t l1, std::int64_t l2) {
    std::array<std::int64_t, 3> e = {l1 + 2, l2 + 1, 0};
    auto pw = [&](int i, int j) { return std::pow(al[static_cast<size_t>(i)], static_cast<double>(e[static_cast<size_t>(j)])); };
    Cx num = pw(0, 0) * (pw(1, 1) * pw(2, 2) - pw(1, 2) * pw(2, 1)) -
             pw(0, 1) * (pw(1, 0) * pw(2, 2) - pw(1, 2) * pw(2, 0)) +
             pw(0, 2) * (pw(1, 0) * pw(2, 1) - pw(1, 1) * pw(2, 0));
    Cx van = (al[0] - al[1]) * (al[0] - al[2]) * (al[1] - al[2]);
    return num / van;
  };
  for (std::int64_t l1 = 0; l1 <= 12; l1 += 3)
    for (std::int64_t l2 = 0; l2 <= l1; l2 += 2) CHECK(close(schur3(l1, l2, al), bialt(l1, l2), 1e-7));
  CHECK(close(schur3(0, 0, al), Cx(1, 0)));
  CHECK(schur3(1, 2, al) == Cx(0, 0));
}

TEST_CASE("GL(2) spherical Whittaker: normalization, equivariance, torus values") {
  FieldDesc F(5);
  AdditiveCharacter psi(F);
  std::mt19937 rng(11);
  Cx al1(0.6, 0.5), al2(0.9, -0.2);
  WhittakerGL2 W = WhittakerGL2::spherical(F, al1, al2);
  double q = 5.0;
  CHECK(close(gl2_eval(W, Mat2::identity(F)), Cx(1, 0)));
  // Torus values and support.
  for (int m = 0; m <= 4; ++m) {
    Cx want = std::pow(q, -0.5 * m) * complete_homog(m, {al1, al2});
    CHECK(close(gl2_eval(W, a2(F, Padic::make(F, m, 1))), want));
  }
  CHECK(close(gl2_eval(W, a2(F, Padic::make(F, -1, 2))), Cx(0, 0)));
  for (int it = 0; it < 20; ++it) {
    Mat2 g = rand_mat2(F, rng);
    Padic x = rand_padic(F, rng, -3, 1);
    CHECK(close(gl2_eval(W, n2(F, x) * g), psi(x) * gl2_eval(W, g)));
    CHECK(close(gl2_eval(W, g * rand_k2(F, rng)), gl2_eval(W, g)));
    Padic zc = rand_padic(F, rng, -1, 1);
    CHECK(close(gl2_eval(W, diag2(F, zc, zc) * g), W.central_character()(zc) * gl2_eval(W, g)));
  }
}

TEST_CASE("GL(2) spherical Kirillov translate matches pointwise evaluation") {
  FieldDesc F(3);
  std::mt19937 rng(23);
  WhittakerGL2 W = WhittakerGL2::spherical(F, Cx(0.8, 0.4), Cx(-0.3, 0.6));
  for (int it = 0; it < 6; ++it) {
    Mat2 C = rand_mat2(F, rng);
    SisFunction k = gl2_kirillov_translated(W, C);
    for (std::int64_t n = -4; n <= 4; ++n)
      for (std::int64_t u : {1, 2, 4}) {
        Padic t = Padic::make(F, n, u);
        CHECK(close(k.eval(t), gl2_eval(W, diag2(F, t, Padic::from_int(F, 1)) * C), 1e-9));
      }
  }
}

TEST_CASE("GL(2) section from a Schwartz function: unramified data is spherical") {
  FieldDesc F(3);
  AdditiveCharacter psi(F);
  std::mt19937 rng(31);
  Cx z1(0.7, 0.2), z2(0.4, -0.5);
  QuasiCharacter mu1(UnitCharacter::trivial(3), z1), mu2(UnitCharacter::trivial(3), z2);
  WhittakerGL2 W = WhittakerGL2::godement(F, BallFunction::lattice(F, 2, 0), mu1, mu2);
  WhittakerGL2 S = WhittakerGL2::spherical(F, z1, z2);
  CHECK(close(gl2_eval(W, Mat2::identity(F)), Cx(1, 0)));
  for (std::int64_t m = -1; m <= 3; ++m) {
    Mat2 g = a2(F, Padic::make(F, m, 1));
    CHECK(close(gl2_eval(W, g), gl2_eval(S, g)));
  }
  for (int it = 0; it < 5; ++it) {
    Mat2 g = rand_mat2(F, rng, 0, 1);
    CHECK(close(gl2_eval(W, g), gl2_eval(S, g), 1e-9));
    Padic x = rand_padic(F, rng, -2, 0);
    CHECK(close(gl2_eval(W, n2(F, x) * g), psi(x) * gl2_eval(W, g)));
  }
}

namespace {

// A ramified section fixture on F^2 whose transform has small support.
WhittakerGL2 ramified_godement(const FieldDesc& F) {
  // Phi = 1_{O x O} + phased cell: keeps the cross integrals small but the
  // characters genuinely ramified.
  BallFunction Phi = BallFunction::lattice(F, 2, 0);
  BallFunction extra = BallFunction::indicator(
      F, {Padic::from_int(F, 1), Padic::make(F, -1, 1)}, {1, 1}, Cx(0.5, 0.25));
  Phi = Phi + extra;
  QuasiCharacter mu1(UnitCharacter(F.p, 1, 1), Cx(0.8, 0.1));
  QuasiCharacter mu2(UnitCharacter::trivial(F.p), Cx(0.3, -0.6));
  return WhittakerGL2::godement(F, Phi, mu1, mu2);
}

}  // namespace

TEST_CASE("GL(2) section: equivariance and central character for ramified data") {
  FieldDesc F(3);
  AdditiveCharacter psi(F);
  std::mt19937 rng(41);
  WhittakerGL2 W = ramified_godement(F);
  QuasiCharacter omega = W.central_character();
  for (int it = 0; it < 4; ++it) {
    Mat2 g = rand_mat2(F, rng, 0, 1);
    Cx base = gl2_eval(W, g);
    Padic x = rand_padic(F, rng, -2, 0);
    CHECK(close(gl2_eval(W, n2(F, x) * g), psi(x) * base, 1e-9));
    Padic zc = rand_padic(F, rng, -1, 1);
    CHECK(close(gl2_eval(W, diag2(F, zc, zc) * g), omega(zc) * base, 1e-9));
  }
}

TEST_CASE("GL(2) section Kirillov translate matches pointwise evaluation") {
  FieldDesc F(3);
  std::mt19937 rng(43);
  WhittakerGL2 W = ramified_godement(F);
  for (int it = 0; it < 3; ++it) {
    Mat2 C = rand_mat2(F, rng, 0, 1);
    SisFunction k = gl2_kirillov_translated(W, C);
    for (std::int64_t n = -3; n <= 3; ++n)
      for (std::int64_t u : {1, 2}) {
        Padic t = Padic::make(F, n, u);
        CHECK(close(k.eval(t), gl2_eval(W, diag2(F, t, Padic::from_int(F, 1)) * C), 1e-9));
      }
  }
}

TEST_CASE("GL(2) Kirillov triple: diagonal values, dual values, Fourier companion") {
  FieldDesc F(3);
  AdditiveCharacter psi(F);
  double q = 3.0;

  SUBCASE("unramified: h and hs reproduce the two spherical Kirillov functions") {
    Cx z1(0.7, 0.2), z2(0.4, -0.5);
    QuasiCharacter mu1(UnitCharacter::trivial(3), z1), mu2(UnitCharacter::trivial(3), z2);
    WhittakerGL2 W = WhittakerGL2::godement(F, BallFunction::lattice(F, 2, 0), mu1, mu2);
    KirillovTriple T = gl2_kirillov_triple(W);
    for (std::int64_t m = -2; m <= 6; ++m) {
      Padic y = Padic::make(F, m, 1);
      // h(y) = |y|^{-1/2} W(diag(y,1)) = h_m(z1, z2) on v(y) = m >= 0.
      Cx want = m < 0 ? Cx(0, 0) : complete_homog(m, {z1, z2});
      CHECK(close(T.h.eval(y), want, 1e-9));
      Cx wants = m < 0 ? Cx(0, 0)
                       : std::pow(q, -1.0 * m) * complete_homog(m, {1.0 / z1, 1.0 / z2});
      CHECK(close(T.hs.eval(y), wants, 1e-9));
    }
  }

  SUBCASE("h matches the diagonal Whittaker values for ramified data") {
    WhittakerGL2 W = ramified_godement(F);
    KirillovTriple T = gl2_kirillov_triple(W);
    for (std::int64_t m = -3; m <= 3; ++m)
      for (std::int64_t u : {1, 2, 4, 5}) {
        Padic y = Padic::make(F, m, u);
        Cx diag = gl2_eval(W, a2(F, y));
        CHECK(close(std::sqrt(y.abs()) * T.h.eval(y), diag, 1e-9));
      }
  }

  SUBCASE("hF agrees with the multiplicative Fourier companion on compact support") {
    // Choose Phi so that h is supported on the unit shell: take the partial
    // transform of Phi concentrated on units x units.
    BallFunction Psi0 = BallFunction::indicator(
        F, {Padic::from_int(F, 1), Padic::from_int(F, 1)}, {2, 2}, Cx(1, 0));
    BallFunction Phi = Psi0.fourier(+1, {1});
    QuasiCharacter mu1(UnitCharacter(3, 1, 1), Cx(0.9, 0.3));
    QuasiCharacter mu2(UnitCharacter::trivial(3), Cx(0.5, -0.2));
    WhittakerGL2 W = WhittakerGL2::godement(F, Phi, mu1, mu2);
    KirillovTriple T = gl2_kirillov_triple(W);
    // h is supported where Psi0(t y, t^{-1}) != 0, i.e. on units.
    for (std::int64_t m = 2; m <= 5; ++m)
      CHECK(close(T.h.eval(Padic::make(F, m, 1)), Cx(0, 0), 1e-12));
    // hF(y) = mu1^{-1}(y)|y| Int psi(x y) h(x) mu1^{-1}(x) dx, an exact
    // finite average over the supporting shell.
    for (std::int64_t m = -2; m <= 2; ++m)
      for (std::int64_t u : {1, 2}) {
        Padic y = Padic::make(F, m, u);
        int L = static_cast<int>(std::max<std::int64_t>(4, 4 + (m < 0 ? -m : 0)));
        Cx I = (1.0 - 1.0 / q) * shell_integral(F, 0, L, [&](const Padic& x) {
                 return psi(x * y) * T.h.eval(x) * W.mu1.inverse()(x);
               });
        Cx want = W.mu1.inverse()(y) * y.abs() * I;
        CHECK(close(T.hF.eval(y), want, 1e-9));
      }
  }
}

// ---------------------------------------------------------------------------
// Weil representation / dihedral tests.

namespace {

struct DihedralFixture {
  std::shared_ptr<ExtField> E;
  ExtCharacter eta;
  WhittakerGL2 W;
};

DihedralFixture dihedral_fixture(std::int64_t p, std::int64_t k, std::mt19937& rng) {
  FieldDesc F(p);
  auto E = std::make_shared<ExtField>(F);
  ExtCharacter eta(*E, 1, k, Cx(std::cos(0.7), std::sin(0.7)));
  auto rand_ball = [&](std::int64_t shift) {
    std::uniform_int_distribution<std::int64_t> cd(0, F.pk(2) - 1);
    BallFunction f = BallFunction::indicator(
        F, {Padic::from_int(F, cd(rng)), Padic::from_int(F, 1 + cd(rng))}, {2, 2}, Cx(1, 0));
    BallFunction g = BallFunction::indicator(
        F, {Padic::make(F, shift, 1), Padic::from_int(F, cd(rng))}, {2, 2}, Cx(0.6, -0.4));
    return f + g;
  };
  BallFunction P0 = norm_one_project(*E, eta, rand_ball(-1));
  BallFunction P1 = norm_one_project(*E, eta, rand_ball(0));
  WhittakerGL2 W = WhittakerGL2::dihedral(E, eta, P0, P1);
  return {E, eta, W};
}

}  // namespace

TEST_CASE("Weil representation: factorization word and operator relations") {
  FieldDesc F(3);
  std::mt19937 rng(57);
  auto fix = dihedral_fixture(3, 1, rng);
  const ExtField& E = *fix.E;
  const ExtCharacter& eta = fix.eta;
  BallFunction Phi = fix.W.Phi_eps[0];

  // Exact matrix identity behind the Bruhat word used by weil_apply.
  for (int it = 0; it < 10; ++it) {
    Mat2 h = rand_mat2(F, rng);
    if (h.at(1, 0).is_zero()) continue;
    Padic a = h.at(0, 0), c = h.at(1, 0), d = h.at(1, 1);
    Mat2 wprime(F);
    wprime.at(0, 1) = Padic::from_int(F, 1);
    wprime.at(1, 0) = Padic::from_int(F, -1);
    Mat2 rebuilt = n2(F, a / c) * diag2(F, -h.det() / c, -c) * wprime * n2(F, d / c);
    CHECK(rebuilt == h);
  }

  // n(x) n(x') = n(x + x'), including refinement-forcing arguments.
  Padic x = Padic::make(F, -2, 5), xp = Padic::make(F, -1, 2);
  CHECK(approx_equal(weil_n(E, x, weil_n(E, xp, Phi)), weil_n(E, x + xp, Phi)));

  // w'^2 acts by eta restricted to F^x at -1.
  Cx sgn = eta.restrict_to_base(E)(Padic::from_int(F, -1));
  CHECK(approx_equal(weil_w(E, weil_w(E, Phi)), sgn * Phi));

  // Identity and homomorphism property through random Bruhat words.
  CHECK(approx_equal(weil_apply(E, eta, Mat2::identity(F), Phi), Phi));
  for (int it = 0; it < 8; ++it) {
    Mat2 h1 = rand_mat2(F, rng, -1, 1);
    Mat2 h2 = rand_mat2(F, rng, -1, 1);
    if (h1.det().val() % 2 != 0) h1.at(0, 0) = h1.at(0, 0) * Padic::make(F, 1, 1);
    if (h1.det().val() % 2 != 0) continue;  // still odd after the nudge: skip
    if (h2.det().val() % 2 != 0) h2.at(0, 1) = Padic::zero(F), h2.at(1, 1) = h2.at(1, 1) * Padic::make(F, 1, 1);
    if (h2.det().is_zero() || h2.det().val() % 2 != 0) continue;
    BallFunction lhs = weil_apply(E, eta, h1 * h2, Phi);
    BallFunction rhs = weil_apply(E, eta, h1, weil_apply(E, eta, h2, Phi));
    CHECK(approx_equal(lhs, rhs));
  }
}

TEST_CASE("dihedral Whittaker: equivariance, central character, Kirillov translate") {
  FieldDesc F(3);
  AdditiveCharacter psi(F);
  std::mt19937 rng(61);
  auto fix = dihedral_fixture(3, 2, rng);
  WhittakerGL2& W = fix.W;
  QuasiCharacter omega = W.central_character();

  for (int it = 0; it < 4; ++it) {
    Mat2 g = rand_mat2(F, rng, 0, 1);
    Cx base = gl2_eval(W, g);
    Padic x = rand_padic(F, rng, -2, 0);
    CHECK(close(gl2_eval(W, n2(F, x) * g), psi(x) * base, 1e-9));
    Padic zc = rand_padic(F, rng, -1, 1);
    CHECK(close(gl2_eval(W, diag2(F, zc, zc) * g), omega(zc) * base, 1e-9));
  }

  for (int it = 0; it < 3; ++it) {
    Mat2 C = rand_mat2(F, rng, 0, 1);
    SisFunction k = gl2_kirillov_translated(W, C);
    for (std::int64_t n = -3; n <= 3; ++n)
      for (std::int64_t u : {1, 2, 5}) {
        Padic t = Padic::make(F, n, u);
        CHECK(close(k.eval(t), gl2_eval(W, diag2(F, t, Padic::from_int(F, 1)) * C), 1e-9));
      }
  }
}

// ---------------------------------------------------------------------------
// GL(3).

TEST_CASE("GL(3) spherical torus values and generating identity") {
  FieldDesc F(3);
  std::array<Cx, 3> al = {Cx(0.8, 0.2), Cx(-0.5, 0.4), Cx(0.3, 0.9)};
  WhittakerGL3 W = WhittakerGL3::spherical(F, al[0], al[1], al[2]);
  double q = 3.0;
  CHECK(close(gl3_spherical_torus(W, 0, 0), Cx(1, 0)));
  CHECK(gl3_spherical_torus(W, -1, 0) == Cx(0, 0));
  CHECK(gl3_spherical_torus(W, 2, -1) == Cx(0, 0));
  // sum_n W(diag(p^n,1,1)) X^n = prod_i 1/(1 - alpha_i X / q) to degree 20.
  std::vector<Cx> coef(21, Cx(0, 0));
  coef[0] = 1.0;
  for (Cx a : al) {
    std::vector<Cx> next(21, Cx(0, 0));
    for (int n = 0; n <= 20; ++n)
      for (int j = 0; n + j <= 20; ++j)
        next[static_cast<size_t>(n + j)] += coef[static_cast<size_t>(n)] * std::pow(a / q, static_cast<double>(j));
    coef = next;
  }
  for (int n = 0; n <= 20; ++n)
    CHECK(close(gl3_spherical_torus(W, n, 0), coef[static_cast<size_t>(n)], 1e-8));
}

namespace {

WhittakerGL3 unramified_gl3(const FieldDesc& F, Cx a1, Cx a2, Cx zmu) {
  std::vector<GL2Cell> ell = {{Mat2::identity(F), 0, Cx(1, 0)}};
  BallFunction phi = BallFunction::lattice(F, 2, 0);
  WhittakerGL2 W0 = WhittakerGL2::spherical(F, a1, a2);
  QuasiCharacter mu(UnitCharacter::trivial(F.p), zmu);
  return WhittakerGL3::godement(F, ell, phi, W0, mu);
}

Mat3 n12(const FieldDesc& F, const Padic& x) {
  Mat3 m = Mat3::identity(F);
  m.at(0, 1) = x;
  return m;
}
Mat3 n23(const FieldDesc& F, const Padic& x) {
  Mat3 m = Mat3::identity(F);
  m.at(1, 2) = x;
  return m;
}
Mat3 nlow21(const FieldDesc& F, const Padic& x) {
  Mat3 m = Mat3::identity(F);
  m.at(1, 0) = x;
  return m;
}

}  // namespace

TEST_CASE("GL(3) section: normalization, equivariance, stability") {
  FieldDesc F(3);
  AdditiveCharacter psi(F);
  Cx a1(0.7, 0.3), a2(0.2, -0.6), zmu(0.5, 0.5);
  WhittakerGL3 W = unramified_gl3(F, a1, a2, zmu);

  Cx w1 = gl3_eval(W, Mat3::identity(F));
  CHECK(close(w1, Cx(1, 0), 1e-9));
  // Unipotent equivariance psi(n12 + n23).
  Padic x = Padic::make(F, -1, 2);
  CHECK(close(gl3_eval(W, n12(F, x)), psi(x), 1e-9));
  CHECK(close(gl3_eval(W, n23(F, x)), psi(x), 1e-9));
  // The section datum is invariant under right translation by elements of K
  // that preserve the (2x2, column) block structure, e.g. 1 + e21.
  Mat3 k21 = Mat3::identity(F);
  k21.at(1, 0) = Padic::from_int(F, 1);
  CHECK(close(gl3_eval(W, k21), w1, 1e-9));
  CHECK(close(gl3_eval(W, n12(F, x) * k21), psi(x), 1e-9));
  // Enumeration stability under window / level refinement.
  CHECK(close(gl3_eval(W, n12(F, x), 1, 0), psi(x), 1e-9));
  CHECK(close(gl3_eval(W, n12(F, x), 0, 1), psi(x), 1e-9));

  // A genuinely level-1 cell function: stability under finer coset explosion.
  std::vector<GL2Cell> ell1 = {{Mat2::identity(F), 1, Cx(1, 0)},
                               {diag2(F, Padic::make(F, 1, 1), Padic::from_int(F, 1)), 1, Cx(0.3, 0.4)}};
  WhittakerGL3 W1 = WhittakerGL3::godement(F, ell1, BallFunction::lattice(F, 2, 0),
                                           WhittakerGL2::spherical(F, a1, a2),
                                           QuasiCharacter(UnitCharacter::trivial(3), zmu));
  Cx v0 = gl3_eval(W1, n12(F, x));
  CHECK(close(gl3_eval(W1, n12(F, x), 0, 0, 1), v0, 1e-9));
}

TEST_CASE("GL(3) Kirillov row matches pointwise evaluation") {
  FieldDesc F(3);
  Cx a1(0.7, 0.3), a2(0.2, -0.6), zmu(0.5, 0.5);
  WhittakerGL3 W = unramified_gl3(F, a1, a2, zmu);

  SUBCASE("x = 0") {
    SisFunction row = gl3_kirillov_row(W, Padic::zero(F));
    for (std::int64_t n = -2; n <= 2; ++n)
      for (std::int64_t u : {1, 2}) {
        Padic t = Padic::make(F, n, u);
        Mat3 g = diag3(F, t, Padic::from_int(F, 1), Padic::from_int(F, 1));
        CHECK(close(row.eval(t), gl3_eval(W, g), 1e-9));
      }
  }

  SUBCASE("x with a pole") {
    Padic x = Padic::make(F, -1, 1);
    SisFunction row = gl3_kirillov_row(W, x);
    WhittakerGL3 Wf = W;
    Wf.u_level = 3;
    for (std::int64_t n = -1; n <= 1; ++n) {
      Padic t = Padic::make(F, n, 1);
      Mat3 g = diag3(F, t, Padic::from_int(F, 1), Padic::from_int(F, 1)) * nlow21(F, x);
      CHECK(close(row.eval(t), gl3_eval(Wf, g), 1e-9));
    }
  }

  SUBCASE("section-level GL(2) data gives the same row as its spherical model") {
    QuasiCharacter mu1(UnitCharacter::trivial(3), a1), mu2(UnitCharacter::trivial(3), a2);
    WhittakerGL2 G0 = WhittakerGL2::godement(F, BallFunction::lattice(F, 2, 0), mu1, mu2);
    WhittakerGL3 WG = W;
    WG.W0 = std::make_shared<WhittakerGL2>(G0);
    Padic x = Padic::from_int(F, 1);
    SisFunction r1 = gl3_kirillov_row(W, x);
    SisFunction r2 = gl3_kirillov_row(WG, x);
    CHECK(sis_approx_equal(r1, r2, 5, 1e-9));
  }
}

TEST_CASE("GL(3) dual evaluation transforms the central character") {
  FieldDesc F(3);
  WhittakerGL3 W = unramified_gl3(F, Cx(0.7, 0.3), Cx(0.2, -0.6), Cx(0.5, 0.5));
  QuasiCharacter omega = W.central_character();
  Padic z = Padic::make(F, 1, 2);
  Mat3 g = n12(F, Padic::from_int(F, 1));
  Cx base = gl3_eval_dual(W, g);
  Mat3 zg = diag3(F, z, z, z) * g;
  CHECK(close(gl3_eval_dual(W, zg), base / omega(z), 1e-9));
}
