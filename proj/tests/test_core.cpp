#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bdl/core.hpp"
#include "fixtures.hpp"

#include <algorithm>
#include <random>
#include <tuple>

using namespace bdl;

TEST_CASE("g is antisymmetric and has a pole on the diagonal") {
  const cplx c = fx::kC;
  const cplx u{0.3, 0.1}, v{-0.2, 0.7};
  CHECK(std::abs(g(c, u, v) + g(c, v, u)) < 1e-15);
  CHECK(std::abs(g(c, u, v) - c / (u - v)) < 1e-15);
  CHECK_THROWS_AS(g(c, u, u), PoleError);
}

TEST_CASE("set products") {
  const cplx c = fx::kC;
  const Params s{{0.1, 0.2}, {-0.5, 0.3}, {0.7, -0.6}};
  const cplx u{1.1, 0.4};
  cplx expect = 1.0;
  for (const auto& x : s) expect *= g(c, u, x);
  CHECK(rel_err(g_prod(c, u, s), expect) < 1e-14);
  CHECK(rel_err(g_prod(c, s, u), g_prod(c, u, s) * std::pow(-1.0, 3)) < 1e-14);
  CHECK(g_prod(c, u, Params{}) == cplx(1.0));

  // Delta = prod_{j>k} g(s_j, s_k), Delta' = prod_{j<k} g(s_j, s_k)
  const cplx d = g(c, s[1], s[0]) * g(c, s[2], s[0]) * g(c, s[2], s[1]);
  CHECK(rel_err(delta(c, s), d) < 1e-14);
  CHECK(rel_err(delta_prime(c, s), -d) < 1e-14);
  CHECK(delta(c, Params{}) == cplx(1.0));
  CHECK(delta(c, Params{{0.4, 0.0}}) == cplx(1.0));
}

TEST_CASE("spot values with c = 1 and c = 2") {
  CHECK(g(cplx(2.0), cplx(3.0), cplx(1.0)) == cplx(1.0));
  CHECK(g(cplx(1.0), cplx(0.0), cplx(1.0)) == cplx(-1.0));
  CHECK(std::abs(g(cplx(1.0), cplx(0.0, 1.0), cplx(0.0, -1.0)) - cplx(0.0, -0.5)) < 1e-15);
  const Params s01{0.0, 1.0};
  CHECK(g_prod(cplx(1.0), cplx(2.0), s01) == cplx(0.5));
  CHECK(g_prod(cplx(1.0), cplx(2.0), Params{{1.0}}) == g(cplx(1.0), cplx(2.0), cplx(1.0)));
  CHECK(delta(cplx(1.0), s01) == cplx(1.0));
  CHECK(delta_prime(cplx(1.0), s01) == cplx(-1.0));
  CHECK(delta(cplx(1.0), s01) * delta_prime(cplx(1.0), s01) == cplx(-1.0));
  CHECK_THROWS_AS(delta(cplx(1.0), Params{1.0, 1.0}), PoleError);
}

TEST_CASE("split recurrence on {2, 3}") {
  const Params s{2.0, 3.0};
  auto [a, b] = esp_recurrence_split(1, s, 0);
  CHECK(a == cplx(1.0));
  CHECK(b == cplx(3.0));
  std::tie(a, b) = esp_recurrence_split(2, s, 0);
  CHECK(a == cplx(3.0));
  CHECK(b == cplx(0.0));
  CHECK(esp(3, s) == cplx(0.0));
  CHECK_THROWS_AS(esp_recurrence_split(1, s, 2), std::out_of_range);
}

TEST_CASE("permutation behaviour of esp and Delta Delta'") {
  std::mt19937_64 rng(21);
  const cplx c = fx::kC;
  for (int trial = 0; trial < 20; ++trial) {
    const Params s = fx::draw_set(rng, 5);
    std::vector<cplx> v(s.begin(), s.end());
    std::shuffle(v.begin(), v.end(), rng);
    const Params t(v);
    for (int p = 0; p <= 5; ++p) CHECK(rel_err(esp(p, s), esp(p, t)) < 1e-12);
    CHECK(rel_err(delta(c, s) * delta_prime(c, s), delta(c, t) * delta_prime(c, t)) < 1e-12);
    cplx direct = 1.0;
    for (std::size_t j = 0; j < 5; ++j)
      for (std::size_t k = 0; k < j; ++k) direct *= g(c, t[j], t[k]);
    CHECK(rel_err(delta(c, t), direct) < 1e-12);
  }
}

TEST_CASE("complement keeps order and rejects bad indices") {
  const Params s{1.0, 2.0, 3.0};
  const Params r = s.complement(1);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == cplx(1.0));
  CHECK(r[1] == cplx(3.0));
  CHECK_THROWS_AS(s.complement(3), std::out_of_range);
  CHECK(s.with(4.0).size() == 4);
  CHECK(s.with_front(0.0)[0] == cplx(0.0));
  CHECK(s.head(2).size() == 2);
}

TEST_CASE("elementary symmetric polynomials") {
  const Params s{2.0, 3.0, 5.0};
  CHECK(esp(0, s) == cplx(1.0));
  CHECK(esp(1, s) == cplx(10.0));
  CHECK(esp(2, s) == cplx(31.0));
  CHECK(esp(3, s) == cplx(30.0));
  CHECK(esp(4, s) == cplx(0.0));
  CHECK(esp(-1, s) == cplx(0.0));
  CHECK(esp(0, Params{}) == cplx(1.0));
}

TEST_CASE("esp split recurrence over random sets") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Params s = fx::draw_set(rng, 5);
    for (int p = 0; p <= 5; ++p)
      for (std::size_t j = 0; j < 5; ++j) {
        const auto [first, second] = esp_recurrence_split(p, s, j);
        CHECK(rel_err(esp(p, s), s[j] * first + second) < 1e-12);
      }
  }
}

TEST_CASE("polynomial arithmetic") {
  const Poly p = Poly::linear(2.0) * Poly::linear(-1.0);  // z^2 - z - 2
  CHECK(std::abs(p(3.0) - cplx(4.0)) < 1e-14);
  CHECK(std::abs(p.derivative()(3.0) - cplx(5.0)) < 1e-14);
  CHECK(std::abs(Poly::linear(1.0).pow(3)(3.0) - cplx(8.0)) < 1e-14);
  CHECK(std::abs((p + Poly::constant(2.0))(2.0) - cplx(2.0)) < 1e-14);
}

TEST_CASE("relative error floor avoids 0/0") {
  CHECK(rel_err(0.0, 0.0) == 0.0);
  CHECK(rel_err(1.0, 1.0 + 1e-12) < 1e-11);
}
