#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "finsler/jet.hpp"

using namespace finsler;

namespace {

std::vector<int> idx(std::initializer_list<int> a) { return std::vector<int>(a); }

// Deterministic random jet with small coefficients.
Jet randomJet(const JetSpace& sp, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    const int n = sp.dim();
    Jet j(sp, dist(rng));
    for (int v = 0; v < 2 * n; ++v) {
        Jet var = Jet::variable(sp, v, 0.0);
        j += dist(rng) * var + dist(rng) * var * var;
    }
    return j;
}

double maxCoeffDiff(const Jet& a, const Jet& b, JetOrders within) {
    const JetSpace& sp = a.space();
    const int n = sp.dim();
    double m = 0.0;
    std::vector<int> alpha(2 * n, 0);
    // walk the whole box via indexOf on explicit exponents
    std::function<void(int, int, int)> rec = [&](int v, int dxLeft, int dyLeft) {
        if (v == 2 * n) {
            m = std::max(m, std::abs(a.coefficient(alpha) - b.coefficient(alpha)));
            return;
        }
        int cap = v < n ? dxLeft : dyLeft;
        for (int e = 0; e <= cap; ++e) {
            alpha[v] = e;
            rec(v + 1, v < n ? dxLeft - e : dxLeft, v >= n ? dyLeft - e : dyLeft);
        }
        alpha[v] = 0;
    };
    rec(0, within.dx, within.dy);
    return m;
}

}  // namespace

TEST_CASE("variable jets carry value and unit slope") {
    const JetSpace& sp = JetSpace::get(1, {0, 2});
    Jet y1 = Jet::variable(sp, 1, 3.0);
    CHECK(y1.value() == 3.0);
    CHECK(y1.coefficient(idx({0, 1})) == 1.0);
    CHECK(y1.coefficient(idx({0, 2})) == 0.0);

    const JetSpace& sp2 = JetSpace::get(2, {2, 0});
    Jet x2 = Jet::variable(sp2, 1, -1.0);
    CHECK(x2.value() == -1.0);
    CHECK(x2.coefficient(idx({0, 1, 0, 0})) == 1.0);
}

TEST_CASE("variable with zero group order is an error") {
    const JetSpace& sp = JetSpace::get(2, {0, 0});
    CHECK_THROWS_AS(Jet::variable(sp, 2, 1.0), InsufficientOrdersError);
    CHECK_THROWS_AS(Jet::variable(sp, 0, 1.0), InsufficientOrdersError);
}

TEST_CASE("(1 + t)(1 - t) = 1 - t^2") {
    const JetSpace& sp = JetSpace::get(1, {0, 2});
    Jet t = Jet::variable(sp, 1, 0.0);
    Jet p = (1.0 + t) * (1.0 - t);
    CHECK(p.value() == doctest::Approx(1.0));
    CHECK(p.coefficient(idx({0, 1})) == doctest::Approx(0.0));
    CHECK(p.coefficient(idx({0, 2})) == doctest::Approx(-1.0));
}

TEST_CASE("exp of the zero jet is the constant 1") {
    const JetSpace& sp = JetSpace::get(2, {1, 3});
    Jet z(sp, 0.0);
    Jet e = z.exp();
    CHECK(e.value() == doctest::Approx(1.0));
    CHECK(maxCoeffDiff(e, Jet(sp, 1.0), {1, 3}) == doctest::Approx(0.0));
}

TEST_CASE("atan at constant 1: linear coefficient is 1/2") {
    // oracle: d/dt atan(1+t) at 0 = 1/(1+1^2) = 0.5
    const JetSpace& sp = JetSpace::get(1, {0, 3});
    Jet t = Jet::variable(sp, 1, 1.0);
    Jet a = t.atan();
    CHECK(a.value() == doctest::Approx(std::atan(1.0)));
    CHECK(a.coefficient(idx({0, 1})) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("partial extraction: jet of y1^3") {
    const JetSpace& sp = JetSpace::get(1, {0, 3});
    Jet y1 = Jet::variable(sp, 1, 2.0);
    Jet p = y1.powInt(3);
    CHECK(p.value() == doctest::Approx(8.0));
    CHECK(p.partial(idx({0, 3})) == doctest::Approx(6.0));     // 3! * 1
    CHECK(p.partial(idx({0, 2})) == doctest::Approx(12.0));    // 6 y1
    CHECK(p.partial(idx({0, 1})) == doctest::Approx(12.0));    // 3 y1^2
    CHECK_THROWS_AS(p.partial(idx({1, 0})), InsufficientOrdersError);
}

TEST_CASE("partial beyond truncation orders is an error") {
    const JetSpace& sp = JetSpace::get(2, {1, 2});
    Jet j = Jet::variable(sp, 2, 1.5);
    std::vector<int> tooHigh = {0, 0, 3, 0};
    CHECK_THROWS_AS(j.partial(tooHigh), InsufficientOrdersError);
}

TEST_CASE("ring laws on random jets") {
    const JetSpace& sp = JetSpace::get(2, {2, 4});
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 20; ++trial) {
        Jet a = randomJet(sp, rng);
        Jet b = randomJet(sp, rng);
        Jet c = randomJet(sp, rng);
        CHECK(maxCoeffDiff(a + b, b + a, sp.orders()) <= 1e-12);
        CHECK(maxCoeffDiff(a * b, b * a, sp.orders()) <= 1e-12);
        CHECK(maxCoeffDiff((a + b) + c, a + (b + c), sp.orders()) <= 1e-12);
        CHECK(maxCoeffDiff((a * b) * c, a * (b * c), sp.orders()) <= 1e-12);
        CHECK(maxCoeffDiff(a * (b + c), a * b + a * c, sp.orders()) <= 1e-12);
    }
}

TEST_CASE("exp(log(j)) and sqrt(j)^2 recover j") {
    const JetSpace& sp = JetSpace::get(2, {1, 4});
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        Jet j = randomJet(sp, rng);
        j += 3.0;  // positive constant term
        Jet back = j.log().exp();
        Jet sq = j.sqrt();
        double scale = std::abs(j.value());
        CHECK(maxCoeffDiff(back, j, sp.orders()) <= 1e-10 * scale);
        CHECK(maxCoeffDiff(sq * sq, j, sp.orders()) <= 1e-10 * scale);
    }
}

TEST_CASE("derivative extraction matches analytic derivatives of polynomials") {
    // f = 2 x1^2 y1 - 3 x1 y1^2 + 0.5 y1^3
    const JetSpace& sp = JetSpace::get(1, {2, 3});
    const double xv = 1.3, yv = -0.7;
    Jet x1 = Jet::variable(sp, 0, xv);
    Jet y1 = Jet::variable(sp, 1, yv);
    Jet f = 2.0 * x1 * x1 * y1 - 3.0 * x1 * y1 * y1 + 0.5 * y1.powInt(3);
    CHECK(f.partial(idx({1, 0})) == doctest::Approx(4 * xv * yv - 3 * yv * yv).epsilon(1e-12));
    CHECK(f.partial(idx({0, 1})) ==
          doctest::Approx(2 * xv * xv - 6 * xv * yv + 1.5 * yv * yv).epsilon(1e-12));
    CHECK(f.partial(idx({1, 1})) == doctest::Approx(4 * xv - 6 * yv).epsilon(1e-12));
    CHECK(f.partial(idx({2, 1})) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(f.partial(idx({0, 3})) == doctest::Approx(3.0).epsilon(1e-12));

    Jet fy = f.derivative(1);
    CHECK(fy.trusted().dy == 2);
    CHECK(fy.value() == doctest::Approx(f.partial(idx({0, 1}))));
}

TEST_CASE("anisotropic truncation is honored in products") {
    const JetSpace& sp = JetSpace::get(1, {2, 3});
    Jet x = Jet::variable(sp, 0, 0.0);
    Jet y = Jet::variable(sp, 1, 0.0);
    Jet p = (1.0 + x + x * x) * (1.0 + y + y * y * y);
    // every in-box coefficient of the product is exact
    CHECK(p.coefficient(idx({2, 3})) == doctest::Approx(1.0));
    CHECK(p.coefficient(idx({1, 1})) == doctest::Approx(1.0));
    // powers that would exceed a cap contribute nothing anywhere
    Jet q = x.powInt(3);
    CHECK(maxCoeffDiff(q, Jet(sp, 0.0), sp.orders()) == 0.0);
}

TEST_CASE("trusted orders shrink through derivatives and gate extraction") {
    const JetSpace& sp = JetSpace::get(1, {1, 3});
    Jet y = Jet::variable(sp, 1, 2.0);
    Jet f = y.powInt(3);
    Jet d1 = f.derivative(1);
    Jet d2 = d1.derivative(1);
    Jet d3 = d2.derivative(1);
    CHECK(d3.value() == doctest::Approx(6.0));
    CHECK_THROWS_AS(d3.derivative(1), InsufficientOrdersError);
    std::vector<int> a = {0, 1};
    CHECK_THROWS_AS(d3.coefficient(a), InsufficientOrdersError);
}

TEST_CASE("division and integer powers with negative bases") {
    const JetSpace& sp = JetSpace::get(1, {0, 4});
    Jet y = Jet::variable(sp, 1, -2.0);
    Jet p = y.powInt(2);
    CHECK(p.value() == doctest::Approx(4.0));
    Jet r = 1.0 / y;
    CHECK(r.value() == doctest::Approx(-0.5));
    CHECK(maxCoeffDiff(r * y, Jet(sp, 1.0), sp.orders()) <= 1e-14);
    Jet n3 = y.powInt(-3);
    CHECK(n3.value() == doctest::Approx(-0.125));
    CHECK_THROWS_AS(y.sqrt(), EvalError);
    CHECK_THROWS_AS(y.log(), EvalError);
    Jet z(sp, 0.0);
    CHECK_THROWS_AS(y / z, EvalError);
}

TEST_CASE("sin and cos compose correctly") {
    const JetSpace& sp = JetSpace::get(1, {0, 4});
    Jet y = Jet::variable(sp, 1, 0.6);
    Jet s = y.sin(), c = y.cos();
    CHECK(s.value() == doctest::Approx(std::sin(0.6)));
    CHECK(maxCoeffDiff(s * s + c * c, Jet(sp, 1.0), sp.orders()) <= 1e-14);
    CHECK(s.partial(idx({0, 1})) == doctest::Approx(std::cos(0.6)).epsilon(1e-13));
    CHECK(c.partial(idx({0, 2})) == doctest::Approx(-std::cos(0.6)).epsilon(1e-13));
}
