#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "finsler/geometry.hpp"
#include "finsler/oracles.hpp"
#include "finsler/sampling.hpp"

using namespace finsler;

namespace {

double relDiff(double a, double b, double floor = 1e-10) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace

TEST_CASE("euclidean: identity metric, zero spray and connections") {
    MetricSpec spec = loadMetric("euclid3");
    PointState p{{0.7, 0.3, 0.9}, {1.3, 0.6, 1.1}};
    GeometryBundle b = computeBundle(spec, p);
    CHECK((b.g - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-14);
    for (double v : b.spray) CHECK(std::abs(v) <= 1e-14);
    CHECK(b.nonlinear.cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(b.berwaldConn.maxAbs() <= 1e-14);
    CHECK(b.chernConn.maxAbs() <= 1e-14);
    CHECK(b.chernH.maxAbs() <= 1e-12);
    CHECK(b.chernHV.maxAbs() <= 1e-12);
    CHECK(b.barthel.maxAbs() <= 1e-12);
    CHECK(b.cartanH.maxAbs() <= 1e-12);
}

TEST_CASE("locally Minkowski (x-independent, non-quadratic): curvatures vanish") {
    MetricSpec spec = parseMetric(
        "dim = 3\nF = (y1^4 + y2^4 + y3^4)^(1/4)\ndomain: y1 != 0\n");
    PointState p{{0.2, -0.4, 1.0}, {0.9, 1.2, 0.7}};
    GeometryBundle b = computeBundle(spec, p);
    CHECK(b.nonlinear.cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(b.chernH.maxAbs() <= 1e-12);
    CHECK(b.chernHV.maxAbs() <= 1e-12);
    CHECK(b.barthel.maxAbs() <= 1e-12);
    CHECK(b.cartan.maxAbs() > 1e-3);  // genuinely non-Riemannian
}

TEST_CASE("ex1: g contracts to the energy and E matches the hand value") {
    MetricSpec spec = loadMetric("ex1");
    PointState p{{0.0, 1.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.0}};
    GeometryBundle b = computeBundle(spec, p);
    CHECK(b.E == doctest::Approx(2.0).epsilon(1e-13));
    double gyy = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) gyy += b.g(i, j) * p.y[i] * p.y[j];
    CHECK(gyy == doctest::Approx(b.E).epsilon(1e-12));
    CHECK((b.g * b.gInv - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("ex1: frozen curvature values at the reference point") {
    MetricSpec spec = loadMetric("ex1");
    PointState p{{0.0, 1.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.0}};
    GeometryBundle b = computeBundle(spec, p);
    CHECK(b.chernH(0, 0, 0, 1) == doctest::Approx(5.0 / 18.0).epsilon(1e-10));
    CHECK(b.chernH(0, 1, 0, 1) == doctest::Approx(-5.0 / 9.0).epsilon(1e-10));
    CHECK(b.chernH(1, 0, 0, 1) == doctest::Approx(5.0 / 9.0).epsilon(1e-10));
    CHECK(b.chernH(1, 1, 0, 1) == doctest::Approx(-5.0 / 18.0).epsilon(1e-10));
}

TEST_CASE("ex1: curvature matches the closed forms at random points") {
    MetricSpec spec = loadMetric("ex1");
    auto pts = samplePoints(spec, sampleBoxFor(spec), 5, 42, sampleMarginFor(spec));
    for (const PointState& p : pts) {
        GeometryBundle b = computeBundle(spec, p);
        for (const auto& c : reference::ex1ChernH(p)) {
            double got = b.chernH(c.idx[0], c.idx[1], c.idx[2], c.idx[3]);
            CHECK(relDiff(got, c.value) <= 1e-10);
        }
    }
}

TEST_CASE("ex2: nonlinear connection matches the closed forms") {
    MetricSpec spec = loadMetric("ex2");
    auto pts = samplePoints(spec, sampleBoxFor(spec), 5, 43, sampleMarginFor(spec));
    for (const PointState& p : pts) {
        GeometryBundle b = computeBundle(spec, p, {1, 3}, static_cast<unsigned>(TensorField::Spray));
        Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(3, 3);
        for (const auto& c : reference::ex2Nonlinear(p)) expect(c.idx[0], c.idx[1]) = c.value;
        CHECK((b.nonlinear - expect).cwiseAbs().maxCoeff() <=
              1e-10 * std::max(1.0, expect.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("ex2: hv-curvature matches the twelve closed forms") {
    MetricSpec spec = loadMetric("ex2");
    auto pts = samplePoints(spec, sampleBoxFor(spec), 5, 44, sampleMarginFor(spec));
    for (const PointState& p : pts) {
        GeometryBundle b = computeBundle(spec, p);
        for (const auto& c : reference::ex2ChernHV(p)) {
            double got = b.chernHV(c.idx[0], c.idx[1], c.idx[2], c.idx[3]);
            CHECK(relDiff(got, c.value) <= 1e-10);
        }
        // the (h, j) pair is symmetric
        for (int a = 0; a < 3; ++a)
            for (int h = 0; h < 3; ++h)
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k)
                        CHECK(b.chernHV(a, h, j, k) == b.chernHV(a, j, h, k));
    }
}

TEST_CASE("ex3: spray G1, Berwald component, vanishing Landsberg") {
    MetricSpec spec = loadMetric("ex3");
    PointState p{{0.6, 1.3, 0.4}, {0.0, 1.0, 1.0}};
    GeometryBundle b = computeBundle(spec, p);
    CHECK(b.spray[0] == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(b.berwaldTensor(1, 1, 1, 1) == doctest::Approx(-3.0 / 16.0).epsilon(1e-10));
    // Landsberg vanishes although the Berwald tensor does not
    double scale = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                double s = 0.0;
                for (int h = 0; h < 3; ++h)
                    s += std::abs(b.yLow(h) * b.berwaldTensor(h, i, j, k));
                scale = std::max(scale, 0.5 * s);
            }
    CHECK(b.landsberg.maxAbs() <= 1e-9 * scale);
    CHECK(b.berwaldTensor.maxAbs() > 1e-3);

    auto pts = samplePoints(spec, sampleBoxFor(spec), 5, 45, sampleMarginFor(spec));
    for (const PointState& q : pts) {
        GeometryBundle bb = computeBundle(spec, q);
        CHECK(bb.spray[0] == doctest::Approx(reference::ex3SprayG1(q)).epsilon(1e-10));
        CHECK(bb.mixedLandsberg.maxAbs() <= 1e-10);
    }
}

TEST_CASE("ex2: Landsberg tensor is nonzero at generic points") {
    MetricSpec spec = loadMetric("ex2");
    auto pts = samplePoints(spec, sampleBoxFor(spec), 5, 46, sampleMarginFor(spec));
    int nonzero = 0;
    for (const PointState& p : pts) {
        GeometryBundle b = computeBundle(spec, p);
        if (b.landsberg.maxAbs() > 1e-6) ++nonzero;
    }
    CHECK(nonzero == 5);
}

TEST_CASE("riemannian: Berwald tensor vanishes, Chern equals Levi-Civita") {
    MetricSpec spec = loadMetric("riem-hyperbolic");
    auto pts = samplePoints(spec, sampleBoxFor(spec), 5, 47, sampleMarginFor(spec));
    for (const PointState& p : pts) {
        GeometryBundle b = computeBundle(spec, p);
        CHECK(b.berwaldTensor.maxAbs() <= 1e-12);
        CHECK(b.landsberg.maxAbs() <= 1e-12);
        CHECK(b.mixedLandsberg.maxAbs() <= 1e-10);
        Ten3 gamma = reference::hyperbolicChristoffel(p);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    CHECK(relDiff(b.chernConn(i, j, k), gamma(i, j, k)) <= 1e-9);
        Ten4 riem = reference::hyperbolicRiemann(p);
        for (int h = 0; h < 2; ++h)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (int k = 0; k < 2; ++k)
                        CHECK(relDiff(b.chernH(h, i, j, k), riem(h, i, j, k)) <= 1e-9);
    }
}

TEST_CASE("connection contracts to the nonlinear connection") {
    for (const char* name : {"ex1", "ex2", "ex3", "riem-hyperbolic"}) {
        MetricSpec spec = loadMetric(name);
        auto pts = samplePoints(spec, sampleBoxFor(spec), 3, 48, sampleMarginFor(spec));
        for (const PointState& p : pts) {
            GeometryBundle b = computeBundle(spec, p);
            double scale = std::max(1e-10, b.nonlinear.cwiseAbs().maxCoeff());
            for (int i = 0; i < b.n; ++i)
                for (int k = 0; k < b.n; ++k) {
                    double s = 0.0;
                    for (int j = 0; j < b.n; ++j) s += b.chernConn(i, j, k) * p.y[j];
                    CAPTURE(name);
                    CHECK(std::abs(s - b.nonlinear(i, k)) <= 1e-8 * scale);
                }
        }
    }
}

TEST_CASE("insufficient jet orders fail fast per tensor") {
    MetricSpec spec = loadMetric("ex2");
    PointState p{{0.9, 1.3, 0.4}, {1.1, 0.8, 1.7}};
    CHECK_THROWS_AS(computeBundle(spec, p, {2, 4}), InsufficientOrdersError);
    CHECK_THROWS_AS(
        computeBundle(spec, p, {2, 4}, static_cast<unsigned>(TensorField::BerwaldTensor)),
        InsufficientOrdersError);
    // Barthel curvature only needs (2,4)
    GeometryBundle b =
        computeBundle(spec, p, {2, 4}, static_cast<unsigned>(TensorField::Barthel));
    CHECK(b.has(TensorField::Barthel));
    // hv-curvature works at (1,5)
    GeometryBundle b2 =
        computeBundle(spec, p, {1, 5}, static_cast<unsigned>(TensorField::ChernHV));
    CHECK(b2.has(TensorField::ChernHV));
}

TEST_CASE("degenerate metric is refused") {
    MetricSpec spec = parseMetric("dim = 2\nE = y1^2\n");  // g = diag(1, 0)
    PointState p{{0.0, 0.0}, {1.0, 1.0}};
    CHECK_THROWS_AS(computeBundle(spec, p), DegenerateMetricError);
}

TEST_CASE("indefinite but invertible metric computes, with positive E") {
    MetricSpec spec = parseMetric("dim = 2\nE = y1*y2\n");
    PointState p{{0.0, 0.0}, {1.0, 1.0}};
    GeometryBundle b = computeBundle(spec, p, {2, 6}, static_cast<unsigned>(TensorField::Metric));
    CHECK(b.gCond == doctest::Approx(1.0));
    PointState neg{{0.0, 0.0}, {1.0, -1.0}};
    CHECK_THROWS_AS(computeBundle(spec, neg), DomainError);
}

TEST_CASE("homogeneity of N and scale invariance of the connection") {
    for (const char* name : {"ex1", "ex2", "ex3"}) {
        MetricSpec spec = loadMetric(name);
        auto pts = samplePoints(spec, sampleBoxFor(spec), 2, 49, sampleMarginFor(spec));
        for (const PointState& p : pts) {
            PointState q = p;
            for (double& v : q.y) v *= 2.0;
            GeometryBundle b1 = computeBundle(spec, p);
            GeometryBundle b2 = computeBundle(spec, q);
            double nscale = std::max(1e-10, b1.nonlinear.cwiseAbs().maxCoeff());
            CHECK((b2.nonlinear - 2.0 * b1.nonlinear).cwiseAbs().maxCoeff() <= 1e-8 * nscale);
            double gscale = std::max(1e-10, b1.chernConn.maxAbs());
            for (int i = 0; i < b1.n; ++i)
                for (int j = 0; j < b1.n; ++j)
                    for (int k = 0; k < b1.n; ++k)
                        CHECK(std::abs(b2.chernConn(i, j, k) - b1.chernConn(i, j, k)) <=
                              1e-8 * gscale);
        }
    }
}
