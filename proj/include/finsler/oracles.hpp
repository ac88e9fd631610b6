#pragma once

#include <array>
#include <vector>

#include "finsler/geometry.hpp"

namespace finsler::reference {

// Closed-form reference values for the built-in example metrics, evaluated
// directly from published component formulas. Independent of the jet
// pipeline; used as golden oracles by the test suites and the verify/
// reproduce commands.

// ex1 (dim 4): the four known Chern h-curvature components, 0-based index
// tuples (h, i, j, k) with the (j,k) pair antisymmetric.
struct Component4 {
    std::array<int, 4> idx;
    double value;
};
std::vector<Component4> ex1ChernH(const PointState& p);

// ex2 (dim 3): the five nonzero nonlinear-connection components N^i_j.
struct Component2 {
    std::array<int, 2> idx;
    double value;
};
std::vector<Component2> ex2Nonlinear(const PointState& p);

// ex2: the twelve known hv-curvature components Ps^a_{hjk}.
std::vector<Component4> ex2ChernHV(const PointState& p);

// ex3 (dim 3, f = exp(x1)): spray coefficient G^1 = (y1^2 - y2 y3)/2.
double ex3SprayG1(const PointState& p);

// riem-hyperbolic (dim 2): Levi-Civita data of a11 = 1, a22 = exp(2 x1),
// from hand-derived Christoffel symbols; curvature in the same sign/slot
// convention as GeometryBundle::chernH.
Ten3 hyperbolicChristoffel(const PointState& p);
Ten4 hyperbolicRiemann(const PointState& p);

}  // namespace finsler::reference
