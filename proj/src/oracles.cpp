#include "finsler/oracles.hpp"

#include <cmath>

namespace finsler::reference {

std::vector<Component4> ex1ChernH(const PointState& p) {
    const double x2 = p.x[1];
    const double y1 = p.y[0], y2 = p.y[1];
    const double Q = 4 * std::pow(y2, 4) + x2 * x2 * std::pow(y1, 4);
    std::vector<Component4> out;
    out.push_back({{0, 0, 0, 1}, Q / (18 * x2 * x2 * y1 * std::pow(y2, 3))});
    out.push_back({{0, 1, 0, 1}, -Q / (9 * x2 * x2 * std::pow(y2, 4))});
    out.push_back({{1, 0, 0, 1},
                   (4 * y1 * y1 * std::pow(y2, 4) + x2 * x2 * std::pow(y1, 6)) /
                       (9 * std::pow(y2, 6))});
    out.push_back({{1, 1, 0, 1},
                   -(4 * std::pow(y1, 3) * std::pow(y2, 4) + x2 * x2 * std::pow(y1, 7)) /
                       (18 * std::pow(y2, 7))});
    return out;
}

std::vector<Component2> ex2Nonlinear(const PointState& p) {
    const double x1 = p.x[0], x2 = p.x[1];
    const double y1 = p.y[0], y2 = p.y[1], y3 = p.y[2];
    const double D = -y3 + 4 * y2;
    std::vector<Component2> out;
    out.push_back({{0, 0}, -0.5 * x2 * y1});
    out.push_back({{1, 1}, -4 * x1 * std::pow(y2, 3) * (3 * y2 - y3) / (D * D * y3)});
    out.push_back({{1, 2}, 2 * x1 * std::pow(y2, 4) * (2 * y2 - y3) / (D * D * y3 * y3)});
    out.push_back({{2, 1}, -x1 * y3 * (2 * y2 - y3) * y2 / (D * D)});
    out.push_back({{2, 2}, -2 * x1 * std::pow(y2, 3) / (D * D)});
    return out;
}

std::vector<Component4> ex2ChernHV(const PointState& p) {
    const double x1 = p.x[0];
    const double y2 = p.y[1], y3 = p.y[2];
    const double D = -y3 + 4 * y2;
    const double D4 = std::pow(D, 4);
    const double q = -std::pow(y3, 3) + 8 * y3 * y3 * y2 - 24 * y2 * y2 * y3 +
                     24 * std::pow(y2, 3);
    const double pq = -28 * y2 * y2 * y3 + 32 * std::pow(y2, 3) + 8 * y3 * y3 * y2 -
                      std::pow(y3, 3);
    const double r = -8 * y2 * y3 + 8 * y2 * y2 + y3 * y3;
    const double w = y3 * y3 - 4 * y2 * y3 + 8 * y2 * y2;
    std::vector<Component4> out;
    out.push_back({{1, 1, 1, 1}, -12 * x1 * y2 * q / (y3 * D4)});
    out.push_back({{1, 1, 1, 2}, 12 * x1 * y2 * y2 * q / (y3 * y3 * D4)});
    out.push_back({{2, 1, 1, 1}, 6 * x1 * y3 * w / D4});
    out.push_back({{2, 1, 1, 2}, -6 * x1 * y2 * w / D4});
    out.push_back({{1, 1, 2, 1}, 6 * x1 * y2 * y2 * pq / (y3 * y3 * D4)});
    out.push_back({{1, 1, 2, 2}, -6 * x1 * std::pow(y2, 3) * pq / (std::pow(y3, 3) * D4)});
    out.push_back({{2, 1, 2, 1}, -12 * x1 * y2 * y2 * y3 / D4});
    out.push_back({{2, 1, 2, 2}, 12 * x1 * std::pow(y2, 3) / D4});
    out.push_back({{1, 2, 2, 1},
                   -48 * x1 * std::pow(y2, 5) * (2 * y2 - y3) / (std::pow(y3, 3) * D4)});
    out.push_back({{1, 2, 2, 2},
                   48 * x1 * std::pow(y2, 6) * (2 * y2 - y3) / (std::pow(y3, 4) * D4)});
    out.push_back({{2, 2, 2, 1}, -6 * x1 * y2 * y2 * r / (y3 * D4)});
    out.push_back({{2, 2, 2, 2}, 6 * x1 * std::pow(y2, 3) * r / (y3 * y3 * D4)});
    return out;
}

double ex3SprayG1(const PointState& p) {
    return 0.5 * (p.y[0] * p.y[0] - p.y[1] * p.y[2]);
}

Ten3 hyperbolicChristoffel(const PointState& p) {
    Ten3 gamma(2);
    const double e2 = std::exp(2 * p.x[0]);
    gamma(0, 1, 1) = -e2;
    gamma(1, 0, 1) = 1.0;
    gamma(1, 1, 0) = 1.0;
    return gamma;
}

Ten4 hyperbolicRiemann(const PointState& p) {
    // hand-derived: the only nonzero x-derivative is d/dx1 of Γ^1_22 = -2 e^{2x1}
    Ten3 gamma = hyperbolicChristoffel(p);
    Ten3 dGamma1(2);  // d(Γ^h_ik)/dx1
    dGamma1(0, 1, 1) = -2.0 * std::exp(2 * p.x[0]);

    Ten4 riem(2);
    for (int h = 0; h < 2; ++h)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) {
                    double dj = j == 0 ? dGamma1(h, i, k) : 0.0;
                    double dk = k == 0 ? dGamma1(h, i, j) : 0.0;
                    double t = dj - dk;
                    for (int s = 0; s < 2; ++s)
                        t += gamma(h, j, s) * gamma(s, i, k) - gamma(h, k, s) * gamma(s, i, j);
                    riem(h, i, j, k) = -t;
                }
    return riem;
}

}  // namespace finsler::reference
