#include "finsler/sampling.hpp"

#include <cmath>

namespace finsler {

namespace {

bool admissible(const MetricSpec& spec, const PointState& p, double margin) {
    bool allZero = true;
    for (double v : p.y) allZero = allZero && v == 0.0;
    if (allZero) return false;
    std::span<const double> xs(p.x), ys(p.y);
    for (const Constraint& c : spec.constraints) {
        double l = evalExpr<double>(c.lhs, xs, ys);
        double r = evalExpr<double>(c.rhs, xs, ys);
        double m = l - r;
        switch (c.op) {
            case RelOp::GT:
                if (!(m > margin)) return false;
                break;
            case RelOp::GE:
                if (!(m >= margin)) return false;
                break;
            case RelOp::LT:
                if (!(m < -margin)) return false;
                break;
            case RelOp::LE:
                if (!(m <= -margin)) return false;
                break;
            case RelOp::NE:
                if (!(std::abs(m) > margin)) return false;
                break;
        }
    }
    return true;
}

}  // namespace

PointState samplePoint(const MetricSpec& spec, const Box& box, Rng& rng, double margin,
                       int maxAttempts) {
    if (static_cast<int>(box.x.size()) != spec.n || static_cast<int>(box.y.size()) != spec.n)
        throw DomainError("sampling box dimension does not match the metric");
    PointState p;
    p.x.resize(spec.n);
    p.y.resize(spec.n);
    for (int attempt = 0; attempt < maxAttempts; ++attempt) {
        for (int i = 0; i < spec.n; ++i) p.x[i] = rng.uniform(box.x[i][0], box.x[i][1]);
        for (int i = 0; i < spec.n; ++i) p.y[i] = rng.uniform(box.y[i][0], box.y[i][1]);
        if (admissible(spec, p, margin)) return p;
    }
    throw DomainError("no in-domain sample found in " + std::to_string(maxAttempts) +
                      " attempts; the sampling box may not intersect the domain");
}

std::vector<PointState> samplePoints(const MetricSpec& spec, const Box& box, int count,
                                     std::uint64_t seed, double margin) {
    Rng rng(seed);
    std::vector<PointState> pts;
    pts.reserve(count);
    for (int i = 0; i < count; ++i) pts.push_back(samplePoint(spec, box, rng, margin));
    return pts;
}

}  // namespace finsler
