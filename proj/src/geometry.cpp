#include "finsler/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace finsler {

double Ten3::maxAbs() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double Ten4::maxAbs() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

JetOrders requiredOrders(TensorField f) {
    switch (f) {
        case TensorField::Metric: return {0, 2};
        case TensorField::Spray: return {1, 3};
        case TensorField::ChernConn: return {1, 4};
        case TensorField::BerwaldConn: return {1, 4};
        case TensorField::BerwaldTensor: return {1, 6};
        case TensorField::CartanTensor: return {0, 3};
        case TensorField::Landsberg: return {1, 6};
        case TensorField::ChernH: return {2, 6};
        case TensorField::CartanH: return {2, 6};
        case TensorField::ChernHV: return {1, 5};
        case TensorField::Barthel: return {2, 4};
    }
    return {2, 6};
}

const char* tensorFieldName(TensorField f) {
    switch (f) {
        case TensorField::Metric: return "fundamental tensor";
        case TensorField::Spray: return "spray/nonlinear connection";
        case TensorField::ChernConn: return "Chern connection";
        case TensorField::BerwaldConn: return "Berwald connection";
        case TensorField::BerwaldTensor: return "Berwald tensor";
        case TensorField::CartanTensor: return "Cartan tensor";
        case TensorField::Landsberg: return "Landsberg tensor";
        case TensorField::ChernH: return "Chern h-curvature";
        case TensorField::CartanH: return "Cartan h-curvature";
        case TensorField::ChernHV: return "Chern hv-curvature";
        case TensorField::Barthel: return "Barthel curvature";
    }
    return "?";
}

JetOrders defaultOrders() {
    JetOrders o{2, 6};
    if (const char* env = std::getenv("FINSLER_DEFAULT_ORDERS")) {
        int dx, dy;
        if (std::sscanf(env, "%d,%d", &dx, &dy) == 2 && dx >= 0 && dy >= 0) o = {dx, dy};
    }
    return o;
}

namespace {

// Dependency closure over the tensor groups.
unsigned closure(unsigned fields) {
    auto f = [](TensorField t) { return static_cast<unsigned>(t); };
    unsigned out = fields;
    if (out & (f(TensorField::CartanH))) 
        out |= f(TensorField::ChernH) | f(TensorField::Barthel) | f(TensorField::CartanTensor);
    if (out & f(TensorField::ChernH)) out |= f(TensorField::ChernConn);
    if (out & f(TensorField::ChernHV)) out |= f(TensorField::ChernConn);
    if (out & f(TensorField::Barthel)) out |= f(TensorField::Spray);
    if (out & f(TensorField::Landsberg))
        out |= f(TensorField::BerwaldTensor) | f(TensorField::Metric);
    if (out & f(TensorField::ChernConn))
        out |= f(TensorField::Spray) | f(TensorField::BerwaldConn);
    if (out & f(TensorField::BerwaldTensor)) out |= f(TensorField::BerwaldConn);
    if (out & f(TensorField::BerwaldConn)) out |= f(TensorField::Spray);
    if (out & f(TensorField::CartanTensor)) out |= f(TensorField::Metric);
    if (out & f(TensorField::Spray)) out |= f(TensorField::Metric);
    return out;
}

struct Pipeline {
    const MetricSpec& spec;
    const JetSpace& space;
    int n;
    std::vector<Jet> X, Y;
    Jet E;

    Pipeline(const MetricSpec& s, const PointState& p, JetOrders orders)
        : spec(s), space(JetSpace::get(s.n, orders)), n(s.n) {
        X.reserve(n);
        Y.reserve(n);
        for (int i = 0; i < n; ++i) {
            X.push_back(orders.dx >= 1 ? Jet::variable(space, i, p.x[i])
                                       : Jet(space, p.x[i]));
            Y.push_back(orders.dy >= 1 ? Jet::variable(space, n + i, p.y[i])
                                       : Jet(space, p.y[i]));
        }
        Jet v = evalExpr<Jet>(spec.defining, std::span<const Jet>(X), std::span<const Jet>(Y));
        E = spec.givenAsNorm ? v * v : v;
    }

    Jet dx(const Jet& j, int i) const { return j.derivative(i); }
    Jet dy(const Jet& j, int i) const { return j.derivative(n + i); }
};

// Gauss-Jordan inverse of a symmetric jet matrix, pivoting on values.
std::vector<std::vector<Jet>> invertJetMatrix(std::vector<std::vector<Jet>> a,
                                              const JetSpace& space) {
    const int n = static_cast<int>(a.size());
    std::vector<std::vector<Jet>> inv(n, std::vector<Jet>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv[i][j] = Jet(space, i == j ? 1.0 : 0.0);
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col].value()) > std::abs(a[pivot][col].value())) pivot = r;
        if (a[pivot][col].value() == 0.0)
            throw DegenerateMetricError("fundamental tensor is singular at the point");
        std::swap(a[col], a[pivot]);
        std::swap(inv[col], inv[pivot]);
        Jet piv = a[col][col].inverse();
        for (int j = 0; j < n; ++j) {
            a[col][j] = a[col][j] * piv;
            inv[col][j] = inv[col][j] * piv;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            Jet f = a[r][col];
            for (int j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

}  // namespace

GeometryBundle computeBundle(const MetricSpec& spec, const PointState& p, JetOrders orders,
                             unsigned fields, double condLimit) {
    requireInDomain(spec, p);
    unsigned wanted = fields;
    for (unsigned bit = 0; bit < 11; ++bit) {
        TensorField f = static_cast<TensorField>(1u << bit);
        if (!(wanted & (1u << bit))) continue;
        JetOrders need = requiredOrders(f);
        if (orders.dx < need.dx || orders.dy < need.dy) {
            std::ostringstream msg;
            msg << "insufficient jet orders (" << orders.dx << "," << orders.dy << ") for "
                << tensorFieldName(f) << "; requires (" << need.dx << "," << need.dy << ")";
            throw InsufficientOrdersError(msg.str());
        }
    }
    unsigned todo = closure(wanted);
    auto need = [&](TensorField f) { return (todo & static_cast<unsigned>(f)) != 0; };

    GeometryBundle b;
    b.n = spec.n;
    b.point = p;
    b.orders = orders;
    b.fields = todo;
    const int n = spec.n;

    Pipeline pl(spec, p, orders);
    b.E = pl.E.value();
    if (!std::isfinite(b.E)) throw EvalError("energy is not finite at the point");
    if (b.E <= 0.0)
        throw DomainError("energy is not positive at the point; not a Finsler point");
    b.F = std::sqrt(b.E);

    // fundamental tensor as jets, g_ij = 1/2 d2E/dyi dyj
    std::vector<std::vector<Jet>> gJ(n, std::vector<Jet>(n));
    for (int i = 0; i < n; ++i) {
        Jet dEi = pl.dy(pl.E, i);
        for (int j = i; j < n; ++j) {
            gJ[i][j] = pl.dy(dEi, j) * 0.5;
            if (j != i) gJ[j][i] = gJ[i][j];
        }
    }
    b.g.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b.g(i, j) = gJ[i][j].value();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(b.g);
    double smin = svd.singularValues()(n - 1);
    double smax = svd.singularValues()(0);
    b.gCond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(b.gCond < condLimit))
        throw DegenerateMetricError(
            "fundamental tensor is numerically degenerate at the point (condition number " +
            std::to_string(b.gCond) + ")");

    std::vector<std::vector<Jet>> gInvJ = invertJetMatrix(gJ, pl.space);
    b.gInv.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b.gInv(i, j) = gInvJ[i][j].value();

    b.yLow.resize(n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += b.g(i, j) * p.y[j];
        b.yLow(i) = s;
    }

    if (!need(TensorField::Spray) && !need(TensorField::CartanTensor)) return b;

    // Cartan tensor (pure y-derivatives of E)
    if (need(TensorField::CartanTensor)) {
        b.cartan = Ten3(n);
        for (int i = 0; i < n; ++i) {
            Jet dEi = pl.dy(pl.E, i);
            for (int j = i; j < n; ++j) {
                Jet dEij = pl.dy(dEi, j);
                for (int k = j; k < n; ++k) {
                    double c = 0.25 * pl.dy(dEij, k).value();
                    b.cartan(i, j, k) = c;
                    b.cartan(i, k, j) = c;
                    b.cartan(j, i, k) = c;
                    b.cartan(j, k, i) = c;
                    b.cartan(k, i, j) = c;
                    b.cartan(k, j, i) = c;
                }
            }
        }
    }

    if (!need(TensorField::Spray)) return b;

    // spray: G^i = 1/4 g^{il} (y^k d2E/dy^l dx^k - dE/dx^l)
    std::vector<Jet> GJ(n);
    {
        std::vector<Jet> rhs(n);
        for (int l = 0; l < n; ++l) {
            Jet dEl = pl.dy(pl.E, l);
            Jet acc = -pl.dx(pl.E, l);
            for (int k = 0; k < n; ++k) acc += pl.Y[k] * pl.dx(dEl, k);
            rhs[l] = acc;
        }
        for (int i = 0; i < n; ++i) {
            Jet acc = gInvJ[i][0] * rhs[0];
            for (int l = 1; l < n; ++l) acc += gInvJ[i][l] * rhs[l];
            GJ[i] = acc * 0.25;
        }
    }
    b.spray.resize(n);
    for (int i = 0; i < n; ++i) b.spray[i] = GJ[i].value();

    std::vector<std::vector<Jet>> NJ(n, std::vector<Jet>(n));
    b.nonlinear.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            NJ[i][j] = pl.dy(GJ[i], j);
            b.nonlinear(i, j) = NJ[i][j].value();
        }

    std::vector<std::vector<std::vector<Jet>>> GcJ;
    if (need(TensorField::BerwaldConn)) {
        GcJ.assign(n, std::vector<std::vector<Jet>>(n, std::vector<Jet>(n)));
        b.berwaldConn = Ten3(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = j; k < n; ++k) {
                    GcJ[i][j][k] = pl.dy(NJ[i][j], k);
                    if (k != j) GcJ[i][k][j] = GcJ[i][j][k];
                    b.berwaldConn(i, j, k) = GcJ[i][j][k].value();
                    b.berwaldConn(i, k, j) = GcJ[i][j][k].value();
                }
    }

    if (need(TensorField::BerwaldTensor)) {
        b.berwaldTensor = Ten4(n);
        for (int h = 0; h < n; ++h)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    for (int k = j; k < n; ++k) {
                        double v = pl.dy(GcJ[h][i][j], k).value();
                        b.berwaldTensor(h, i, j, k) = v;
                        b.berwaldTensor(h, i, k, j) = v;
                        b.berwaldTensor(h, j, i, k) = v;
                        b.berwaldTensor(h, j, k, i) = v;
                        b.berwaldTensor(h, k, i, j) = v;
                        b.berwaldTensor(h, k, j, i) = v;
                    }
                }
    }

    if (need(TensorField::Landsberg)) {
        b.landsberg = Ten3(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double s = 0.0;
                    for (int h = 0; h < n; ++h) s += b.yLow(h) * b.berwaldTensor(h, i, j, k);
                    b.landsberg(i, j, k) = 0.5 * s;
                }
    }

    if (!need(TensorField::ChernConn) && !need(TensorField::Barthel)) return b;

    // horizontal derivative of a jet: δ_j T = dT/dx^j - N^m_j dT/dy^m
    auto deltaJet = [&](const Jet& T, int j) {
        Jet r = pl.dx(T, j);
        for (int m = 0; m < n; ++m) r -= NJ[m][j] * pl.dy(T, m);
        return r;
    };
    // value-level horizontal derivative (constant term only)
    auto deltaValue = [&](const Jet& T, int j) {
        double r = pl.dx(T, j).value();
        for (int m = 0; m < n; ++m) r -= b.nonlinear(m, j) * pl.dy(T, m).value();
        return r;
    };

    std::vector<std::vector<std::vector<Jet>>> GammaJ;
    if (need(TensorField::ChernConn)) {
        // δ_j g_sk as jets; dgJ[j][s][k]
        std::vector<std::vector<std::vector<Jet>>> dgJ(
            n, std::vector<std::vector<Jet>>(n, std::vector<Jet>(n)));
        for (int j = 0; j < n; ++j)
            for (int s = 0; s < n; ++s)
                for (int k = s; k < n; ++k) {
                    dgJ[j][s][k] = deltaJet(gJ[s][k], j);
                    if (k != s) dgJ[j][k][s] = dgJ[j][s][k];
                }

        GammaJ.assign(n, std::vector<std::vector<Jet>>(n, std::vector<Jet>(n)));
        b.chernConn = Ten3(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = j; k < n; ++k) {
                    Jet acc(pl.space, 0.0);
                    bool first = true;
                    for (int s = 0; s < n; ++s) {
                        Jet term = gInvJ[i][s] * (dgJ[j][s][k] + dgJ[k][j][s] - dgJ[s][j][k]);
                        if (first) {
                            acc = term;
                            first = false;
                        } else {
                            acc += term;
                        }
                    }
                    GammaJ[i][j][k] = acc * 0.5;
                    if (k != j) GammaJ[i][k][j] = GammaJ[i][j][k];
                    b.chernConn(i, j, k) = GammaJ[i][j][k].value();
                    b.chernConn(i, k, j) = GammaJ[i][j][k].value();
                }

        b.mixedLandsberg = Ten3(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    b.mixedLandsberg(i, j, k) = b.berwaldConn(i, j, k) - b.chernConn(i, j, k);
    }

    if (need(TensorField::ChernHV)) {
        b.chernHV = Ten4(n);
        for (int a = 0; a < n; ++a)
            for (int h = 0; h < n; ++h)
                for (int j = h; j < n; ++j)
                    for (int k = 0; k < n; ++k) {
                        double v = pl.dy(GammaJ[a][h][j], k).value();
                        b.chernHV(a, h, j, k) = v;
                        b.chernHV(a, j, h, k) = v;
                    }
    }

    if (need(TensorField::Barthel)) {
        b.barthel = Ten3(n);
        for (int m = 0; m < n; ++m)
            for (int j = 0; j < n; ++j)
                for (int k = j + 1; k < n; ++k) {
                    double v = -(deltaValue(NJ[m][k], j) - deltaValue(NJ[m][j], k));
                    b.barthel(m, j, k) = v;
                    b.barthel(m, k, j) = -v;
                }
    }

    if (need(TensorField::ChernH)) {
        b.chernH = Ten4(n);
        for (int h = 0; h < n; ++h)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = j + 1; k < n; ++k) {
                        double t = deltaValue(GammaJ[h][i][k], j) - deltaValue(GammaJ[h][i][j], k);
                        for (int s = 0; s < n; ++s)
                            t += b.chernConn(h, j, s) * b.chernConn(s, i, k) -
                                 b.chernConn(h, k, s) * b.chernConn(s, i, j);
                        b.chernH(h, i, j, k) = -t;
                        b.chernH(h, i, k, j) = t;
                    }
        b.chernHLow = Ten4(n);
        for (int w = 0; w < n; ++w)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) {
                        double s = 0.0;
                        for (int h = 0; h < n; ++h) s += b.g(h, w) * b.chernH(h, i, j, k);
                        b.chernHLow(w, i, j, k) = s;
                    }
    }

    if (need(TensorField::CartanH)) {
        b.cartanH = Ten4(n);
        for (int h = 0; h < n; ++h)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) {
                        double corr = 0.0;
                        for (int m = 0; m < n; ++m)
                            for (int s = 0; s < n; ++s)
                                corr += b.gInv(h, m) * b.cartan(m, i, s) * b.barthel(s, j, k);
                        b.cartanH(h, i, j, k) = b.chernH(h, i, j, k) + corr;
                    }
    }

    return b;
}

}  // namespace finsler
