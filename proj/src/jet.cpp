#include "finsler/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

namespace finsler {

namespace {

constexpr int kMaxDim = 8;
constexpr int kMaxOrder = 12;

void enumerateMultiIndices(int n, int cap, std::vector<std::uint8_t>& exps,
                           std::vector<std::uint8_t>& degs) {
    // graded enumeration: all alpha in N^n with |alpha| <= cap, degree-major
    std::vector<int> cur(n, 0);
    for (int d = 0; d <= cap; ++d) {
        // enumerate compositions of d into n parts
        std::fill(cur.begin(), cur.end(), 0);
        cur[0] = d;
        while (true) {
            for (int v = 0; v < n; ++v) exps.push_back(static_cast<std::uint8_t>(cur[v]));
            degs.push_back(static_cast<std::uint8_t>(d));
            // next composition in colex-ish order
            int i = 0;
            while (i < n - 1 && cur[i] == 0) ++i;
            if (i == n - 1) break;
            int v = cur[i];
            cur[i] = 0;
            cur[0] = v - 1;
            cur[i + 1] += 1;
        }
    }
}

std::int64_t packGroup(std::span<const int> alpha) {
    std::int64_t key = 0;
    for (int a : alpha) {
        if (a < 0 || a > kMaxOrder) return -1;
        key = key * (kMaxOrder + 1) + a;
    }
    return key;
}

}  // namespace

JetSpace::JetSpace(int n, JetOrders orders) : n_(n), orders_(orders) {
    if (n < 1 || n > kMaxDim)
        throw Error(ErrorCode::Parse, "jet dimension out of range: " + std::to_string(n));
    if (orders.dx < 0 || orders.dy < 0 || orders.dx > kMaxOrder || orders.dy > kMaxOrder)
        throw InsufficientOrdersError("jet orders out of range");

    enumerateMultiIndices(n, orders.dx, xExp_, xDeg_);
    enumerateMultiIndices(n, orders.dy, yExp_, yDeg_);

    auto buildPairs = [n](const std::vector<std::uint8_t>& exp,
                          const std::vector<std::uint8_t>& deg, int cap,
                          std::vector<Pair>& pairs, std::vector<int>& cuts) {
        const int count = static_cast<int>(deg.size());
        std::map<std::vector<int>, int> lookup;
        for (int i = 0; i < count; ++i) {
            std::vector<int> key(n);
            for (int v = 0; v < n; ++v) key[v] = exp[i * n + v];
            lookup[key] = i;
        }
        std::vector<int> sum(n);
        for (int a = 0; a < count; ++a) {
            for (int b = 0; b < count; ++b) {
                if (deg[a] + deg[b] > cap) continue;
                for (int v = 0; v < n; ++v) sum[v] = exp[a * n + v] + exp[b * n + v];
                pairs.push_back({a, b, lookup.at(sum)});
            }
        }
        std::stable_sort(pairs.begin(), pairs.end(),
                         [&](const Pair& p, const Pair& q) { return deg[p.r] < deg[q.r]; });
        cuts.assign(cap + 1, 0);
        for (const Pair& p : pairs) cuts[deg[p.r]]++;
        std::partial_sum(cuts.begin(), cuts.end(), cuts.begin());
    };
    buildPairs(xExp_, xDeg_, orders.dx, xPairs_, xPairCut_);
    buildPairs(yExp_, yDeg_, orders.dy, yPairs_, yPairCut_);

    auto buildDeriv = [n](const std::vector<std::uint8_t>& exp,
                          const std::vector<std::uint8_t>& deg,
                          std::vector<std::vector<Deriv>>& tables) {
        const int count = static_cast<int>(deg.size());
        std::map<std::vector<int>, int> lookup;
        for (int i = 0; i < count; ++i) {
            std::vector<int> key(n);
            for (int v = 0; v < n; ++v) key[v] = exp[i * n + v];
            lookup[key] = i;
        }
        tables.assign(n, {});
        for (int v = 0; v < n; ++v) {
            for (int i = 0; i < count; ++i) {
                if (exp[i * n + v] == 0) continue;
                std::vector<int> key(n);
                for (int u = 0; u < n; ++u) key[u] = exp[i * n + u];
                key[v] -= 1;
                tables[v].push_back({i, lookup.at(key), static_cast<double>(exp[i * n + v])});
            }
        }
    };
    buildDeriv(xExp_, xDeg_, xDeriv_);
    buildDeriv(yExp_, yDeg_, yDeriv_);

    std::vector<int> grp(n);
    for (int ix = 0; ix < xCount(); ++ix) {
        for (int v = 0; v < n; ++v) grp[v] = xExp_[ix * n + v];
        xRank_[packGroup(grp)] = ix;
    }
    for (int iy = 0; iy < yCount(); ++iy) {
        for (int v = 0; v < n; ++v) grp[v] = yExp_[iy * n + v];
        yRank_[packGroup(grp)] = iy;
    }
}

const JetSpace& JetSpace::get(int n, JetOrders orders) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, int>, std::unique_ptr<JetSpace>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(n, orders.dx, orders.dy);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::unique_ptr<JetSpace>(new JetSpace(n, orders))).first;
    return *it->second;
}

int JetSpace::indexOf(std::span<const int> alpha) const {
    if (static_cast<int>(alpha.size()) != 2 * n_) return -1;
    int dx = 0, dy = 0;
    for (int v = 0; v < n_; ++v) dx += alpha[v];
    for (int v = n_; v < 2 * n_; ++v) dy += alpha[v];
    if (dx > orders_.dx || dy > orders_.dy) return -1;
    auto ix = xRank_.find(packGroup(alpha.subspan(0, n_)));
    auto iy = yRank_.find(packGroup(alpha.subspan(n_, n_)));
    if (ix == xRank_.end() || iy == yRank_.end()) return -1;
    return ix->second * yCount() + iy->second;
}

Jet::Jet(const JetSpace& space, double constant)
    : space_(&space), trusted_(space.orders()), c_(space.coeffCount(), 0.0) {
    c_[0] = constant;
}

Jet Jet::variable(const JetSpace& space, int var, double value) {
    const int n = space.dim();
    if (var < 0 || var >= 2 * n)
        throw Error(ErrorCode::Parse, "jet variable index out of range");
    const int cap = var < n ? space.orders().dx : space.orders().dy;
    if (cap < 1)
        throw InsufficientOrdersError(
            "truncation orders admit no first-order term for the requested variable group");
    Jet j(space, value);
    std::vector<int> alpha(2 * n, 0);
    alpha[var] = 1;
    j.c_[space.indexOf(alpha)] = 1.0;
    return j;
}

double Jet::coefficient(std::span<const int> alpha) const {
    int idx = space_->indexOf(alpha);
    if (idx < 0) throw InsufficientOrdersError("multi-index outside the truncation box");
    int dx = 0, dy = 0;
    const int n = space_->dim();
    for (int v = 0; v < n; ++v) dx += alpha[v];
    for (int v = n; v < 2 * n; ++v) dy += alpha[v];
    if (dx > trusted_.dx || dy > trusted_.dy)
        throw InsufficientOrdersError("multi-index outside the trusted truncation orders");
    return c_[idx];
}

double Jet::partial(std::span<const int> alpha) const {
    double f = 1.0;
    for (int a : alpha)
        for (int k = 2; k <= a; ++k) f *= k;
    return f * coefficient(alpha);
}

Jet Jet::derivative(int var) const {
    const int n = space_->dim();
    Jet r(*space_);
    r.trusted_ = trusted_;
    if (var < n)
        r.trusted_.dx -= 1;
    else
        r.trusted_.dy -= 1;
    if (r.trusted_.dx < 0 || r.trusted_.dy < 0)
        throw InsufficientOrdersError("derivative exhausts the trusted truncation orders");

    const int ny = space_->yCount();
    if (var < n) {
        for (const auto& d : space_->xDeriv_[var]) {
            const double* src = &c_[d.src * ny];
            double* dst = &r.c_[d.dst * ny];
            for (int iy = 0; iy < ny; ++iy) dst[iy] += d.factor * src[iy];
        }
    } else {
        const int nx = space_->xCount();
        for (const auto& d : space_->yDeriv_[var - n]) {
            for (int ix = 0; ix < nx; ++ix)
                r.c_[ix * ny + d.dst] += d.factor * c_[ix * ny + d.src];
        }
    }
    r.clampToTrusted();
    return r;
}

void Jet::clampToTrusted() {
    const int ny = space_->yCount();
    for (int ix = 0; ix < space_->xCount(); ++ix) {
        const bool xBad = space_->xDegree(ix) > trusted_.dx;
        for (int iy = 0; iy < ny; ++iy) {
            if (xBad || space_->yDegree(iy) > trusted_.dy) c_[ix * ny + iy] = 0.0;
        }
    }
}

Jet Jet::operator-() const {
    Jet r = *this;
    for (double& v : r.c_) v = -v;
    return r;
}

Jet& Jet::operator+=(const Jet& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    trusted_ = minOrders(trusted_, o.trusted_);
    clampToTrusted();
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    trusted_ = minOrders(trusted_, o.trusted_);
    clampToTrusted();
    return *this;
}

Jet& Jet::operator+=(double s) {
    c_[0] += s;
    return *this;
}

Jet& Jet::operator-=(double s) {
    c_[0] -= s;
    return *this;
}

Jet& Jet::operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
}

Jet Jet::mul(const Jet& a, const Jet& b) {
    const JetSpace& sp = *a.space_;
    Jet r(sp);
    r.trusted_ = minOrders(a.trusted_, b.trusted_);
    const int ny = sp.yCount();
    const int xEnd = sp.xPairCut_[r.trusted_.dx];
    const int yEnd = sp.yPairCut_[r.trusted_.dy];
    const double* ac = a.c_.data();
    const double* bc = b.c_.data();
    double* rc = r.c_.data();
    for (int px = 0; px < xEnd; ++px) {
        const auto& xp = sp.xPairs_[px];
        const double* arow = ac + xp.a * ny;
        const double* brow = bc + xp.b * ny;
        double* rrow = rc + xp.r * ny;
        for (int py = 0; py < yEnd; ++py) {
            const auto& yp = sp.yPairs_[py];
            rrow[yp.r] += arow[yp.a] * brow[yp.b];
        }
    }
    return r;
}

Jet Jet::compose(std::span<const double> derivs) const {
    const int K = trusted_.dx + trusted_.dy;
    Jet h = *this;
    h.c_[0] = 0.0;
    auto coeff = [&](int k) {
        double f = 1.0;
        for (int i = 2; i <= k; ++i) f *= i;
        return derivs[k] / f;
    };
    Jet r(*space_, coeff(K));
    r.trusted_ = trusted_;
    for (int k = K - 1; k >= 0; --k) {
        r = mul(r, h);
        r.c_[0] += coeff(k);
    }
    return r;
}

Jet Jet::inverse() const {
    const double c0 = value();
    if (c0 == 0.0) throw EvalError("division by a quantity with zero value");
    const int K = trusted_.dx + trusted_.dy;
    std::vector<double> d(K + 1);
    double p = 1.0 / c0;
    double fact = 1.0;
    for (int k = 0; k <= K; ++k) {
        d[k] = (k % 2 ? -1.0 : 1.0) * fact * p;
        p /= c0;
        fact *= (k + 1);
    }
    return compose(d);
}

Jet Jet::exp() const {
    const int K = trusted_.dx + trusted_.dy;
    std::vector<double> d(K + 1, std::exp(value()));
    return compose(d);
}

Jet Jet::log() const {
    const double c0 = value();
    if (c0 <= 0.0) throw EvalError("log of a non-positive quantity");
    const int K = trusted_.dx + trusted_.dy;
    std::vector<double> d(K + 1);
    d[0] = std::log(c0);
    double p = 1.0 / c0;
    double fact = 1.0;
    for (int k = 1; k <= K; ++k) {
        d[k] = (k % 2 ? 1.0 : -1.0) * fact * p;
        p /= c0;
        fact *= k;
    }
    return compose(d);
}

Jet Jet::powReal(double p) const {
    const double c0 = value();
    if (c0 <= 0.0) throw EvalError("real power of a non-positive quantity");
    const int K = trusted_.dx + trusted_.dy;
    std::vector<double> d(K + 1);
    double falling = 1.0;
    for (int k = 0; k <= K; ++k) {
        d[k] = falling * std::pow(c0, p - k);
        falling *= (p - k);
    }
    return compose(d);
}

Jet Jet::sqrt() const {
    if (value() <= 0.0) throw EvalError("sqrt of a non-positive quantity");
    return powReal(0.5);
}

Jet Jet::powInt(long long m) const {
    if (m == 0) {
        Jet r(*space_, 1.0);
        r.trusted_ = trusted_;
        return r;
    }
    if (m < 0) return powInt(-m).inverse();
    Jet base = *this;
    Jet r = base;
    long long e = m - 1;
    while (e > 0) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

Jet Jet::atan() const {
    const double c0 = value();
    const double th = std::atan(c0);
    const int K = trusted_.dx + trusted_.dy;
    std::vector<double> d(K + 1);
    d[0] = th;
    // d^k/dc^k atan(c) = (k-1)! cos^k(th) sin(k (th + pi/2))
    double fact = 1.0;
    const double c = std::cos(th);
    double ck = 1.0;
    for (int k = 1; k <= K; ++k) {
        ck *= c;
        d[k] = fact * ck * std::sin(k * (th + M_PI / 2.0));
        fact *= k;
    }
    return compose(d);
}

Jet Jet::sin() const {
    const double c0 = value();
    const double cyc[4] = {std::sin(c0), std::cos(c0), -std::sin(c0), -std::cos(c0)};
    const int K = trusted_.dx + trusted_.dy;
    std::vector<double> d(K + 1);
    for (int k = 0; k <= K; ++k) d[k] = cyc[k % 4];
    return compose(d);
}

Jet Jet::cos() const {
    const double c0 = value();
    const double cyc[4] = {std::cos(c0), -std::sin(c0), -std::cos(c0), std::sin(c0)};
    const int K = trusted_.dx + trusted_.dy;
    std::vector<double> d(K + 1);
    for (int k = 0; k <= K; ++k) d[k] = cyc[k % 4];
    return compose(d);
}

}  // namespace finsler
