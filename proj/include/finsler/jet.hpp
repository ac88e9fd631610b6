#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "finsler/errors.hpp"

namespace finsler {

// Truncation orders of a jet: total degree caps, separate for the x-group
// and the y-group of variables.
struct JetOrders {
    int dx = 0;
    int dy = 0;
    friend bool operator==(JetOrders, JetOrders) = default;
};

inline JetOrders minOrders(JetOrders a, JetOrders b) {
    return {a.dx < b.dx ? a.dx : b.dx, a.dy < b.dy ? a.dy : b.dy};
}

// Shared, immutable combinatorial tables for all jets over 2n variables
// (n base variables x_1..x_n capped at total degree dx, n fiber variables
// y_1..y_n capped at dy). Instances are cached; obtain via JetSpace::get().
class JetSpace {
public:
    static const JetSpace& get(int n, JetOrders orders);

    int dim() const { return n_; }
    JetOrders orders() const { return orders_; }
    int xCount() const { return static_cast<int>(xDeg_.size()); }
    int yCount() const { return static_cast<int>(yDeg_.size()); }
    int coeffCount() const { return xCount() * yCount(); }

    // Exponent tuple (length 2n: x-part then y-part) -> flat coefficient
    // index, or -1 when outside the truncation box.
    int indexOf(std::span<const int> alpha) const;

    int xDegree(int ix) const { return xDeg_[ix]; }
    int yDegree(int iy) const { return yDeg_[iy]; }

    struct Pair {
        std::int32_t a, b, r;
    };

private:
    JetSpace(int n, JetOrders orders);

    int n_;
    JetOrders orders_;
    std::vector<std::uint8_t> xExp_, yExp_;  // exponents, flat [idx*n + v]
    std::vector<std::uint8_t> xDeg_, yDeg_;
    // Product pair tables sorted by result total degree, with cutoffs[d] =
    // number of pairs whose result degree is <= d.
    std::vector<Pair> xPairs_, yPairs_;
    std::vector<int> xPairCut_, yPairCut_;
    // Derivative tables per variable: (source index, target index, factor).
    struct Deriv {
        std::int32_t src, dst;
        double factor;
    };
    std::vector<std::vector<Deriv>> xDeriv_, yDeriv_;
    std::unordered_map<std::int64_t, int> xRank_, yRank_;  // packed exponents -> group index

    friend class Jet;
};

// Truncated multivariate Taylor polynomial of a scalar quantity around a
// point. Coefficients are Taylor coefficients (derivative / alpha!).
// `trusted()` tracks the sub-box of coefficients that are exact; arithmetic
// propagates it (min per group) and coefficients outside it are kept at
// zero. Extracting beyond the trusted box throws InsufficientOrdersError.
class Jet {
public:
    Jet() : space_(nullptr) {}
    explicit Jet(const JetSpace& space, double constant = 0.0);

    // Variable index is 0-based over the 2n variables: 0..n-1 are x_1..x_n,
    // n..2n-1 are y_1..y_n. Throws when the group cap admits no degree-1 term.
    static Jet variable(const JetSpace& space, int var, double value);

    const JetSpace& space() const { return *space_; }
    JetOrders trusted() const { return trusted_; }
    int dim() const { return space_->dim(); }
    double value() const { return c_[0]; }

    double coefficient(std::span<const int> alpha) const;
    // alpha! * coefficient(alpha) = the mixed partial derivative at the point.
    double partial(std::span<const int> alpha) const;

    Jet derivative(int var) const;

    Jet operator-() const;
    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator+=(double s);
    Jet& operator-=(double s);
    Jet& operator*=(double s);

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator+(Jet a, double b) { return a += b; }
    friend Jet operator-(Jet a, double b) { return a -= b; }
    friend Jet operator+(double a, Jet b) { return b += a; }
    friend Jet operator-(double a, Jet b) { b = -b; return b += a; }
    friend Jet operator*(const Jet& a, const Jet& b) { return mul(a, b); }
    friend Jet operator*(Jet a, double b) { return a *= b; }
    friend Jet operator*(double a, Jet b) { return b *= a; }
    friend Jet operator/(const Jet& a, const Jet& b) { return mul(a, b.inverse()); }
    friend Jet operator/(Jet a, double b) { return a *= (1.0 / b); }
    friend Jet operator/(double a, const Jet& b) { Jet r = b.inverse(); return r *= a; }

    Jet inverse() const;
    Jet exp() const;
    Jet log() const;
    Jet sqrt() const;
    Jet atan() const;
    Jet sin() const;
    Jet cos() const;
    Jet powReal(double p) const;
    Jet powInt(long long m) const;

    // Composition with a univariate series around the constant term:
    // derivs[k] = g^{(k)}(constant), k = 0..(trusted dx+dy).
    Jet compose(std::span<const double> derivs) const;

private:
    static Jet mul(const Jet& a, const Jet& b);
    void clampToTrusted();

    const JetSpace* space_;
    JetOrders trusted_{};
    std::vector<double> c_;
};

}  // namespace finsler
