#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "finsler/errors.hpp"
#include "finsler/jet.hpp"

namespace finsler {

enum class BinOp { Add, Sub, Mul, Div, Pow };
enum class FuncId { Exp, Log, Sqrt, Atan, Sin, Cos };
enum class VarGroup { Base, Fiber };  // x_i vs y_i

// Expression tree for the metric DSL. Immutable after parsing; value
// semantics, safe to share read-only across threads.
struct Expr {
    enum class Kind { Constant, Variable, Neg, Binary, Call };

    Kind kind = Kind::Constant;
    double constant = 0.0;
    VarGroup group = VarGroup::Base;
    int index = 0;  // 1-based variable index
    BinOp bin = BinOp::Add;
    FuncId func = FuncId::Exp;
    // For Pow nodes whose exponent is a constant expression: its value.
    std::optional<double> foldedExponent;
    std::vector<Expr> kids;

    static Expr number(double v);
    static Expr variable(VarGroup g, int idx);
    static Expr neg(Expr e);
    static Expr binary(BinOp op, Expr a, Expr b);
    static Expr call(FuncId f, Expr a);
};

bool structurallyEqual(const Expr& a, const Expr& b);

// Highest 1-based variable index used, per group.
int maxVarIndex(const Expr& e, VarGroup g);

// Value of a variable-free expression, when it is one.
std::optional<double> constantValue(const Expr& e);

// Parse a single expression. `line`/`baseColumn` locate the text inside a
// larger file for error reporting; the whole string must be consumed.
Expr parseExpression(const std::string& text, int line = 1, int baseColumn = 1);

// Canonical printer; parseExpression(printExpression(e)) is structurally
// identical to e.
std::string printExpression(const Expr& e);

namespace detail {

inline bool nearInteger(double v, long long& out) {
    double r = std::nearbyint(v);
    if (std::abs(v - r) < 1e-12 && std::abs(r) <= 1e15) {
        out = static_cast<long long>(r);
        return true;
    }
    return false;
}

inline double powIntScalar(double b, long long m) {
    if (m == 0) return 1.0;
    bool inv = m < 0;
    unsigned long long e = inv ? static_cast<unsigned long long>(-m) : static_cast<unsigned long long>(m);
    double r = 1.0, p = b;
    while (e) {
        if (e & 1ULL) r *= p;
        p *= p;
        e >>= 1ULL;
    }
    return inv ? 1.0 / r : r;
}

}  // namespace detail

// Evaluate over doubles or jets; xs/ys hold the coordinate values (or
// variable jets) indexed 0..n-1.
template <class T>
T evalExpr(const Expr& e, std::span<const T> xs, std::span<const T> ys) {
    constexpr bool isDouble = std::is_same_v<T, double>;
    switch (e.kind) {
        case Expr::Kind::Constant:
            if constexpr (isDouble) {
                return e.constant;
            } else {
                return T(xs[0].space(), e.constant);
            }
        case Expr::Kind::Variable: {
            const auto& pool = e.group == VarGroup::Base ? xs : ys;
            return pool[e.index - 1];
        }
        case Expr::Kind::Neg:
            return -evalExpr(e.kids[0], xs, ys);
        case Expr::Kind::Binary: {
            T a = evalExpr(e.kids[0], xs, ys);
            if (e.bin == BinOp::Pow) {
                long long m = 0;
                if (e.foldedExponent && detail::nearInteger(*e.foldedExponent, m)) {
                    if constexpr (isDouble) {
                        if (m < 0 && a == 0.0) throw EvalError("zero raised to a negative power");
                        return detail::powIntScalar(a, m);
                    } else {
                        return a.powInt(m);
                    }
                }
                if (e.foldedExponent) {
                    if constexpr (isDouble) {
                        if (a <= 0.0) throw EvalError("real power of a non-positive base");
                        return std::exp(*e.foldedExponent * std::log(a));
                    } else {
                        return a.powReal(*e.foldedExponent);
                    }
                }
                T b = evalExpr(e.kids[1], xs, ys);
                if constexpr (isDouble) {
                    if (a <= 0.0) throw EvalError("real power of a non-positive base");
                    return std::exp(b * std::log(a));
                } else {
                    return (b * a.log()).exp();
                }
            }
            T b = evalExpr(e.kids[1], xs, ys);
            switch (e.bin) {
                case BinOp::Add: return a + b;
                case BinOp::Sub: return a - b;
                case BinOp::Mul: return a * b;
                case BinOp::Div:
                    if constexpr (isDouble) {
                        if (b == 0.0) throw EvalError("division by zero");
                        return a / b;
                    } else {
                        return a / b;
                    }
                default: break;
            }
            break;
        }
        case Expr::Kind::Call: {
            T a = evalExpr(e.kids[0], xs, ys);
            if constexpr (isDouble) {
                switch (e.func) {
                    case FuncId::Exp: return std::exp(a);
                    case FuncId::Log:
                        if (a <= 0.0) throw EvalError("log of a non-positive quantity");
                        return std::log(a);
                    case FuncId::Sqrt:
                        if (a <= 0.0) throw EvalError("sqrt of a non-positive quantity");
                        return std::sqrt(a);
                    case FuncId::Atan: return std::atan(a);
                    case FuncId::Sin: return std::sin(a);
                    case FuncId::Cos: return std::cos(a);
                }
            } else {
                switch (e.func) {
                    case FuncId::Exp: return a.exp();
                    case FuncId::Log: return a.log();
                    case FuncId::Sqrt: return a.sqrt();
                    case FuncId::Atan: return a.atan();
                    case FuncId::Sin: return a.sin();
                    case FuncId::Cos: return a.cos();
                }
            }
            break;
        }
    }
    throw EvalError("malformed expression node");
}

}  // namespace finsler
