#pragma once

#include <array>
#include <string>
#include <vector>

#include "finsler/expr.hpp"
#include "finsler/jet.hpp"

namespace finsler {

enum class RelOp { GT, GE, LT, LE, NE };

struct Constraint {
    Expr lhs;
    RelOp op;
    Expr rhs;
    std::string source;  // original text, for messages
};

// A point of the slit tangent bundle in induced coordinates.
struct PointState {
    std::vector<double> x;
    std::vector<double> y;
};

// Parsed Finsler-function definition; the single source of geometric truth.
// Immutable after parsing and safe to share read-only across threads.
struct MetricSpec {
    int n = 0;
    bool givenAsNorm = false;  // true when the file declared F; E = F^2
    Expr defining;
    std::vector<Constraint> constraints;
    std::string name;
    std::string description;
};

MetricSpec parseMetric(const std::string& text);
std::string printMetric(const MetricSpec& spec);

enum class DomainStatus { Satisfied, Near, Violated };

struct DomainCheck {
    DomainStatus status = DomainStatus::Satisfied;
    std::string constraint;  // first offending constraint, when any
    double margin = 0.0;
};

// Constraints whose margin is within this distance of zero count as "near".
inline constexpr double kNearMargin = 1e-6;

DomainCheck checkDomain(const MetricSpec& spec, const PointState& p);
void requireInDomain(const MetricSpec& spec, const PointState& p);  // throws DomainError

// E(x, y); throws DomainError / EvalError.
double evalScalar(const MetricSpec& spec, const PointState& p);

// Truncated Taylor expansion of E around p in all 2n variables.
Jet evalJet(const MetricSpec& spec, const PointState& p, JetOrders orders);

// Per-sample axis-aligned sampling window.
struct Box {
    std::vector<std::array<double, 2>> x;  // [lo, hi] per base coordinate
    std::vector<std::array<double, 2>> y;
};

Box defaultBox(int n);

struct HomogeneityReport {
    int samples = 0;
    int violations = 0;
    int positivityViolations = 0;
    double maxResidual = 0.0;
    double tol = 0.0;
    PointState worst;
    bool pass() const { return violations == 0 && positivityViolations == 0; }
};

// Numerically verifies E(x, λy) = λ²E(x, y) for λ in {0.5, 2, 3} at sampled
// in-domain points, together with E > 0.
HomogeneityReport checkHomogeneity(const MetricSpec& spec, int sampleCount,
                                   std::uint64_t seed, double tol, const Box& box);
HomogeneityReport checkHomogeneity(const MetricSpec& spec, int sampleCount,
                                   std::uint64_t seed, double tol);

// Relative residual of sum_i y^i dE/dy^i = 2E at p.
double eulerResidual(const MetricSpec& spec, const PointState& p);

// Built-in metrics, embedded as DSL text.
struct BuiltinMetric {
    std::string name;
    std::string text;
    Box box;               // default sampling window, well inside the domain
    double sampleMargin;   // required constraint clearance when sampling
};

const std::vector<BuiltinMetric>& builtinMetrics();
const BuiltinMetric* findBuiltin(const std::string& name);

// Load a metric by built-in name or from a file path.
MetricSpec loadMetric(const std::string& nameOrPath);

// Sampling window and constraint margin for a spec (built-in aware).
Box sampleBoxFor(const MetricSpec& spec);
double sampleMarginFor(const MetricSpec& spec);

}  // namespace finsler
