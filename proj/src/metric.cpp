#include "finsler/metric.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "finsler/sampling.hpp"

namespace finsler {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

const char* relOpText(RelOp op) {
    switch (op) {
        case RelOp::GT: return ">";
        case RelOp::GE: return ">=";
        case RelOp::LT: return "<";
        case RelOp::LE: return "<=";
        case RelOp::NE: return "!=";
    }
    return "?";
}

void validateIndices(const Expr& e, int n, int line) {
    int mx = maxVarIndex(e, VarGroup::Base);
    int my = maxVarIndex(e, VarGroup::Fiber);
    if (mx > n || my > n)
        throw ParseError("variable index out of range for dim = " + std::to_string(n), line, 1);
    // zero indices (x0, y0) are never valid
    struct Walk {
        int line;
        void run(const Expr& e) const {
            if (e.kind == Expr::Kind::Variable && e.index < 1)
                throw ParseError("variable index out of range (indices start at 1)", line, 1);
            for (const Expr& k : e.kids) run(k);
        }
    } walk{line};
    walk.run(e);
}

}  // namespace

MetricSpec parseMetric(const std::string& text) {
    MetricSpec spec;
    bool haveDim = false;
    int definitions = 0;
    std::vector<std::pair<Expr, int>> exprLines;  // every parsed expr with its line

    std::istringstream in(text);
    std::string rawLine;
    int lineNo = 0;
    while (std::getline(in, rawLine)) {
        ++lineNo;
        std::string line = rawLine;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        auto eq = line.find('=');
        auto colon = line.find(':');
        std::string head =
            trim(line.substr(0, std::min(eq == std::string::npos ? line.size() : eq,
                                         colon == std::string::npos ? line.size() : colon)));

        if (head == "dim") {
            if (eq == std::string::npos)
                throw ParseError("expected '=' after 'dim'", lineNo, 1);
            std::string rest = trim(line.substr(eq + 1));
            try {
                std::size_t used = 0;
                int n = std::stoi(rest, &used);
                if (used != rest.size() || n < 1) throw std::invalid_argument("");
                spec.n = n;
            } catch (const std::exception&) {
                throw ParseError("'dim' must be a positive integer", lineNo, 1);
            }
            haveDim = true;
        } else if (head == "F" || head == "E") {
            if (eq == std::string::npos)
                throw ParseError("expected '=' after '" + head + "'", lineNo, 1);
            if (++definitions > 1)
                throw ParseError("metric already defined; only one of 'F =' / 'E =' is allowed",
                                 lineNo, 1);
            spec.givenAsNorm = (head == "F");
            spec.defining = parseExpression(line.substr(eq + 1), lineNo,
                                            static_cast<int>(eq) + 2);
            exprLines.emplace_back(spec.defining, lineNo);
        } else if (head == "domain") {
            if (colon == std::string::npos)
                throw ParseError("expected ':' after 'domain'", lineNo, 1);
            std::string rest = line.substr(colon + 1);
            // split on the relational operator
            static const std::pair<const char*, RelOp> ops[] = {
                {">=", RelOp::GE}, {"<=", RelOp::LE}, {"!=", RelOp::NE},
                {">", RelOp::GT},  {"<", RelOp::LT},
            };
            std::size_t pos = std::string::npos;
            RelOp op = RelOp::GT;
            std::size_t opLen = 0;
            for (const auto& [tok, o] : ops) {
                std::size_t p = rest.find(tok);
                if (p != std::string::npos && p < pos) {
                    pos = p;
                    op = o;
                    opLen = std::string(tok).size();
                }
            }
            if (pos == std::string::npos)
                throw ParseError("domain constraint needs one of > >= < <= !=", lineNo, 1);
            Constraint c{parseExpression(rest.substr(0, pos), lineNo,
                                         static_cast<int>(colon) + 2),
                         op,
                         parseExpression(rest.substr(pos + opLen), lineNo,
                                         static_cast<int>(colon + 1 + pos + opLen) + 1),
                         trim(rest)};
            exprLines.emplace_back(c.lhs, lineNo);
            exprLines.emplace_back(c.rhs, lineNo);
            spec.constraints.push_back(std::move(c));
        } else if (head == "name") {
            if (colon == std::string::npos)
                throw ParseError("expected ':' after 'name'", lineNo, 1);
            spec.name = trim(line.substr(colon + 1));
        } else if (head == "description") {
            if (colon == std::string::npos)
                throw ParseError("expected ':' after 'description'", lineNo, 1);
            spec.description = trim(line.substr(colon + 1));
        } else {
            throw ParseError("unrecognized directive '" + head + "'", lineNo, 1);
        }
    }

    if (!haveDim) throw ParseError("missing 'dim =' declaration", lineNo, 1);
    if (definitions == 0) throw ParseError("missing 'F =' or 'E =' declaration", lineNo, 1);
    for (const auto& [expr, line] : exprLines) validateIndices(expr, spec.n, line);
    return spec;
}

std::string printMetric(const MetricSpec& spec) {
    std::ostringstream out;
    if (!spec.name.empty()) out << "name: " << spec.name << "\n";
    if (!spec.description.empty()) out << "description: " << spec.description << "\n";
    out << "dim = " << spec.n << "\n";
    out << (spec.givenAsNorm ? "F = " : "E = ") << printExpression(spec.defining) << "\n";
    for (const Constraint& c : spec.constraints)
        out << "domain: " << printExpression(c.lhs) << " " << relOpText(c.op) << " "
            << printExpression(c.rhs) << "\n";
    return out.str();
}

DomainCheck checkDomain(const MetricSpec& spec, const PointState& p) {
    if (static_cast<int>(p.x.size()) != spec.n || static_cast<int>(p.y.size()) != spec.n)
        throw DomainError("point dimension does not match the metric (dim = " +
                          std::to_string(spec.n) + ")");
    bool allZero = true;
    for (double v : p.y) allZero = allZero && v == 0.0;
    if (allZero) return {DomainStatus::Violated, "y != 0 (zero section excluded)", 0.0};

    DomainCheck worstNear;
    std::span<const double> xs(p.x), ys(p.y);
    for (const Constraint& c : spec.constraints) {
        double l = evalExpr<double>(c.lhs, xs, ys);
        double r = evalExpr<double>(c.rhs, xs, ys);
        double margin = l - r;
        bool ok = false;
        switch (c.op) {
            case RelOp::GT: ok = margin > 0.0; break;
            case RelOp::GE: ok = margin >= 0.0; break;
            case RelOp::LT: ok = margin < 0.0; break;
            case RelOp::LE: ok = margin <= 0.0; break;
            case RelOp::NE: ok = margin != 0.0; break;
        }
        if (!ok) return {DomainStatus::Violated, c.source, margin};
        if (std::abs(margin) <= kNearMargin) worstNear = {DomainStatus::Near, c.source, margin};
    }
    return worstNear;
}

void requireInDomain(const MetricSpec& spec, const PointState& p) {
    DomainCheck c = checkDomain(spec, p);
    if (c.status == DomainStatus::Violated)
        throw DomainError("point violates domain constraint: " + c.constraint);
}

double evalScalar(const MetricSpec& spec, const PointState& p) {
    requireInDomain(spec, p);
    double v = evalExpr<double>(spec.defining, std::span<const double>(p.x),
                                std::span<const double>(p.y));
    double e = spec.givenAsNorm ? v * v : v;
    if (!std::isfinite(e)) throw EvalError("energy is not finite at the point");
    return e;
}

Jet evalJet(const MetricSpec& spec, const PointState& p, JetOrders orders) {
    requireInDomain(spec, p);
    const JetSpace& space = JetSpace::get(spec.n, orders);
    std::vector<Jet> xs, ys;
    xs.reserve(spec.n);
    ys.reserve(spec.n);
    for (int i = 0; i < spec.n; ++i) {
        xs.push_back(orders.dx >= 1 ? Jet::variable(space, i, p.x[i]) : Jet(space, p.x[i]));
        ys.push_back(orders.dy >= 1 ? Jet::variable(space, spec.n + i, p.y[i])
                                    : Jet(space, p.y[i]));
    }
    Jet v = evalExpr<Jet>(spec.defining, std::span<const Jet>(xs), std::span<const Jet>(ys));
    Jet e = spec.givenAsNorm ? v * v : v;
    if (!std::isfinite(e.value())) throw EvalError("energy is not finite at the point");
    return e;
}

Box defaultBox(int n) {
    Box b;
    b.x.assign(n, {0.5, 2.0});
    b.y.assign(n, {0.5, 2.0});
    return b;
}

HomogeneityReport checkHomogeneity(const MetricSpec& spec, int sampleCount, std::uint64_t seed,
                                   double tol, const Box& box) {
    HomogeneityReport rep;
    rep.tol = tol;
    Rng rng(seed);
    const double lambdas[] = {0.5, 2.0, 3.0};
    double margin = sampleMarginFor(spec);
    for (int s = 0; s < sampleCount; ++s) {
        PointState p = samplePoint(spec, box, rng, margin);
        double e0 = evalScalar(spec, p);
        if (!(e0 > 0.0)) {
            rep.positivityViolations++;
            rep.worst = p;
        }
        for (double lam : lambdas) {
            PointState q = p;
            for (double& v : q.y) v *= lam;
            double e1 = evalScalar(spec, q);
            double expected = lam * lam * e0;
            double resid = std::abs(e1 - expected);
            double rel = resid / std::max(std::abs(expected), 1e-300);
            if (rel > rep.maxResidual) {
                rep.maxResidual = rel;
                rep.worst = p;
            }
            if (rel > tol) rep.violations++;
        }
        rep.samples++;
    }
    return rep;
}

HomogeneityReport checkHomogeneity(const MetricSpec& spec, int sampleCount, std::uint64_t seed,
                                   double tol) {
    return checkHomogeneity(spec, sampleCount, seed, tol, sampleBoxFor(spec));
}

double eulerResidual(const MetricSpec& spec, const PointState& p) {
    Jet e = evalJet(spec, p, {0, 1});
    double sum = 0.0;
    std::vector<int> alpha(2 * spec.n, 0);
    for (int i = 0; i < spec.n; ++i) {
        alpha[spec.n + i] = 1;
        sum += p.y[i] * e.partial(alpha);
        alpha[spec.n + i] = 0;
    }
    double expected = 2.0 * e.value();
    return std::abs(sum - expected) / std::max({std::abs(sum), std::abs(expected), 1e-10});
}

const std::vector<BuiltinMetric>& builtinMetrics() {
    static const std::vector<BuiltinMetric> metrics = [] {
        std::vector<BuiltinMetric> v;
        auto box = [](std::initializer_list<std::array<double, 2>> xs,
                      std::initializer_list<std::array<double, 2>> ys) {
            Box b;
            b.x.assign(xs);
            b.y.assign(ys);
            return b;
        };
        const std::array<double, 2> u{0.5, 2.0};

        v.push_back({"euclid2",
                     "name: euclid2\ndim = 2\nE = y1^2 + y2^2\n",
                     box({u, u}, {u, u}), kNearMargin});
        v.push_back({"euclid3",
                     "name: euclid3\ndim = 3\nE = y1^2 + y2^2 + y3^2\n",
                     box({u, u, u}, {u, u, u}), kNearMargin});
        v.push_back({"euclid4",
                     "name: euclid4\ndim = 4\nE = y1^2 + y2^2 + y3^2 + y4^2\n",
                     box({u, u, u, u}, {u, u, u, u}), kNearMargin});
        v.push_back({"riem-hyperbolic",
                     "name: riem-hyperbolic\ndim = 2\nE = y1^2 + exp(2*x1)*y2^2\n",
                     box({u, u}, {u, u}), kNearMargin});
        v.push_back({"ex1",
                     "name: ex1\n"
                     "dim = 4\n"
                     "F = (x2^2*y1^4 + y2^4 + y3^4 + y4^4)^(1/4)\n"
                     "domain: x2 > 0\n"
                     "domain: y1 != 0\n"
                     "domain: y2 != 0\n",
                     box({u, u, u, u}, {u, u, u, u}), kNearMargin});
        v.push_back({"ex2",
                     "name: ex2\n"
                     "dim = 3\n"
                     "E = sqrt(exp(-x1*x2)*y1^2*y3^2*exp(-y3/y2))\n"
                     "domain: y1 != 0\n"
                     "domain: y2 != 0\n"
                     "domain: y3 != 0\n"
                     "domain: y3 != 4*y2\n",
                     box({u, u, u}, {u, u, u}), 0.5});
        v.push_back({"ex3",
                     "name: ex3\n"
                     "dim = 3\n"
                     "F = exp(x1)*sqrt(y1^2 + y2*y3 + y1*sqrt(y2*y3))"
                     "*exp((1/sqrt(3))*atan(2*y1/sqrt(3*y2*y3) + 1/sqrt(3)))\n"
                     "domain: y2 > 0\n"
                     "domain: y3 > 0\n",
                     box({u, u, u}, {u, u, u}), kNearMargin});
        v.push_back({"ex-bad-homog",
                     "name: ex-bad-homog\n"
                     "dim = 2\n"
                     "E = y1^2 + y2^2 + y1^3\n"
                     "domain: y1 > 0\n",
                     box({u, u}, {u, u}), kNearMargin});
        return v;
    }();
    return metrics;
}

const BuiltinMetric* findBuiltin(const std::string& name) {
    for (const BuiltinMetric& m : builtinMetrics())
        if (m.name == name) return &m;
    return nullptr;
}

MetricSpec loadMetric(const std::string& nameOrPath) {
    if (const BuiltinMetric* b = findBuiltin(nameOrPath)) return parseMetric(b->text);
    std::ifstream in(nameOrPath);
    if (!in)
        throw Error(ErrorCode::Parse,
                    "no built-in metric or readable file named '" + nameOrPath + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    MetricSpec spec = parseMetric(buf.str());
    if (spec.name.empty()) spec.name = nameOrPath;
    return spec;
}

Box sampleBoxFor(const MetricSpec& spec) {
    if (const BuiltinMetric* b = findBuiltin(spec.name)) return b->box;
    return defaultBox(spec.n);
}

double sampleMarginFor(const MetricSpec& spec) {
    if (const BuiltinMetric* b = findBuiltin(spec.name)) return b->sampleMargin;
    return kNearMargin;
}

}  // namespace finsler
