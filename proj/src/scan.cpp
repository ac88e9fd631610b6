#include "finsler/scan.hpp"

#include <omp.h>

#include <cmath>
#include <sstream>

namespace finsler {

void parallelFor(const ExecPolicy& policy, std::size_t count,
                 const std::function<void(std::size_t)>& fn) {
    if (policy.mode == ExecPolicy::Mode::Serial) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const long long c = static_cast<long long>(count);
    if (policy.threads > 0) {
#pragma omp parallel for schedule(dynamic) num_threads(policy.threads)
        for (long long i = 0; i < c; ++i) fn(static_cast<std::size_t>(i));
    } else {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < c; ++i) fn(static_cast<std::size_t>(i));
    }
}

GridSpec parseGrid(const std::string& text, int n) {
    GridSpec g;
    g.axes.assign(2 * n, GridAxis::fixed(1.0));
    std::istringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) {
        if (part.empty()) continue;
        auto eq = part.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::Parse, "grid axis needs '=': '" + part + "'");
        std::string name = part.substr(0, eq);
        std::string rest = part.substr(eq + 1);
        if (name.size() < 2 || (name[0] != 'x' && name[0] != 'y'))
            throw Error(ErrorCode::Parse, "grid axis must be x<i> or y<i>: '" + name + "'");
        int idx;
        try {
            idx = std::stoi(name.substr(1));
        } catch (const std::exception&) {
            throw Error(ErrorCode::Parse, "bad grid axis '" + name + "'");
        }
        if (idx < 1 || idx > n)
            throw Error(ErrorCode::Parse, "grid axis index out of range: '" + name + "'");
        int axis = (name[0] == 'x' ? 0 : n) + idx - 1;
        std::size_t c1 = rest.find(':');
        if (c1 == std::string::npos) {
            g.axes[axis] = GridAxis::fixed(std::stod(rest));
        } else {
            std::size_t c2 = rest.find(':', c1 + 1);
            if (c2 == std::string::npos)
                throw Error(ErrorCode::Parse, "grid range must be lo:hi:count: '" + rest + "'");
            GridAxis a;
            a.lo = std::stod(rest.substr(0, c1));
            a.hi = std::stod(rest.substr(c1 + 1, c2 - c1 - 1));
            a.count = std::stoi(rest.substr(c2 + 1));
            if (a.count < 1) throw Error(ErrorCode::Parse, "grid count must be >= 1");
            g.axes[axis] = a;
        }
    }
    return g;
}

namespace {

PointState gridPoint(const GridSpec& g, int n, std::size_t flat) {
    PointState p;
    p.x.resize(n);
    p.y.resize(n);
    // row-major: last axis varies fastest
    std::vector<int> digit(g.axes.size(), 0);
    for (int a = static_cast<int>(g.axes.size()) - 1; a >= 0; --a) {
        digit[a] = static_cast<int>(flat % g.axes[a].count);
        flat /= g.axes[a].count;
    }
    for (int i = 0; i < n; ++i) {
        p.x[i] = g.axes[i].at(digit[i]);
        p.y[i] = g.axes[n + i].at(digit[n + i]);
    }
    return p;
}

unsigned fieldsFor(const std::vector<CurvatureKind>& tensors) {
    unsigned f = 0;
    for (CurvatureKind k : tensors) {
        switch (k) {
            case CurvatureKind::ChernH:
                f |= static_cast<unsigned>(TensorField::ChernH) |
                     static_cast<unsigned>(TensorField::Barthel) |
                     static_cast<unsigned>(TensorField::CartanH);
                break;
            case CurvatureKind::ChernHV:
                f |= static_cast<unsigned>(TensorField::ChernHV);
                break;
            case CurvatureKind::Barthel:
                f |= static_cast<unsigned>(TensorField::Barthel);
                break;
            case CurvatureKind::CartanH:
                f |= static_cast<unsigned>(TensorField::CartanH);
                break;
        }
    }
    return f;
}

}  // namespace

ScanReport runScan(const MetricSpec& spec, const GridSpec& grid,
                   const std::vector<CurvatureKind>& tensors, double relTol,
                   const ExecPolicy& policy) {
    if (static_cast<int>(grid.axes.size()) != 2 * spec.n)
        throw Error(ErrorCode::Parse, "grid axis count does not match the metric dimension");
    ScanReport rep;
    rep.grid = grid;
    rep.tensors = tensors;
    rep.relTol = relTol;
    rep.totalPoints = grid.pointCount();
    rep.records.assign(rep.totalPoints, {});

    const unsigned fields = fieldsFor(tensors);
    const JetOrders orders = defaultOrders();

    // the jet space cache is primed before the parallel region
    (void)JetSpace::get(spec.n, orders);

    parallelFor(policy, rep.totalPoints, [&](std::size_t i) {
        ScanRecord& rec = rep.records[i];
        rec.gridIndex = i;
        rec.point = gridPoint(grid, spec.n, i);
        try {
            DomainCheck dc = checkDomain(spec, rec.point);
            if (dc.status == DomainStatus::Violated) {
                rec.admissible = false;
                rec.rejection = dc.constraint;
                return;
            }
            if (dc.status == DomainStatus::Near) {
                rec.admissible = false;
                rec.nearMiss = true;
                rec.rejection = dc.constraint;
                return;
            }
            GeometryBundle b = computeBundle(spec, rec.point, orders, fields);
            rec.admissible = true;
            for (CurvatureKind k : tensors) rec.nullity[k] = nullitySpace(b, k, relTol);
            bool wantChern = rec.nullity.count(CurvatureKind::ChernH) > 0;
            if (wantChern) {
                Subspace ker = kernelSpace(b, CurvatureKind::ChernH, relTol);
                rec.kernelDim = ker.rank();
                const Subspace& nul = rec.nullity.at(CurvatureKind::ChernH);
                rec.chernLeqKernel = subspaceLeq(nul, ker, 1e-8);
                Subspace nb = nullitySpace(b, CurvatureKind::Barthel, relTol);
                rec.chernLeqBarthel = subspaceLeq(nul, nb, 1e-8);
                Subspace nc = nullitySpace(b, CurvatureKind::CartanH, relTol);
                rec.chernEqCartan =
                    subspaceLeq(nul, nc, 1e-8) && subspaceLeq(nc, nul, 1e-8);
            }
        } catch (const Error& e) {
            rec.admissible = false;
            rec.rejection = e.what();
        }
    });

    // deterministic summary in grid order
    std::map<CurvatureKind, std::optional<int>> lastMu;
    for (const ScanRecord& rec : rep.records) {
        if (!rec.admissible) {
            rep.rejected++;
            if (rec.nearMiss) rep.nearMisses++;
            continue;
        }
        for (const auto& [kind, sub] : rec.nullity) {
            int mu = sub.rank();
            rep.muCounts[kind][mu]++;
            auto& last = lastMu[kind];
            if (last.has_value() && *last != mu)
                rep.muTransitions[kind].push_back(rec.gridIndex);
            last = mu;
        }
    }
    if (rep.records.size() == rep.rejected)
        throw DomainError("no admissible grid points (" + std::to_string(rep.rejected) +
                          " rejected)");
    return rep;
}

}  // namespace finsler
