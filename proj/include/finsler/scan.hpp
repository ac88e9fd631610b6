#pragma once

#include <map>
#include <optional>

#include "finsler/exec.hpp"
#include "finsler/nullity.hpp"

namespace finsler {

// One grid axis: either a fixed value or lo..hi with `count` samples.
struct GridAxis {
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;  // 1 with lo == hi means fixed
    static GridAxis fixed(double v) { return {v, v, 1}; }
    double at(int i) const {
        if (count <= 1) return lo;
        return lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    }
};

// Axes in coordinate order x1..xn, y1..yn; records follow row-major grid
// order over them.
struct GridSpec {
    std::vector<GridAxis> axes;
    std::size_t pointCount() const {
        std::size_t c = 1;
        for (const GridAxis& a : axes) c *= static_cast<std::size_t>(a.count);
        return c;
    }
};

// Parse "x1=0,y1=0.5:2:4,..." (unlisted axes default to the fixed value 1).
GridSpec parseGrid(const std::string& text, int n);

struct ScanRecord {
    std::size_t gridIndex = 0;
    PointState point;
    bool admissible = false;
    bool nearMiss = false;
    std::string rejection;  // constraint text when not admissible
    std::map<CurvatureKind, Subspace> nullity;
    // inclusion / structure flags (present when the tensors were computed)
    std::optional<bool> chernLeqBarthel;    // N(Rs) ⊆ N(Rb)
    std::optional<bool> chernLeqKernel;     // N(Rs) ⊆ Ker(Rs)
    std::optional<bool> chernEqCartan;      // N(Rs) = N(Rc)
    std::optional<int> kernelDim;
    double maxIdentityResidual = 0.0;       // reserved for verify-style scans
};

struct ScanReport {
    GridSpec grid;
    std::vector<CurvatureKind> tensors;
    double relTol = kDefaultRankTol;
    std::vector<ScanRecord> records;        // admissible points, grid order
    std::size_t totalPoints = 0;
    std::size_t rejected = 0;
    std::size_t nearMisses = 0;
    // per tensor: distinct nullity indices with counts
    std::map<CurvatureKind, std::map<int, std::size_t>> muCounts;
    // grid indices where mu changes from the previous admissible record
    std::map<CurvatureKind, std::vector<std::size_t>> muTransitions;
};

ScanReport runScan(const MetricSpec& spec, const GridSpec& grid,
                   const std::vector<CurvatureKind>& tensors, double relTol,
                   const ExecPolicy& policy = {});

}  // namespace finsler
