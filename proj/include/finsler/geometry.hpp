#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "finsler/metric.hpp"

namespace finsler {

// Dense rank-3 / rank-4 tensors over a single dimension n, row-major.
struct Ten3 {
    int n = 0;
    std::vector<double> v;
    Ten3() = default;
    explicit Ten3(int n_) : n(n_), v(static_cast<std::size_t>(n_) * n_ * n_, 0.0) {}
    double& operator()(int i, int j, int k) { return v[(i * n + j) * n + k]; }
    double operator()(int i, int j, int k) const { return v[(i * n + j) * n + k]; }
    double maxAbs() const;
};

struct Ten4 {
    int n = 0;
    std::vector<double> v;
    Ten4() = default;
    explicit Ten4(int n_) : n(n_), v(static_cast<std::size_t>(n_) * n_ * n_ * n_, 0.0) {}
    double& operator()(int h, int i, int j, int k) { return v[((h * n + i) * n + j) * n + k]; }
    double operator()(int h, int i, int j, int k) const {
        return v[((h * n + i) * n + j) * n + k];
    }
    double maxAbs() const;
};

enum class TensorField : unsigned {
    Metric = 1u << 0,          // g, g^{-1}, y_i
    Spray = 1u << 1,           // G^i, N^i_j
    BerwaldConn = 1u << 2,     // Gc^i_{jk}
    BerwaldTensor = 1u << 3,   // Gb^h_{ijk}
    CartanTensor = 1u << 4,    // C_{ijk}
    Landsberg = 1u << 5,       // L_{ijk}
    ChernConn = 1u << 6,       // Γ^i_{jk}, Λ^i_{jk}
    ChernHV = 1u << 7,         // Ps^a_{hjk}
    ChernH = 1u << 8,          // Rs^h_{ijk}, lowered form
    Barthel = 1u << 9,         // Rb^m_{jk}
    CartanH = 1u << 10,        // Rc^h_{ijk}
};

constexpr unsigned kAllFields = (1u << 11) - 1;

// Minimum jet orders of E required for each tensor.
JetOrders requiredOrders(TensorField f);
const char* tensorFieldName(TensorField f);

// Every tensor of the geometry at one point, in induced coordinates.
// Index and sign conventions are pinned to the reference example values;
// see chernH below. All indices are 0-based in code.
struct GeometryBundle {
    int n = 0;
    PointState point;
    JetOrders orders{};
    unsigned fields = 0;  // which groups were computed

    double E = 0.0;
    double F = 0.0;
    Eigen::MatrixXd g;       // g_ij = 1/2 d2E/dyi dyj
    Eigen::MatrixXd gInv;
    double gCond = 0.0;
    Eigen::VectorXd yLow;    // y_i = g_is y^s

    std::vector<double> spray;    // G^i = 1/4 g^{il}(y^k d2E/dyl dxk - dE/dxl)
    Eigen::MatrixXd nonlinear;    // N^i_j = dG^i/dy^j

    Ten3 berwaldConn;     // Gc^i_{jk} = dN^i_j/dy^k
    Ten4 berwaldTensor;   // Gb^h_{ijk} = d3 G^h / dy^i dy^j dy^k
    Ten3 cartan;          // C_{ijk} = 1/4 d3E/dy^i dy^j dy^k
    Ten3 landsberg;       // L_{ijk} = 1/2 y_h Gb^h_{ijk}
    Ten3 chernConn;       // Γ^i_{jk} (torsion-free, metric h-compatible)
    Ten3 mixedLandsberg;  // Λ^i_{jk} = Gc^i_{jk} - Γ^i_{jk}

    // Chern h-curvature. Slots: value h; i = operand; (j,k) = the
    // antisymmetric argument pair. Sign pinned so the ex1 reference
    // components come out as published:
    //   Rs^h_ijk = -(δ_j Γ^h_ik - δ_k Γ^h_ij + Γ^h_js Γ^s_ik - Γ^h_ks Γ^s_ij)
    Ten4 chernH;
    Ten4 chernHLow;  // g_hw Rs^h_ijk
    // Chern hv-curvature, Ps^a_hjk = dΓ^a_hj/dy^k; symmetric in (h, j).
    Ten4 chernHV;
    // Barthel curvature, Rb^m_jk = -(δ_j N^m_k - δ_k N^m_j); satisfies
    // Rs^h_ijk y^i = Rb^h_jk.
    Ten3 barthel;
    // Cartan h-curvature reconstructed as Rc = Rs + g^{hm} C_mis Rb^s_jk.
    Ten4 cartanH;

    bool has(TensorField f) const { return fields & static_cast<unsigned>(f); }
};

// Evaluates the requested tensor groups (with dependencies) at one point.
// Throws InsufficientOrdersError when `orders` cannot support a requested
// tensor, DegenerateMetricError when cond(g) exceeds condLimit, and
// DomainError on domain violations or non-positive energy.
GeometryBundle computeBundle(const MetricSpec& spec, const PointState& p,
                             JetOrders orders = {2, 6}, unsigned fields = kAllFields,
                             double condLimit = 1e12);

JetOrders defaultOrders();  // {2,6}, overridable via FINSLER_DEFAULT_ORDERS

}  // namespace finsler
