#include "finsler/nullity.hpp"

#include <cmath>

namespace finsler {

const char* curvatureKindName(CurvatureKind k) {
    switch (k) {
        case CurvatureKind::ChernH: return "chern-h";
        case CurvatureKind::ChernHV: return "chern-hv";
        case CurvatureKind::Barthel: return "barthel";
        case CurvatureKind::CartanH: return "cartan-h";
    }
    return "?";
}

CurvatureKind curvatureKindFromName(const std::string& name) {
    if (name == "chern-h") return CurvatureKind::ChernH;
    if (name == "chern-hv") return CurvatureKind::ChernHV;
    if (name == "barthel") return CurvatureKind::Barthel;
    if (name == "cartan-h") return CurvatureKind::CartanH;
    throw Error(ErrorCode::Parse,
                "unknown tensor kind '" + name + "' (chern-h, chern-hv, barthel, cartan-h)");
}

Subspace nullSpace(const Eigen::MatrixXd& A, double relTol, double absFloor) {
    if (!A.allFinite()) throw EvalError("null-space input has non-finite entries");
    Subspace s;
    s.ambient = static_cast<int>(A.cols());
    s.relTol = relTol;
    s.absFloor = absFloor;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    s.singularValues = svd.singularValues();
    const double smax = s.singularValues.size() ? s.singularValues(0) : 0.0;
    int rank = 0;
    if (smax > absFloor) {
        const double cut = std::max(relTol * smax, absFloor);
        for (int i = 0; i < s.singularValues.size(); ++i)
            if (s.singularValues(i) > cut) ++rank;
    }
    s.sigmaKept = rank > 0 ? s.singularValues(rank - 1) : 0.0;
    s.sigmaDropped = rank < s.singularValues.size() ? s.singularValues(rank) : 0.0;
    s.basis = svd.matrixV().rightCols(s.ambient - rank);
    if (s.basis.cols() > 0 && A.rows() > 0)
        s.residual = (A * s.basis).cwiseAbs().maxCoeff();
    return s;
}

namespace {

// Stack the linear maps over all free index tuples; `contractOperand`
// selects slot i instead of slot j.
Eigen::MatrixXd stackSystem(const GeometryBundle& b, CurvatureKind kind, bool contractOperand) {
    const int n = b.n;
    switch (kind) {
        case CurvatureKind::ChernH:
        case CurvatureKind::CartanH: {
            const Ten4& T = kind == CurvatureKind::ChernH ? b.chernH : b.cartanH;
            Eigen::MatrixXd A(n * n * n, n);
            int row = 0;
            for (int h = 0; h < n; ++h)
                for (int a = 0; a < n; ++a)
                    for (int k = 0; k < n; ++k, ++row)
                        for (int c = 0; c < n; ++c)
                            A(row, c) = contractOperand ? T(h, c, a, k) : T(h, a, c, k);
            return A;
        }
        case CurvatureKind::ChernHV: {
            Eigen::MatrixXd A(n * n * n, n);
            int row = 0;
            for (int a = 0; a < n; ++a)
                for (int h = 0; h < n; ++h)
                    for (int k = 0; k < n; ++k, ++row)
                        for (int c = 0; c < n; ++c) A(row, c) = b.chernHV(a, h, c, k);
            return A;
        }
        case CurvatureKind::Barthel: {
            Eigen::MatrixXd A(n * n, n);
            int row = 0;
            for (int m = 0; m < n; ++m)
                for (int k = 0; k < n; ++k, ++row)
                    for (int c = 0; c < n; ++c) A(row, c) = b.barthel(m, c, k);
            return A;
        }
    }
    return {};
}

void requireFields(const GeometryBundle& b, CurvatureKind kind) {
    TensorField f = TensorField::ChernH;
    switch (kind) {
        case CurvatureKind::ChernH: f = TensorField::ChernH; break;
        case CurvatureKind::ChernHV: f = TensorField::ChernHV; break;
        case CurvatureKind::Barthel: f = TensorField::Barthel; break;
        case CurvatureKind::CartanH: f = TensorField::CartanH; break;
    }
    if (!b.has(f))
        throw Error(ErrorCode::CheckFailure,
                    std::string("bundle was computed without ") + tensorFieldName(f));
}

}  // namespace

Subspace nullitySpace(const GeometryBundle& b, CurvatureKind kind, double relTol,
                      double absFloor) {
    requireFields(b, kind);
    Subspace s = nullSpace(stackSystem(b, kind, false), relTol, absFloor);
    s.provenance = std::string("nullity of ") + curvatureKindName(kind);
    return s;
}

Subspace kernelSpace(const GeometryBundle& b, CurvatureKind kind, double relTol,
                     double absFloor) {
    if (kind != CurvatureKind::ChernH && kind != CurvatureKind::CartanH)
        throw Error(ErrorCode::Parse, "kernel mode is defined for chern-h and cartan-h only");
    requireFields(b, kind);
    Subspace s = nullSpace(stackSystem(b, kind, true), relTol, absFloor);
    s.provenance = std::string("kernel of ") + curvatureKindName(kind);
    return s;
}

double subspaceResidual(const Subspace& A, const Subspace& B) {
    if (A.rank() == 0) return 0.0;
    double worst = 0.0;
    for (int c = 0; c < A.rank(); ++c) {
        Eigen::VectorXd v = A.basis.col(c);
        Eigen::VectorXd proj =
            B.rank() > 0 ? Eigen::VectorXd(B.basis * (B.basis.transpose() * v))
                         : Eigen::VectorXd(Eigen::VectorXd::Zero(v.size()));
        worst = std::max(worst, (v - proj).norm());
    }
    return worst;
}

bool subspaceLeq(const Subspace& A, const Subspace& B, double tol) {
    if (A.ambient != B.ambient)
        throw Error(ErrorCode::CheckFailure, "subspace ambient dimensions differ");
    return subspaceResidual(A, B) <= tol;
}

Subspace conullity(const GeometryBundle& b, const Subspace& S, double relTol) {
    // {w : g_ij w^i v^j = 0 for all v in S}
    Eigen::MatrixXd A = S.basis.transpose() * b.g;
    if (S.rank() == 0) A = Eigen::MatrixXd::Zero(1, b.n);
    Subspace out = nullSpace(A, relTol);
    out.provenance = "g-orthogonal complement of " + S.provenance;
    return out;
}

std::vector<double> bracketVertical(const GeometryBundle& b, std::span<const double> a,
                                    std::span<const double> bvec) {
    const int n = b.n;
    std::vector<double> v(n, 0.0);
    for (int m = 0; m < n; ++m) {
        double s = 0.0;
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) s += a[j] * bvec[k] * b.barthel(m, j, k);
        v[m] = s;
    }
    return v;
}

double nullityResidual(const GeometryBundle& b, CurvatureKind kind, std::span<const double> w) {
    Eigen::MatrixXd A = stackSystem(b, kind, false);
    Eigen::VectorXd wv(b.n);
    for (int i = 0; i < b.n; ++i) wv(i) = w[i];
    double num = A.rows() ? (A * wv).cwiseAbs().maxCoeff() : 0.0;
    double scale = A.rows() ? (A.cwiseAbs() * wv.cwiseAbs()).maxCoeff() : 0.0;
    return num / std::max(scale, kDefaultAbsFloor);
}

std::vector<double> verticalPartOfHorizontal(const GeometryBundle& b,
                                             std::span<const double> a) {
    std::vector<double> v(b.n, 0.0);
    for (int m = 0; m < b.n; ++m) {
        double s = 0.0;
        for (int i = 0; i < b.n; ++i) s += b.nonlinear(m, i) * a[i];
        v[m] = -s;
    }
    return v;
}

}  // namespace finsler
