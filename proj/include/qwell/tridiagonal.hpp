#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "qwell/errors.hpp"

namespace qwell {

/// Symmetric tridiagonal system: diag has size m, off has size m-1.
struct TridiagonalSystem {
    std::vector<double> diag;
    std::vector<double> off;

    int size() const { return static_cast<int>(diag.size()); }
};

/// y = A x for a symmetric tridiagonal A.
inline std::vector<double> multiply(const TridiagonalSystem& sys, const std::vector<double>& x) {
    const int m = sys.size();
    std::vector<double> y(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        double v = sys.diag[i] * x[i];
        if (i > 0) v += sys.off[i - 1] * x[i - 1];
        if (i + 1 < m) v += sys.off[i] * x[i + 1];
        y[i] = v;
    }
    return y;
}

/// Thomas algorithm, O(m). Intended for the SPD systems arising here;
/// a vanishing pivot raises SingularSystem.
inline std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys,
                                             const std::vector<double>& rhs) {
    const int m = sys.size();
    if (static_cast<int>(rhs.size()) != m)
        throw InvalidArgument("solve_tridiagonal: rhs size mismatch");
    if (m == 0) return {};
    std::vector<double> c(static_cast<std::size_t>(m)), d(static_cast<std::size_t>(m));
    if (sys.diag[0] == 0.0) throw SingularSystem("solve_tridiagonal: zero pivot at row 0");
    c[0] = (m > 1) ? sys.off[0] / sys.diag[0] : 0.0;
    d[0] = rhs[0] / sys.diag[0];
    for (int i = 1; i < m; ++i) {
        const double piv = sys.diag[i] - sys.off[i - 1] * c[i - 1];
        if (piv == 0.0)
            throw SingularSystem("solve_tridiagonal: zero pivot at row " + std::to_string(i));
        if (i + 1 < m) c[i] = sys.off[i] / piv;
        d[i] = (rhs[i] - sys.off[i - 1] * d[i - 1]) / piv;
    }
    std::vector<double> x(static_cast<std::size_t>(m));
    x[m - 1] = d[m - 1];
    for (int i = m - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];
    return x;
}

namespace detail {

/// LU with partial pivoting for (A - shift I) x = b, A symmetric tridiagonal.
/// Used by inverse iteration where the shifted matrix is indefinite and
/// nearly singular; plain Thomas is not reliable there.
class ShiftedTridiagonalLU {
public:
    ShiftedTridiagonalLU(const TridiagonalSystem& sys, double shift) {
        m_ = sys.size();
        d_.resize(m_);
        dl_.assign(m_ > 1 ? m_ - 1 : 0, 0.0);
        du_.assign(m_ > 1 ? m_ - 1 : 0, 0.0);
        du2_.assign(m_ > 2 ? m_ - 2 : 0, 0.0);
        piv_.assign(m_ > 1 ? m_ - 1 : 0, 0);
        for (int i = 0; i < m_; ++i) d_[i] = sys.diag[i] - shift;
        for (int i = 0; i + 1 < m_; ++i) { dl_[i] = sys.off[i]; du_[i] = sys.off[i]; }
        for (int i = 0; i + 1 < m_; ++i) {
            if (std::abs(d_[i]) >= std::abs(dl_[i])) {
                if (d_[i] == 0.0) d_[i] = tiny_;
                const double fact = dl_[i] / d_[i];
                dl_[i] = fact;
                d_[i + 1] -= fact * du_[i];
                if (i + 2 < m_) du2_[i] = 0.0;
            } else {
                const double fact = d_[i] / dl_[i];
                d_[i] = dl_[i];
                dl_[i] = fact;
                const double temp = du_[i];
                du_[i] = d_[i + 1];
                d_[i + 1] = temp - fact * d_[i + 1];
                if (i + 2 < m_) {
                    du2_[i] = du_[i + 1];
                    du_[i + 1] = -fact * du_[i + 1];
                }
                piv_[i] = 1;
            }
        }
        if (d_[m_ - 1] == 0.0) d_[m_ - 1] = tiny_;
    }

    void solve_inplace(std::vector<double>& b) const {
        for (int i = 0; i + 1 < m_; ++i) {
            if (piv_[i] == 0) {
                b[i + 1] -= dl_[i] * b[i];
            } else {
                const double temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - dl_[i] * b[i];
            }
        }
        b[m_ - 1] /= d_[m_ - 1];
        if (m_ > 1) b[m_ - 2] = (b[m_ - 2] - du_[m_ - 2] * b[m_ - 1]) / d_[m_ - 2];
        for (int i = m_ - 3; i >= 0; --i)
            b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
    }

private:
    int m_ = 0;
    std::vector<double> d_, dl_, du_, du2_;
    std::vector<char> piv_;
    static constexpr double tiny_ = 1e-300;
};

} // namespace detail

} // namespace qwell
