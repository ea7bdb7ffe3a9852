#include "fixpoint/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fixpoint/errors.hpp"

namespace fixpoint::num {

DenseMatrix DenseMatrix::identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
    DenseMatrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            double v = (*this)(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < o.cols_; ++j) r(i, j) += v * o(k, j);
        }
    return r;
}

DenseMatrix DenseMatrix::operator+(const DenseMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum shape mismatch");
    DenseMatrix r = *this;
    for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] += o.a_[i];
    return r;
}

DenseMatrix DenseMatrix::operator-(const DenseMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix diff shape mismatch");
    DenseMatrix r = *this;
    for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] -= o.a_[i];
    return r;
}

DenseMatrix DenseMatrix::scaled(double c) const {
    DenseMatrix r = *this;
    for (double& v : r.a_) v *= c;
    return r;
}

Vec DenseMatrix::apply(const Vec& x) const {
    if (x.size() != cols_) throw std::invalid_argument("matrix apply shape mismatch");
    Vec y(rows_);
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

DenseMatrix DenseMatrix::block(int r0, int c0, int nr, int nc) const {
    DenseMatrix b(nr, nc);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
}

double DenseMatrix::norm_inf() const {
    double best = 0.0;
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (int j = 0; j < cols_; ++j) s += std::fabs((*this)(i, j));
        best = std::max(best, s);
    }
    return best;
}

double DenseMatrix::max_abs() const {
    double best = 0.0;
    for (double v : a_) best = std::max(best, std::fabs(v));
    return best;
}

namespace {

// In-place Gaussian elimination with partial pivoting on [A | B].
void eliminate(DenseMatrix& a, DenseMatrix& b) {
    const int n = a.rows();
    const double scale = std::max(a.max_abs(), 1e-300);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int i = col + 1; i < n; ++i)
            if (std::fabs(a(i, col)) > std::fabs(a(piv, col))) piv = i;
        if (std::fabs(a(piv, col)) <= 1e-14 * scale)
            throw ConvergenceError("matrix is numerically singular");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
            for (int j = 0; j < b.cols(); ++j) std::swap(b(col, j), b(piv, j));
        }
        const double d = a(col, col);
        for (int i = 0; i < n; ++i) {
            if (i == col) continue;
            const double f = a(i, col) / d;
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) a(i, j) -= f * a(col, j);
            for (int j = 0; j < b.cols(); ++j) b(i, j) -= f * b(col, j);
        }
    }
    for (int i = 0; i < n; ++i) {
        const double d = a(i, i);
        for (int j = 0; j < b.cols(); ++j) b(i, j) /= d;
    }
}

}  // namespace

DenseMatrix DenseMatrix::inverse() const {
    if (rows_ != cols_) throw std::invalid_argument("inverse of a non-square matrix");
    if (empty()) return DenseMatrix(0, 0);
    DenseMatrix a = *this;
    DenseMatrix b = identity(rows_);
    eliminate(a, b);
    return b;
}

std::vector<double> DenseMatrix::solve(std::vector<double> rhs) const {
    if (rows_ != cols_) throw std::invalid_argument("solve needs a square matrix");
    if (rhs.size() != static_cast<std::size_t>(rows_)) throw std::invalid_argument("solve: rhs size mismatch");
    if (empty()) return {};
    DenseMatrix a = *this;
    DenseMatrix b(rows_, 1);
    for (int i = 0; i < rows_; ++i) b(i, 0) = rhs[static_cast<std::size_t>(i)];
    eliminate(a, b);
    for (int i = 0; i < rows_; ++i) rhs[static_cast<std::size_t>(i)] = b(i, 0);
    return rhs;
}

std::vector<double> singular_values(const DenseMatrix& m) {
    if (m.empty()) return {};
    DenseMatrix u = m.rows() >= m.cols() ? m : m.transpose();
    const int rows = u.rows(), cols = u.cols();

    // Hestenes one-sided Jacobi: orthogonalize column pairs until no pair
    // needs rotating; column norms are then the singular values.
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (int i = 0; i < cols - 1; ++i) {
            for (int j = i + 1; j < cols; ++j) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (int r = 0; r < rows; ++r) {
                    alpha += u(r, i) * u(r, i);
                    beta += u(r, j) * u(r, j);
                    gamma += u(r, i) * u(r, j);
                }
                if (std::fabs(gamma) <= 1e-30 || std::fabs(gamma) <= 1e-15 * std::sqrt(alpha * beta))
                    continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int r = 0; r < rows; ++r) {
                    const double vi = u(r, i), vj = u(r, j);
                    u(r, i) = c * vi - s * vj;
                    u(r, j) = s * vi + c * vj;
                }
            }
        }
        if (!rotated) break;
    }
    std::vector<double> sv(static_cast<std::size_t>(cols));
    for (int j = 0; j < cols; ++j) {
        double s = 0.0;
        for (int r = 0; r < rows; ++r) s += u(r, j) * u(r, j);
        sv[static_cast<std::size_t>(j)] = std::sqrt(s);
    }
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

double operator_norm(const DenseMatrix& m) {
    if (m.empty()) return 0.0;
    return singular_values(m).front();
}

double condition_number(const DenseMatrix& m) {
    if (m.empty()) return 1.0;
    auto sv = singular_values(m);
    if (sv.back() <= 0.0) return std::numeric_limits<double>::infinity();
    return sv.front() / sv.back();
}

DenseMatrix matrix_exponential(const DenseMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("matrix exponential of a non-square matrix");
    if (a.empty()) return DenseMatrix(0, 0);
    const int n = a.rows();

    // Scale so ||A / 2^s||_inf <= 1/2, apply the (6,6) Pade approximant,
    // square s times.
    const double norm = a.norm_inf();
    int s = 0;
    if (norm > 0.5) s = static_cast<int>(std::ceil(std::log2(norm))) + 1;
    DenseMatrix x = a.scaled(1.0 / std::ldexp(1.0, s));

    const int q = 6;
    double c = 0.5;
    DenseMatrix e = DenseMatrix::identity(n) + x.scaled(c);
    DenseMatrix d = DenseMatrix::identity(n) - x.scaled(c);
    DenseMatrix p = x;
    bool plus = true;
    for (int k = 2; k <= q; ++k) {
        c *= static_cast<double>(q - k + 1) / static_cast<double>(k * (2 * q - k + 1));
        p = x * p;
        e = e + p.scaled(c);
        d = plus ? d + p.scaled(c) : d - p.scaled(c);
        plus = !plus;
    }
    e = d.inverse() * e;
    for (int k = 0; k < s; ++k) e = e * e;
    return e;
}

namespace {

using Complex = std::complex<double>;

void sort_eigenvalues(std::vector<Complex>& ev) {
    std::sort(ev.begin(), ev.end(), [](const Complex& x, const Complex& y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
}

std::vector<Complex> eig2(const DenseMatrix& a) {
    const double tr = a(0, 0) + a(1, 1);
    const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const double disc = tr * tr - 4.0 * det;
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        return {Complex((tr - root) / 2.0, 0.0), Complex((tr + root) / 2.0, 0.0)};
    }
    const double im = std::sqrt(-disc) / 2.0;
    return {Complex(tr / 2.0, -im), Complex(tr / 2.0, im)};
}

std::vector<Complex> eig3(const DenseMatrix& a) {
    // Characteristic polynomial lambda^3 - c2 lambda^2 + c1 lambda - c0.
    const double c2 = a(0, 0) + a(1, 1) + a(2, 2);
    const double c1 = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0) + a(0, 0) * a(2, 2) -
                      a(0, 2) * a(2, 0) + a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
    const double c0 = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
                      a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
                      a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));

    // Depress: lambda = t + c2/3, t^3 + p t + q = 0.
    const double m = c2 / 3.0;
    const double p = c1 - c2 * c2 / 3.0;
    const double q = -2.0 * c2 * c2 * c2 / 27.0 + c1 * c2 / 3.0 - c0;
    const double disc = q * q / 4.0 + p * p * p / 27.0;

    if (disc > 0.0) {
        // One real root, one conjugate pair (Cardano).
        const double root = std::sqrt(disc);
        const double u = std::cbrt(-q / 2.0 + root);
        const double v = std::cbrt(-q / 2.0 - root);
        const double t1 = u + v;
        const double re = -t1 / 2.0;
        const double im = std::sqrt(3.0) / 2.0 * (u - v);
        return {Complex(t1 + m, 0.0), Complex(re + m, -std::fabs(im)), Complex(re + m, std::fabs(im))};
    }
    // Three real roots (trigonometric form); p <= 0 here.
    if (p >= 0.0) {
        // p ~ 0 and disc <= 0 force q ~ 0: triple root at the shift.
        const double t = std::cbrt(-q);
        return {Complex(t + m, 0.0), Complex(t + m, 0.0), Complex(t + m, 0.0)};
    }
    const double rho = 2.0 * std::sqrt(-p / 3.0);
    double arg = 3.0 * q / (p * rho);
    arg = std::clamp(arg, -1.0, 1.0);
    const double theta = std::acos(arg);
    std::vector<Complex> ev;
    for (int k = 0; k < 3; ++k) {
        const double t = rho * std::cos((theta - 2.0 * std::numbers::pi * k) / 3.0);
        ev.emplace_back(t + m, 0.0);
    }
    return ev;
}

// Unit null vector of the numerically rank-deficient (A - lambda I), lambda a
// simple real eigenvalue.
Vec real_eigenvector(const DenseMatrix& a, double lambda) {
    const int n = a.rows();
    DenseMatrix b = a;
    for (int i = 0; i < n; ++i) b(i, i) -= lambda;
    Vec best(n);
    double best_norm = -1.0;
    if (n == 2) {
        for (int r = 0; r < 2; ++r) {
            Vec v{-b(r, 1), b(r, 0)};
            if (v.norm2() > best_norm) {
                best_norm = v.norm2();
                best = v;
            }
        }
    } else {
        // Cross products of row pairs span the null space complement.
        for (int r = 0; r < 3; ++r) {
            const int i = r == 0 ? 0 : r == 1 ? 0 : 1;
            const int j = r == 0 ? 1 : 2;
            Vec v{b(i, 1) * b(j, 2) - b(i, 2) * b(j, 1),
                  b(i, 2) * b(j, 0) - b(i, 0) * b(j, 2),
                  b(i, 0) * b(j, 1) - b(i, 1) * b(j, 0)};
            if (v.norm2() > best_norm) {
                best_norm = v.norm2();
                best = v;
            }
        }
    }
    const double scale = std::max(b.max_abs(), 1.0);
    if (best_norm <= 1e-13 * scale * scale)
        throw IllConditionedBasisError("eigenvector extraction failed: eigenspace numerically defective");
    return (1.0 / best_norm) * best;
}

// Orthogonal matrix whose first column is +-v (v unit). Householder
// reflection; symmetric, its own inverse.
DenseMatrix householder_with_first_column(const Vec& v) {
    const int n = v.size();
    const double sign = v[0] >= 0.0 ? 1.0 : -1.0;
    Vec w = v;
    w[0] += sign;
    double wn2 = 0.0;
    for (int i = 0; i < n; ++i) wn2 += w[i] * w[i];
    DenseMatrix h = DenseMatrix::identity(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h(i, j) -= 2.0 * w[i] * w[j] / wn2;
    return h;
}

// X solving T11 X - X T22 = -T12, via the vectorized linear system
// (I (x) T11 - T22^T (x) I) vec(X) = -vec(T12); at most 9x9 for n <= 3.
DenseMatrix solve_sylvester(const DenseMatrix& t11, const DenseMatrix& t12, const DenseMatrix& t22) {
    const int k = t11.rows(), mm = t22.rows();
    const int dim = k * mm;
    DenseMatrix sys(dim, dim);
    std::vector<double> rhs(static_cast<std::size_t>(dim));
    auto idx = [k](int i, int j) { return j * k + i; };
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < mm; ++j) {
            const int r = idx(i, j);
            for (int p = 0; p < k; ++p) sys(r, idx(p, j)) += t11(i, p);
            for (int l = 0; l < mm; ++l) sys(r, idx(i, l)) -= t22(l, j);
            rhs[static_cast<std::size_t>(r)] = -t12(i, j);
        }
    std::vector<double> x = sys.solve(std::move(rhs));
    DenseMatrix out(k, mm);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < mm; ++j) out(i, j) = x[static_cast<std::size_t>(idx(i, j))];
    return out;
}

}  // namespace

std::vector<Complex> eigenvalues(const DenseMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("eigenvalues of a non-square matrix");
    if (a.rows() > 3) throw std::invalid_argument("eigenvalues: dimension capped at 3");
    std::vector<Complex> ev;
    switch (a.rows()) {
        case 0: break;
        case 1: ev = {Complex(a(0, 0), 0.0)}; break;
        case 2: ev = eig2(a); break;
        default: ev = eig3(a); break;
    }
    sort_eigenvalues(ev);
    return ev;
}

SchurSplit real_schur_split(const DenseMatrix& a, double tol) {
    if (a.rows() != a.cols()) throw std::invalid_argument("real_schur_split needs a square matrix");
    const int n = a.rows();
    if (n < 1 || n > 3) throw std::invalid_argument("real_schur_split: dimension must be 1..3");

    auto ev = eigenvalues(a);
    int k = 0;
    for (const auto& l : ev) {
        if (std::fabs(l.real()) <= tol) {
            std::string msg = "matrix is not hyperbolic: eigenvalue ";
            msg += std::to_string(l.real()) + (l.imag() >= 0 ? "+" : "-");
            msg += std::to_string(std::fabs(l.imag())) + "i has |Re| <= " + std::to_string(tol);
            throw NonHyperbolicError(msg);
        }
        if (l.real() < 0.0) ++k;
    }

    SchurSplit split;
    split.dim_stable = k;
    split.dim_unstable = n - k;
    if (k == 0 || k == n) {
        split.basis = DenseMatrix::identity(n);
        split.basis_inv = split.basis;
        split.stable_block = k == n ? a : DenseMatrix(0, 0);
        split.unstable_block = k == 0 ? a : DenseMatrix(0, 0);
        return split;
    }

    // Orthogonal deflation seeded by the side whose group is 1-dimensional;
    // that eigenvalue is simple and real, so a real eigenvector exists.
    DenseMatrix qmat;
    if (k == 1) {
        // ev is sorted by real part: the stable eigenvalue is first.
        Vec v = real_eigenvector(a, ev.front().real());
        qmat = householder_with_first_column(v);
    } else {
        // Unstable group is 1-dimensional: deflate with the left eigenvector;
        // its orthogonal complement is the stable invariant subspace.
        Vec u = real_eigenvector(a.transpose(), ev.back().real());
        DenseMatrix h = householder_with_first_column(u);
        qmat = DenseMatrix(n, n);
        for (int col = 1; col < n; ++col)
            for (int i = 0; i < n; ++i) qmat(i, col - 1) = h(i, col);
        for (int i = 0; i < n; ++i) qmat(i, n - 1) = h(i, 0);
    }

    DenseMatrix t = qmat.transpose() * a * qmat;
    const int mdim = n - k;
    DenseMatrix t11 = t.block(0, 0, k, k);
    DenseMatrix t12 = t.block(0, k, k, mdim);
    DenseMatrix t22 = t.block(k, k, mdim, mdim);
    DenseMatrix x = solve_sylvester(t11, t12, t22);

    // basis = Q [I X; 0 I], basis_inv = [I -X; 0 I] Q^T.
    DenseMatrix shear = DenseMatrix::identity(n);
    DenseMatrix shear_inv = DenseMatrix::identity(n);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < mdim; ++j) {
            shear(i, k + j) = x(i, j);
            shear_inv(i, k + j) = -x(i, j);
        }
    split.basis = qmat * shear;
    split.basis_inv = shear_inv * qmat.transpose();

    if (condition_number(split.basis) > 1e8)
        throw IllConditionedBasisError("spectral basis condition number exceeds 1e8");

    DenseMatrix d = split.basis_inv * a * split.basis;
    const double scale = std::max(1.0, a.max_abs());
    double offdiag = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const bool in_stable = i < k && j < k;
            const bool in_unstable = i >= k && j >= k;
            if (!in_stable && !in_unstable) offdiag = std::max(offdiag, std::fabs(d(i, j)));
        }
    if (offdiag > 1e-8 * scale)
        throw IllConditionedBasisError("block diagonalization residual too large");

    split.stable_block = d.block(0, 0, k, k);
    split.unstable_block = d.block(k, k, mdim, mdim);
    return split;
}

}  // namespace fixpoint::num
