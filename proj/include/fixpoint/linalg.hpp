#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

namespace fixpoint::num {

/// Fixed-capacity vector for states of dimension <= 3. Value type, no heap.
struct Vec {
    int n = 0;
    std::array<double, 3> a{};

    Vec() = default;
    explicit Vec(int dim) : n(dim) {}
    Vec(std::initializer_list<double> xs) {
        n = static_cast<int>(xs.size());
        int i = 0;
        for (double x : xs) a[static_cast<std::size_t>(i++)] = x;
    }

    int size() const { return n; }
    double& operator[](int i) { return a[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return a[static_cast<std::size_t>(i)]; }
    double* data() { return a.data(); }
    const double* data() const { return a.data(); }

    double norm2() const {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(i)];
        return std::sqrt(s);
    }
    double norm1() const {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += std::fabs(a[static_cast<std::size_t>(i)]);
        return s;
    }
    double norm_inf() const {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s = std::max(s, std::fabs(a[static_cast<std::size_t>(i)]));
        return s;
    }

    /// Components [lo, lo+len) as a shorter Vec.
    Vec slice(int lo, int len) const {
        Vec r(len);
        for (int i = 0; i < len; ++i) r[i] = (*this)[lo + i];
        return r;
    }
};

inline Vec operator+(Vec x, const Vec& y) {
    for (int i = 0; i < x.n; ++i) x[i] += y[i];
    return x;
}
inline Vec operator-(Vec x, const Vec& y) {
    for (int i = 0; i < x.n; ++i) x[i] -= y[i];
    return x;
}
inline Vec operator*(double c, Vec x) {
    for (int i = 0; i < x.n; ++i) x[i] *= c;
    return x;
}

/// Concatenate two Vecs (stable block then unstable block, etc.).
inline Vec concat(const Vec& x, const Vec& y) {
    Vec r(x.n + y.n);
    for (int i = 0; i < x.n; ++i) r[i] = x[i];
    for (int i = 0; i < y.n; ++i) r[x.n + i] = y[i];
    return r;
}

/// Dense row-major matrix. Sized for this library's n <= 3 blocks but not
/// artificially restricted; 0x0 is a valid value (empty spectral block).
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows * cols), 0.0) {}

    static DenseMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * cols_ + j)]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * cols_ + j)]; }

    DenseMatrix transpose() const;
    DenseMatrix operator*(const DenseMatrix& o) const;
    DenseMatrix operator+(const DenseMatrix& o) const;
    DenseMatrix operator-(const DenseMatrix& o) const;
    DenseMatrix scaled(double c) const;

    Vec apply(const Vec& x) const;  // matrix * vector

    /// Submatrix rows [r0, r0+nr) x cols [c0, c0+nc).
    DenseMatrix block(int r0, int c0, int nr, int nc) const;

    double norm_inf() const;        // max row sum
    double max_abs() const;

    /// Inverse via Gaussian elimination with partial pivoting.
    /// Throws ConvergenceError on numerical singularity.
    DenseMatrix inverse() const;

    /// Solve A x = b for square A (partial pivoting).
    std::vector<double> solve(std::vector<double> b) const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> a_;
};

/// Singular values, descending. One-sided Jacobi; exact convergence criteria
/// make it deterministic. Works for any shape (transposes internally so
/// rows >= cols).
std::vector<double> singular_values(const DenseMatrix& m);

/// Spectral norm sigma_max(m); 0 for an empty matrix.
double operator_norm(const DenseMatrix& m);

/// sigma_max / sigma_min; +inf when sigma_min is 0. Identity convention: the
/// 0x0 matrix has condition number 1.
double condition_number(const DenseMatrix& m);

/// e^A by Pade approximation with scaling and squaring. Exact for 0x0 (gives
/// 0x0) and the 0 matrix (gives I).
DenseMatrix matrix_exponential(const DenseMatrix& a);

/// Eigenvalues of an n <= 3 matrix from the characteristic polynomial in
/// closed form (quadratic / depressed-cubic formulas). Deterministic order:
/// ascending real part, ties by ascending imaginary part.
std::vector<std::complex<double>> eigenvalues(const DenseMatrix& a);

/// Result of splitting A into stable (Re < 0) and unstable (Re > 0) invariant
/// blocks: basis_inv * A * basis = diag(stable_block, unstable_block), stable
/// block leading. Either block may be 0x0.
struct SchurSplit {
    DenseMatrix stable_block;    // P: all eigenvalue real parts < 0
    DenseMatrix unstable_block;  // Q: all eigenvalue real parts > 0
    DenseMatrix basis;           // columns: stable subspace first
    DenseMatrix basis_inv;
    int dim_stable = 0;
    int dim_unstable = 0;
};

/// Block-diagonalize a hyperbolic n <= 3 matrix. Closed-form eigenvalues pick
/// the split; a one-dimensional simple eigenspace (right eigenvector when the
/// stable group is 1-dimensional, left eigenvector when the unstable group
/// is) seeds an orthogonal deflation, and a Sylvester solve (vectorized,
/// <= 9x9 system) removes the off-diagonal coupling.
/// Throws NonHyperbolicError if some |Re lambda| <= tol,
/// IllConditionedBasisError if cond(basis) > 1e8.
SchurSplit real_schur_split(const DenseMatrix& a, double tol = 1e-9);

}  // namespace fixpoint::num
