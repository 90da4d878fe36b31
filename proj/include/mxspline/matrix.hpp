#pragma once

#include <initializer_list>
#include <vector>

#include "mxspline/errors.hpp"

namespace mxspline {

// Dense real matrix, row-major storage. The universal value type of the
// library; everything from solver states to spline coefficients is one of
// these. Sizes stay small (a few rows/columns), so all operations are
// straightforward dense loops.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols);  // zero-filled
    Matrix(int rows, int cols, std::vector<double> entries);

    static Matrix identity(int n);
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int size() const { return rows_ * cols_; }
    bool empty() const { return entries_.empty(); }

    double& operator()(int i, int j) { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }

    // Row-major entries.
    const std::vector<double>& entries() const { return entries_; }

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double s);

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> entries_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator-(const Matrix& a);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(double s, Matrix a);
Matrix operator*(Matrix a, double s);

Matrix transpose(const Matrix& a);
Matrix hcat(const Matrix& a, const Matrix& b);
Matrix vcat(const Matrix& a, const Matrix& b);

// Kronecker product: block (i,j) of the result is a(i,j)*b.
Matrix kron(const Matrix& a, const Matrix& b);

// Stacks the columns of a into a single (rows*cols) x 1 column vector.
Matrix vec(const Matrix& a);

// Inverse of vec: fills an rows x cols matrix column by column.
Matrix unvec(const Matrix& v, int rows, int cols);

double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);
bool all_finite(const Matrix& a);

// Largest singular value, by power iteration on A^T A (relative tolerance
// 1e-10, at most 10000 iterations). Starts from the all-ones vector and
// cross-checks with a second deterministic pseudo-random seed.
double two_norm(const Matrix& a);

// Solves A x = b by LU factorization with partial pivoting. Throws
// SingularMatrixError when a pivot is zero to working precision.
Matrix solve_linear(Matrix a, Matrix b);

// Solves the Sylvester equation P X + X Q = R through the Kronecker
// linearization vec(X) = (I (x) P + Q^T (x) I)^{-1} vec(R). Intended for the
// small matrices this library works with; the linearized system is dense.
Matrix solve_sylvester(const Matrix& p, const Matrix& q, const Matrix& r);

}  // namespace mxspline
