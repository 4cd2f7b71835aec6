#pragma once

#include <string>

#include "critlab/linalg.hpp"

namespace critlab {

// Square matrix with non-negative entries; validated on construction.
class NonNegativeMatrix {
  public:
    explicit NonNegativeMatrix(Matrix m);

    int dim() const { return m_.dim(); }
    const Matrix& matrix() const { return m_; }

  private:
    Matrix m_;
};

// Perron-Frobenius data of a primitive matrix. Normalizations:
// sum_i l_i = 1 and sum_i l_i r_i = 1; all components of l and r positive.
struct SpectralData {
    Matrix matrix;
    double lambda1 = 0.0;
    Vec left;  // l, row eigenvector
    Vec right; // r, column eigenvector
    int primitivity_power = 0;

    int dim() const { return matrix.dim(); }
    double ell_dot(const Vec& x) const { return dot(left, x); }
};

// Ray decomposition x = hat + check with hat = (l x) r and l check = 0.
struct Decomposition {
    Vec hat;
    Vec check;
};

// Smallest k with M^k entrywise positive, searched up to the Wielandt bound
// (d-1)^2 + 1 on the boolean zero pattern (no overflow for any scale of M).
// Throws NotPrimitiveError when no power within the bound is positive.
int check_primitive(const NonNegativeMatrix& m);

struct PerronOptions {
    double tol = 1e-12;
    int max_iter = 100000;
};

// Power iteration on M and M^T. Throws NotPrimitiveError or
// NonConvergenceError.
SpectralData perron_frobenius(const NonNegativeMatrix& m, const PerronOptions& opt = {});

// Passes iff |lambda1 - 1| <= tol_crit, else throws NotCriticalError
// carrying lambda1.
void assert_critical(const SpectralData& s, double tol_crit = 1e-9);

// Divides the matrix by lambda1 and recomputes the spectral data, exact for
// the eigenvectors (scaling does not change them).
SpectralData rescale_to_critical(const SpectralData& s);

Decomposition decompose(const Vec& x, const SpectralData& s);

// Plain text format: first line d, then d rows of d reals. Parse errors
// carry 1-based line numbers.
NonNegativeMatrix read_matrix_file(const std::string& path);
NonNegativeMatrix parse_matrix_text(const std::string& text, const std::string& origin);

} // namespace critlab
