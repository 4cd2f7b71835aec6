#include "critlab/spectral.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace critlab {

NonNegativeMatrix::NonNegativeMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.dim() < 1)
        throw InvalidConfigError("NonNegativeMatrix: dim must be >= 1");
    for (int i = 0; i < m_.dim(); ++i)
        for (int j = 0; j < m_.dim(); ++j) {
            double v = m_(i, j);
            if (!(v >= 0.0) || !std::isfinite(v))
                throw InvalidConfigError("NonNegativeMatrix: entries must be finite and >= 0");
        }
}

int check_primitive(const NonNegativeMatrix& nm) {
    const Matrix& m = nm.matrix();
    const int d = m.dim();
    const int bound = (d - 1) * (d - 1) + 1; // Wielandt

    std::vector<char> base(static_cast<std::size_t>(d) * d), pow(base.size());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            base[static_cast<std::size_t>(i) * d + j] = m(i, j) > 0.0 ? 1 : 0;
    pow = base;

    auto all_positive = [&](const std::vector<char>& a) {
        for (char c : a)
            if (!c) return false;
        return true;
    };

    for (int k = 1; k <= bound; ++k) {
        if (all_positive(pow)) return k;
        if (k == bound) break;
        // pow <- pow * base (boolean)
        std::vector<char> next(pow.size(), 0);
        for (int i = 0; i < d; ++i)
            for (int l = 0; l < d; ++l)
                if (pow[static_cast<std::size_t>(i) * d + l])
                    for (int j = 0; j < d; ++j)
                        if (base[static_cast<std::size_t>(l) * d + j])
                            next[static_cast<std::size_t>(i) * d + j] = 1;
        pow.swap(next);
    }
    throw NotPrimitiveError("matrix is not primitive: no positive power up to (d-1)^2+1 = " +
                            std::to_string(bound));
}

namespace {

// Power iteration for the dominant eigenvector; `left` selects x^T M vs M x.
// Vectors stay strictly positive throughout, so the l1 normalization is a
// plain sum. Stops on the eigen-residual of the normalized iterate, not on
// successive differences (the residual is what downstream contracts bound).
Vec dominant_vector(const Matrix& m, bool left, const PerronOptions& opt, double& lambda_out) {
    const int d = m.dim();
    Vec v(d, 1.0 / d);
    const double residual_tol = 0.1 * opt.tol;
    for (int it = 0; it < opt.max_iter; ++it) {
        Vec w = left ? m.apply_left(v) : m.apply(v);
        double norm = 0.0;
        for (double c : w) norm += c; // positive entries
        if (!(norm > 0.0))
            throw NonConvergenceError("power iteration collapsed to zero vector");
        double residual = 0.0;
        for (int i = 0; i < d; ++i) residual = std::max(residual, std::abs(w[i] - norm * v[i]));
        for (double& c : w) c /= norm;
        v = std::move(w);
        if (residual <= residual_tol * std::max(1.0, norm)) {
            lambda_out = norm;
            return v;
        }
    }
    throw NonConvergenceError("power iteration did not converge within max_iter");
}

} // namespace

SpectralData perron_frobenius(const NonNegativeMatrix& nm, const PerronOptions& opt) {
    const int k = check_primitive(nm); // throws if not primitive
    const Matrix& m = nm.matrix();
    const int d = m.dim();

    SpectralData s;
    s.matrix = m;
    s.primitivity_power = k;

    if (d == 1) {
        s.lambda1 = m(0, 0);
        s.left = Vec{1.0};
        s.right = Vec{1.0};
        return s;
    }

    double lam_r = 0.0, lam_l = 0.0;
    Vec r = dominant_vector(m, /*left=*/false, opt, lam_r);
    Vec l = dominant_vector(m, /*left=*/true, opt, lam_l);

    // Normalize: sum l_i = 1 (already, up to rounding), then l r = 1.
    double lsum = 0.0;
    for (double c : l) lsum += c;
    for (double& c : l) c /= lsum;
    double lr = dot(l, r);
    if (!(lr > 0.0))
        throw NonConvergenceError("degenerate eigenvector overlap");
    for (double& c : r) c /= lr;

    // lambda via the bilinear form l M r = lambda1 * (l r) = lambda1; more
    // accurate than the iteration's norm-growth estimate.
    s.lambda1 = dot(l, m.apply(r));
    s.left = std::move(l);
    s.right = std::move(r);

    for (double c : s.left)
        if (!(c > 0.0)) throw NonConvergenceError("left eigenvector has a non-positive component");
    for (double c : s.right)
        if (!(c > 0.0)) throw NonConvergenceError("right eigenvector has a non-positive component");
    return s;
}

void assert_critical(const SpectralData& s, double tol_crit) {
    if (std::abs(s.lambda1 - 1.0) > tol_crit)
        throw NotCriticalError(s.lambda1, "Perron-Frobenius eigenvalue " +
                                              std::to_string(s.lambda1) + " is not 1");
}

SpectralData rescale_to_critical(const SpectralData& s) {
    Matrix m = s.matrix;
    const int d = m.dim();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) /= s.lambda1;
    SpectralData out = s;
    out.matrix = std::move(m);
    out.lambda1 = 1.0;
    return out;
}

Decomposition decompose(const Vec& x, const SpectralData& s) {
    if (static_cast<int>(x.size()) != s.dim())
        throw DimensionMismatchError("decompose: vector size != matrix dim");
    const double lx = dot(s.left, x);
    Decomposition dec;
    dec.hat = scaled(s.right, lx);
    dec.check = sub(x, dec.hat);
    return dec;
}

NonNegativeMatrix parse_matrix_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    auto fail = [&](const std::string& msg) -> void {
        throw InvalidConfigError(origin + ":" + std::to_string(lineno) + ": " + msg);
    };

    int d = 0;
    // first non-empty, non-comment line: dimension
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok[0] == '#') continue;
        try {
            d = std::stoi(tok);
        } catch (const std::exception&) {
            fail("expected integer dimension, got '" + tok + "'");
        }
        if (d < 1) fail("dimension must be >= 1");
        std::string extra;
        if (ls >> extra) fail("unexpected token after dimension: '" + extra + "'");
        break;
    }
    if (d == 0) {
        lineno = 0;
        fail("empty matrix file");
    }

    Matrix m(d);
    int row = 0;
    while (row < d && std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first) || first[0] == '#') continue;
        ls.clear();
        ls.str(line);
        for (int j = 0; j < d; ++j) {
            double v;
            if (!(ls >> v)) fail("row " + std::to_string(row + 1) + ": expected " +
                                 std::to_string(d) + " values");
            m(row, j) = v;
        }
        std::string extra;
        if (ls >> extra) fail("row " + std::to_string(row + 1) + ": trailing token '" + extra + "'");
        ++row;
    }
    if (row < d) fail("expected " + std::to_string(d) + " matrix rows, got " + std::to_string(row));
    return NonNegativeMatrix(std::move(m));
}

NonNegativeMatrix read_matrix_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidConfigError(path + ": cannot open matrix file");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_matrix_text(ss.str(), path);
}

} // namespace critlab
