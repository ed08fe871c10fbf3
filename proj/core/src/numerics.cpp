#include "qdimer/numerics.hpp"

#include "qdimer/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qdimer::numerics {

namespace {

constexpr double kEps = 2.220446049250313e-16;

} // namespace

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> entries) {
    ComplexMatrix m(static_cast<int>(entries.size()));
    for (int i = 0; i < m.dim(); ++i) m(i, i) = entries[i];
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<double> entries) {
    ComplexMatrix m(static_cast<int>(entries.size()));
    int i = 0;
    for (double e : entries) m(i, i) = e, ++i;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix m(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix m(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) m(i, j) = std::conj((*this)(i, j));
    return m;
}

Complex ComplexMatrix::trace() const {
    Complex t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const Complex& z : data_) m = std::max(m, std::abs(z));
    return m;
}

double ComplexMatrix::one_norm() const {
    double best = 0.0;
    for (int j = 0; j < n_; ++j) {
        double col = 0.0;
        for (int i = 0; i < n_; ++i) col += std::abs((*this)(i, j));
        best = std::max(best, col);
    }
    return best;
}

double ComplexMatrix::hermiticity_defect() const {
    double d = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return d;
}

bool ComplexMatrix::all_finite() const {
    for (const Complex& z : data_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (Complex& z : data_) z *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int n = a.dim();
    ComplexMatrix c(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex(0.0)) continue;
            for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

std::vector<Complex> operator*(const ComplexMatrix& a, std::span<const Complex> x) {
    const int n = a.dim();
    std::vector<Complex> y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Complex acc = 0.0;
        for (int j = 0; j < n; ++j) acc += a(i, j) * x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = acc;
    }
    return y;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int na = a.dim(), nb = b.dim();
    ComplexMatrix c(na * nb);
    for (int ia = 0; ia < na; ++ia)
        for (int ja = 0; ja < na; ++ja) {
            const Complex s = a(ia, ja);
            if (s == Complex(0.0)) continue;
            for (int ib = 0; ib < nb; ++ib)
                for (int jb = 0; jb < nb; ++jb)
                    c(ia * nb + ib, ja * nb + jb) = s * b(ib, jb);
        }
    return c;
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition: cyclic Jacobi with complex rotations.

HermitianEigen hermitian_eigen(const ComplexMatrix& m, double herm_tol) {
    const int n = m.dim();
    if (m.hermiticity_defect() > herm_tol)
        throw ContractViolation("hermitian_eigen: input is not Hermitian within tolerance");

    // Work on the Hermitian average so rounding asymmetry cannot bias sweeps.
    ComplexMatrix a(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));

    ComplexMatrix v = ComplexMatrix::identity(n);

    auto off_norm = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) s += std::norm(a(i, j));
        return std::sqrt(s);
    };

    const double scale = std::max(a.max_abs(), 1e-300);
    const double stop = 1e-15 * scale * n;

    for (int sweep = 0; sweep < 60 && off_norm() > stop; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= stop / (n * n)) continue;

                const Complex u = std::conj(apq) / mag;  // phase that makes a(p,q) real
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // Combined rotation G: columns
                //   G(:,p) = ( c, -s*u ),  G(:,q) = ( s,  c*u )  on the (p,q) plane.
                for (int k = 0; k < n; ++k) {  // A <- A G
                    const Complex akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * u * akq;
                    a(k, q) = s * akp + c * u * akq;
                }
                for (int k = 0; k < n; ++k) {  // A <- G^+ A
                    const Complex apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * std::conj(u) * aqk;
                    a(q, k) = s * apk + c * std::conj(u) * aqk;
                }
                for (int k = 0; k < n; ++k) {  // V <- V G
                    const Complex vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * u * vkq;
                    v(k, q) = s * vkp + c * u * vkq;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    HermitianEigen out;
    out.values.resize(static_cast<std::size_t>(n));
    out.vectors = ComplexMatrix(n);
    for (int k = 0; k < n; ++k) {
        out.values[static_cast<std::size_t>(k)] = a(order[static_cast<std::size_t>(k)],
                                                    order[static_cast<std::size_t>(k)]).real();
        for (int i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[static_cast<std::size_t>(k)]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// General eigenvalues: Householder Hessenberg reduction + Wilkinson-shifted
// QR iteration with Givens rotations. Eigenvectors are never needed here.

namespace {

void hessenberg(ComplexMatrix& h) {
    const int n = h.dim();
    for (int k = 0; k < n - 2; ++k) {
        double colnorm = 0.0;
        for (int i = k + 1; i < n; ++i) colnorm += std::norm(h(i, k));
        colnorm = std::sqrt(colnorm);
        if (colnorm <= kEps * h.max_abs()) continue;

        Complex alpha = h(k + 1, k);
        const double amag = std::abs(alpha);
        const Complex phase = amag > 0.0 ? alpha / amag : Complex(1.0);
        const Complex beta = -phase * colnorm;

        // Householder vector w (normalized), acting on rows/cols k+1..n-1.
        std::vector<Complex> w(static_cast<std::size_t>(n), 0.0);
        w[static_cast<std::size_t>(k + 1)] = alpha - beta;
        for (int i = k + 2; i < n; ++i) w[static_cast<std::size_t>(i)] = h(i, k);
        double wnorm = 0.0;
        for (const Complex& z : w) wnorm += std::norm(z);
        wnorm = std::sqrt(wnorm);
        if (wnorm == 0.0) continue;
        for (Complex& z : w) z /= wnorm;

        // H <- P H P with P = I - 2 w w^+.
        for (int j = 0; j < n; ++j) {  // left: rows
            Complex dot = 0.0;
            for (int i = k + 1; i < n; ++i) dot += std::conj(w[static_cast<std::size_t>(i)]) * h(i, j);
            dot *= 2.0;
            for (int i = k + 1; i < n; ++i) h(i, j) -= dot * w[static_cast<std::size_t>(i)];
        }
        for (int i = 0; i < n; ++i) {  // right: columns
            Complex dot = 0.0;
            for (int j = k + 1; j < n; ++j) dot += h(i, j) * w[static_cast<std::size_t>(j)];
            dot *= 2.0;
            for (int j = k + 1; j < n; ++j) h(i, j) -= dot * std::conj(w[static_cast<std::size_t>(j)]);
        }
        h(k + 1, k) = beta;
        for (int i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

Complex wilkinson_shift(const ComplexMatrix& h, int hi) {
    const Complex a = h(hi - 1, hi - 1), b = h(hi - 1, hi);
    const Complex c = h(hi, hi - 1), d = h(hi, hi);
    const Complex delta = 0.5 * (a - d);
    const Complex disc = std::sqrt(delta * delta + b * c);
    const Complex den1 = delta + disc, den2 = delta - disc;
    const Complex den = std::abs(den1) >= std::abs(den2) ? den1 : den2;
    if (std::abs(den) == 0.0) return d;
    return d - b * c / den;
}

} // namespace

std::vector<Complex> general_eigenvalues(ComplexMatrix m) {
    const int n = m.dim();
    if (!m.all_finite())
        throw ContractViolation("general_eigenvalues: input has non-finite entries");

    std::vector<Complex> eig(static_cast<std::size_t>(n));
    if (n == 1) {
        eig[0] = m(0, 0);
        return eig;
    }

    hessenberg(m);
    const double norm = std::max(m.max_abs(), 1e-300);

    int hi = n - 1;
    int iter = 0;
    while (hi >= 0) {
        // Deflate converged subdiagonals.
        int lo = hi;
        while (lo > 0) {
            const double sub = std::abs(m(lo, lo - 1));
            if (sub <= kEps * (std::abs(m(lo - 1, lo - 1)) + std::abs(m(lo, lo))) ||
                sub <= kEps * norm) {
                m(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }

        if (lo == hi) {  // 1x1 block
            eig[static_cast<std::size_t>(hi)] = m(hi, hi);
            --hi;
            iter = 0;
            continue;
        }
        if (lo == hi - 1) {  // 2x2 block: closed-form quadratic
            const Complex a = m(lo, lo), b = m(lo, hi), c = m(hi, lo), d = m(hi, hi);
            const Complex tr = a + d;
            const Complex disc = std::sqrt(tr * tr - 4.0 * (a * d - b * c));
            eig[static_cast<std::size_t>(hi)] = 0.5 * (tr + disc);
            eig[static_cast<std::size_t>(lo)] = 0.5 * (tr - disc);
            hi = lo - 1;
            iter = 0;
            continue;
        }

        if (++iter > 200)
            throw NumericalError("general_eigenvalues: QR iteration failed to converge");

        Complex shift = wilkinson_shift(m, hi);
        if (iter % 16 == 0) {
            // Exceptional shift to break symmetric stalls.
            shift = m(hi, hi) + Complex(1.5 * std::abs(m(hi, hi - 1)) +
                                        0.75 * std::abs(m(hi - 1, hi - 2)));
        }

        // One explicit shifted QR sweep via Givens rotations on the active
        // block: H - sI = QR, then H <- RQ + sI.
        for (int i = lo; i <= hi; ++i) m(i, i) -= shift;

        std::vector<double> gc(static_cast<std::size_t>(hi - lo));
        std::vector<Complex> gs(static_cast<std::size_t>(hi - lo));
        for (int k = lo; k < hi; ++k) {
            const Complex x = m(k, k), y = m(k + 1, k);
            const double ax = std::abs(x), ay = std::abs(y);
            const double r = std::hypot(ax, ay);
            double c;
            Complex s;
            if (r == 0.0) {
                c = 1.0;
                s = 0.0;
            } else if (ax == 0.0) {
                c = 0.0;
                s = std::conj(y) / ay;
            } else {
                c = ax / r;
                s = (x / ax) * std::conj(y) / r;
            }
            gc[static_cast<std::size_t>(k - lo)] = c;
            gs[static_cast<std::size_t>(k - lo)] = s;
            for (int j = k; j <= hi; ++j) {
                const Complex t1 = m(k, j), t2 = m(k + 1, j);
                m(k, j) = c * t1 + s * t2;
                m(k + 1, j) = -std::conj(s) * t1 + c * t2;
            }
        }
        for (int k = lo; k < hi; ++k) {
            const double c = gc[static_cast<std::size_t>(k - lo)];
            const Complex s = gs[static_cast<std::size_t>(k - lo)];
            for (int i = lo; i <= hi; ++i) {
                const Complex t1 = m(i, k), t2 = m(i, k + 1);
                m(i, k) = c * t1 + std::conj(s) * t2;
                m(i, k + 1) = -s * t1 + c * t2;
            }
        }
        for (int i = lo; i <= hi; ++i) m(i, i) += shift;
    }
    return eig;
}

// ---------------------------------------------------------------------------
// Matrix exponential: scaling and squaring, degree-13 Pade approximant.

namespace {

// Solve A X = B in place by Gaussian elimination with partial pivoting.
ComplexMatrix lu_solve(ComplexMatrix a, ComplexMatrix b) {
    const int n = a.dim();
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(a(k, k));
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > best) best = std::abs(a(i, k)), piv = i;
        if (best == 0.0) throw NumericalError("expm: singular Pade denominator");
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            for (int j = 0; j < n; ++j) std::swap(b(k, j), b(piv, j));
        }
        for (int i = k + 1; i < n; ++i) {
            const Complex f = a(i, k) / a(k, k);
            if (f == Complex(0.0)) continue;
            for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            for (int j = 0; j < n; ++j) b(i, j) -= f * b(k, j);
        }
    }
    for (int k = n - 1; k >= 0; --k) {
        for (int j = 0; j < n; ++j) {
            Complex acc = b(k, j);
            for (int i = k + 1; i < n; ++i) acc -= a(k, i) * b(i, j);
            b(k, j) = acc / a(k, k);
        }
    }
    return b;
}

} // namespace

ComplexMatrix expm(const ComplexMatrix& m) {
    if (!m.all_finite()) throw NumericalError("expm: input has non-finite entries");
    const int n = m.dim();

    constexpr double theta13 = 5.371920351148152;
    const double norm = m.one_norm();
    int squarings = 0;
    if (norm > theta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
        if (squarings > 60) throw NumericalError("expm: norm overflow");
    }

    ComplexMatrix a = m;
    a *= Complex(std::ldexp(1.0, -squarings));

    static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,       1323241920.0,
                               40840800.0,          960960.0,            16380.0,
                               182.0,               1.0};

    const ComplexMatrix ident = ComplexMatrix::identity(n);
    const ComplexMatrix a2 = a * a;
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix a6 = a2 * a4;

    ComplexMatrix u_inner = a6 * Complex(b[13]) + a4 * Complex(b[11]) + a2 * Complex(b[9]);
    ComplexMatrix u = a * (a6 * u_inner + a6 * Complex(b[7]) + a4 * Complex(b[5]) +
                           a2 * Complex(b[3]) + ident * Complex(b[1]));
    ComplexMatrix v_inner = a6 * Complex(b[12]) + a4 * Complex(b[10]) + a2 * Complex(b[8]);
    ComplexMatrix v = a6 * v_inner + a6 * Complex(b[6]) + a4 * Complex(b[4]) +
                      a2 * Complex(b[2]) + ident * Complex(b[0]);

    ComplexMatrix r = lu_solve(v - u, v + u);
    for (int k = 0; k < squarings; ++k) r = r * r;

    if (!r.all_finite()) throw NumericalError("expm: overflow in result");
    return r;
}

std::vector<Complex> vectorize(const ComplexMatrix& m) {
    const int n = m.dim();
    std::vector<Complex> v(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) + static_cast<std::size_t>(n) * j] = m(i, j);
    return v;
}

ComplexMatrix devectorize(std::span<const Complex> v, int n) {
    ComplexMatrix m(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) m(i, j) = v[static_cast<std::size_t>(i) + static_cast<std::size_t>(n) * j];
    return m;
}

} // namespace qdimer::numerics
