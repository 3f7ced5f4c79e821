#include "netident/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace netident::linalg {

namespace {

using cd = std::complex<double>;

// ---------------------------------------------------------------------------
// LU
// ---------------------------------------------------------------------------

}  // namespace

LuDecomposition LuDecomposition::compute(const DenseMatrix& m) {
  require_square(m, "lu");
  const std::size_t n = m.rows();
  LuDecomposition d;
  d.lu_ = m;
  d.piv_.resize(n);
  std::iota(d.piv_.begin(), d.piv_.end(), std::size_t{0});
  DenseMatrix& a = d.lu_;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::fabs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::fabs(a(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(d.piv_[k], d.piv_[p]);
      d.sign_ = -d.sign_;
    }
    if (a(k, k) == 0.0) {
      d.singular_ = true;
      continue;
    }
    const double inv_pivot = 1.0 / a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) * inv_pivot;
      a(i, k) = f;
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return d;
}

double LuDecomposition::determinant() const {
  double det = sign_;
  for (std::size_t i = 0; i < lu_.rows(); ++i) det *= lu_(i, i);
  return det;
}

std::vector<double> LuDecomposition::solve(
    const std::vector<double>& rhs) const {
  const std::size_t n = lu_.rows();
  if (rhs.size() != n) throw DimensionError("lu solve: rhs length mismatch");
  if (singular_) throw SingularMatrixError("lu solve: singular matrix");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[piv_[i]];
  for (std::size_t i = 1; i < n; ++i) {
    double acc = x[i];
    for (std::size_t j = 0; j < i; ++j) acc -= lu_(i, j) * x[j];
    x[i] = acc;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double acc = x[ii];
    for (std::size_t j = ii + 1; j < n; ++j) acc -= lu_(ii, j) * x[j];
    x[ii] = acc / lu_(ii, ii);
  }
  return x;
}

DenseMatrix LuDecomposition::solve(const DenseMatrix& rhs) const {
  const std::size_t n = lu_.rows();
  if (rhs.rows() != n) throw DimensionError("lu solve: rhs rows mismatch");
  DenseMatrix x(n, rhs.cols());
  std::vector<double> col(n);
  for (std::size_t j = 0; j < rhs.cols(); ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = rhs(i, j);
    const std::vector<double> sol = solve(col);
    for (std::size_t i = 0; i < n; ++i) x(i, j) = sol[i];
  }
  return x;
}

DenseMatrix LuDecomposition::inverse() const {
  return solve(DenseMatrix::identity(lu_.rows()));
}

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

double frobenius_norm(const DenseMatrix& m) {
  double acc = 0.0;
  for (double v : m.data()) acc += v * v;
  return std::sqrt(acc);
}

double norm1(const DenseMatrix& m) {
  double best = 0.0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) s += std::fabs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

bool is_symmetric(const DenseMatrix& m, double tol) {
  if (!m.square()) return false;
  double acc = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const double d = m(i, j) - m(j, i);
      acc += 2.0 * d * d;
    }
  return std::sqrt(acc) <= tol;
}

// ---------------------------------------------------------------------------
// Symmetric path: cyclic Jacobi
// ---------------------------------------------------------------------------

namespace {

void jacobi_symmetric(const DenseMatrix& m, int max_sweeps,
                      std::vector<double>& eigvals, DenseMatrix& vectors) {
  const std::size_t n = m.rows();
  DenseMatrix a = m;
  vectors = DenseMatrix::identity(n);
  const double scale = frobenius_norm(m);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (std::sqrt(2.0 * off) <= 1e-15 * (1.0 + scale)) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::fabs(a(p, q)) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        double t = 1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = vectors(k, p), vkq = vectors(k, q);
          vectors(k, p) = c * vkp - s * vkq;
          vectors(k, q) = s * vkp + c * vkq;
        }
      }
  }
  eigvals.resize(n);
  for (std::size_t i = 0; i < n; ++i) eigvals[i] = a(i, i);
}

// ---------------------------------------------------------------------------
// Nonsymmetric path: EISPACK-style elmhes / eltran / hqr2 on row-pointer
// views over flat storage.
// ---------------------------------------------------------------------------

void elmhes(double** a, int* ordr, int n) {
  for (int i = 0; i < n; i++) ordr[i] = 0;
  for (int m = 2; m < n; m++) {
    double x = 0.0;
    int i = m;
    for (int j = m; j <= n; j++) {
      if (std::fabs(a[j - 1][m - 2]) > std::fabs(x)) {
        x = a[j - 1][m - 2];
        i = j;
      }
    }
    ordr[m - 1] = i;
    if (i != m) {
      for (int j = m - 2; j < n; j++) std::swap(a[i - 1][j], a[m - 1][j]);
      for (int j = 0; j < n; j++) std::swap(a[j][i - 1], a[j][m - 1]);
    }
    if (x != 0.0) {
      for (i = m; i < n; i++) {
        double y = a[i][m - 2];
        if (y != 0.0) {
          y /= x;
          a[i][m - 2] = y;
          for (int j = m - 1; j < n; j++) a[i][j] -= y * a[m - 1][j];
          for (int j = 0; j < n; j++) a[j][m - 1] += y * a[j][i];
        }
      }
    }
  }
}

void eltran(double** a, double** zz, const int* ordr, int n) {
  for (int i = 0; i < n; i++) {
    for (int j = 0; j < n; j++) zz[i][j] = (i == j) ? 1.0 : 0.0;
  }
  if (n <= 2) return;
  for (int m = n - 1; m >= 2; m--) {
    for (int i = m; i < n; i++) zz[i][m - 1] = a[i][m - 2];
    const int i = ordr[m - 1];
    if (i != m) {
      for (int j = m - 1; j < n; j++) {
        zz[m - 1][j] = zz[i - 1][j];
        zz[i - 1][j] = 0.0;
      }
      zz[i - 1][m - 1] = 1.0;
    }
  }
}

void cdiv(double ar, double ai, double br, double bi, double* cr, double* ci) {
  double s = std::fabs(br) + std::fabs(bi);
  const double ars = ar / s, ais = ai / s, brs = br / s, bis = bi / s;
  s = brs * brs + bis * bis;
  *cr = (ars * brs + ais * bis) / s;
  *ci = (ais * brs - ars * bis) / s;
}

// Hessenberg to real Schur form with accumulated transformations.
// Adapted from the classic EISPACK routine; low = 1, hgh = n.
void hqr2(int n, double** h, double** zz, double* wr, double* wi,
          int max_iterations) {
  const int low = 1, hgh = n;
  int i, j, k, l = 0, m, en, na, itn, its;
  double p = 0, q = 0, r = 0, s = 0, t, w, x = 0, y, ra, sa, vi, vr, z = 0,
         norm, tst1, tst2;
  bool notlas;

  norm = 0.0;
  k = 1;
  for (i = 0; i < n; i++) {
    for (j = k - 1; j < n; j++) norm += std::fabs(h[i][j]);
    k = i + 1;
    if (i + 1 < low || i + 1 > hgh) {
      wr[i] = h[i][i];
      wi[i] = 0.0;
    }
  }
  en = hgh;
  t = 0.0;
  itn = max_iterations;
  while (en >= low) {
    its = 0;
    na = en - 1;
    while (en >= 1) {
      for (l = en; l > low; l--) {
        s = std::fabs(h[l - 2][l - 2]) + std::fabs(h[l - 1][l - 1]);
        if (s == 0.0) s = norm;
        tst1 = s;
        tst2 = tst1 + std::fabs(h[l - 1][l - 2]);
        if (tst2 == tst1) goto L100;
      }
      l = low;
    L100:
      x = h[en - 1][en - 1];
      if (l == en || l == na) break;
      if (itn == 0) {
        std::vector<cd> partial;
        for (int idx = en; idx < n; ++idx)
          partial.emplace_back(wr[idx], wi[idx]);
        throw ConvergenceError(
            "eigen_decompose: QR iteration failed to converge", partial);
      }
      y = h[na - 1][na - 1];
      w = h[en - 1][na - 1] * h[na - 1][en - 1];
      if (its == 10 || its == 20) {
        t += x;
        for (i = low - 1; i < en; i++) h[i][i] -= x;
        s = std::fabs(h[en - 1][na - 1]) + std::fabs(h[na - 1][en - 3]);
        x = 0.75 * s;
        y = x;
        w = -0.4375 * s * s;
      }
      its++;
      itn--;
      for (m = en - 2; m >= l; m--) {
        z = h[m - 1][m - 1];
        r = x - z;
        s = y - z;
        p = (r * s - w) / h[m][m - 1] + h[m - 1][m];
        q = h[m][m] - z - r - s;
        r = h[m + 1][m];
        s = std::fabs(p) + std::fabs(q) + std::fabs(r);
        p /= s;
        q /= s;
        r /= s;
        if (m == l) break;
        tst1 = std::fabs(p) *
               (std::fabs(h[m - 2][m - 2]) + std::fabs(z) + std::fabs(h[m][m]));
        tst2 = tst1 + std::fabs(h[m - 1][m - 2]) * (std::fabs(q) + std::fabs(r));
        if (tst2 == tst1) break;
      }
      for (i = m + 2; i <= en; i++) {
        h[i - 1][i - 3] = 0.0;
        if (i != m + 2) h[i - 1][i - 4] = 0.0;
      }
      for (k = m; k <= na; k++) {
        notlas = (k != na);
        if (k != m) {
          p = h[k - 1][k - 2];
          q = h[k][k - 2];
          r = 0.0;
          if (notlas) r = h[k + 1][k - 2];
          x = std::fabs(p) + std::fabs(q) + std::fabs(r);
          if (x != 0.0) {
            p /= x;
            q /= x;
            r /= x;
          }
        }
        if (x != 0.0) {
          s = std::sqrt(p * p + q * q + r * r);
          if (p < 0.0) s = -s;
          if (k != m)
            h[k - 1][k - 2] = -s * x;
          else if (l != m)
            h[k - 1][k - 2] = -h[k - 1][k - 2];
          p += s;
          x = p / s;
          y = q / s;
          z = r / s;
          q /= p;
          r /= p;
          if (!notlas) {
            for (j = k - 1; j < n; j++) {
              p = h[k - 1][j] + q * h[k][j];
              h[k - 1][j] -= p * x;
              h[k][j] -= p * y;
            }
            j = std::min(en, k + 3);
            for (i = 0; i < j; i++) {
              p = x * h[i][k - 1] + y * h[i][k];
              h[i][k - 1] -= p;
              h[i][k] -= p * q;
            }
            for (i = low - 1; i < hgh; i++) {
              p = x * zz[i][k - 1] + y * zz[i][k];
              zz[i][k - 1] -= p;
              zz[i][k] -= p * q;
            }
          } else {
            for (j = k - 1; j < n; j++) {
              p = h[k - 1][j] + q * h[k][j] + r * h[k + 1][j];
              h[k - 1][j] -= p * x;
              h[k][j] -= p * y;
              h[k + 1][j] -= p * z;
            }
            j = std::min(en, k + 3);
            for (i = 0; i < j; i++) {
              p = x * h[i][k - 1] + y * h[i][k] + z * h[i][k + 1];
              h[i][k - 1] -= p;
              h[i][k] -= p * q;
              h[i][k + 1] -= p * r;
            }
            for (i = low - 1; i < hgh; i++) {
              p = x * zz[i][k - 1] + y * zz[i][k] + z * zz[i][k + 1];
              zz[i][k - 1] -= p;
              zz[i][k] -= p * q;
              zz[i][k + 1] -= p * r;
            }
          }
        }
      }
    }
    if (l == en) {
      h[en - 1][en - 1] = x + t;
      wr[en - 1] = h[en - 1][en - 1];
      wi[en - 1] = 0.0;
      en = na;
      continue;
    }
    y = h[na - 1][na - 1];
    w = h[en - 1][na - 1] * h[na - 1][en - 1];
    p = (y - x) / 2.0;
    q = p * p + w;
    z = std::sqrt(std::fabs(q));
    h[en - 1][en - 1] = x + t;
    x = h[en - 1][en - 1];
    h[na - 1][na - 1] = y + t;
    if (q >= 0.0) {
      z = (p < 0.0) ? (p - std::fabs(z)) : (p + std::fabs(z));
      wr[na - 1] = x + z;
      wr[en - 1] = wr[na - 1];
      if (z != 0.0) wr[en - 1] = x - w / z;
      wi[na - 1] = 0.0;
      wi[en - 1] = 0.0;
      x = h[en - 1][na - 1];
      s = std::fabs(x) + std::fabs(z);
      p = x / s;
      q = z / s;
      r = std::sqrt(p * p + q * q);
      p /= r;
      q /= r;
      for (j = na - 1; j < n; j++) {
        z = h[na - 1][j];
        h[na - 1][j] = q * z + p * h[en - 1][j];
        h[en - 1][j] = q * h[en - 1][j] - p * z;
      }
      for (i = 0; i < en; i++) {
        z = h[i][na - 1];
        h[i][na - 1] = q * z + p * h[i][en - 1];
        h[i][en - 1] = q * h[i][en - 1] - p * z;
      }
      for (i = low - 1; i < hgh; i++) {
        z = zz[i][na - 1];
        zz[i][na - 1] = q * z + p * zz[i][en - 1];
        zz[i][en - 1] = q * zz[i][en - 1] - p * z;
      }
    } else {
      wr[na - 1] = x + p;
      wr[en - 1] = x + p;
      wi[na - 1] = z;
      wi[en - 1] = -z;
    }
    en -= 2;
  }
  // back substitution for eigenvectors of the triangular form
  if (norm == 0.0) return;
  for (en = n; en >= 1; en--) {
    p = wr[en - 1];
    q = wi[en - 1];
    na = en - 1;
    if (q == 0.0) {
      m = en;
      h[en - 1][en - 1] = 1.0;
      if (na != 0) {
        for (i = en - 2; i >= 0; i--) {
          w = h[i][i] - p;
          r = 0.0;
          for (j = m - 1; j < en; j++) r += h[i][j] * h[j][en - 1];
          if (wi[i] < 0.0) {
            z = w;
            s = r;
          } else {
            m = i + 1;
            if (wi[i] == 0.0) {
              t = w;
              if (t == 0.0) {
                tst1 = norm;
                t = tst1;
                do {
                  t = 0.01 * t;
                  tst2 = norm + t;
                } while (tst2 > tst1);
              }
              h[i][en - 1] = -(r / t);
            } else {
              x = h[i][i + 1];
              y = h[i + 1][i];
              q = (wr[i] - p) * (wr[i] - p) + wi[i] * wi[i];
              t = (x * s - z * r) / q;
              h[i][en - 1] = t;
              if (std::fabs(x) > std::fabs(z))
                h[i + 1][en - 1] = (-r - w * t) / x;
              else
                h[i + 1][en - 1] = (-s - y * t) / z;
            }
            t = std::fabs(h[i][en - 1]);
            if (t != 0.0) {
              tst1 = t;
              tst2 = tst1 + 1.0 / tst1;
              if (tst2 <= tst1) {
                for (j = i; j < en; j++) h[j][en - 1] /= t;
              }
            }
          }
        }
      }
    } else if (q < 0.0) {
      // complex pair, handled at its lower member so na is the upper one
      m = na;
      if (std::fabs(h[en - 1][na - 1]) > std::fabs(h[na - 1][en - 1])) {
        h[na - 1][na - 1] = q / h[en - 1][na - 1];
        h[na - 1][en - 1] =
            (p - h[en - 1][en - 1]) / h[en - 1][na - 1];
      } else {
        cdiv(0.0, -h[na - 1][en - 1], h[na - 1][na - 1] - p, q,
             &h[na - 1][na - 1], &h[na - 1][en - 1]);
      }
      h[en - 1][na - 1] = 0.0;
      h[en - 1][en - 1] = 1.0;
      if (en != 2) {
        for (i = en - 3; i >= 0; i--) {
          w = h[i][i] - p;
          ra = 0.0;
          sa = 0.0;
          for (j = m - 1; j < en; j++) {
            ra += h[i][j] * h[j][na - 1];
            sa += h[i][j] * h[j][en - 1];
          }
          if (wi[i] < 0.0) {
            z = w;
            r = ra;
            s = sa;
          } else {
            m = i + 1;
            if (wi[i] == 0.0) {
              cdiv(-ra, -sa, w, q, &h[i][na - 1], &h[i][en - 1]);
            } else {
              x = h[i][i + 1];
              y = h[i + 1][i];
              vr = (wr[i] - p) * (wr[i] - p);
              vr = vr + wi[i] * wi[i] - q * q;
              vi = (wr[i] - p) * 2.0 * q;
              if (vr == 0.0 && vi == 0.0) {
                tst1 = norm * (std::fabs(w) + std::fabs(q) + std::fabs(x) +
                               std::fabs(y) + std::fabs(z));
                vr = tst1;
                do {
                  vr = 0.01 * vr;
                  tst2 = tst1 + vr;
                } while (tst2 > tst1);
              }
              cdiv(x * r - z * ra + q * sa, x * s - z * sa - q * ra, vr, vi,
                   &h[i][na - 1], &h[i][en - 1]);
              if (std::fabs(x) > std::fabs(z) + std::fabs(q)) {
                h[i + 1][na - 1] =
                    (q * h[i][en - 1] - w * h[i][na - 1] - ra) / x;
                h[i + 1][en - 1] =
                    (-sa - w * h[i][en - 1] - q * h[i][na - 1]) / x;
              } else {
                cdiv(-r - y * h[i][na - 1], -s - y * h[i][en - 1], z, q,
                     &h[i + 1][na - 1], &h[i + 1][en - 1]);
              }
            }
            t = std::max(std::fabs(h[i][na - 1]), std::fabs(h[i][en - 1]));
            if (t != 0.0) {
              tst1 = t;
              tst2 = tst1 + 1.0 / tst1;
              if (tst2 <= tst1) {
                for (j = i; j < en; j++) {
                  h[j][na - 1] /= t;
                  h[j][en - 1] /= t;
                }
              }
            }
          }
        }
      }
    }
  }
  for (i = 0; i < n; i++) {
    if (i + 1 < low || i + 1 > hgh) {
      for (j = i; j < n; j++) zz[i][j] = h[i][j];
    }
  }
  for (j = n - 1; j >= low - 1; j--) {
    m = std::min(j + 1, hgh);
    for (i = low - 1; i < hgh; i++) {
      z = 0.0;
      for (k = low - 1; k < m; k++) z += zz[i][k] * h[k][j];
      zz[i][j] = z;
    }
  }
}

std::vector<double*> row_views(std::vector<double>& flat, std::size_t n) {
  std::vector<double*> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = flat.data() + i * n;
  return rows;
}

}  // namespace

EigenDecomposition eigen_decompose(const DenseMatrix& m, bool want_vectors,
                                   int max_iterations) {
  require_square(m, "eigen_decompose");
  const std::size_t n = m.rows();
  if (n == 0) throw DimensionError("eigen_decompose: empty matrix");

  EigenDecomposition result;
  result.n = n;

  std::vector<double> wr(n), wi(n);
  std::vector<cd> vecs;  // row-major, filled when requested

  if (is_symmetric(m)) {
    std::vector<double> eigvals;
    DenseMatrix v;
    const int sweeps = max_iterations > 0 ? max_iterations : 100;
    jacobi_symmetric(m, sweeps, eigvals, v);
    for (std::size_t i = 0; i < n; ++i) {
      wr[i] = eigvals[i];
      wi[i] = 0.0;
    }
    if (want_vectors) {
      vecs.resize(n * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) vecs[i * n + j] = cd(v(i, j), 0.0);
    }
  } else {
    std::vector<double> hflat = m.data();
    std::vector<double> zflat(n * n, 0.0);
    auto h = row_views(hflat, n);
    auto zz = row_views(zflat, n);
    std::vector<int> ordr(n, 0);
    elmhes(h.data(), ordr.data(), static_cast<int>(n));
    eltran(h.data(), zz.data(), ordr.data(), static_cast<int>(n));
    const int iters =
        max_iterations > 0 ? max_iterations : 40 * static_cast<int>(n);
    hqr2(static_cast<int>(n), h.data(), zz.data(), wr.data(), wi.data(),
         iters);
    if (want_vectors) {
      // real Schur compressed storage: real eigenvalue -> real column;
      // conjugate pair (k, k+1), wi[k] > 0 -> zz[:,k] +- i zz[:,k+1]
      vecs.resize(n * n);
      std::size_t k = 0;
      while (k < n) {
        if (wi[k] == 0.0) {
          for (std::size_t i = 0; i < n; ++i)
            vecs[i * n + k] = cd(zz[i][k], 0.0);
          ++k;
        } else {
          for (std::size_t i = 0; i < n; ++i) {
            vecs[i * n + k] = cd(zz[i][k], zz[i][k + 1]);
            vecs[i * n + k + 1] = cd(zz[i][k], -zz[i][k + 1]);
          }
          k += 2;
        }
      }
    }
  }

  // deterministic ordering: descending modulus, then real, then imaginary
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto key = [&](std::size_t i) {
    return std::make_tuple(std::hypot(wr[i], wi[i]), wr[i], wi[i]);
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key(a) > key(b); });

  result.eigenvalues.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    result.eigenvalues[k] = cd(wr[order[k]], wi[order[k]]);

  if (want_vectors) {
    result.has_vectors = true;
    result.vectors.resize(n * n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t src = order[k];
      // normalize: unit 2-norm, largest-modulus component real positive
      double nrm2 = 0.0;
      std::size_t imax = 0;
      double amax = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double a2 = std::norm(vecs[i * n + src]);
        nrm2 += a2;
        if (a2 > amax) {
          amax = a2;
          imax = i;
        }
      }
      const double nrm = std::sqrt(nrm2);
      cd phase(1.0, 0.0);
      if (std::abs(vecs[imax * n + src]) > 0.0)
        phase = std::abs(vecs[imax * n + src]) / vecs[imax * n + src];
      for (std::size_t i = 0; i < n; ++i)
        result.vectors[i * n + k] = vecs[i * n + src] * phase / nrm;
    }
  }
  return result;
}

double spectral_radius(const DenseMatrix& m) {
  require_square(m, "spectral_radius");
  if (m.is_zero()) return 0.0;
  const EigenDecomposition e = eigen_decompose(m, false);
  double r = 0.0;
  for (const auto& lambda : e.eigenvalues) r = std::max(r, std::abs(lambda));
  return r;
}

double spectral_abs_max(const DenseMatrix& m) { return spectral_radius(m); }

DenseMatrix solve_discrete_lyapunov(const DenseMatrix& B,
                                    const DenseMatrix& Omega) {
  require_square(B, "solve_discrete_lyapunov");
  require_same_shape(B, Omega, "solve_discrete_lyapunov");
  const double rho = spectral_radius(B);
  if (rho >= 1.0)
    throw InstabilityError(
        "solve_discrete_lyapunov: spectral radius of B is " +
            std::to_string(rho) + " >= 1",
        rho);
  const std::size_t n = B.rows();

  DenseMatrix sigma(n, n);
  if (n <= 64) {
    // (I - B (x) B) vec(Sigma) = vec(Omega), row-major vec
    const std::size_t N = n * n;
    DenseMatrix kron(N, N);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t row = i * n + j;
        for (std::size_t k = 0; k < n; ++k) {
          const double bik = B(i, k);
          if (bik == 0.0) continue;
          for (std::size_t l = 0; l < n; ++l)
            kron(row, k * n + l) -= bik * B(j, l);
        }
        kron(row, row) += 1.0;
      }
    std::vector<double> rhs(N);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) rhs[i * n + j] = Omega(i, j);
    const std::vector<double> x = LuDecomposition::compute(kron).solve(rhs);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) sigma(i, j) = x[i * n + j];
  } else {
    // doubling iteration for the series sum_k B^k Omega (B')^k
    sigma = Omega;
    DenseMatrix p = B;
    const double target = 1e-16 * (1.0 + frobenius_norm(Omega));
    for (int iter = 0; iter < 100; ++iter) {
      const DenseMatrix term = p * sigma * p.transpose();
      sigma += term;
      if (frobenius_norm(term) <= target) break;
      p = p * p;
    }
  }
  // symmetrize
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (sigma(i, j) + sigma(j, i));
      sigma(i, j) = v;
      sigma(j, i) = v;
    }
  return sigma;
}

DenseMatrix matrix_inverse(const DenseMatrix& m, double rcond_floor) {
  require_square(m, "matrix_inverse");
  const LuDecomposition lu = LuDecomposition::compute(m);
  if (lu.singular())
    throw SingularMatrixError("matrix_inverse: exactly singular matrix", 0.0);
  const DenseMatrix inv = lu.inverse();
  const double rcond = 1.0 / std::max(1e-300, norm1(m) * norm1(inv));
  if (rcond < rcond_floor)
    throw SingularMatrixError(
        "matrix_inverse: ill-conditioned (rcond ~ " + std::to_string(rcond) +
            ")",
        rcond);
  return inv;
}

DenseMatrix cholesky_psd(const DenseMatrix& sigma) {
  require_square(sigma, "cholesky_psd");
  const std::size_t n = sigma.rows();
  const double scale = std::max(1.0, sigma.max_abs());
  DenseMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = sigma(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d < -1e-8 * scale)
      throw SpecError("cholesky_psd: matrix is not positive semidefinite");
    if (d <= 1e-12 * scale) {
      // zero mode: leave the column empty
      continue;
    }
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = sigma(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / l(j, j);
    }
  }
  return l;
}

}  // namespace netident::linalg
