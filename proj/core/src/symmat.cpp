#include "ascent/symmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ascent {

namespace {
constexpr double kSignTol = 1e-12;
constexpr double kJacobiTol = 1e-12;
constexpr int kJacobiMaxSweeps = 100;

void check_same_dim(const SymMat& a, const SymMat& b, const char* what) {
  if (a.dim() != b.dim()) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

// Flip each column so its first component of magnitude > kSignTol is positive.
void fix_signs(EigDecomp& eig) {
  const std::size_t p = eig.dim;
  for (std::size_t k = 0; k < p; ++k) {
    double lead = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      const double v = eig.vectors[k * p + i];
      if (std::abs(v) > kSignTol) {
        lead = v;
        break;
      }
    }
    if (lead < 0.0) {
      for (std::size_t i = 0; i < p; ++i) eig.vectors[k * p + i] = -eig.vectors[k * p + i];
    }
  }
}

void sort_descending(EigDecomp& eig) {
  const std::size_t p = eig.dim;
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return eig.values[a] > eig.values[b]; });
  std::vector<double> values(p);
  std::vector<double> vectors(p * p);
  for (std::size_t k = 0; k < p; ++k) {
    values[k] = eig.values[order[k]];
    for (std::size_t i = 0; i < p; ++i) vectors[k * p + i] = eig.vectors[order[k] * p + i];
  }
  eig.values = std::move(values);
  eig.vectors = std::move(vectors);
}

EigDecomp eig2(const SymMat& m) {
  EigDecomp eig;
  eig.dim = 2;
  eig.values.resize(2);
  eig.vectors.resize(4);
  const double a = m(0, 0), b = m(0, 1), c = m(1, 1);
  if (b == 0.0) {
    const bool swap = c > a;
    eig.values = {swap ? c : a, swap ? a : c};
    eig.vectors = swap ? std::vector<double>{0.0, 1.0, 1.0, 0.0}
                       : std::vector<double>{1.0, 0.0, 0.0, 1.0};
    return eig;
  }
  const double mean = 0.5 * (a + c);
  const double half = 0.5 * (a - c);
  const double radius = std::hypot(half, b);
  eig.values = {mean + radius, mean - radius};
  // Of the two algebraically equivalent eigenvector forms, take the one whose
  // leading entry is radius + |half| for numerical stability.
  Vec2 v1 = (half >= 0.0) ? Vec2{radius + half, b} : Vec2{b, radius - half};
  const double n1 = norm(v1);
  v1 = {v1[0] / n1, v1[1] / n1};
  eig.vectors = {v1[0], v1[1], -v1[1], v1[0]};
  return eig;
}

EigDecomp eig_jacobi(const SymMat& m) {
  const std::size_t p = m.dim();
  std::vector<double> a(p * p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) a[i * p + j] = m(i, j);

  std::vector<double> v(p * p, 0.0);
  for (std::size_t i = 0; i < p; ++i) v[i * p + i] = 1.0;

  const double scale = std::max(1.0, m.frob_norm());
  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i + 1; j < p; ++j) off += 2.0 * a[i * p + j] * a[i * p + j];
    if (std::sqrt(off) <= kJacobiTol * scale) break;

    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = i + 1; j < p; ++j) {
        const double apq = a[i * p + j];
        if (apq == 0.0) continue;
        const double theta = (a[j * p + j] - a[i * p + i]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double cos_r = 1.0 / std::sqrt(1.0 + t * t);
        const double sin_r = t * cos_r;

        for (std::size_t k = 0; k < p; ++k) {
          const double aki = a[k * p + i];
          const double akj = a[k * p + j];
          a[k * p + i] = cos_r * aki - sin_r * akj;
          a[k * p + j] = sin_r * aki + cos_r * akj;
        }
        for (std::size_t k = 0; k < p; ++k) {
          const double aik = a[i * p + k];
          const double ajk = a[j * p + k];
          a[i * p + k] = cos_r * aik - sin_r * ajk;
          a[j * p + k] = sin_r * aik + cos_r * ajk;
        }
        for (std::size_t k = 0; k < p; ++k) {
          const double vki = v[k * p + i];
          const double vkj = v[k * p + j];
          v[k * p + i] = cos_r * vki - sin_r * vkj;
          v[k * p + j] = sin_r * vki + cos_r * vkj;
        }
      }
    }
  }

  EigDecomp eig;
  eig.dim = p;
  eig.values.resize(p);
  eig.vectors.resize(p * p);
  for (std::size_t k = 0; k < p; ++k) {
    eig.values[k] = a[k * p + k];
    for (std::size_t i = 0; i < p; ++i) eig.vectors[k * p + i] = v[i * p + k];
  }
  return eig;
}

}  // namespace

SymMat::SymMat(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {
  if (dim == 0) throw std::invalid_argument("SymMat: dim must be >= 1");
}

SymMat SymMat::identity(std::size_t dim) {
  SymMat m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.data_[i * dim + i] = 1.0;
  return m;
}

SymMat SymMat::diag(std::initializer_list<double> values) {
  return diag(std::vector<double>(values));
}

SymMat SymMat::diag(const std::vector<double>& values) {
  SymMat m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m.data_[i * values.size() + i] = values[i];
  return m;
}

SymMat SymMat::sym2(double a, double b, double c) {
  SymMat m(2);
  m.data_ = {a, b, b, c};
  return m;
}

SymMat SymMat::outer2(double scale, const Vec2& v) {
  SymMat m(2);
  m.data_ = {scale * v[0] * v[0], scale * v[0] * v[1], scale * v[0] * v[1], scale * v[1] * v[1]};
  return m;
}

void SymMat::set(std::size_t i, std::size_t j, double value) {
  data_[i * dim_ + j] = value;
  data_[j * dim_ + i] = value;
}

SymMat& SymMat::operator+=(const SymMat& other) {
  check_same_dim(*this, other, "SymMat::operator+=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

SymMat& SymMat::operator-=(const SymMat& other) {
  check_same_dim(*this, other, "SymMat::operator-=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

SymMat& SymMat::operator*=(double scale) {
  for (double& x : data_) x *= scale;
  return *this;
}

Vec2 SymMat::apply2(const Vec2& v) const {
  return {data_[0] * v[0] + data_[1] * v[1], data_[2] * v[0] + data_[3] * v[1]};
}

double SymMat::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += data_[i * dim_ + i];
  return t;
}

double SymMat::frob_norm() const {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

bool SymMat::finite() const {
  for (double x : data_)
    if (!std::isfinite(x)) return false;
  return true;
}

EigDecomp sym_eig(const SymMat& m) {
  if (m.dim() == 0) throw std::invalid_argument("sym_eig: empty matrix");
  if (!m.finite()) throw std::invalid_argument("sym_eig: non-finite entries");
  EigDecomp eig;
  if (m.dim() == 1) {
    eig.dim = 1;
    eig.values = {m(0, 0)};
    eig.vectors = {1.0};
  } else if (m.dim() == 2) {
    eig = eig2(m);
  } else {
    eig = eig_jacobi(m);
  }
  sort_descending(eig);
  fix_signs(eig);
  return eig;
}

SymMat reconstruct(const EigDecomp& eig) { return reconstruct(eig, eig.values); }

SymMat reconstruct(const EigDecomp& eig, const std::vector<double>& values) {
  const std::size_t p = eig.dim;
  SymMat m(p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < p; ++k)
        s += values[k] * eig.vector_entry(i, k) * eig.vector_entry(j, k);
      m.set(i, j, s);
    }
  }
  return m;
}

SymMat project_psd(const SymMat& m) {
  EigDecomp eig = sym_eig(m);
  bool all_nonneg = true;
  for (double& v : eig.values) {
    if (v < 0.0) {
      v = 0.0;
      all_nonneg = false;
    }
  }
  if (all_nonneg) return m;  // fixed point, keep input bit-exact
  return reconstruct(eig);
}

double violation_norm(const SymMat& m) {
  const EigDecomp eig = sym_eig(m);
  double s = 0.0;
  for (double v : eig.values)
    if (v > 0.0) s += v * v;
  return std::sqrt(s);
}

double frob_inner(const SymMat& a, const SymMat& b) {
  check_same_dim(a, b, "frob_inner");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) s += a(i, j) * b(i, j);
  return s;
}

double min_eigenvalue(const SymMat& m) { return sym_eig(m).values.back(); }

SymMat inverse_spd(const SymMat& m, double min_eig) {
  EigDecomp eig = sym_eig(m);
  if (eig.values.back() < min_eig) throw std::domain_error("inverse_spd: matrix is singular");
  std::vector<double> inv(eig.values.size());
  for (std::size_t k = 0; k < inv.size(); ++k) inv[k] = 1.0 / eig.values[k];
  return reconstruct(eig, inv);
}

Vec2 solve_spd2(const SymMat& m, const Vec2& b, double min_eig) {
  return inverse_spd(m, min_eig).apply2(b);
}

}  // namespace ascent
