#include "gentle/gf.hpp"

#include <algorithm>
#include <sstream>

namespace gentle::gf {

bool is_prime(uint32_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (uint32_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

PrimeField::PrimeField(uint32_t p) : p_(p) {
  if (p >= (1u << 16)) throw input_error("prime modulus must be < 2^16, got " + std::to_string(p));
  if (!is_prime(p)) throw input_error("modulus " + std::to_string(p) + " is not prime");
}

uint32_t PrimeField::pow(uint32_t a, uint64_t e) const {
  uint32_t r = 1, b = a % p_;
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

uint32_t PrimeField::inv(uint32_t a) const {
  if (a % p_ == 0) throw input_error("division by zero in F_" + std::to_string(p_));
  return pow(a, p_ - 2);
}

uint32_t PrimeField::reduce_int(long long v) const {
  long long r = v % static_cast<long long>(p_);
  if (r < 0) r += p_;
  return static_cast<uint32_t>(r);
}

Basis::Basis(std::vector<std::string> labels, std::string name)
    : name_(std::move(name)), labels_(std::move(labels)) {
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    auto [it, fresh] = index_.emplace(labels_[i], i);
    if (!fresh) throw input_error("duplicate basis label '" + labels_[i] + "'");
  }
}

std::optional<std::size_t> Basis::index(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool Basis::same_as(const Basis& o) const {
  if (this == &o) return true;
  return labels_ == o.labels_;
}

BasisPtr make_basis(std::vector<std::string> labels, std::string name) {
  return std::make_shared<const Basis>(std::move(labels), std::move(name));
}

BasisPtr anon_basis(std::size_t n, std::string prefix) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i));
  return make_basis(std::move(labels));
}

SparseVector SparseVector::zero(BasisPtr basis, uint32_t p) { return SparseVector{std::move(basis), p, {}}; }

SparseVector SparseVector::unit(BasisPtr basis, uint32_t p, std::size_t index) {
  SparseVector v{std::move(basis), p, {}};
  v.terms.emplace_back(static_cast<uint32_t>(index), 1u);
  return v;
}

SparseVector SparseVector::from_dense(BasisPtr basis, uint32_t p, const std::vector<uint32_t>& d) {
  SparseVector v{std::move(basis), p, {}};
  for (std::size_t i = 0; i < d.size(); ++i) {
    uint32_t c = d[i] % p;
    if (c) v.terms.emplace_back(static_cast<uint32_t>(i), c);
  }
  return v;
}

std::vector<uint32_t> SparseVector::dense() const {
  std::vector<uint32_t> d(basis->size(), 0);
  for (auto& [i, c] : terms) d[i] = c;
  return d;
}

uint32_t SparseVector::coeff(std::size_t index) const {
  auto it = std::lower_bound(terms.begin(), terms.end(), std::make_pair(static_cast<uint32_t>(index), 0u));
  if (it != terms.end() && it->first == index) return it->second;
  return 0;
}

uint32_t SparseVector::coeff_sum() const {
  PrimeField F(p);
  uint32_t s = 0;
  for (auto& [i, c] : terms) s = F.add(s, c);
  return s;
}

SparseVector SparseVector::scaled(uint32_t c) const {
  PrimeField F(p);
  c %= p;
  SparseVector out{basis, p, {}};
  if (c == 0) return out;
  for (auto& [i, v] : terms) out.terms.emplace_back(i, F.mul(v, c));
  return out;
}

SparseVector SparseVector::plus(const SparseVector& o) const {
  if (!basis->same_as(*o.basis) || p != o.p) throw input_error("sparse vector ambient mismatch");
  PrimeField F(p);
  SparseVector out{basis, p, {}};
  std::size_t i = 0, j = 0;
  while (i < terms.size() || j < o.terms.size()) {
    if (j == o.terms.size() || (i < terms.size() && terms[i].first < o.terms[j].first)) {
      out.terms.push_back(terms[i++]);
    } else if (i == terms.size() || o.terms[j].first < terms[i].first) {
      out.terms.push_back(o.terms[j++]);
    } else {
      uint32_t c = F.add(terms[i].second, o.terms[j].second);
      if (c) out.terms.emplace_back(terms[i].first, c);
      ++i;
      ++j;
    }
  }
  return out;
}

SparseVector SparseVector::minus(const SparseVector& o) const { return plus(o.scaled(o.p - 1)); }

std::string SparseVector::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [i, c] : terms) {
    if (!first) os << " + ";
    first = false;
    if (c != 1) os << c << "*";
    os << "[" << basis->label(i) << "]";
  }
  return os.str();
}

Mat Mat::identity(uint32_t p, std::size_t n) {
  Mat m(p, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

bool Mat::is_zero() const {
  return std::all_of(a.begin(), a.end(), [](uint32_t v) { return v == 0; });
}

Mat mat_mul(const Mat& A, const Mat& B) {
  if (A.cols != B.rows || A.p != B.p) throw input_error("matrix product shape mismatch");
  Mat C(A.p, A.rows, B.cols);
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t k = 0; k < A.cols; ++k) {
      uint32_t aik = A.at(i, k);
      if (!aik) continue;
      uint64_t acc;
      for (std::size_t j = 0; j < B.cols; ++j) {
        acc = C.at(i, j) + static_cast<uint64_t>(aik) * B.at(k, j);
        C.at(i, j) = static_cast<uint32_t>(acc % A.p);
      }
    }
  }
  return C;
}

Mat mat_add(const Mat& A, const Mat& B) {
  if (A.rows != B.rows || A.cols != B.cols || A.p != B.p) throw input_error("matrix sum shape mismatch");
  Mat C = A;
  PrimeField F(A.p);
  for (std::size_t i = 0; i < C.a.size(); ++i) C.a[i] = F.add(C.a[i], B.a[i]);
  return C;
}

Mat mat_sub(const Mat& A, const Mat& B) { return mat_add(A, mat_scale(B, A.p - 1)); }

Mat mat_scale(const Mat& A, uint32_t c) {
  Mat C = A;
  PrimeField F(A.p);
  c %= A.p;
  for (auto& v : C.a) v = F.mul(v, c);
  return C;
}

Mat mat_transpose(const Mat& A) {
  Mat T(A.p, A.cols, A.rows);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t j = 0; j < A.cols; ++j) T.at(j, i) = A.at(i, j);
  return T;
}

Mat mat_vstack(const Mat& A, const Mat& B) {
  if (A.cols != B.cols || A.p != B.p) throw input_error("vstack shape mismatch");
  Mat C(A.p, A.rows + B.rows, A.cols);
  std::copy(A.a.begin(), A.a.end(), C.a.begin());
  std::copy(B.a.begin(), B.a.end(), C.a.begin() + static_cast<long>(A.a.size()));
  return C;
}

Mat mat_hstack(const Mat& A, const Mat& B) {
  if (A.rows != B.rows || A.p != B.p) throw input_error("hstack shape mismatch");
  Mat C(A.p, A.rows, A.cols + B.cols);
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t j = 0; j < A.cols; ++j) C.at(i, j) = A.at(i, j);
    for (std::size_t j = 0; j < B.cols; ++j) C.at(i, A.cols + j) = B.at(i, j);
  }
  return C;
}

std::vector<std::size_t> mat_rref(Mat& M) {
  PrimeField F(M.p);
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < M.cols && r < M.rows; ++c) {
    std::size_t sel = r;
    while (sel < M.rows && M.at(sel, c) == 0) ++sel;
    if (sel == M.rows) continue;
    if (sel != r)
      for (std::size_t j = 0; j < M.cols; ++j) std::swap(M.at(sel, j), M.at(r, j));
    uint32_t piv = F.inv(M.at(r, c));
    for (std::size_t j = c; j < M.cols; ++j) M.at(r, j) = F.mul(M.at(r, j), piv);
    for (std::size_t i = 0; i < M.rows; ++i) {
      if (i == r) continue;
      uint32_t f = M.at(i, c);
      if (!f) continue;
      for (std::size_t j = c; j < M.cols; ++j) M.at(i, j) = F.sub(M.at(i, j), F.mul(f, M.at(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t mat_rank(Mat M) { return mat_rref(M).size(); }

Mat mat_kernel(const Mat& M) {
  Mat R = M;
  std::vector<std::size_t> pivots = mat_rref(R);
  std::vector<bool> is_pivot(M.cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  PrimeField F(M.p);
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < M.cols; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Mat K(M.p, free_cols.size(), M.cols);
  for (std::size_t t = 0; t < free_cols.size(); ++t) {
    std::size_t fc = free_cols[t];
    K.at(t, fc) = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) K.at(t, pivots[r]) = F.neg(R.at(r, fc));
  }
  mat_rref(K);
  return K;
}

std::optional<std::vector<uint32_t>> mat_solve(const Mat& A, const std::vector<uint32_t>& b) {
  if (b.size() != A.rows) throw input_error("solve: rhs size mismatch");
  Mat aug(A.p, A.rows, A.cols + 1);
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t j = 0; j < A.cols; ++j) aug.at(i, j) = A.at(i, j);
    aug.at(i, A.cols) = b[i] % A.p;
  }
  auto pivots = mat_rref(aug);
  std::vector<uint32_t> x(A.cols, 0);
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] == A.cols) return std::nullopt;  // pivot in rhs column: inconsistent
    x[pivots[r]] = aug.at(r, A.cols);
  }
  return x;
}

Subspace Subspace::zero(BasisPtr basis, uint32_t p) {
  Subspace s;
  s.basis_ = std::move(basis);
  s.p_ = p;
  s.rows_ = Mat(p, 0, s.basis_->size());
  return s;
}

Subspace Subspace::from_rows(BasisPtr basis, uint32_t p, const Mat& rows) {
  if (rows.cols != basis->size()) throw input_error("subspace rows do not match ambient basis");
  Mat R = rows;
  std::size_t rank = mat_rref(R).size();
  Mat trimmed(p, rank, R.cols);
  std::copy(R.a.begin(), R.a.begin() + static_cast<long>(rank * R.cols), trimmed.a.begin());
  Subspace s;
  s.basis_ = std::move(basis);
  s.p_ = p;
  s.rows_ = std::move(trimmed);
  return s;
}

Subspace Subspace::full(BasisPtr basis, uint32_t p) {
  std::size_t n = basis->size();
  return from_rows(std::move(basis), p, Mat::identity(p, n));
}

SparseVector Subspace::row(std::size_t i) const {
  std::vector<uint32_t> d(rows_.cols);
  for (std::size_t j = 0; j < rows_.cols; ++j) d[j] = rows_.at(i, j);
  return SparseVector::from_dense(basis_, p_, d);
}

std::vector<uint32_t> Subspace::reduce(const std::vector<uint32_t>& v) const {
  if (v.size() != basis_->size()) throw input_error("reduce: vector does not match ambient basis");
  PrimeField F(p_);
  std::vector<uint32_t> r = v;
  for (auto& c : r) c %= p_;
  for (std::size_t i = 0; i < rows_.rows; ++i) {
    std::size_t piv = 0;
    while (piv < rows_.cols && rows_.at(i, piv) == 0) ++piv;
    if (piv == rows_.cols) continue;
    uint32_t f = r[piv];
    if (!f) continue;
    for (std::size_t j = piv; j < rows_.cols; ++j) r[j] = F.sub(r[j], F.mul(f, rows_.at(i, j)));
  }
  return r;
}

bool Subspace::contains(const SparseVector& v) const {
  if (!v.basis->same_as(*basis_)) throw input_error("membership test across different ambient bases");
  return contains_dense(v.dense());
}

bool Subspace::contains_dense(const std::vector<uint32_t>& v) const {
  auto r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](uint32_t c) { return c == 0; });
}

bool Subspace::equals(const Subspace& o) const {
  return p_ == o.p_ && basis_->same_as(*o.basis_) && rows_ == o.rows_;
}

Subspace rref(const std::vector<SparseVector>& rows) {
  if (rows.empty()) throw input_error("rref of empty row list needs an explicit basis");
  return rref(rows.front().basis, rows.front().p, rows);
}

Subspace rref(BasisPtr basis, uint32_t p, const std::vector<SparseVector>& rows) {
  Mat M(p, rows.size(), basis->size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].basis->same_as(*basis) || rows[i].p != p)
      throw input_error("rref: rows do not share one ambient basis");
    for (auto& [j, c] : rows[i].terms) M.at(i, j) = c;
  }
  return Subspace::from_rows(std::move(basis), p, M);
}

Subspace kernel(const std::vector<SparseVector>& columns, BasisPtr domain_basis) {
  if (columns.size() != domain_basis->size()) throw input_error("kernel: column count does not match domain basis");
  if (columns.empty()) return Subspace::zero(std::move(domain_basis), 2);
  uint32_t p = columns.front().p;
  const Basis& row_space = *columns.front().basis;
  Mat M(p, row_space.size(), columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (!columns[j].basis->same_as(row_space) || columns[j].p != p)
      throw input_error("kernel: columns do not share one ambient basis");
    for (auto& [i, c] : columns[j].terms) M.at(i, j) = c;
  }
  return kernel_of_matrix(M, std::move(domain_basis));
}

Subspace kernel_of_matrix(const Mat& M, BasisPtr domain_basis) {
  if (M.cols != domain_basis->size()) throw input_error("kernel: matrix width does not match domain basis");
  Mat K = mat_kernel(M);
  return Subspace::from_rows(std::move(domain_basis), M.p, K);
}

LeqResult subspace_leq(const Subspace& A, const Subspace& B) {
  if (!A.basis()->same_as(*B.basis()) || A.p() != B.p())
    throw input_error("subspace comparison across different ambient bases");
  for (std::size_t i = 0; i < A.rank(); ++i) {
    SparseVector r = A.row(i);
    if (!B.contains(r)) return LeqResult{false, r};
  }
  return LeqResult{true, std::nullopt};
}

Subspace subspace_sum(const Subspace& A, const Subspace& B) {
  if (!A.basis()->same_as(*B.basis()) || A.p() != B.p())
    throw input_error("subspace sum across different ambient bases");
  return Subspace::from_rows(A.basis(), A.p(), mat_vstack(A.rows(), B.rows()));
}

}  // namespace gentle::gf
