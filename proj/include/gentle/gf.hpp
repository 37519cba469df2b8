#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gentle/common.hpp"

namespace gentle::gf {

bool is_prime(uint32_t n);

/// Arithmetic context for a prime field F_p, p < 2^16 so products fit in
/// 32 bits. Primality is checked at construction.
class PrimeField {
 public:
  explicit PrimeField(uint32_t p);
  uint32_t p() const { return p_; }

  uint32_t add(uint32_t a, uint32_t b) const {
    uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  uint32_t sub(uint32_t a, uint32_t b) const { return a >= b ? a - b : a + p_ - b; }
  uint32_t neg(uint32_t a) const { return a == 0 ? 0 : p_ - a; }
  uint32_t mul(uint32_t a, uint32_t b) const { return (a * b) % p_; }
  uint32_t pow(uint32_t a, uint64_t e) const;
  uint32_t inv(uint32_t a) const;
  uint32_t reduce_int(long long v) const;

 private:
  uint32_t p_;
};

struct FpScalar {
  uint32_t value = 0;
  uint32_t p = 2;
};

/// A finite ordered basis of labels. The construction order is the canonical
/// total order used by every echelon form and report.
class Basis {
 public:
  Basis(std::vector<std::string> labels, std::string name);
  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& name() const { return name_; }
  std::optional<std::size_t> index(const std::string& label) const;
  bool same_as(const Basis& o) const;

 private:
  std::string name_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

using BasisPtr = std::shared_ptr<const Basis>;

BasisPtr make_basis(std::vector<std::string> labels, std::string name = "");
BasisPtr anon_basis(std::size_t n, std::string prefix = "e");

/// Sparse vector over a labelled basis. No explicit zeros; entries sorted by
/// index.
struct SparseVector {
  BasisPtr basis;
  uint32_t p = 2;
  std::vector<std::pair<uint32_t, uint32_t>> terms;

  static SparseVector zero(BasisPtr basis, uint32_t p);
  static SparseVector unit(BasisPtr basis, uint32_t p, std::size_t index);
  static SparseVector from_dense(BasisPtr basis, uint32_t p, const std::vector<uint32_t>& v);

  std::vector<uint32_t> dense() const;
  uint32_t coeff(std::size_t index) const;
  bool is_zero() const { return terms.empty(); }
  uint32_t coeff_sum() const;
  SparseVector scaled(uint32_t c) const;
  SparseVector plus(const SparseVector& o) const;
  SparseVector minus(const SparseVector& o) const;
  std::string str() const;
};

/// Dense row-major matrix over F_p. The workhorse behind every echelon and
/// kernel computation (sparse inputs convert on entry; small dimensions make
/// the dense fallback the right default once products fill in).
struct Mat {
  uint32_t p = 2;
  std::size_t rows = 0, cols = 0;
  std::vector<uint32_t> a;

  Mat() = default;
  Mat(uint32_t p_, std::size_t r, std::size_t c) : p(p_), rows(r), cols(c), a(r * c, 0) {}

  uint32_t& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  uint32_t at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

  static Mat identity(uint32_t p, std::size_t n);
  bool is_zero() const;
  bool operator==(const Mat& o) const { return p == o.p && rows == o.rows && cols == o.cols && a == o.a; }
};

Mat mat_mul(const Mat& A, const Mat& B);
Mat mat_add(const Mat& A, const Mat& B);
Mat mat_sub(const Mat& A, const Mat& B);
Mat mat_scale(const Mat& A, uint32_t c);
Mat mat_transpose(const Mat& A);
Mat mat_vstack(const Mat& A, const Mat& B);
Mat mat_hstack(const Mat& A, const Mat& B);

/// In-place reduced row echelon form; returns pivot column indices.
std::vector<std::size_t> mat_rref(Mat& M);
std::size_t mat_rank(Mat M);

/// Basis of {v : Mv = 0}, one kernel vector per row, in reduced echelon form.
Mat mat_kernel(const Mat& M);

/// One solution x of Ax = b, if any.
std::optional<std::vector<uint32_t>> mat_solve(const Mat& A, const std::vector<uint32_t>& b);

/// Row space of a labelled matrix in reduced row echelon form.
class Subspace {
 public:
  static Subspace zero(BasisPtr basis, uint32_t p);
  static Subspace from_rows(BasisPtr basis, uint32_t p, const Mat& rows);
  static Subspace full(BasisPtr basis, uint32_t p);

  const BasisPtr& basis() const { return basis_; }
  uint32_t p() const { return p_; }
  std::size_t rank() const { return rows_.rows; }
  std::size_t ambient_dim() const { return basis_->size(); }
  const Mat& rows() const { return rows_; }
  SparseVector row(std::size_t i) const;

  /// Residual of v after reduction against the echelon rows.
  std::vector<uint32_t> reduce(const std::vector<uint32_t>& v) const;
  bool contains(const SparseVector& v) const;
  bool contains_dense(const std::vector<uint32_t>& v) const;
  bool equals(const Subspace& o) const;

 private:
  BasisPtr basis_;
  uint32_t p_ = 2;
  Mat rows_;  // rref, no zero rows
};

struct LeqResult {
  bool holds = false;
  std::optional<SparseVector> witness;  // a vector in A not in B
};

Subspace rref(const std::vector<SparseVector>& rows);
Subspace rref(BasisPtr basis, uint32_t p, const std::vector<SparseVector>& rows);

/// Kernel of the linear map whose matrix columns are given over some row
/// space; the result lives in the column (domain) basis.
Subspace kernel(const std::vector<SparseVector>& columns, BasisPtr domain_basis);
Subspace kernel_of_matrix(const Mat& M, BasisPtr domain_basis);

LeqResult subspace_leq(const Subspace& A, const Subspace& B);
Subspace subspace_sum(const Subspace& A, const Subspace& B);

}  // namespace gentle::gf
