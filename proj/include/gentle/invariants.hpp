#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gentle/funcomplex.hpp"
#include "gentle/group.hpp"

namespace gentle::inv {

using simp::FunctionComplexSlice;
using simp::Pi0;

/// 0-chain on the vertices of a function complex.
struct ZeroChain {
  const FunctionComplexSlice* context = nullptr;
  gf::SparseVector coeffs;
};

/// Degree-preserving assignment of chains of the r-th power of the source to
/// chains of the r-th power of the target, stored sparsely per basis simplex.
struct ChainTransform {
  uint32_t r = 0;
  // per degree: (source simplex label, chain as label -> coefficient)
  std::map<std::size_t, std::vector<std::pair<std::string, std::vector<std::pair<std::string, uint32_t>>>>> assign;
  uint64_t digest = 0;
};

/// Function from pi0 classes to F_p.
struct InvariantTable {
  const Pi0* context = nullptr;
  std::vector<uint32_t> values;  // per class

  uint32_t operator()(uint32_t cls) const { return values[cls]; }
};

struct AnalysisImages;

/// Cached per-(K,T) analysis: power kernels per exponent, class data, and the
/// kernel of the class projection.
class SliceAnalysis {
 public:
  SliceAnalysis(simp::CrewPtr K, simp::Target T, Caps caps);
  ~SliceAnalysis();
  SliceAnalysis(const SliceAnalysis&) = delete;
  SliceAnalysis& operator=(const SliceAnalysis&) = delete;

  const Pi0& classes() const { return pi0_; }
  const FunctionComplexSlice& slice() const { return pi0_.slice; }
  const Caps& caps() const { return caps_; }

  /// Kernel of the linearized r-th power transform on the vertex basis.
  const gf::Subspace& power_kernel(uint32_t r) const;
  /// Kernel of the projection to classes.
  const gf::Subspace& class_kernel() const;

  /// Least r <= r_max with power_kernel(r) inside the class kernel.
  std::optional<uint32_t> stabilization_r(uint32_t r_max) const;

  struct Degree {
    std::optional<uint32_t> degree;               // nullopt: exceeds r_max
    std::vector<uint32_t> functional;             // factorizing functional over the constraint rows
    bool functional_verified = false;
    uint64_t functional_digest = 0;
  };
  Degree simplicial_degree(const InvariantTable& f, uint32_t r_max, bool want_functional = true) const;

  struct Separation {
    uint32_t r = 0;
    InvariantTable table;
  };
  /// Least r with an F_p invariant of simplicial degree <= r separating the
  /// two classes, plus one such table.
  std::optional<Separation> separate(uint32_t class1, uint32_t class2, uint32_t r_max) const;

  /// Raw constraint rows of the linearized power transform (deduplicated,
  /// sorted); used for functional reconstruction.
  const gf::Mat& constraint_rows(uint32_t r) const;

 private:
  simp::CrewPtr K_;
  simp::Target T_;
  Caps caps_;
  Pi0 pi0_;
  mutable std::unique_ptr<AnalysisImages> images_;
  mutable std::map<uint32_t, gf::Mat> constraints_;
  mutable std::map<uint32_t, gf::Subspace> kernels_;
  mutable std::optional<gf::Subspace> class_kernel_;
};

/// The transform [b] -> chains of b^r, extended linearly to B.
ChainTransform power_transform(const SliceAnalysis& a, uint32_t r, const gf::SparseVector& B);

/// Pushforward of a 0-chain along vertex -> class.
std::vector<uint32_t> class_projection(const Pi0& p, const gf::SparseVector& B);

struct Cor72Result {
  bool holds = false;
  std::size_t kernel_dim = 0;
  std::size_t ideal_dim = 0;
};

/// Kernel of the r-th power transform sits inside the (r+1)-st augmentation
/// power of the group ring of the vertex group (module targets).
Cor72Result check_cor_7_2(SliceAnalysis& a, uint32_t r);

/// Abelian group structure on the vertices of a module-target slice.
grp::GroupPtr vertex_group(const FunctionComplexSlice& s, std::size_t group_cap = 256);

struct Lemma121Result {
  bool holds = false;
  std::size_t simplices_checked = 0;
  std::string witness;
};

/// Alternating sum over selectors e of [(M_e)^r(w)] vanishes for every
/// simplex w of the r-th power of the wedge, up to dimension q_max.
Lemma121Result check_lemma_12_1(const std::vector<simp::CrewPtr>& summands, uint32_t r, std::size_t q_max,
                                uint32_t p, const Caps& caps = {});

struct Lemma122Violation {
  std::vector<uint32_t> table;
  uint32_t gentle_degree = 0;
  std::optional<uint32_t> simp_degree;
};

struct Lemma122Result {
  bool holds = false;
  std::size_t tables_checked = 0;
  std::vector<Lemma122Violation> violations;
};

/// For every table on pi0(sphere(n), em(p,n)) identified with Z_p: the
/// polynomial (gentle) degree is at most the simplicial degree.
Lemma122Result check_lemma_12_2(uint32_t p, uint32_t n, const Caps& caps = {});

struct Lemma101Result {
  bool holds = false;
  std::optional<uint32_t> deg_f, deg_f_tilde;  // nullopt: exceeds r_max
};

/// Composition with k : K -> K~ and h : T~ -> T cannot raise the simplicial
/// degree. h is a module homomorphism between the two targets.
Lemma101Result check_lemma_10_1(SliceAnalysis& base, SliceAnalysis& tilde, const simp::CrewMap& k,
                                const simp::ModuleHom& h, const InvariantTable& f);

/// The induced table f~ on the tilde slice: class of u~ maps through
/// h o u~ o k.
InvariantTable induced_table(const SliceAnalysis& base, const SliceAnalysis& tilde, const simp::CrewMap& k,
                             const simp::ModuleHom& h, const InvariantTable& f);

}  // namespace gentle::inv
