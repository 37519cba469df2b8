#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gentle/gf.hpp"

namespace gentle::grp {

/// A finite group given by its full multiplication table. Group laws are
/// verified at construction. Abelian groups built from cyclic orders carry
/// their residue presentation so that projections and sums of elements stay
/// cheap.
class FinGroup {
 public:
  FinGroup(std::string name, std::vector<std::string> labels, std::vector<uint32_t> table,
           std::optional<std::vector<uint32_t>> cyclic_orders = std::nullopt,
           std::vector<std::vector<uint32_t>> residues = {});

  std::size_t size() const { return elems_->size(); }
  const gf::BasisPtr& elements() const { return elems_; }
  const std::string& name() const { return name_; }
  uint32_t identity() const { return id_; }
  uint32_t mul(uint32_t a, uint32_t b) const { return table_[a * size() + b]; }
  uint32_t inverse(uint32_t a) const { return inv_[a]; }
  uint32_t order_of(uint32_t a) const;
  bool is_abelian() const;
  const std::optional<std::vector<uint32_t>>& cyclic_orders() const { return orders_; }
  const std::vector<std::vector<uint32_t>>& residues() const { return residues_; }
  uint32_t element_from_residues(const std::vector<uint32_t>& r) const;

 private:
  std::string name_;
  gf::BasisPtr elems_;
  std::vector<uint32_t> table_;
  uint32_t id_ = 0;
  std::vector<uint32_t> inv_;
  std::optional<std::vector<uint32_t>> orders_;
  std::vector<std::vector<uint32_t>> residues_;

  void check_laws() const;
};

using GroupPtr = std::shared_ptr<const FinGroup>;

GroupPtr trivial_group();
GroupPtr cyclic_group(uint32_t n);
/// Z_{n_1} + ... + Z_{n_k}, elements as residue tuples in lexicographic order.
GroupPtr abelian_group(const std::vector<uint32_t>& orders);
GroupPtr alternating_5();
/// Abelian group built from the additive structure of a vector list; `add`
/// must be total and associative on the list (checked).
GroupPtr group_from_table(std::string name, std::vector<std::string> labels, std::vector<uint32_t> table);

/// Element of F_p[G].
struct GroupRingElt {
  GroupPtr group;
  gf::SparseVector coeffs;

  static GroupRingElt zero(GroupPtr g, uint32_t p);
  static GroupRingElt one(GroupPtr g, uint32_t p);
  static GroupRingElt basic(GroupPtr g, uint32_t p, uint32_t elem);

  GroupRingElt plus(const GroupRingElt& o) const;
  GroupRingElt minus(const GroupRingElt& o) const;
  GroupRingElt times(const GroupRingElt& o) const;
  /// (1 - [g]) * this
  GroupRingElt one_minus_g_times(uint32_t g) const;
};

gf::FpScalar augmentation(const GroupRingElt& x);

/// Augmentation ideal powers I^1, I^2, ... computed up to the requested
/// exponent or until the chain stabilizes.
struct AugFiltration {
  GroupPtr group;
  uint32_t p = 2;
  std::vector<gf::Subspace> powers;          // powers[s-1] = I^s
  std::optional<uint32_t> stable_index;      // least s with I^{s+1} = I^s

  const gf::Subspace& power(uint32_t s) const;  // I^s, clamped at the stable power
};

AugFiltration aug_ideal_powers(GroupPtr g, uint32_t p, std::optional<uint32_t> s_max = std::nullopt);

/// Total function G -> F_p'.
struct GroupFunction {
  GroupPtr domain;
  uint32_t codomain_p = 2;
  std::vector<uint32_t> values;

  static GroupFunction constant(GroupPtr g, uint32_t p, uint32_t c);
  uint32_t operator()(uint32_t g) const { return values[g]; }
};

/// Linear extension of f evaluated on a ring element: sum of coeff * f(g).
uint32_t linear_extension(const GroupFunction& f, const GroupRingElt& x);

struct DefectResult {
  bool vanishes = false;
  std::vector<uint32_t> witness;  // g_1..g_{r+1} with the product generator not killed
};

/// True iff the linear extension of f kills I^{r+1}. On failure produces a
/// generator (1-[g_1])...(1-[g_{r+1}]) with nonzero image.
DefectResult gentle_defect(const GroupFunction& f, uint32_t r);
DefectResult gentle_defect(const GroupFunction& f, uint32_t r, const AugFiltration& filt);

struct DegreeOutcome {
  std::optional<uint32_t> degree;  // nullopt: not gentle
};

DegreeOutcome gentle_degree(const GroupFunction& f);
DegreeOutcome gentle_degree(const GroupFunction& f, const AugFiltration& filt);

struct Lemma31Result {
  bool top_vanishes = false;   // I^{(p-1)m+1} = 0
  bool sharp = false;          // I^{(p-1)m} != 0
  std::vector<std::size_t> dims;  // dim I^s for s = 1..(p-1)m+1
};

Lemma31Result check_lemma_3_1(uint32_t p, uint32_t m, std::size_t size_cap = 256);

struct CompositionBoundResult {
  uint32_t r = 0, s = 0;
  bool holds = false;
};

/// gentle_degree(f) = r, gentle_degree(g) = s, then verifies g∘f is
/// rs-gentle. The codomain of f must be the domain of g (a cyclic group of
/// prime order matching f's codomain prime).
CompositionBoundResult check_composition_bound(const GroupFunction& f, const GroupFunction& g);

/// Matrix of [u] -> [f(u)] : F_p[U] -> F_p[Z_{p'}] over the element bases.
gf::Mat pushforward_matrix(const GroupFunction& f, GroupPtr target, uint32_t ring_p);
/// Same for an arbitrary map of groups given elementwise.
gf::Mat pushforward_matrix(const std::vector<uint32_t>& map, GroupPtr source, GroupPtr target, uint32_t ring_p);
gf::Subspace image_subspace(const gf::Mat& m, gf::BasisPtr target_basis, const gf::Subspace& src);

/// f r-gentle: checks f_R(I^{rs+1}) <= I^{s+1} in the codomain group ring.
bool check_pushforward_bound(const GroupFunction& f, uint32_t r, uint32_t s, uint32_t ring_p);

/// Coordinatewise product of functions on the product group: each
/// (u_1..u_n) -> f_j(u_j) must be r-gentle.
bool check_product_gentle(const std::vector<GroupFunction>& fs, uint32_t r, std::size_t group_cap = 256);

struct PerfectStabilityResult {
  bool stable = false;              // I^2 = I
  std::size_t dim_i1 = 0, dim_i2 = 0;
  bool basics_in_i2 = false;        // [g] - [e] in I^2 for all g (when stable)
};

PerfectStabilityResult check_perfect_stability(GroupPtr g, uint32_t p, std::size_t size_cap = 256);

/// u1, u2 of coprime orders: [u1+u2]-[u1]-[u2]+[0] lies in the stable ideal
/// power.
bool check_coprime_relation(GroupPtr u, uint32_t u1, uint32_t u2, uint32_t p);

struct PolynomialWindowResult {
  bool holds = false;
  std::vector<long long> witness;  // failing tuple when !holds
};

/// (r+1)-fold difference test of a rational polynomial on an integer window.
PolynomialWindowResult check_integer_polynomial(const std::vector<Rational>& coeffs, uint32_t r, long long lo,
                                                long long hi);

struct Lemma71Result {
  bool identity_holds = false;      // displayed congruence for every u (r < |I|)
  bool membership_holds = false;    // sampled kernel-intersection elements in I^{r+1}
  std::size_t kernel_dim = 0;
  uint32_t trials_run = 0;
};

Lemma71Result check_lemma_7_1(const std::vector<uint32_t>& orders, uint32_t p, uint32_t r, uint32_t trials,
                              uint64_t seed, std::size_t size_cap = 256);

}  // namespace gentle::grp
