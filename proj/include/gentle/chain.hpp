#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gentle/gf.hpp"

namespace gentle::ch {

/// Bounded chain complex of finite-dimensional F_p vector spaces, degrees
/// 0..ranks.size()-1. d[q] maps degree q to degree q-1 (d[0] is unused).
struct ChainComplex {
  uint32_t p = 2;
  std::vector<std::size_t> ranks;
  std::vector<gf::Mat> d;
  std::vector<std::vector<std::string>> labels;  // optional, for reports

  std::size_t top_degree() const { return ranks.empty() ? 0 : ranks.size() - 1; }
  std::size_t rank(std::size_t q) const { return q < ranks.size() ? ranks[q] : 0; }
  /// d_q, a rank(q-1) x rank(q) matrix (zero-sized outside the support).
  gf::Mat diff(std::size_t q) const;
  void validate() const;  // shapes and d∘d = 0
  bool operator==(const ChainComplex& o) const { return p == o.p && ranks == o.ranks && d == o.d; }
};

ChainComplex zero_complex(uint32_t p);
/// F_p concentrated in one degree.
ChainComplex concentrated(uint32_t p, std::size_t degree, std::size_t rank = 1);
/// F_p in degrees n+1 and n with identity differential (the cone on a point).
ChainComplex cone_complex(uint32_t p, std::size_t degree);
ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b);

std::vector<std::size_t> homology_ranks(const ChainComplex& c);
bool is_exact(const ChainComplex& c);

/// Degree-preserving map of chain complexes; commutes with differentials
/// (checked by validate()).
struct ComplexMap {
  const ChainComplex* src = nullptr;
  const ChainComplex* dst = nullptr;
  std::vector<gf::Mat> f;  // f[q]: src_q -> dst_q, indices up to max degree

  gf::Mat at(std::size_t q) const;
  void validate() const;
  std::optional<std::size_t> first_noncommuting_degree() const;
};

ComplexMap identity_map(const ChainComplex& c);
ComplexMap zero_map(const ChainComplex& src, const ChainComplex& dst);
ComplexMap compose(const ComplexMap& g, const ComplexMap& f);  // g after f
ComplexMap map_add(const ComplexMap& a, const ComplexMap& b);
ComplexMap map_sub(const ComplexMap& a, const ComplexMap& b);
bool map_equal(const ComplexMap& a, const ComplexMap& b);
uint64_t map_digest(const ComplexMap& m);

}  // namespace gentle::ch
