#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gentle/chain.hpp"

namespace gentle::simp {

/// Degeneracy word in Eilenberg-Zilber normal form: strictly increasing
/// indices, entry t applied t-th (smallest first). Every simplex is uniquely
/// a word applied to a nondegenerate simplex.
using Word = std::vector<uint8_t>;

/// s_i composed onto an existing normal-form word.
Word word_insert(const Word& w, uint8_t i);
uint32_t word_mask(const Word& w);
Word mask_word(uint32_t mask);
Word full_word(std::size_t dim);  // [0..dim-1], the maximally degenerate word

/// Encoded simplex: word applied to the nondegenerate simplex (tdim, tidx).
struct Enc {
  Word w;
  uint32_t tdim = 0;
  uint32_t tidx = 0;

  std::size_t dim() const { return tdim + w.size(); }
  bool degenerate() const { return !w.empty(); }
  bool operator==(const Enc& o) const { return w == o.w && tdim == o.tdim && tidx == o.tidx; }
  bool operator<(const Enc& o) const;
};

/// Pointed finite simplicial set presented by its nondegenerate simplices
/// with encoded faces.
class Crew {
 public:
  std::string name;
  uint32_t basepoint = 0;  // index in dimension 0
  std::vector<std::vector<std::string>> labels;          // labels[q][i]
  std::vector<std::vector<std::vector<Enc>>> faces;      // faces[q][i][j], q >= 1

  std::size_t dim() const { return labels.empty() ? 0 : labels.size() - 1; }
  std::size_t count(std::size_t q) const { return q < labels.size() ? labels[q].size() : 0; }
  std::size_t total_count() const;
  Enc basepoint_enc(std::size_t dim) const;  // maximally degenerate basepoint

  /// d_i of an encoded simplex, fully normalized.
  Enc face_of(const Enc& e, uint32_t i) const;
  /// Apply a degeneracy word on top of an encoded simplex.
  Enc apply_word(const Word& w, Enc e) const;
  /// All encoded simplices in a given dimension (canonical order).
  std::vector<Enc> encodings_at(std::size_t q) const;
  std::string enc_str(const Enc& e) const;

  struct Violation {
    std::string simplex;
    uint32_t i = 0, j = 0;
    std::string detail;
  };
  /// Empty when all words are in range and the simplicial identities hold.
  std::vector<Violation> validate() const;
};

using CrewPtr = std::shared_ptr<const Crew>;

CrewPtr point_crew();
CrewPtr sphere(uint32_t n);
CrewPtr standard_simplex_1();  // two vertices and an edge, basepoint at vertex 0

/// Basepoint-preserving simplicial map, one encoded image per nondegenerate
/// simplex of the source.
struct CrewMap {
  CrewPtr src;
  CrewPtr dst;
  std::vector<std::vector<Enc>> img;  // img[q][i]

  Enc apply(const Enc& e) const;  // image of an encoded simplex
  void validate() const;          // commutes with faces, preserves basepoint
};

CrewMap identity_crew_map(CrewPtr k);
CrewMap constant_crew_map(CrewPtr src, CrewPtr dst);
CrewMap compose(const CrewMap& g, const CrewMap& f);

struct ProductResult {
  CrewPtr crew;
  std::vector<CrewMap> projections;
  // component encodings per product simplex: comp[q][i][factor]
  std::vector<std::vector<std::vector<Enc>>> components;
};

/// Categorical product presented by tuples of encodings whose words have
/// empty common intersection (the shuffle decomposition).
ProductResult product(const std::vector<CrewPtr>& factors, const Caps& caps = {});
ProductResult power(CrewPtr k, uint32_t r, const Caps& caps = {});

struct WedgeResult {
  CrewPtr crew;
  std::vector<CrewMap> inclusions;
  // source simplex of each wedge simplex: (summand, dim-local index)
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> origin;
};

WedgeResult wedge(const std::vector<CrewPtr>& summands);
/// Identity on summands with e_k = 1, constant-to-basepoint on the rest.
CrewMap me_operator(const WedgeResult& w, const std::vector<uint8_t>& e);

struct CylinderResult {
  CrewPtr crew;
  CrewMap end0, end1;   // the two end inclusions K -> K ∧ Δ[1]_+
  CrewMap collapse;     // projection back to K
};

/// Reduced cylinder K ∧ Δ[1]_+.
CylinderResult reduced_cylinder(CrewPtr k, const Caps& caps = {});

/// Collapse a face-closed set of nondegenerate simplices to the basepoint.
CrewPtr collapse_subcrew(const Crew& m, const std::vector<std::vector<uint8_t>>& in_sub, std::string name);

/// Normalized chains: degree-q basis indexed by nondegenerate q-simplices,
/// alternating face sum with degenerate faces dropped. Unreduced (the
/// basepoint vertex stays in degree 0).
ch::ChainComplex normalized_chains(const Crew& k, uint32_t p, std::size_t up_to);
/// Reduced variant: basepoint dropped from degree 0.
ch::ChainComplex reduced_chains(const Crew& k, uint32_t p, std::size_t up_to);

/// Induced map on reduced chains.
ch::ComplexMap chain_map_of(const CrewMap& f, const ch::ChainComplex& src, const ch::ChainComplex& dst);

}  // namespace gentle::simp
