#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "gentle/chain.hpp"
#include "gentle/crew.hpp"

namespace gentle::simp {

/// Monotone surjections [q] -> [k], values listed per argument. Cached and
/// enumerated in lexicographic order.
const std::vector<std::vector<uint8_t>>& surjections(std::size_t q, std::size_t k);

/// Simplicial F_p-module materialized from a bounded chain complex: level q
/// is the direct sum of one copy of C_k per surjection [q] ->> [k], with the
/// standard face/degeneracy action. Levels are built up to a fixed cap at
/// construction.
class SimplicialModule {
 public:
  SimplicialModule(ch::ChainComplex c, std::size_t cap, std::string name);

  const std::string& name() const { return name_; }
  uint32_t p() const { return complex_.p; }
  const ch::ChainComplex& complex() const { return complex_; }
  std::size_t cap() const { return cap_; }

  std::size_t level_dim(std::size_t q) const;
  /// Component blocks of level q: (k, surjection index, offset into the
  /// coordinate vector).
  struct Component {
    uint16_t k = 0;
    uint32_t surj = 0;
    uint32_t offset = 0;
  };
  const std::vector<Component>& components(std::size_t q) const { return levels_[q].comps; }
  const gf::Mat& face_matrix(std::size_t q, uint32_t i) const;    // level q -> q-1
  const gf::Mat& degen_matrix(std::size_t q, uint32_t i) const;   // level q -> q+1

  using Elt = std::vector<uint32_t>;
  Elt zero(std::size_t q) const { return Elt(level_dim(q), 0); }
  Elt face(std::size_t q, uint32_t i, const Elt& e) const;
  Elt degen(std::size_t q, uint32_t i, const Elt& e) const;
  Elt apply_word(std::size_t q, const Word& w, Elt e) const;  // degeneracy word on top
  Elt add(std::size_t q, const Elt& a, const Elt& b) const;
  Elt scale(std::size_t q, uint32_t c, const Elt& e) const;

  /// Bitmask of indices i with e in the image of s_i (scan of the support
  /// surjections). Zero means the element is nondegenerate.
  uint32_t degeneracy_mask(std::size_t q, const Elt& e) const;
  /// Full normal form: e = word applied to a nondegenerate element.
  struct Normal {
    Word w;
    std::size_t level = 0;
    Elt core;
  };
  Normal normal_form(std::size_t q, const Elt& e) const;

  /// All elements of level q in lexicographic coordinate order.
  std::vector<Elt> enumerate_level(std::size_t q, std::size_t cap_count) const;

  std::string elt_str(std::size_t q, const Elt& e) const;

  /// Degreewise checks of the simplicial identities on materialized levels.
  void self_check() const;

 private:
  struct Level {
    std::vector<Component> comps;
    std::size_t dim = 0;
    std::vector<gf::Mat> face;
    std::vector<gf::Mat> degen;
  };
  std::string name_;
  ch::ChainComplex complex_;
  std::size_t cap_ = 0;
  std::vector<Level> levels_;
};

using ModulePtr = std::shared_ptr<const SimplicialModule>;

ModulePtr dold_kan(ch::ChainComplex c, std::size_t cap, std::string name = "");
/// Eilenberg-MacLane model: F_p concentrated in degree n.
ModulePtr em_module(uint32_t p, uint32_t n, std::size_t cap);

/// Normalized chains of the module: intersection of the kernels of the front
/// faces with differential (-1)^q d_q. For a Dold-Kan module this returns the
/// input complex on the materialized range (checked by tests).
ch::ChainComplex normalized_chains_of_module(const SimplicialModule& m, std::size_t up_to);

/// Levelwise module map induced by a chain map between the underlying
/// complexes (one block per surjection component).
struct ModuleHom {
  ModulePtr src;
  ModulePtr dst;
  std::vector<gf::Mat> at_level;

  SimplicialModule::Elt apply(std::size_t q, const SimplicialModule::Elt& e) const;
};

ModuleHom induced_module_hom(ModulePtr src, ModulePtr dst, const ch::ComplexMap& phi);
ModuleHom scalar_module_hom(ModulePtr m, uint32_t c);

}  // namespace gentle::simp
