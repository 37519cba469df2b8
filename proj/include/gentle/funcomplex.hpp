#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gentle/module.hpp"

namespace gentle::simp {

/// A function-complex target: either a compact crew or a gradual simplicial
/// module.
struct Target {
  CrewPtr crew;     // exactly one of the two is set
  ModulePtr module;

  bool is_module() const { return module != nullptr; }
  uint32_t prime_or(uint32_t fallback) const { return module ? module->p() : fallback; }
  std::string name() const { return module ? module->name() : crew->name; }
};

Target crew_target(CrewPtr c);
Target module_target(ModulePtr m);

/// A vertex of the function complex: one image per nondegenerate simplex of
/// the source, either an encoded simplex of a crew target or a module
/// element.
struct MapVertex {
  // module targets: elt[q][i]; crew targets: enc[q][i]
  std::vector<std::vector<SimplicialModule::Elt>> elt;
  std::vector<std::vector<Enc>> enc;

  bool operator==(const MapVertex& o) const { return elt == o.elt && enc == o.enc; }
  bool operator<(const MapVertex& o) const;
};

/// Vertices of T^K together with the enumerated elementary homotopies.
struct FunctionComplexSlice {
  CrewPtr K;
  Target T;
  uint32_t p = 2;
  std::vector<MapVertex> vertices;          // canonical order
  gf::BasisPtr vertex_basis;                // labels m0, m1, ...
  std::vector<std::pair<uint32_t, uint32_t>> edges;  // homotopy endpoint pairs
  std::size_t homotopy_count = 0;

  /// Image of an encoded source simplex under vertex v (module targets).
  SimplicialModule::Elt apply_module(uint32_t v, const Enc& e) const;
  std::optional<uint32_t> find_vertex(const MapVertex& v) const;
};

/// All basepoint-preserving simplicial maps K -> T, canonically ordered.
std::vector<MapVertex> enumerate_maps(CrewPtr K, const Target& T, const Caps& caps = {});

FunctionComplexSlice function_complex_slice(CrewPtr K, const Target& T, const Caps& caps = {},
                                            bool with_homotopies = true);

/// Pi0 of the function complex: vertices modulo the transitive closure of
/// elementary homotopies; for module targets cross-checked against H_0 of the
/// mapping complex and carrying the induced F_p-module structure.
struct Pi0 {
  FunctionComplexSlice slice;
  std::vector<uint32_t> class_of;            // per vertex
  std::vector<uint32_t> representatives;     // per class: least vertex index
  // module structure (module targets only)
  bool has_module_structure = false;
  std::vector<std::vector<uint32_t>> class_add;
  uint32_t zero_class = 0;
  // chain-level cross-check data
  std::size_t chain_map_space_dim = 0;
  std::size_t boundary_space_dim = 0;
  bool cross_check_ok = false;

  std::size_t class_count() const { return representatives.size(); }
  std::string class_name(uint32_t c) const;
  uint32_t vertex_sum(uint32_t a, uint32_t b) const;  // module targets
};

Pi0 pi0(CrewPtr K, const Target& T, const Caps& caps = {});

/// Space of grading-preserving chain maps reduced_chains(K) -> C as an
/// anonymous subspace, together with the boundary subspace of chain
/// homotopies. Used by the pi0 cross-check and by map enumeration tests.
struct ChainMapSpace {
  ch::ChainComplex src;   // reduced chains of K
  ch::ChainComplex dst;   // copy of the module complex
  std::vector<std::size_t> offsets;  // unknown layout: per degree q, block src_q x dst_q
  std::size_t total = 0;
  gf::Mat chain_maps;     // rref basis of the chain-map space
  gf::Mat boundaries;     // rref basis of { dh + hd }
};

ChainMapSpace chain_map_space(const Crew& K, const ch::ChainComplex& C);

/// Flattened chain map extracted from a module-target vertex (the
/// identity-surjection components).
std::vector<uint32_t> vertex_chain_map(const FunctionComplexSlice& s, uint32_t v, const ChainMapSpace& space);

}  // namespace gentle::simp
