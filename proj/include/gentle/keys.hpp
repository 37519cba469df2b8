#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "gentle/chain.hpp"
#include "gentle/crew.hpp"
#include "gentle/module.hpp"

namespace gentle::keys {

using ch::ChainComplex;
using ch::ComplexMap;

/// Commutative square with two maps into the lower-left corner and two maps
/// out of the upper-right corner:
///   f1: V1 -> U, f2: V2 -> U, g1: W -> V1, g2: W -> V2, f1 g1 = f2 g2.
struct CommutativeSquare {
  const ChainComplex* U = nullptr;
  const ChainComplex* V1 = nullptr;
  const ChainComplex* V2 = nullptr;
  const ChainComplex* W = nullptr;
  ComplexMap f1, f2, g1, g2;

  void validate() const;
};

/// Key quadruple (s1, s2, t1, t2) for a commutative square: the splitting
/// identity holds degreewise on V1 + V2.
struct KeyQuadruple {
  ComplexMap s1;  // U -> V1
  ComplexMap s2;  // U -> V2
  ComplexMap t1;  // V1 -> W
  ComplexMap t2;  // V2 -> W

  uint64_t digest() const;
};

/// Degreewise verification of the splitting identity.
bool key_identity_holds(const CommutativeSquare& sq, const KeyQuadruple& key);

/// Chain-map section of a degreewise surjective map with exact kernel. The
/// optional flag only toggles explicit precondition reporting; the
/// construction always verifies its input.
ComplexMap sector(const ComplexMap& h, bool check_preconditions = true);

/// Split-exact row 0 <- U <-p- V <-q- W <- 0 with splittings p k = id,
/// l q = id, k p + q l = id.
struct SplitRow {
  const ChainComplex* U = nullptr;
  const ChainComplex* V = nullptr;
  const ChainComplex* W = nullptr;
  ComplexMap p, q, k, l;

  void validate() const;
};

/// Key of the left-hand square of a map of split exact rows with a sector of
/// the right-hand vertical: returns (0, k, k_hat, r).
KeyQuadruple key_from_split_rows(const SplitRow& upper, const SplitRow& lower, const ComplexMap& f,
                                 const ComplexMap& g, const ComplexMap& h, const ComplexMap& s,
                                 CommutativeSquare* out_square = nullptr);

/// Half-key lift: compatible maps k1, k2 into the two middle corners lift to
/// l = t1 k1 + t2 k2 with g1 l = k1 and g2 l = k2.
ComplexMap half_key_lift(const CommutativeSquare& sq, const ComplexMap& t1, const ComplexMap& t2,
                         const ComplexMap& k1, const ComplexMap& k2);

/// Split row from a chain-map section of the row surjection.
SplitRow split_row_from_sector(const ChainComplex& U, const ChainComplex& V, const ChainComplex& W,
                               const ComplexMap& p, const ComplexMap& q);

/// Everything materialized by the function-square construction, owning its
/// complexes so the returned maps stay valid.
struct FunctionSquareKey {
  std::unique_ptr<ChainComplex> QL, QM, QN, RL, RM, RN;
  CommutativeSquare square;
  KeyQuadruple key;
  bool identity_ok = false;
  std::size_t checked_degrees = 0;
};

/// Key for the square Q^L <- Q^M over R^L <- R^M induced by an isotypical
/// cofibration of crews j: L -> M and a fibring module map c (given on the
/// underlying complexes). The mapping complexes are the non-negatively
/// graded Hom complexes of reduced chains into the module complexes.
FunctionSquareKey key_for_function_square(simp::CrewPtr L, simp::CrewPtr M, const simp::CrewMap& j,
                                          const ChainComplex& CQ, const ChainComplex& CR, const ComplexMap& c,
                                          std::size_t cap);

/// Seeded generators for the trial suite.
ChainComplex random_complex(std::mt19937_64& rng, uint32_t p, std::size_t maxdeg, std::size_t maxrank);
ChainComplex random_exact_complex(std::mt19937_64& rng, uint32_t p, std::size_t maxdeg, std::size_t maxrank);
gf::Mat random_invertible(std::mt19937_64& rng, uint32_t p, std::size_t n);
ComplexMap random_chain_map(std::mt19937_64& rng, const ChainComplex& src, const ChainComplex& dst);

/// One seeded trial of the split-row key construction plus a half-key lift.
struct TrialResult {
  bool key_ok = false;
  bool lift_ok = false;
  bool sector_ok = false;
  uint64_t key_digest = 0;
};

/// Owns the complexes generated for one trial.
struct TrialData {
  std::vector<std::unique_ptr<ChainComplex>> own;
  TrialResult result;
};

TrialData run_key_trial(uint64_t seed, uint32_t p);

}  // namespace gentle::keys
