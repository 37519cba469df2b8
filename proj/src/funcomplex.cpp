#include "gentle/funcomplex.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace gentle::simp {

Target crew_target(CrewPtr c) { return Target{std::move(c), nullptr}; }
Target module_target(ModulePtr m) { return Target{nullptr, std::move(m)}; }

bool MapVertex::operator<(const MapVertex& o) const {
  if (elt != o.elt) return elt < o.elt;
  return enc < o.enc;
}

SimplicialModule::Elt FunctionComplexSlice::apply_module(uint32_t v, const Enc& e) const {
  const SimplicialModule& M = *T.module;
  return M.apply_word(e.tdim, e.w, vertices[v].elt[e.tdim][e.tidx]);
}

std::optional<uint32_t> FunctionComplexSlice::find_vertex(const MapVertex& v) const {
  auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
  if (it == vertices.end() || !(*it == v)) return std::nullopt;
  return static_cast<uint32_t>(it - vertices.begin());
}

namespace {

// Candidate images of one source simplex under the face constraints coming
// from already assigned lower-dimensional simplices.
std::vector<SimplicialModule::Elt> module_candidates(const SimplicialModule& M, std::size_t q,
                                                     const std::vector<SimplicialModule::Elt>& face_imgs,
                                                     std::size_t cap_count) {
  if (q == 0) {
    return M.enumerate_level(0, cap_count);
  }
  // stack the face maps and solve the affine system
  gf::Mat stacked(M.p(), 0, M.level_dim(q));
  std::vector<uint32_t> rhs;
  for (uint32_t i = 0; i <= q; ++i) {
    stacked = mat_vstack(stacked, M.face_matrix(q, i));
    for (auto c : face_imgs[i]) rhs.push_back(c);
  }
  auto part = mat_solve(stacked, rhs);
  std::vector<SimplicialModule::Elt> out;
  if (!part) return out;
  gf::Mat ker = gf::mat_kernel(stacked);
  std::size_t combos = 1;
  for (std::size_t i = 0; i < ker.rows; ++i) {
    combos *= M.p();
    if (combos > cap_count) throw cap_error("map enumeration exceeds the cap");
  }
  gf::PrimeField F(M.p());
  std::vector<uint32_t> coef(ker.rows, 0);
  for (std::size_t n = 0; n < combos; ++n) {
    SimplicialModule::Elt e = *part;
    for (std::size_t i = 0; i < ker.rows; ++i) {
      if (!coef[i]) continue;
      for (std::size_t j = 0; j < ker.cols; ++j) e[j] = F.add(e[j], F.mul(coef[i], ker.at(i, j)));
    }
    out.push_back(std::move(e));
    for (std::size_t i = coef.size(); i-- > 0;) {
      if (++coef[i] < M.p()) break;
      coef[i] = 0;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Enc> crew_candidates(const Crew& T, std::size_t q, const std::vector<Enc>& face_imgs) {
  std::vector<Enc> out;
  for (const Enc& cand : T.encodings_at(q)) {
    bool ok = true;
    for (uint32_t i = 0; i <= q && ok && q >= 1; ++i)
      if (!(T.face_of(cand, i) == face_imgs[i])) ok = false;
    if (ok) out.push_back(cand);
  }
  return out;
}

}  // namespace

std::vector<MapVertex> enumerate_maps(CrewPtr K, const Target& T, const Caps& caps) {
  const Crew& k = *K;
  std::vector<MapVertex> done;
  MapVertex cur;
  bool is_mod = T.is_module();
  if (is_mod) {
    if (k.dim() > T.module->cap()) throw cap_error("target module materialized below the source dimension");
    cur.elt.resize(k.labels.size());
    for (std::size_t q = 0; q < k.labels.size(); ++q) cur.elt[q].resize(k.count(q));
  } else {
    cur.enc.resize(k.labels.size());
    for (std::size_t q = 0; q < k.labels.size(); ++q) cur.enc[q].resize(k.count(q));
  }

  // simplices in (dimension, index) order; faces always hit earlier entries
  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (std::size_t q = 0; q < k.labels.size(); ++q)
    for (std::size_t i = 0; i < k.count(q); ++i) order.emplace_back(q, i);

  std::function<void(std::size_t)> rec = [&](std::size_t pos) {
    if (pos == order.size()) {
      if (done.size() >= caps.max_maps) throw cap_error("map enumeration exceeds the cap");
      done.push_back(cur);
      return;
    }
    auto [q, i] = order[pos];
    if (q == 0 && i == k.basepoint) {
      if (is_mod)
        cur.elt[0][i] = T.module->zero(0);
      else
        cur.enc[0][i] = Enc{{}, 0, T.crew->basepoint};
      rec(pos + 1);
      return;
    }
    if (is_mod) {
      const SimplicialModule& M = *T.module;
      std::vector<SimplicialModule::Elt> face_imgs;
      if (q >= 1) {
        face_imgs.resize(q + 1);
        for (uint32_t j = 0; j <= q; ++j) {
          const Enc& f = k.faces[q][i][j];
          face_imgs[j] = M.apply_word(f.tdim, f.w, cur.elt[f.tdim][f.tidx]);
        }
      }
      for (auto& cand : module_candidates(M, q, face_imgs, caps.max_maps)) {
        cur.elt[q][i] = cand;
        rec(pos + 1);
      }
    } else {
      const Crew& Tc = *T.crew;
      std::vector<Enc> face_imgs;
      if (q >= 1) {
        face_imgs.resize(q + 1);
        for (uint32_t j = 0; j <= q; ++j) {
          const Enc& f = k.faces[q][i][j];
          Enc base = cur.enc[f.tdim][f.tidx];
          face_imgs[j] = Tc.apply_word(f.w, base);
        }
      }
      std::vector<Enc> cands;
      if (q == 0) {
        for (uint32_t v = 0; v < Tc.count(0); ++v) cands.push_back(Enc{{}, 0, v});
      } else {
        cands = crew_candidates(Tc, q, face_imgs);
      }
      for (auto& cand : cands) {
        cur.enc[q][i] = cand;
        rec(pos + 1);
      }
    }
  };
  rec(0);
  std::sort(done.begin(), done.end());
  return done;
}

FunctionComplexSlice function_complex_slice(CrewPtr K, const Target& T, const Caps& caps, bool with_homotopies) {
  FunctionComplexSlice s;
  s.K = K;
  s.T = T;
  s.p = T.is_module() ? T.module->p() : 2;
  s.vertices = enumerate_maps(K, T, caps);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < s.vertices.size(); ++i) labels.push_back("m" + std::to_string(i));
  s.vertex_basis = gf::make_basis(std::move(labels), "maps(" + K->name + "->" + T.name() + ")");

  if (with_homotopies) {
    CylinderResult cyl = reduced_cylinder(K, caps);
    std::vector<MapVertex> homs = enumerate_maps(cyl.crew, T, caps);
    s.homotopy_count = homs.size();
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    for (const MapVertex& h : homs) {
      // endpoints: compose with the end inclusions
      auto restrict_along = [&](const CrewMap& end) {
        MapVertex v;
        if (T.is_module()) {
          v.elt.resize(K->labels.size());
          for (std::size_t q = 0; q < K->labels.size(); ++q) {
            v.elt[q].resize(K->count(q));
            for (std::size_t i = 0; i < K->count(q); ++i) {
              const Enc& img = end.img[q][i];
              v.elt[q][i] = T.module->apply_word(img.tdim, img.w, h.elt[img.tdim][img.tidx]);
            }
          }
        } else {
          v.enc.resize(K->labels.size());
          for (std::size_t q = 0; q < K->labels.size(); ++q) {
            v.enc[q].resize(K->count(q));
            for (std::size_t i = 0; i < K->count(q); ++i) {
              const Enc& img = end.img[q][i];
              Enc base = h.enc[img.tdim][img.tidx];
              v.enc[q][i] = T.crew->apply_word(img.w, base);
            }
          }
        }
        return v;
      };
      MapVertex v0 = restrict_along(cyl.end0);
      MapVertex v1 = restrict_along(cyl.end1);
      auto i0 = s.find_vertex(v0), i1 = s.find_vertex(v1);
      if (!i0 || !i1) throw input_error("homotopy endpoint is not an enumerated vertex");
      if (*i0 != *i1) edges.emplace_back(std::min(*i0, *i1), std::max(*i0, *i1));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    s.edges = std::move(edges);
  }
  return s;
}

ChainMapSpace chain_map_space(const Crew& K, const ch::ChainComplex& C) {
  ChainMapSpace sp;
  sp.src = reduced_chains(K, C.p, K.dim());
  sp.dst = C;
  const ch::ChainComplex& A = sp.src;
  const uint32_t p = C.p;
  std::size_t top = std::max(A.ranks.size(), C.ranks.size());
  sp.offsets.assign(top + 1, 0);
  std::size_t total = 0;
  for (std::size_t q = 0; q < top; ++q) {
    sp.offsets[q] = total;
    total += A.rank(q) * C.rank(q);
  }
  sp.offsets[top] = total;
  sp.total = total;

  // chain map condition: dC o f_q - f_{q-1} o dA = 0 for every q >= 1
  std::size_t rows = 0;
  for (std::size_t q = 1; q < top + 1; ++q) rows += C.rank(q - 1) * A.rank(q);
  gf::Mat cond(p, rows, total);
  gf::PrimeField F(p);
  std::size_t row0 = 0;
  for (std::size_t q = 1; q < top + 1; ++q) {
    gf::Mat dA = A.diff(q), dC = C.diff(q);
    // rows indexed by (r in C_{q-1}, x in A_q)
    for (std::size_t r = 0; r < C.rank(q - 1); ++r) {
      for (std::size_t x = 0; x < A.rank(q); ++x) {
        std::size_t row = row0 + r * A.rank(q) + x;
        // + sum_s dC[r][s] f_q[s][x]
        for (std::size_t sdx = 0; sdx < C.rank(q); ++sdx) {
          uint32_t c = dC.at(r, sdx);
          if (c) {
            std::size_t idx = sp.offsets[q] + sdx * A.rank(q) + x;
            cond.at(row, idx) = F.add(cond.at(row, idx), c);
          }
        }
        // - sum_y f_{q-1}[r][y] dA[y][x]
        for (std::size_t y = 0; y < A.rank(q - 1); ++y) {
          uint32_t c = dA.at(y, x);
          if (c) {
            std::size_t idx = sp.offsets[q - 1] + r * A.rank(q - 1) + y;
            cond.at(row, idx) = F.sub(cond.at(row, idx), c);
          }
        }
      }
    }
    row0 += C.rank(q - 1) * A.rank(q);
  }
  sp.chain_maps = gf::mat_kernel(cond);

  // boundaries: image of h -> dh + hd for degree-one h
  std::size_t hdim = 0;
  std::vector<std::size_t> hoff(top + 1, 0);
  for (std::size_t q = 0; q < top; ++q) {
    hoff[q] = hdim;
    hdim += A.rank(q) * C.rank(q + 1);
  }
  gf::Mat bnd(p, hdim, total);
  for (std::size_t q = 0; q < top; ++q) {
    // h_q : A_q -> C_{q+1} contributes dC_{q+1} h_q to degree q and
    // h_q dA_{q+1} to degree q+1
    gf::Mat dC = C.diff(q + 1), dA = A.diff(q + 1);
    for (std::size_t r = 0; r < C.rank(q + 1); ++r) {
      for (std::size_t x = 0; x < A.rank(q); ++x) {
        std::size_t hidx = hoff[q] + r * A.rank(q) + x;
        for (std::size_t rr = 0; rr < C.rank(q); ++rr) {
          uint32_t c = dC.at(rr, r);
          if (c) {
            std::size_t idx = sp.offsets[q] + rr * A.rank(q) + x;
            bnd.at(hidx, idx) = F.add(bnd.at(hidx, idx), c);
          }
        }
        for (std::size_t xx = 0; xx < A.rank(q + 1); ++xx) {
          uint32_t c = dA.at(x, xx);
          if (c) {
            std::size_t idx = sp.offsets[q + 1] + r * A.rank(q + 1) + xx;
            bnd.at(hidx, idx) = F.add(bnd.at(hidx, idx), c);
          }
        }
      }
    }
  }
  gf::Mat b = bnd;
  auto piv = gf::mat_rref(b);
  gf::Mat btrim(p, piv.size(), total);
  std::copy(b.a.begin(), b.a.begin() + static_cast<long>(piv.size() * total), btrim.a.begin());
  sp.boundaries = btrim;
  return sp;
}

std::vector<uint32_t> vertex_chain_map(const FunctionComplexSlice& s, uint32_t v, const ChainMapSpace& space) {
  const Crew& K = *s.K;
  const SimplicialModule& M = *s.T.module;
  const ch::ChainComplex& C = space.dst;
  std::vector<uint32_t> out(space.total, 0);
  for (std::size_t q = 0; q < space.src.ranks.size(); ++q) {
    for (std::size_t x = 0; x < space.src.rank(q); ++x) {
      std::size_t ki = x;
      if (q == 0) ki = x >= K.basepoint ? x + 1 : x;  // reduced basis skips the basepoint
      const SimplicialModule::Elt& img = s.vertices[v].elt[q][ki];
      // identity-surjection component of level q
      for (const auto& comp : M.components(q)) {
        if (comp.k != q) continue;
        for (std::size_t b = 0; b < C.rank(q); ++b) out[space.offsets[q] + b * space.src.rank(q) + x] = img[comp.offset + b];
      }
    }
  }
  return out;
}

namespace {

struct UnionFind {
  std::vector<uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  uint32_t find(uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(uint32_t a, uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

std::string Pi0::class_name(uint32_t c) const { return slice.vertex_basis->label(representatives[c]); }

uint32_t Pi0::vertex_sum(uint32_t a, uint32_t b) const {
  const SimplicialModule& M = *slice.T.module;
  MapVertex sum;
  sum.elt.resize(slice.K->labels.size());
  for (std::size_t q = 0; q < slice.K->labels.size(); ++q) {
    sum.elt[q].resize(slice.K->count(q));
    for (std::size_t i = 0; i < slice.K->count(q); ++i)
      sum.elt[q][i] = M.add(q, slice.vertices[a].elt[q][i], slice.vertices[b].elt[q][i]);
  }
  auto idx = slice.find_vertex(sum);
  if (!idx) throw input_error("vertex sum is not an enumerated vertex");
  return *idx;
}

Pi0 pi0(CrewPtr K, const Target& T, const Caps& caps) {
  Pi0 out;
  out.slice = function_complex_slice(K, T, caps, true);
  const auto& s = out.slice;
  UnionFind uf(s.vertices.size());
  for (auto& [a, b] : s.edges) uf.unite(a, b);

  std::map<uint32_t, uint32_t> root_to_class;
  out.class_of.resize(s.vertices.size());
  for (uint32_t v = 0; v < s.vertices.size(); ++v) {
    uint32_t r = uf.find(v);
    auto it = root_to_class.find(r);
    if (it == root_to_class.end()) {
      it = root_to_class.emplace(r, static_cast<uint32_t>(out.representatives.size())).first;
      out.representatives.push_back(v);
    }
    out.class_of[v] = it->second;
  }

  if (T.is_module()) {
    // independent chain-level computation of pi0
    ChainMapSpace sp = chain_map_space(*K, T.module->complex());
    out.chain_map_space_dim = sp.chain_maps.rows;
    out.boundary_space_dim = sp.boundaries.rows;

    gf::PrimeField F(s.p);
    // partition vertices by their chain map modulo boundaries
    gf::Subspace bspace = gf::Subspace::from_rows(gf::anon_basis(sp.total), s.p, sp.boundaries);
    std::map<std::vector<uint32_t>, std::vector<uint32_t>> coset_groups;
    bool injective = true;
    std::map<std::vector<uint32_t>, uint32_t> seen;
    for (uint32_t v = 0; v < s.vertices.size(); ++v) {
      std::vector<uint32_t> phi = vertex_chain_map(s, v, sp);
      if (seen.count(phi)) injective = false;
      seen[phi] = v;
      coset_groups[bspace.reduce(phi)].push_back(v);
    }
    // the coset partition must match the homotopy partition
    bool match = coset_groups.size() == out.class_count();
    if (match) {
      for (auto& [key, members] : coset_groups) {
        uint32_t c = out.class_of[members.front()];
        for (auto v : members)
          if (out.class_of[v] != c) match = false;
      }
    }
    bool count_ok = false;
    if (out.chain_map_space_dim < 40) {
      std::size_t expected_vertices = 1;
      for (std::size_t i = 0; i < out.chain_map_space_dim; ++i) expected_vertices *= s.p;
      count_ok = expected_vertices == s.vertices.size();
    }
    std::size_t expected_classes = 1;
    for (std::size_t i = out.boundary_space_dim; i < out.chain_map_space_dim; ++i) expected_classes *= s.p;
    out.cross_check_ok = match && injective && count_ok && expected_classes == out.class_count();

    // module structure on classes
    out.has_module_structure = true;
    out.class_add.assign(out.class_count(), std::vector<uint32_t>(out.class_count(), 0));
    for (uint32_t a = 0; a < out.class_count(); ++a)
      for (uint32_t b = 0; b < out.class_count(); ++b) {
        uint32_t v = out.vertex_sum(out.representatives[a], out.representatives[b]);
        out.class_add[a][b] = out.class_of[v];
      }
    // zero class: class of the constant-zero vertex
    MapVertex zerov;
    zerov.elt.resize(K->labels.size());
    for (std::size_t q = 0; q < K->labels.size(); ++q) {
      zerov.elt[q].resize(K->count(q));
      for (std::size_t i = 0; i < K->count(q); ++i) zerov.elt[q][i] = T.module->zero(q);
    }
    auto zi = s.find_vertex(zerov);
    if (!zi) throw input_error("constant-zero map is not an enumerated vertex");
    out.zero_class = out.class_of[*zi];
  }
  return out;
}

}  // namespace gentle::simp
