#include "gentle/invariants.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace gentle::inv {

using simp::Crew;
using simp::CrewPtr;
using simp::Enc;
using simp::SimplicialModule;

struct EncLite {
  uint32_t mask = 0;  // degeneracy word as a bitmask
  uint32_t tdim = 0;
  uint32_t tidx = 0;
};

static std::vector<EncLite> enc_lite_at(const Crew& K, std::size_t q) {
  std::vector<EncLite> out;
  for (const Enc& e : K.encodings_at(q)) out.push_back(EncLite{simp::word_mask(e.w), e.tdim, e.tidx});
  return out;
}

/// Internal image tables: for every vertex and every encoded source simplex,
/// the interned image id and its degeneracy mask in the target.
struct AnalysisImages {
  // [q][v][e] -> (interned image id, degeneracy mask)
  std::vector<std::vector<std::vector<std::pair<uint32_t, uint32_t>>>> info;
  std::vector<std::vector<EncLite>> encs;
  std::size_t built_to = 0;
  bool any = false;
};

namespace {

void build_images_to(const SliceAnalysis& a, AnalysisImages& im, std::size_t qcap) {
  const FunctionComplexSlice& s = a.slice();
  const Crew& K = *s.K;
  std::size_t from = im.any ? im.built_to + 1 : 0;
  if (im.any && qcap <= im.built_to) return;
  im.encs.resize(qcap + 1);
  im.info.resize(qcap + 1);
  for (std::size_t q = from; q <= qcap; ++q) {
    im.encs[q] = enc_lite_at(K, q);
    im.info[q].assign(s.vertices.size(), {});
    if (s.T.is_module()) {
      const SimplicialModule& M = *s.T.module;
      std::map<SimplicialModule::Elt, uint32_t> intern;
      for (uint32_t v = 0; v < s.vertices.size(); ++v) {
        auto& row = im.info[q][v];
        row.reserve(im.encs[q].size());
        for (const EncLite& e : im.encs[q]) {
          SimplicialModule::Elt img =
              M.apply_word(e.tdim, simp::mask_word(e.mask), s.vertices[v].elt[e.tdim][e.tidx]);
          uint32_t degmask = M.degeneracy_mask(q, img);
          auto [it, fresh] = intern.emplace(std::move(img), static_cast<uint32_t>(intern.size()));
          row.emplace_back(it->second, degmask);
        }
      }
    } else {
      const Crew& T = *s.T.crew;
      std::map<Enc, uint32_t> intern;
      for (uint32_t v = 0; v < s.vertices.size(); ++v) {
        auto& row = im.info[q][v];
        row.reserve(im.encs[q].size());
        for (const EncLite& e : im.encs[q]) {
          Enc img = T.apply_word(simp::mask_word(e.mask), s.vertices[v].enc[e.tdim][e.tidx]);
          uint32_t degmask = simp::word_mask(img.w);
          auto [it, fresh] = intern.emplace(img, static_cast<uint32_t>(intern.size()));
          row.emplace_back(it->second, degmask);
        }
      }
    }
    im.built_to = q;
    im.any = true;
  }
}

// Iterate over all r-tuples of encodings at dimension q whose words have an
// empty common intersection (the nondegenerate simplices of the r-th power).
template <typename Fn>
void for_each_power_tuple(const std::vector<EncLite>& encs, uint32_t r, std::size_t& budget, Fn&& fn) {
  std::vector<uint32_t> idx(r, 0);
  if (r == 0) return;  // handled by the caller
  std::function<void(std::size_t, uint32_t)> rec = [&](std::size_t pos, uint32_t inter) {
    if (pos == r) {
      if (inter == 0) {
        if (budget == 0) throw cap_error("power enumeration exceeds the simplex cap");
        --budget;
        fn(idx);
      }
      return;
    }
    for (uint32_t e = 0; e < encs.size(); ++e) {
      idx[pos] = e;
      rec(pos + 1, pos == 0 ? encs[e].mask : (inter & encs[e].mask));
    }
  };
  rec(0, ~0u);
}

}  // namespace

SliceAnalysis::SliceAnalysis(simp::CrewPtr K, simp::Target T, Caps caps)
    : K_(std::move(K)), T_(std::move(T)), caps_(caps), pi0_(simp::pi0(K_, T_, caps_)) {}

SliceAnalysis::~SliceAnalysis() = default;

const gf::Mat& SliceAnalysis::constraint_rows(uint32_t r) const {
  auto it = constraints_.find(r);
  if (it != constraints_.end()) return it->second;

  const FunctionComplexSlice& s = slice();
  const std::size_t nv = s.vertices.size();
  std::set<std::vector<uint8_t>> rows;

  if (r == 0) {
    rows.insert(std::vector<uint8_t>(nv, 1));  // every map hits the point
  } else {
    if (!images_) images_ = std::make_unique<AnalysisImages>();
    AnalysisImages& im = *images_;
    std::size_t qcap = K_->dim() * r;
    if (caps_.dim_cap >= 0) qcap = std::min<std::size_t>(qcap, static_cast<std::size_t>(caps_.dim_cap));
    build_images_to(*this, im, qcap);
    std::size_t budget = caps_.max_simplices;
    for (std::size_t q = 0; q <= qcap; ++q) {
      const auto& encs = im.encs[q];
      const auto& info = im.info[q];
      for_each_power_tuple(encs, r, budget, [&](const std::vector<uint32_t>& idx) {
        // group vertices by their (nondegenerate) image tuple
        std::map<std::vector<uint32_t>, std::vector<uint8_t>> by_image;
        std::vector<uint32_t> key(r);
        for (uint32_t v = 0; v < nv; ++v) {
          uint32_t degmask = ~0u;
          for (uint32_t t = 0; t < r; ++t) {
            const auto& p = info[v][idx[t]];
            key[t] = p.first;
            degmask &= p.second;
          }
          if (degmask != 0) continue;  // image simplex degenerate: contributes zero
          auto [it2, fresh] = by_image.emplace(key, std::vector<uint8_t>(nv, 0));
          it2->second[v] = 1;
        }
        for (auto& [k2, row] : by_image) rows.insert(row);
      });
    }
  }

  gf::Mat m(s.p, rows.size(), nv);
  std::size_t rr = 0;
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < nv; ++j) m.at(rr, j) = row[j];
    ++rr;
  }
  return constraints_.emplace(r, std::move(m)).first->second;
}

const gf::Subspace& SliceAnalysis::power_kernel(uint32_t r) const {
  auto it = kernels_.find(r);
  if (it != kernels_.end()) return it->second;
  const gf::Mat& rows = constraint_rows(r);
  gf::Subspace ker = gf::kernel_of_matrix(rows, slice().vertex_basis);
  return kernels_.emplace(r, std::move(ker)).first->second;
}

const gf::Subspace& SliceAnalysis::class_kernel() const {
  if (class_kernel_) return *class_kernel_;
  const FunctionComplexSlice& s = slice();
  gf::Mat rows(s.p, s.vertices.size(), s.vertices.size());
  std::size_t r = 0;
  for (uint32_t v = 0; v < s.vertices.size(); ++v) {
    uint32_t rep = pi0_.representatives[pi0_.class_of[v]];
    if (rep == v) continue;
    rows.at(r, v) = 1;
    rows.at(r, rep) = s.p - 1;
    ++r;
  }
  class_kernel_ = gf::Subspace::from_rows(s.vertex_basis, s.p, rows);
  return *class_kernel_;
}

std::optional<uint32_t> SliceAnalysis::stabilization_r(uint32_t r_max) const {
  for (uint32_t r = 0; r <= r_max; ++r) {
    if (gf::subspace_leq(power_kernel(r), class_kernel()).holds) return r;
  }
  return std::nullopt;
}

SliceAnalysis::Degree SliceAnalysis::simplicial_degree(const InvariantTable& f, uint32_t r_max,
                                                       bool want_functional) const {
  const FunctionComplexSlice& s = slice();
  gf::PrimeField F(s.p);
  std::vector<uint32_t> vertex_values(s.vertices.size());
  for (uint32_t v = 0; v < s.vertices.size(); ++v) vertex_values[v] = f.values[pi0_.class_of[v]] % s.p;

  Degree out;
  for (uint32_t r = 0; r <= r_max; ++r) {
    const gf::Subspace& ker = power_kernel(r);
    bool killed = true;
    for (std::size_t i = 0; i < ker.rank() && killed; ++i) {
      uint32_t acc = 0;
      for (std::size_t j = 0; j < ker.ambient_dim(); ++j) {
        uint32_t c = ker.rows().at(i, j);
        if (c) acc = F.add(acc, F.mul(c, vertex_values[j]));
      }
      if (acc != 0) killed = false;
    }
    if (!killed) continue;
    out.degree = r;
    if (!want_functional) return out;
    // reconstruct the factorizing functional over the constraint rows
    const gf::Mat& rows = constraint_rows(r);
    auto lambda = mat_solve(gf::mat_transpose(rows), vertex_values);
    if (lambda) {
      out.functional = *lambda;
      // verify by evaluation on every vertex column
      bool ok = true;
      for (std::size_t v = 0; v < s.vertices.size() && ok; ++v) {
        uint32_t acc = 0;
        for (std::size_t i = 0; i < rows.rows; ++i) {
          uint32_t c = rows.at(i, v);
          if (c) acc = F.add(acc, F.mul(c, (*lambda)[i]));
        }
        if (acc != vertex_values[v]) ok = false;
      }
      out.functional_verified = ok;
      out.functional_digest = fnv1a(out.functional.data(), out.functional.size() * sizeof(uint32_t));
    }
    return out;
  }
  return out;
}

std::optional<SliceAnalysis::Separation> SliceAnalysis::separate(uint32_t class1, uint32_t class2,
                                                                 uint32_t r_max) const {
  if (class1 == class2) throw input_error("separate: classes are equal");
  const FunctionComplexSlice& s = slice();
  gf::PrimeField F(s.p);
  uint32_t b1 = pi0_.representatives[class1], b2 = pi0_.representatives[class2];
  std::vector<uint32_t> v(s.vertices.size(), 0);
  v[b1] = 1;
  v[b2] = s.p - 1;

  for (uint32_t r = 0; r <= r_max; ++r) {
    gf::Subspace w = gf::subspace_sum(power_kernel(r), class_kernel());
    if (w.contains_dense(v)) continue;
    // functional vanishing on w and nonzero on v
    gf::Mat perp = gf::mat_kernel(w.rows());
    for (std::size_t i = 0; i < perp.rows; ++i) {
      uint32_t acc = 0;
      for (std::size_t j = 0; j < perp.cols; ++j) acc = F.add(acc, F.mul(perp.at(i, j), v[j]));
      if (acc == 0) continue;
      Separation sep;
      sep.r = r;
      sep.table.context = &pi0_;
      sep.table.values.resize(pi0_.class_count());
      for (uint32_t c = 0; c < pi0_.class_count(); ++c) sep.table.values[c] = perp.at(i, pi0_.representatives[c]);
      return sep;
    }
    throw input_error("separating functional missing despite non-membership");
  }
  return std::nullopt;
}

ChainTransform power_transform(const SliceAnalysis& a, uint32_t r, const gf::SparseVector& B) {
  const FunctionComplexSlice& s = a.slice();
  if (!B.basis->same_as(*s.vertex_basis)) throw input_error("0-chain does not live on the vertex basis");
  const Crew& K = *s.K;
  gf::PrimeField F(s.p);
  ChainTransform out;
  out.r = r;

  if (r == 0) {
    std::vector<std::pair<std::string, uint32_t>> chain;
    uint32_t aug = B.coeff_sum();
    if (aug) chain.emplace_back("()", aug);
    out.assign[0].emplace_back("()", chain);
  } else {
    std::size_t qcap = K.dim() * r;
    if (a.caps().dim_cap >= 0) qcap = std::min<std::size_t>(qcap, static_cast<std::size_t>(a.caps().dim_cap));
    std::size_t budget = a.caps().max_simplices;
    for (std::size_t q = 0; q <= qcap; ++q) {
      std::vector<Enc> encs = K.encodings_at(q);
      std::vector<EncLite> lite = enc_lite_at(K, q);
      for_each_power_tuple(lite, r, budget, [&](const std::vector<uint32_t>& idx) {
        std::string klabel = "(";
        for (uint32_t t = 0; t < r; ++t) {
          if (t) klabel += ",";
          klabel += K.enc_str(encs[idx[t]]);
        }
        klabel += ")";
        std::map<std::string, uint32_t> chain;
        for (auto& [vi, coeff] : B.terms) {
          uint32_t degmask = ~0u;
          std::vector<std::string> parts;
          for (uint32_t t = 0; t < r; ++t) {
            const Enc& e = encs[idx[t]];
            if (s.T.is_module()) {
              auto img = s.T.module->apply_word(e.tdim, e.w, s.vertices[vi].elt[e.tdim][e.tidx]);
              degmask &= s.T.module->degeneracy_mask(q, img);
              parts.push_back(s.T.module->elt_str(q, img));
            } else {
              Enc img = s.T.crew->apply_word(e.w, s.vertices[vi].enc[e.tdim][e.tidx]);
              degmask &= simp::word_mask(img.w);
              parts.push_back(s.T.crew->enc_str(img));
            }
          }
          if (degmask != 0) continue;
          std::string tlabel = "(" + join(parts, ",") + ")";
          uint32_t& c = chain[tlabel];
          c = F.add(c, coeff);
        }
        std::vector<std::pair<std::string, uint32_t>> chain_list;
        for (auto& [l, c] : chain)
          if (c) chain_list.emplace_back(l, c);
        if (!chain_list.empty()) out.assign[q].emplace_back(klabel, chain_list);
      });
    }
  }
  uint64_t h = 1469598103934665603ull;
  for (auto& [q, list] : out.assign)
    for (auto& [k, chain] : list) {
      h = fnv1a_str(k, h);
      for (auto& [t, c] : chain) {
        h = fnv1a_str(t, h);
        h = fnv1a(&c, sizeof(c), h);
      }
    }
  out.digest = h;
  return out;
}

std::vector<uint32_t> class_projection(const Pi0& p, const gf::SparseVector& B) {
  if (!B.basis->same_as(*p.slice.vertex_basis)) throw input_error("0-chain does not live on the vertex basis");
  gf::PrimeField F(p.slice.p);
  std::vector<uint32_t> out(p.class_count(), 0);
  for (auto& [v, c] : B.terms) out[p.class_of[v]] = F.add(out[p.class_of[v]], c);
  return out;
}

grp::GroupPtr vertex_group(const FunctionComplexSlice& s, std::size_t group_cap) {
  if (!s.T.is_module()) throw input_error("vertex group needs a module target");
  if (s.vertices.size() > group_cap) throw cap_error("vertex group exceeds the size cap");
  const SimplicialModule& M = *s.T.module;
  const Crew& K = *s.K;
  std::size_t n = s.vertices.size();
  std::vector<uint32_t> table(n * n);
  for (uint32_t a = 0; a < n; ++a) {
    for (uint32_t b = 0; b < n; ++b) {
      simp::MapVertex sum;
      sum.elt.resize(K.labels.size());
      for (std::size_t q = 0; q < K.labels.size(); ++q) {
        sum.elt[q].resize(K.count(q));
        for (std::size_t i = 0; i < K.count(q); ++i)
          sum.elt[q][i] = M.add(q, s.vertices[a].elt[q][i], s.vertices[b].elt[q][i]);
      }
      auto idx = s.find_vertex(sum);
      if (!idx) throw input_error("vertex sum escaped the enumerated vertex set");
      table[a * n + b] = *idx;
    }
  }
  return grp::group_from_table("vertices(" + K.name + "->" + s.T.name() + ")",
                               s.vertex_basis->labels(), std::move(table));
}

Cor72Result check_cor_7_2(SliceAnalysis& a, uint32_t r) {
  const FunctionComplexSlice& s = a.slice();
  grp::GroupPtr g = vertex_group(s, a.caps().group_cap);
  grp::AugFiltration filt = grp::aug_ideal_powers(g, s.p, r + 1);
  const gf::Subspace& ker = a.power_kernel(r);
  const gf::Subspace& ideal = filt.power(r + 1);
  Cor72Result out;
  out.kernel_dim = ker.rank();
  out.ideal_dim = ideal.rank();
  out.holds = gf::subspace_leq(ker, ideal).holds;
  return out;
}

Lemma121Result check_lemma_12_1(const std::vector<simp::CrewPtr>& summands, uint32_t r, std::size_t q_max,
                                uint32_t p, const Caps& caps) {
  if (r < 1) throw input_error("lemma 12.1 needs r >= 1");
  if (summands.size() != r + 1) throw input_error("lemma 12.1 needs exactly r+1 summands");
  simp::WedgeResult w = simp::wedge(summands);
  const Crew& W = *w.crew;
  gf::PrimeField F(p);

  // all selector maps
  std::vector<simp::CrewMap> selectors;
  std::vector<int> signs;
  for (uint32_t mask = 0; mask < (1u << (r + 1)); ++mask) {
    std::vector<uint8_t> e(r + 1);
    int ones = 0;
    for (uint32_t i = 0; i <= r; ++i) {
      e[i] = (mask >> i) & 1;
      ones += e[i];
    }
    selectors.push_back(simp::me_operator(w, e));
    signs.push_back(ones % 2 == 0 ? 1 : -1);
  }

  Lemma121Result out;
  out.holds = true;
  std::size_t budget = caps.max_simplices;
  for (std::size_t q = 0; q <= std::min(q_max, W.dim() * static_cast<std::size_t>(r)); ++q) {
    std::vector<Enc> encs = W.encodings_at(q);
    std::vector<EncLite> lite;
    for (const Enc& e : encs) lite.push_back(EncLite{simp::word_mask(e.w), e.tdim, e.tidx});
    for_each_power_tuple(lite, r, budget, [&](const std::vector<uint32_t>& idx) {
      if (!out.holds) return;
      std::map<std::vector<Enc>, uint32_t> sum;
      for (std::size_t sel = 0; sel < selectors.size(); ++sel) {
        std::vector<Enc> img(r);
        for (uint32_t t = 0; t < r; ++t) img[t] = selectors[sel].apply(encs[idx[t]]);
        uint32_t& c = sum[img];
        c = signs[sel] > 0 ? F.add(c, 1) : F.sub(c, 1);
      }
      for (auto& [k, c] : sum) {
        if (c != 0) {
          out.holds = false;
          std::vector<std::string> parts;
          for (uint32_t t = 0; t < r; ++t) parts.push_back(W.enc_str(encs[idx[t]]));
          out.witness = "(" + join(parts, ",") + ")";
          return;
        }
      }
      ++out.simplices_checked;
    });
  }
  return out;
}

Lemma122Result check_lemma_12_2(uint32_t p, uint32_t n, const Caps& caps) {
  CrewPtr K = simp::sphere(n);
  std::size_t cap = static_cast<std::size_t>(n) * caps.r_max + 2;
  simp::ModulePtr T = simp::em_module(p, n, cap);
  SliceAnalysis a(K, simp::module_target(T), caps);
  const Pi0& classes = a.classes();
  Lemma122Result out;
  if (classes.class_count() != p) throw input_error("lemma 12.2: expected p classes");

  // identify classes with Z_p via the module structure
  std::vector<uint32_t> class_to_residue(p, 0);
  {
    uint32_t gen = classes.zero_class == 0 ? 1 : 0;
    uint32_t cur = classes.zero_class;
    for (uint32_t k = 1; k < p; ++k) {
      cur = classes.class_add[cur][gen];
      class_to_residue[cur] = k;
    }
    class_to_residue[classes.zero_class] = 0;
  }

  grp::GroupPtr zp = grp::cyclic_group(p);
  grp::AugFiltration filt = grp::aug_ideal_powers(zp, p);

  std::size_t total = 1;
  for (uint32_t i = 0; i < p; ++i) total *= p;
  out.holds = true;
  for (std::size_t code = 0; code < total; ++code) {
    // table as a function of the residue
    std::vector<uint32_t> f_of_residue(p);
    std::size_t c = code;
    for (uint32_t i = 0; i < p; ++i) {
      f_of_residue[i] = static_cast<uint32_t>(c % p);
      c /= p;
    }
    InvariantTable table;
    table.context = &classes;
    table.values.resize(p);
    for (uint32_t cls = 0; cls < p; ++cls) table.values[cls] = f_of_residue[class_to_residue[cls]];

    grp::GroupFunction gf_fun{zp, p, f_of_residue};
    auto gd = grp::gentle_degree(gf_fun, filt);
    auto sd = a.simplicial_degree(table, caps.r_max);
    ++out.tables_checked;
    bool ok;
    if (!gd.degree)
      ok = false;  // cannot happen on Z_p
    else if (!sd.degree)
      ok = true;  // simplicial degree above the cap: vacuous here
    else
      ok = *gd.degree <= *sd.degree;
    if (!ok) {
      out.holds = false;
      out.violations.push_back(Lemma122Violation{f_of_residue, gd.degree.value_or(0), sd.degree});
    }
  }
  return out;
}

InvariantTable induced_table(const SliceAnalysis& base, const SliceAnalysis& tilde, const simp::CrewMap& k,
                             const simp::ModuleHom& h, const InvariantTable& f) {
  const FunctionComplexSlice& bs = base.slice();
  const FunctionComplexSlice& ts = tilde.slice();
  const Crew& K = *bs.K;
  InvariantTable out;
  out.context = &tilde.classes();
  out.values.resize(tilde.classes().class_count());
  for (uint32_t cls = 0; cls < tilde.classes().class_count(); ++cls) {
    uint32_t rep = tilde.classes().representatives[cls];
    simp::MapVertex comp;
    comp.elt.resize(K.labels.size());
    for (std::size_t q = 0; q < K.labels.size(); ++q) {
      comp.elt[q].resize(K.count(q));
      for (std::size_t i = 0; i < K.count(q); ++i) {
        const Enc& img = k.img[q][i];
        auto val = ts.apply_module(rep, img);
        comp.elt[q][i] = h.apply(q, val);
      }
    }
    auto idx = bs.find_vertex(comp);
    if (!idx) throw input_error("composite map escaped the enumerated vertex set");
    out.values[cls] = f.values[base.classes().class_of[*idx]];
  }
  return out;
}

Lemma101Result check_lemma_10_1(SliceAnalysis& base, SliceAnalysis& tilde, const simp::CrewMap& k,
                                const simp::ModuleHom& h, const InvariantTable& f) {
  InvariantTable ft = induced_table(base, tilde, k, h, f);
  auto df = base.simplicial_degree(f, base.caps().r_max);
  auto dft = tilde.simplicial_degree(ft, tilde.caps().r_max);
  Lemma101Result out;
  out.deg_f = df.degree;
  out.deg_f_tilde = dft.degree;
  if (!df.degree)
    out.holds = true;  // degree of f above the cap: nothing to check
  else if (!dft.degree)
    out.holds = false;
  else
    out.holds = *dft.degree <= *df.degree;
  return out;
}

}  // namespace gentle::inv
