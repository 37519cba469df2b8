#include "gentle/module.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>

namespace gentle::simp {

namespace {

std::map<std::pair<std::size_t, std::size_t>, std::vector<std::vector<uint8_t>>> g_surj_cache;
std::mutex g_surj_mutex;

std::vector<std::vector<uint8_t>> build_surjections(std::size_t q, std::size_t k) {
  // monotone surjective values v_0 <= ... <= v_q covering 0..k; every step
  // is +0 or +1 and the sequence starts at 0
  std::vector<std::vector<uint8_t>> out;
  if (k > q) return out;
  std::vector<uint8_t> v(q + 1, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t pos) {
    if (pos == q + 1) {
      if (v[q] == k) out.push_back(v);
      return;
    }
    uint8_t cur = v[pos - 1];
    if (static_cast<std::size_t>(k - cur) <= q - pos) {
      v[pos] = cur;
      rec(pos + 1);
    }
    if (cur < k) {
      v[pos] = static_cast<uint8_t>(cur + 1);
      rec(pos + 1);
    }
  };
  if (q == 0) {
    if (k == 0) out.push_back(v);
  } else {
    rec(1);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Classify the composite of a surjection with a coface: 0 = still surjective,
// 1 = misses exactly the top value, -1 = anything else (acts as zero).
int classify_composite(const std::vector<uint8_t>& vals, uint16_t k) {
  if (vals.empty()) return k == 0 ? 0 : (k == 1 ? 1 : -1);
  if (vals[0] != 0) return -1;
  for (std::size_t t = 1; t < vals.size(); ++t)
    if (vals[t] > vals[t - 1] + 1) return -1;
  uint8_t maxv = vals.back();
  if (maxv == k) return 0;
  if (k >= 1 && maxv == k - 1) return 1;
  return -1;
}

}  // namespace

const std::vector<std::vector<uint8_t>>& surjections(std::size_t q, std::size_t k) {
  std::lock_guard<std::mutex> lk(g_surj_mutex);
  auto key = std::make_pair(q, k);
  auto it = g_surj_cache.find(key);
  if (it != g_surj_cache.end()) return it->second;
  return g_surj_cache.emplace(key, build_surjections(q, k)).first->second;
}

SimplicialModule::SimplicialModule(ch::ChainComplex c, std::size_t cap, std::string name)
    : name_(std::move(name)), complex_(std::move(c)), cap_(cap) {
  complex_.validate();
  gf::PrimeField F(p());
  levels_.resize(cap_ + 1);

  // per-level component lists
  for (std::size_t q = 0; q <= cap_; ++q) {
    Level& L = levels_[q];
    uint32_t offset = 0;
    for (std::size_t k = 0; k <= std::min(q, complex_.top_degree()); ++k) {
      if (complex_.rank(k) == 0) continue;
      const auto& surjs = surjections(q, k);
      for (uint32_t s = 0; s < surjs.size(); ++s) {
        L.comps.push_back(Component{static_cast<uint16_t>(k), s, offset});
        offset += static_cast<uint32_t>(complex_.rank(k));
      }
    }
    L.dim = offset;
  }

  // surjection index lookup per (q,k)
  auto surj_index = [&](std::size_t q, std::size_t k, const std::vector<uint8_t>& v) -> uint32_t {
    const auto& list = surjections(q, k);
    auto it = std::lower_bound(list.begin(), list.end(), v);
    if (it == list.end() || *it != v) throw input_error("surjection lookup failed");
    return static_cast<uint32_t>(it - list.begin());
  };
  auto comp_offset = [&](std::size_t q, std::size_t k, uint32_t sidx) -> uint32_t {
    for (const auto& comp : levels_[q].comps)
      if (comp.k == k && comp.surj == sidx) return comp.offset;
    throw input_error("component lookup failed");
  };

  for (std::size_t q = 0; q <= cap_; ++q) {
    Level& L = levels_[q];
    if (q >= 1) {
      for (uint32_t i = 0; i <= q; ++i) {
        gf::Mat m(p(), levels_[q - 1].dim, L.dim);
        for (const auto& comp : L.comps) {
          const auto& eta = surjections(q, comp.k)[comp.surj];
          // eta o d^i : [q-1] -> [k]
          std::vector<uint8_t> vals(q);
          for (std::size_t t = 0; t < q; ++t) vals[t] = eta[t < i ? t : t + 1];
          int cls = classify_composite(vals, comp.k);
          if (cls == 0) {
            uint32_t sidx = surj_index(q - 1, comp.k, vals);
            uint32_t off = comp_offset(q - 1, comp.k, sidx);
            for (std::size_t b = 0; b < complex_.rank(comp.k); ++b) m.at(off + b, comp.offset + b) = 1;
          } else if (cls == 1 && complex_.rank(comp.k - 1) > 0) {
            // misses exactly the top value: factor through the differential,
            // with sign (-1)^k so the round trip gives back the input complex
            uint32_t sidx = surj_index(q - 1, comp.k - 1, vals);
            uint32_t off = comp_offset(q - 1, comp.k - 1, sidx);
            const gf::Mat& d = complex_.diff(comp.k);
            uint32_t sign = comp.k % 2 == 0 ? 1u : p() - 1;
            for (std::size_t rr = 0; rr < d.rows; ++rr)
              for (std::size_t cc = 0; cc < d.cols; ++cc)
                if (d.at(rr, cc)) m.at(off + rr, comp.offset + cc) = F.mul(sign, d.at(rr, cc));
          }
        }
        L.face.push_back(std::move(m));
      }
    }
    // degeneracies: level q -> q+1
    if (q + 1 <= cap_) {
      for (uint32_t i = 0; i <= q; ++i) {
        gf::Mat m(p(), levels_[q + 1].dim, L.dim);
        for (const auto& comp : L.comps) {
          const auto& eta = surjections(q, comp.k)[comp.surj];
          std::vector<uint8_t> vals(q + 2);
          // eta o s^i : [q+1] -> [k], s^i repeats argument i
          for (std::size_t t = 0; t < q + 2; ++t) vals[t] = eta[t <= i ? t : t - 1];
          uint32_t sidx = surj_index(q + 1, comp.k, vals);
          uint32_t off = comp_offset(q + 1, comp.k, sidx);
          for (std::size_t b = 0; b < complex_.rank(comp.k); ++b) m.at(off + b, comp.offset + b) = 1;
        }
        L.degen.push_back(std::move(m));
      }
    }
  }
}

std::size_t SimplicialModule::level_dim(std::size_t q) const {
  if (q > cap_) throw cap_error("module level " + std::to_string(q) + " above the materialized cap");
  return levels_[q].dim;
}

const gf::Mat& SimplicialModule::face_matrix(std::size_t q, uint32_t i) const {
  if (q == 0 || q > cap_) throw cap_error("face matrix out of range");
  return levels_[q].face[i];
}

const gf::Mat& SimplicialModule::degen_matrix(std::size_t q, uint32_t i) const {
  if (q + 1 > cap_) throw cap_error("degeneracy matrix out of range");
  return levels_[q].degen[i];
}

namespace {

SimplicialModule::Elt apply_mat(const gf::Mat& m, const SimplicialModule::Elt& e) {
  SimplicialModule::Elt out(m.rows, 0);
  for (std::size_t c = 0; c < m.cols; ++c) {
    uint32_t v = e[c];
    if (!v) continue;
    for (std::size_t r = 0; r < m.rows; ++r) {
      uint32_t mv = m.at(r, c);
      if (mv) out[r] = (out[r] + mv * static_cast<uint64_t>(v)) % m.p;
    }
  }
  return out;
}

}  // namespace

SimplicialModule::Elt SimplicialModule::face(std::size_t q, uint32_t i, const Elt& e) const {
  return apply_mat(face_matrix(q, i), e);
}

SimplicialModule::Elt SimplicialModule::degen(std::size_t q, uint32_t i, const Elt& e) const {
  return apply_mat(degen_matrix(q, i), e);
}

SimplicialModule::Elt SimplicialModule::apply_word(std::size_t q, const Word& w, Elt e) const {
  std::size_t cur = q;
  for (uint8_t i : w) {
    e = degen(cur, i, e);
    ++cur;
  }
  return e;
}

SimplicialModule::Elt SimplicialModule::add(std::size_t q, const Elt& a, const Elt& b) const {
  gf::PrimeField F(p());
  Elt out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = F.add(a[i], b[i]);
  (void)q;
  return out;
}

SimplicialModule::Elt SimplicialModule::scale(std::size_t q, uint32_t c, const Elt& e) const {
  gf::PrimeField F(p());
  Elt out(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) out[i] = F.mul(c % p(), e[i]);
  (void)q;
  return out;
}

uint32_t SimplicialModule::degeneracy_mask(std::size_t q, const Elt& e) const {
  if (q == 0) return 0;
  uint32_t mask = 0;
  for (uint32_t i = 0; i + 1 <= q; ++i) {
    bool ok = true;
    for (const auto& comp : levels_[q].comps) {
      bool supported = false;
      for (std::size_t b = 0; b < complex_.rank(comp.k) && !supported; ++b)
        if (e[comp.offset + b]) supported = true;
      if (!supported) continue;
      const auto& eta = surjections(q, comp.k)[comp.surj];
      if (eta[i] != eta[i + 1]) {
        ok = false;
        break;
      }
    }
    if (ok) mask |= 1u << i;
  }
  return mask;
}

SimplicialModule::Normal SimplicialModule::normal_form(std::size_t q, const Elt& e) const {
  uint32_t mask = degeneracy_mask(q, e);
  if (mask == 0) return Normal{Word{}, q, e};
  uint8_t i = 0;
  while (!(mask & (1u << i))) ++i;
  Normal inner = normal_form(q - 1, face(q, i, e));
  inner.w = word_insert(inner.w, i);
  return inner;
}

std::vector<SimplicialModule::Elt> SimplicialModule::enumerate_level(std::size_t q, std::size_t cap_count) const {
  std::size_t d = level_dim(q);
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    total *= p();
    if (total > cap_count) throw cap_error("module level too large to enumerate");
  }
  std::vector<Elt> out;
  out.reserve(total);
  Elt cur(d, 0);
  out.push_back(cur);
  for (std::size_t n = 1; n < total; ++n) {
    for (std::size_t i = d; i-- > 0;) {
      if (++cur[i] < p()) break;
      cur[i] = 0;
    }
    out.push_back(cur);
  }
  return out;
}

std::string SimplicialModule::elt_str(std::size_t q, const Elt& e) const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& comp : levels_[q].comps) {
    for (std::size_t b = 0; b < complex_.rank(comp.k); ++b) {
      uint32_t v = e[comp.offset + b];
      if (!v) continue;
      if (!first) os << "+";
      first = false;
      if (v != 1) os << v << "*";
      const auto& eta = surjections(q, comp.k)[comp.surj];
      os << "c" << comp.k << "." << b << "@";
      for (auto x : eta) os << static_cast<int>(x);
    }
  }
  if (first) os << "0";
  os << "}";
  return os.str();
}

void SimplicialModule::self_check() const {
  for (std::size_t q = 2; q <= cap_; ++q) {
    for (uint32_t j = 1; j <= q; ++j)
      for (uint32_t i = 0; i < j; ++i) {
        gf::Mat lhs = mat_mul(face_matrix(q - 1, i), face_matrix(q, j));
        gf::Mat rhs = mat_mul(face_matrix(q - 1, j - 1), face_matrix(q, i));
        if (!(lhs == rhs)) throw input_error("module face identities fail at level " + std::to_string(q));
      }
  }
  for (std::size_t q = 0; q + 2 <= cap_; ++q) {
    for (uint32_t i = 0; i <= q; ++i)
      for (uint32_t j = i; j <= q; ++j) {
        gf::Mat lhs = mat_mul(degen_matrix(q + 1, i), degen_matrix(q, j));
        gf::Mat rhs = mat_mul(degen_matrix(q + 1, j + 1), degen_matrix(q, i));
        if (!(lhs == rhs)) throw input_error("module degeneracy identities fail at level " + std::to_string(q));
      }
  }
  for (std::size_t q = 0; q + 1 <= cap_; ++q) {
    for (uint32_t j = 0; j <= q; ++j) {
      for (uint32_t i = 0; i <= q + 1; ++i) {
        gf::Mat lhs = mat_mul(face_matrix(q + 1, i), degen_matrix(q, j));
        gf::Mat want(p(), levels_[q].dim, levels_[q].dim);
        if (i == j || i == j + 1) {
          want = gf::Mat::identity(p(), levels_[q].dim);
          if (!(lhs == want)) throw input_error("d_i s_j identity fails");
        } else if (i < j) {
          gf::Mat rhs = mat_mul(degen_matrix(q - 1, j - 1), face_matrix(q, i));
          if (!(lhs == rhs)) throw input_error("d_i s_j (i<j) identity fails");
        } else {
          gf::Mat rhs = mat_mul(degen_matrix(q - 1, j), face_matrix(q, i - 1));
          if (!(lhs == rhs)) throw input_error("d_i s_j (i>j+1) identity fails");
        }
      }
    }
  }
}

ModulePtr dold_kan(ch::ChainComplex c, std::size_t cap, std::string name) {
  if (name.empty()) name = "dk";
  return std::make_shared<const SimplicialModule>(std::move(c), cap, std::move(name));
}

ModulePtr em_module(uint32_t p, uint32_t n, std::size_t cap) {
  if (n < 1) throw input_error("Eilenberg-MacLane degree must be >= 1");
  return dold_kan(ch::concentrated(p, n), cap, "em:" + std::to_string(p) + "," + std::to_string(n));
}

ch::ChainComplex normalized_chains_of_module(const SimplicialModule& m, std::size_t up_to) {
  if (up_to > m.cap()) throw cap_error("normalized chains requested above the module cap");
  uint32_t p = m.p();
  ch::ChainComplex out;
  out.p = p;
  // N_q = intersection of ker d_i, i < q; differential (-1)^q d_q
  std::vector<gf::Mat> incl;  // rows = basis of N_q in level coordinates
  for (std::size_t q = 0; q <= up_to; ++q) {
    gf::Mat basis;
    if (q == 0) {
      basis = gf::Mat::identity(p, m.level_dim(0));
    } else {
      gf::Mat stacked(p, 0, m.level_dim(q));
      for (uint32_t i = 0; i < q; ++i) stacked = mat_vstack(stacked, m.face_matrix(q, i));
      basis = gf::mat_kernel(stacked);
    }
    incl.push_back(basis);
    out.ranks.push_back(basis.rows);
  }
  for (std::size_t q = 0; q <= up_to; ++q) {
    gf::Mat d(p, q == 0 ? 0 : out.ranks[q - 1], out.ranks[q]);
    if (q >= 1) {
      // (-1)^q d_q restricted to N, expressed in the N_{q-1} basis
      gf::Mat img = mat_mul(m.face_matrix(q, static_cast<uint32_t>(q)), mat_transpose(incl[q]));
      if (q % 2 == 1) img = mat_scale(img, p - 1);
      // solve incl[q-1]^T * X = img
      gf::Mat A = mat_transpose(incl[q - 1]);
      for (std::size_t col = 0; col < img.cols; ++col) {
        std::vector<uint32_t> b(img.rows);
        for (std::size_t r = 0; r < img.rows; ++r) b[r] = img.at(r, col);
        auto x = mat_solve(A, b);
        if (!x) throw input_error("normalized differential does not stay in the normalized part");
        for (std::size_t r = 0; r < d.rows; ++r) d.at(r, col) = (*x)[r];
      }
    }
    out.d.push_back(std::move(d));
  }
  return out;
}

SimplicialModule::Elt ModuleHom::apply(std::size_t q, const SimplicialModule::Elt& e) const {
  return apply_mat(at_level[q], e);
}

ModuleHom induced_module_hom(ModulePtr src, ModulePtr dst, const ch::ComplexMap& phi) {
  if (src->p() != dst->p()) throw input_error("module hom prime mismatch");
  ModuleHom h;
  h.src = src;
  h.dst = dst;
  std::size_t cap = std::min(src->cap(), dst->cap());
  for (std::size_t q = 0; q <= cap; ++q) {
    gf::Mat m(src->p(), dst->level_dim(q), src->level_dim(q));
    for (const auto& sc : src->components(q)) {
      // matching component in dst (same k, same surjection)
      for (const auto& dc : dst->components(q)) {
        if (dc.k != sc.k || dc.surj != sc.surj) continue;
        gf::Mat block = phi.at(sc.k);
        for (std::size_t r = 0; r < block.rows; ++r)
          for (std::size_t c = 0; c < block.cols; ++c)
            if (block.at(r, c)) m.at(dc.offset + r, sc.offset + c) = block.at(r, c);
      }
    }
    h.at_level.push_back(std::move(m));
  }
  return h;
}

ModuleHom scalar_module_hom(ModulePtr m, uint32_t c) {
  ModuleHom h;
  h.src = m;
  h.dst = m;
  for (std::size_t q = 0; q <= m->cap(); ++q) {
    h.at_level.push_back(mat_scale(gf::Mat::identity(m->p(), m->level_dim(q)), c));
  }
  return h;
}

}  // namespace gentle::simp
