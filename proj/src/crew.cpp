#include "gentle/crew.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace gentle::simp {

Word word_insert(const Word& w, uint8_t i) {
  Word out;
  out.reserve(w.size() + 1);
  for (uint8_t x : w) out.push_back(x < i ? x : static_cast<uint8_t>(x + 1));
  auto pos = std::lower_bound(out.begin(), out.end(), i);
  out.insert(pos, i);
  return out;
}

uint32_t word_mask(const Word& w) {
  uint32_t m = 0;
  for (uint8_t x : w) m |= 1u << x;
  return m;
}

Word mask_word(uint32_t mask) {
  Word w;
  for (uint8_t i = 0; i < 32; ++i)
    if (mask & (1u << i)) w.push_back(i);
  return w;
}

Word full_word(std::size_t dim) {
  Word w(dim);
  for (std::size_t i = 0; i < dim; ++i) w[i] = static_cast<uint8_t>(i);
  return w;
}

bool Enc::operator<(const Enc& o) const {
  if (tdim != o.tdim) return tdim < o.tdim;
  if (tidx != o.tidx) return tidx < o.tidx;
  return w < o.w;
}

std::size_t Crew::total_count() const {
  std::size_t n = 0;
  for (auto& l : labels) n += l.size();
  return n;
}

Enc Crew::basepoint_enc(std::size_t dim) const { return Enc{full_word(dim), 0, basepoint}; }

Enc Crew::face_of(const Enc& e, uint32_t i) const {
  std::vector<uint8_t> outer;  // surviving outer entries, outermost first
  uint32_t ii = i;
  const Word& w = e.w;
  for (std::size_t t = w.size(); t-- > 0;) {
    uint8_t wt = w[t];
    if (ii == wt || ii == wt + 1u) {
      Enc r{Word(w.begin(), w.begin() + static_cast<long>(t)), e.tdim, e.tidx};
      for (std::size_t u = outer.size(); u-- > 0;) r.w = word_insert(r.w, outer[u]);
      return r;
    }
    if (ii < wt) {
      outer.push_back(static_cast<uint8_t>(wt - 1));
    } else {
      outer.push_back(wt);
      --ii;
    }
  }
  if (e.tdim == 0) throw input_error("face of a vertex requested");
  Enc r = faces[e.tdim][e.tidx][ii];
  for (std::size_t u = outer.size(); u-- > 0;) r.w = word_insert(r.w, outer[u]);
  return r;
}

Enc Crew::apply_word(const Word& w, Enc e) const {
  for (uint8_t i : w) e.w = word_insert(e.w, i);
  return e;
}

std::vector<Enc> Crew::encodings_at(std::size_t q) const {
  std::vector<Enc> out;
  for (uint32_t m = 0; m <= std::min(q, dim()); ++m) {
    std::size_t wlen = q - m;
    for (uint32_t idx = 0; idx < count(m); ++idx) {
      // words [j_1 < .. < j_wlen] in {0..q-1} with j_t <= m + t - 1
      Word w(wlen);
      std::function<void(std::size_t, uint8_t)> gen = [&](std::size_t t, uint8_t lo) {
        if (t == wlen) {
          out.push_back(Enc{w, m, idx});
          return;
        }
        uint8_t hi = static_cast<uint8_t>(m + t);  // j_{t+1} <= m + t
        for (uint8_t j = lo; j <= hi && j < q; ++j) {
          w[t] = j;
          gen(t + 1, static_cast<uint8_t>(j + 1));
        }
      };
      gen(0, 0);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string Crew::enc_str(const Enc& e) const {
  std::string s = labels[e.tdim][e.tidx];
  if (!e.w.empty()) {
    s += "[";
    for (std::size_t i = 0; i < e.w.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(e.w[i]);
    }
    s += "]";
  }
  return s;
}

namespace {

bool word_valid(const Word& w, uint32_t tdim) {
  for (std::size_t t = 0; t < w.size(); ++t) {
    if (t > 0 && w[t] <= w[t - 1]) return false;
    if (w[t] > tdim + t) return false;  // j_{t+1} <= tdim + t
  }
  return true;
}

}  // namespace

std::vector<Crew::Violation> Crew::validate() const {
  std::vector<Violation> out;
  if (labels.empty() || labels[0].empty() || basepoint >= labels[0].size()) {
    out.push_back({"<crew>", 0, 0, "missing basepoint vertex"});
    return out;
  }
  for (std::size_t q = 1; q < labels.size(); ++q) {
    if (faces.size() <= q || faces[q].size() != labels[q].size()) {
      out.push_back({"<crew>", 0, 0, "face table missing in dimension " + std::to_string(q)});
      return out;
    }
    for (std::size_t i = 0; i < labels[q].size(); ++i) {
      if (faces[q][i].size() != q + 1) {
        out.push_back({labels[q][i], 0, 0, "expected " + std::to_string(q + 1) + " faces"});
        continue;
      }
      for (uint32_t j = 0; j <= q; ++j) {
        const Enc& f = faces[q][i][j];
        if (f.tdim >= labels.size() || f.tidx >= labels[f.tdim].size() || f.dim() + 1 != q ||
            !word_valid(f.w, f.tdim)) {
          out.push_back({labels[q][i], j, 0, "face " + std::to_string(j) + " has an invalid encoding"});
        }
      }
    }
  }
  if (!out.empty()) return out;
  for (std::size_t q = 2; q < labels.size(); ++q) {
    for (std::size_t s = 0; s < labels[q].size(); ++s) {
      Enc self{Word{}, static_cast<uint32_t>(q), static_cast<uint32_t>(s)};
      for (uint32_t j = 1; j <= q; ++j) {
        for (uint32_t i = 0; i < j; ++i) {
          Enc lhs = face_of(face_of(self, j), i);
          Enc rhs = face_of(face_of(self, i), j - 1);
          if (!(lhs == rhs)) out.push_back({labels[q][s], i, j, "d_i d_j != d_{j-1} d_i"});
        }
      }
    }
  }
  return out;
}

CrewPtr point_crew() {
  auto c = std::make_shared<Crew>();
  c->name = "point";
  c->basepoint = 0;
  c->labels = {{"*"}};
  c->faces = {{}};
  return c;
}

CrewPtr sphere(uint32_t n) {
  if (n < 1) throw input_error("sphere dimension must be >= 1");
  auto c = std::make_shared<Crew>();
  c->name = "sphere:" + std::to_string(n);
  c->basepoint = 0;
  c->labels.assign(n + 1, {});
  c->faces.assign(n + 1, {});
  c->labels[0] = {"*"};
  c->labels[n] = {"cell"};
  c->faces[n].push_back(std::vector<Enc>(n + 1, Enc{full_word(n - 1), 0, 0}));
  return c;
}

CrewPtr standard_simplex_1() {
  auto c = std::make_shared<Crew>();
  c->name = "delta1";
  c->basepoint = 0;
  c->labels = {{"0", "1"}, {"01"}};
  c->faces = {{}, {{Enc{{}, 0, 1}, Enc{{}, 0, 0}}}};  // d_0(01) = 1, d_1(01) = 0
  return c;
}

Enc CrewMap::apply(const Enc& e) const {
  Enc base = img[e.tdim][e.tidx];
  return dst->apply_word(e.w, base);
}

void CrewMap::validate() const {
  if (img.size() < src->labels.size()) throw input_error("crew map: image table incomplete");
  const Enc& bp = img[0][src->basepoint];
  if (!bp.w.empty() || bp.tdim != 0 || bp.tidx != dst->basepoint)
    throw input_error("crew map does not preserve the basepoint");
  for (std::size_t q = 0; q < src->labels.size(); ++q) {
    if (img[q].size() != src->labels[q].size()) throw input_error("crew map: image table incomplete");
    for (std::size_t i = 0; i < src->labels[q].size(); ++i) {
      if (img[q][i].dim() != q) throw input_error("crew map: image dimension mismatch");
      for (uint32_t j = 0; q >= 1 && j <= q; ++j) {
        Enc lhs = dst->face_of(img[q][i], j);
        Enc rhs = apply(src->faces[q][i][j]);
        if (!(lhs == rhs))
          throw input_error("crew map does not commute with face " + std::to_string(j) + " of " +
                            src->labels[q][i]);
      }
    }
  }
}

CrewMap identity_crew_map(CrewPtr k) {
  CrewMap m;
  m.src = k;
  m.dst = k;
  m.img.resize(k->labels.size());
  for (std::size_t q = 0; q < k->labels.size(); ++q)
    for (uint32_t i = 0; i < k->labels[q].size(); ++i)
      m.img[q].push_back(Enc{{}, static_cast<uint32_t>(q), i});
  return m;
}

CrewMap constant_crew_map(CrewPtr src, CrewPtr dst) {
  CrewMap m;
  m.src = src;
  m.dst = dst;
  m.img.resize(src->labels.size());
  for (std::size_t q = 0; q < src->labels.size(); ++q)
    for (uint32_t i = 0; i < src->labels[q].size(); ++i) m.img[q].push_back(dst->basepoint_enc(q));
  return m;
}

CrewMap compose(const CrewMap& g, const CrewMap& f) {
  if (f.dst.get() != g.src.get()) throw input_error("crew map composition mismatch");
  CrewMap m;
  m.src = f.src;
  m.dst = g.dst;
  m.img.resize(f.src->labels.size());
  for (std::size_t q = 0; q < f.src->labels.size(); ++q)
    for (uint32_t i = 0; i < f.src->labels[q].size(); ++i) m.img[q].push_back(g.apply(f.img[q][i]));
  return m;
}

namespace {

struct TupleKey {
  std::vector<Enc> encs;
  bool operator<(const TupleKey& o) const { return encs < o.encs; }
};

// Extract the common degeneracy word of a tuple; returns (word, residual).
std::pair<Word, std::vector<Enc>> normalize_tuple(const std::vector<CrewPtr>& factors, std::vector<Enc> t) {
  Word w;
  while (true) {
    uint32_t common = ~0u;
    for (auto& e : t) common &= word_mask(e.w);
    if (common == 0) break;
    uint8_t i = 0;
    while (!(common & (1u << i))) ++i;
    for (std::size_t f = 0; f < t.size(); ++f) t[f] = factors[f]->face_of(t[f], i);
    w = word_insert(w, i);
  }
  return {w, t};
}

std::string tuple_label(const std::vector<CrewPtr>& factors, const std::vector<Enc>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += factors[i]->enc_str(t[i]);
  }
  s += ")";
  return s;
}

}  // namespace

ProductResult product(const std::vector<CrewPtr>& factors, const Caps& caps) {
  if (factors.empty()) {
    ProductResult r;
    r.crew = point_crew();
    r.components = {{{}}};
    return r;
  }
  std::size_t dim_total = 0;
  for (auto& f : factors) dim_total += f->dim();
  std::size_t dim_cap = caps.dim_cap >= 0 ? std::min<std::size_t>(caps.dim_cap, dim_total) : dim_total;

  auto crew = std::make_shared<Crew>();
  std::vector<std::string> names;
  for (auto& f : factors) names.push_back(f->name);
  crew->name = "(" + join(names, "x") + ")";
  crew->labels.assign(dim_cap + 1, {});
  crew->faces.assign(dim_cap + 1, {});

  ProductResult result;
  result.components.assign(dim_cap + 1, {});

  std::map<TupleKey, std::pair<uint32_t, uint32_t>> index;  // tuple -> (dim, idx)
  std::size_t total = 0;

  for (std::size_t q = 0; q <= dim_cap; ++q) {
    std::vector<std::vector<Enc>> per_factor;
    for (auto& f : factors) per_factor.push_back(f->encodings_at(q));
    std::vector<Enc> cur(factors.size());
    std::function<void(std::size_t, uint32_t)> rec = [&](std::size_t fi, uint32_t inter) {
      if (fi == factors.size()) {
        if (inter != 0) return;  // common degeneracy: not a nondegenerate product simplex
        if (++total > caps.max_simplices) throw cap_error("product exceeds the simplex cap");
        uint32_t idx = static_cast<uint32_t>(crew->labels[q].size());
        crew->labels[q].push_back(tuple_label(factors, cur));
        result.components[q].push_back(cur);
        index[TupleKey{cur}] = {static_cast<uint32_t>(q), idx};
        return;
      }
      for (const Enc& e : per_factor[fi]) {
        cur[fi] = e;
        rec(fi + 1, fi == 0 ? word_mask(e.w) : (inter & word_mask(e.w)));
      }
    };
    uint32_t init = factors.empty() ? 0 : ~0u;
    rec(0, init);
  }
  crew->basepoint = 0;
  {
    // locate the tuple of basepoints
    std::vector<Enc> bp;
    for (auto& f : factors) bp.push_back(Enc{{}, 0, f->basepoint});
    crew->basepoint = index.at(TupleKey{bp}).second;
  }
  // faces
  for (std::size_t q = 1; q <= dim_cap; ++q) {
    crew->faces[q].resize(crew->labels[q].size());
    for (std::size_t i = 0; i < crew->labels[q].size(); ++i) {
      const auto& comps = result.components[q][i];
      for (uint32_t j = 0; j <= q; ++j) {
        std::vector<Enc> face_tuple;
        face_tuple.reserve(comps.size());
        for (std::size_t f = 0; f < comps.size(); ++f) face_tuple.push_back(factors[f]->face_of(comps[f], j));
        auto [w, core] = normalize_tuple(factors, std::move(face_tuple));
        auto it = index.find(TupleKey{core});
        if (it == index.end()) throw input_error("product face fell outside the dimension cap");
        crew->faces[q][i].push_back(Enc{w, it->second.first, it->second.second});
      }
    }
  }
  result.crew = crew;
  // projections
  for (std::size_t f = 0; f < factors.size(); ++f) {
    CrewMap pr;
    pr.src = crew;
    pr.dst = factors[f];
    pr.img.resize(crew->labels.size());
    for (std::size_t q = 0; q < crew->labels.size(); ++q)
      for (std::size_t i = 0; i < crew->labels[q].size(); ++i) pr.img[q].push_back(result.components[q][i][f]);
    result.projections.push_back(std::move(pr));
  }
  return result;
}

ProductResult power(CrewPtr k, uint32_t r, const Caps& caps) {
  std::vector<CrewPtr> factors(r, k);
  return product(factors, caps);
}

WedgeResult wedge(const std::vector<CrewPtr>& summands) {
  if (summands.empty()) throw input_error("wedge of no summands");
  auto crew = std::make_shared<Crew>();
  std::vector<std::string> names;
  for (auto& s : summands) names.push_back(s->name);
  crew->name = "(" + join(names, "v") + ")";
  std::size_t dim = 0;
  for (auto& s : summands) dim = std::max(dim, s->dim());
  crew->labels.assign(dim + 1, {});
  crew->faces.assign(dim + 1, {});
  crew->labels[0].push_back("*");
  crew->basepoint = 0;

  WedgeResult result;
  result.origin.assign(dim + 1, {});
  result.origin[0].push_back({0, 0});
  // new index of each summand simplex
  std::vector<std::vector<std::vector<uint32_t>>> remap(summands.size());
  for (std::size_t s = 0; s < summands.size(); ++s) {
    const Crew& c = *summands[s];
    remap[s].resize(c.labels.size());
    for (std::size_t q = 0; q < c.labels.size(); ++q) {
      remap[s][q].resize(c.labels[q].size());
      for (uint32_t i = 0; i < c.labels[q].size(); ++i) {
        if (q == 0 && i == c.basepoint) {
          remap[s][q][i] = crew->basepoint;
          continue;
        }
        remap[s][q][i] = static_cast<uint32_t>(crew->labels[q].size());
        crew->labels[q].push_back(std::to_string(s) + "." + c.labels[q][i]);
        result.origin[q].push_back({static_cast<uint32_t>(s), i});
      }
    }
  }
  for (std::size_t s = 0; s < summands.size(); ++s) {
    const Crew& c = *summands[s];
    for (std::size_t q = 1; q < c.labels.size(); ++q) {
      for (uint32_t i = 0; i < c.labels[q].size(); ++i) {
        std::vector<Enc> fs;
        for (auto& f : c.faces[q][i]) fs.push_back(Enc{f.w, f.tdim, remap[s][f.tdim][f.tidx]});
        // order: summand blocks were appended per dimension in summand order,
        // matching remap, so indices are already final
        crew->faces[q].push_back(std::move(fs));
      }
    }
  }
  result.crew = crew;
  for (std::size_t s = 0; s < summands.size(); ++s) {
    CrewMap in;
    in.src = summands[s];
    in.dst = crew;
    in.img.resize(summands[s]->labels.size());
    for (std::size_t q = 0; q < summands[s]->labels.size(); ++q)
      for (uint32_t i = 0; i < summands[s]->labels[q].size(); ++i)
        in.img[q].push_back(Enc{{}, static_cast<uint32_t>(q), remap[s][q][i]});
    result.inclusions.push_back(std::move(in));
  }
  return result;
}

CrewMap me_operator(const WedgeResult& w, const std::vector<uint8_t>& e) {
  const Crew& c = *w.crew;
  if (e.size() != w.inclusions.size()) throw input_error("selector length does not match summand count");
  CrewMap m;
  m.src = w.crew;
  m.dst = w.crew;
  m.img.resize(c.labels.size());
  for (std::size_t q = 0; q < c.labels.size(); ++q) {
    for (uint32_t i = 0; i < c.labels[q].size(); ++i) {
      if (q == 0 && i == c.basepoint) {
        m.img[q].push_back(Enc{{}, 0, c.basepoint});
        continue;
      }
      uint32_t summand = w.origin[q][i].first;
      if (e[summand])
        m.img[q].push_back(Enc{{}, static_cast<uint32_t>(q), i});
      else
        m.img[q].push_back(c.basepoint_enc(q));
    }
  }
  return m;
}

CrewPtr collapse_subcrew(const Crew& m, const std::vector<std::vector<uint8_t>>& in_sub, std::string name) {
  auto member = [&](std::size_t q, std::size_t i) {
    return q < in_sub.size() && i < in_sub[q].size() && in_sub[q][i] != 0;
  };
  if (!member(0, m.basepoint)) throw input_error("collapse set must contain the basepoint");
  // the set must be face-closed
  for (std::size_t q = 1; q < m.labels.size(); ++q)
    for (std::size_t i = 0; i < m.labels[q].size(); ++i)
      if (member(q, i))
        for (auto& f : m.faces[q][i])
          if (!member(f.tdim, f.tidx))
            throw input_error("collapse set is not a subcrew (face of " + m.labels[q][i] + " escapes)");

  auto out = std::make_shared<Crew>();
  out->name = std::move(name);
  out->labels.assign(m.labels.size(), {});
  out->faces.assign(m.labels.size(), {});
  out->labels[0].push_back("*");
  out->basepoint = 0;
  std::vector<std::vector<uint32_t>> remap(m.labels.size());
  for (std::size_t q = 0; q < m.labels.size(); ++q) {
    remap[q].assign(m.labels[q].size(), UINT32_MAX);
    for (uint32_t i = 0; i < m.labels[q].size(); ++i) {
      if (member(q, i)) continue;
      remap[q][i] = static_cast<uint32_t>(out->labels[q].size());
      out->labels[q].push_back(m.labels[q][i]);
    }
  }
  for (std::size_t q = 1; q < m.labels.size(); ++q) {
    for (uint32_t i = 0; i < m.labels[q].size(); ++i) {
      if (remap[q][i] == UINT32_MAX) continue;
      std::vector<Enc> fs;
      for (auto& f : m.faces[q][i]) {
        if (member(f.tdim, f.tidx))
          fs.push_back(out->basepoint_enc(q - 1));
        else
          fs.push_back(Enc{f.w, f.tdim, remap[f.tdim][f.tidx]});
      }
      out->faces[q].push_back(std::move(fs));
    }
  }
  // trim trailing empty dimensions
  while (out->labels.size() > 1 && out->labels.back().empty()) {
    out->labels.pop_back();
    out->faces.pop_back();
  }
  return out;
}

CylinderResult reduced_cylinder(CrewPtr k, const Caps& caps) {
  CrewPtr d1 = standard_simplex_1();
  ProductResult prod = product({k, d1}, caps);
  const Crew& pc = *prod.crew;
  // collapse {basepoint of K} x Δ[1]
  std::vector<std::vector<uint8_t>> sub(pc.labels.size());
  for (std::size_t q = 0; q < pc.labels.size(); ++q) {
    sub[q].assign(pc.labels[q].size(), 0);
    for (std::size_t i = 0; i < pc.labels[q].size(); ++i) {
      const Enc& first = prod.components[q][i][0];
      if (first.tdim == 0 && first.tidx == k->basepoint) sub[q][i] = 1;
    }
  }
  CrewPtr cyl = collapse_subcrew(pc, sub, "cyl:" + k->name);
  // index from product tuple label to cylinder index
  std::map<std::string, std::pair<uint32_t, uint32_t>> cyl_index;
  for (std::size_t q = 0; q < cyl->labels.size(); ++q)
    for (uint32_t i = 0; i < cyl->labels[q].size(); ++i)
      cyl_index[cyl->labels[q][i]] = {static_cast<uint32_t>(q), i};

  CylinderResult res;
  res.crew = cyl;
  auto make_end = [&](uint32_t vtx) {
    CrewMap end;
    end.src = k;
    end.dst = cyl;
    end.img.resize(k->labels.size());
    for (std::size_t q = 0; q < k->labels.size(); ++q) {
      for (uint32_t i = 0; i < k->labels[q].size(); ++i) {
        if (q == 0 && i == k->basepoint) {
          end.img[q].push_back(Enc{{}, 0, cyl->basepoint});
          continue;
        }
        std::vector<Enc> t{Enc{{}, static_cast<uint32_t>(q), i}, Enc{full_word(q), 0, vtx}};
        std::string lbl = "(" + k->enc_str(t[0]) + "," + d1->enc_str(t[1]) + ")";
        auto it = cyl_index.find(lbl);
        if (it == cyl_index.end()) throw input_error("cylinder end inclusion missed a simplex");
        end.img[q].push_back(Enc{{}, it->second.first, it->second.second});
      }
    }
    return end;
  };
  res.end0 = make_end(0);
  res.end1 = make_end(1);
  // collapse map: project to the first component
  {
    CrewMap pr;
    pr.src = cyl;
    pr.dst = k;
    pr.img.resize(cyl->labels.size());
    // match cylinder simplices back to product tuples by label
    std::map<std::string, std::vector<Enc>> comp_by_label;
    for (std::size_t q = 0; q < pc.labels.size(); ++q)
      for (std::size_t i = 0; i < pc.labels[q].size(); ++i) comp_by_label[pc.labels[q][i]] = prod.components[q][i];
    for (std::size_t q = 0; q < cyl->labels.size(); ++q) {
      for (uint32_t i = 0; i < cyl->labels[q].size(); ++i) {
        if (q == 0 && i == cyl->basepoint) {
          pr.img[q].push_back(Enc{{}, 0, k->basepoint});
          continue;
        }
        pr.img[q].push_back(comp_by_label.at(cyl->labels[q][i])[0]);
      }
    }
    res.collapse = pr;
  }
  return res;
}

ch::ChainComplex normalized_chains(const Crew& k, uint32_t p, std::size_t up_to) {
  ch::ChainComplex c;
  c.p = p;
  std::size_t top = std::min(up_to, k.dim());
  gf::PrimeField F(p);
  for (std::size_t q = 0; q <= top; ++q) {
    c.ranks.push_back(k.count(q));
    c.labels.push_back(q < k.labels.size() ? k.labels[q] : std::vector<std::string>{});
    gf::Mat d(p, q == 0 ? 0 : k.count(q - 1), k.count(q));
    if (q >= 1) {
      for (std::size_t i = 0; i < k.count(q); ++i) {
        for (uint32_t j = 0; j <= q; ++j) {
          const Enc& f = k.faces[q][i][j];
          if (f.degenerate()) continue;
          uint32_t sign = (j % 2 == 0) ? 1 : p - 1;
          d.at(f.tidx, i) = F.add(d.at(f.tidx, i), sign);
        }
      }
    }
    c.d.push_back(std::move(d));
  }
  return c;
}

ch::ChainComplex reduced_chains(const Crew& k, uint32_t p, std::size_t up_to) {
  ch::ChainComplex c = normalized_chains(k, p, up_to);
  // drop the basepoint column/row in degree 0
  std::size_t n0 = c.ranks[0];
  if (n0 == 0) return c;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n0; ++i)
    if (i != k.basepoint) keep.push_back(i);
  c.ranks[0] = keep.size();
  std::vector<std::string> lab;
  for (auto i : keep) lab.push_back(c.labels[0][i]);
  c.labels[0] = lab;
  c.d[0] = gf::Mat(p, 0, keep.size());
  if (c.ranks.size() > 1) {
    gf::Mat d1(p, keep.size(), c.ranks[1]);
    for (std::size_t r = 0; r < keep.size(); ++r)
      for (std::size_t j = 0; j < c.ranks[1]; ++j) d1.at(r, j) = c.d[1].at(keep[r], j);
    c.d[1] = std::move(d1);
  }
  return c;
}

ch::ComplexMap chain_map_of(const CrewMap& f, const ch::ChainComplex& src, const ch::ChainComplex& dst) {
  ch::ComplexMap m;
  m.src = &src;
  m.dst = &dst;
  std::size_t top = std::max(src.ranks.size(), dst.ranks.size());
  for (std::size_t q = 0; q < top; ++q) {
    gf::Mat mq(src.p, dst.rank(q), src.rank(q));
    if (q < src.ranks.size()) {
      for (std::size_t i = 0; i < src.rank(q); ++i) {
        // reduced degree 0: basis may skip the basepoint
        std::size_t si = i;
        if (q == 0 && src.rank(0) != f.src->count(0)) {
          si = i >= f.src->basepoint ? i + 1 : i;
        }
        Enc img = f.img[q][si];
        if (img.degenerate()) continue;
        if (q == 0 && dst.rank(0) != f.dst->count(0)) {
          if (img.tidx == f.dst->basepoint) continue;
          std::size_t di = img.tidx > f.dst->basepoint ? img.tidx - 1 : img.tidx;
          mq.at(di, i) = 1;
        } else {
          mq.at(img.tidx, i) = 1;
        }
      }
    }
    m.f.push_back(std::move(mq));
  }
  return m;
}

}  // namespace gentle::simp
