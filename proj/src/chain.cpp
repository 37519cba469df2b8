#include "gentle/chain.hpp"

#include <algorithm>

namespace gentle::ch {

gf::Mat ChainComplex::diff(std::size_t q) const {
  if (q == 0 || q >= ranks.size()) return gf::Mat(p, q > 0 && q - 1 < ranks.size() ? ranks[q - 1] : 0, rank(q));
  return d[q];
}

void ChainComplex::validate() const {
  if (d.size() != ranks.size() && !(ranks.empty() && d.empty()))
    throw input_error("chain complex: differential count mismatch");
  for (std::size_t q = 1; q < ranks.size(); ++q) {
    if (d[q].rows != ranks[q - 1] || d[q].cols != ranks[q] || d[q].p != p)
      throw input_error("chain complex: differential shape mismatch in degree " + std::to_string(q));
  }
  for (std::size_t q = 2; q < ranks.size(); ++q) {
    if (!mat_mul(d[q - 1], d[q]).is_zero())
      throw input_error("chain complex: d∘d != 0 in degree " + std::to_string(q));
  }
}

ChainComplex zero_complex(uint32_t p) { return ChainComplex{p, {}, {}, {}}; }

ChainComplex concentrated(uint32_t p, std::size_t degree, std::size_t rank) {
  ChainComplex c;
  c.p = p;
  c.ranks.assign(degree + 1, 0);
  c.ranks[degree] = rank;
  for (std::size_t q = 0; q <= degree; ++q) c.d.emplace_back(p, q == 0 ? 0 : c.ranks[q - 1], c.ranks[q]);
  return c;
}

ChainComplex cone_complex(uint32_t p, std::size_t degree) {
  ChainComplex c;
  c.p = p;
  c.ranks.assign(degree + 2, 0);
  c.ranks[degree] = 1;
  c.ranks[degree + 1] = 1;
  for (std::size_t q = 0; q <= degree + 1; ++q) c.d.emplace_back(p, q == 0 ? 0 : c.ranks[q - 1], c.ranks[q]);
  c.d[degree + 1] = gf::Mat::identity(p, 1);
  return c;
}

ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b) {
  if (a.p != b.p) throw input_error("direct sum prime mismatch");
  ChainComplex c;
  c.p = a.p;
  std::size_t top = std::max(a.ranks.size(), b.ranks.size());
  c.ranks.resize(top, 0);
  for (std::size_t q = 0; q < top; ++q) c.ranks[q] = a.rank(q) + b.rank(q);
  for (std::size_t q = 0; q < top; ++q) {
    gf::Mat m(c.p, q == 0 ? 0 : c.ranks[q - 1], c.ranks[q]);
    if (q > 0) {
      gf::Mat da = a.diff(q), db = b.diff(q);
      for (std::size_t i = 0; i < da.rows; ++i)
        for (std::size_t j = 0; j < da.cols; ++j) m.at(i, j) = da.at(i, j);
      for (std::size_t i = 0; i < db.rows; ++i)
        for (std::size_t j = 0; j < db.cols; ++j) m.at(a.rank(q - 1) + i, a.rank(q) + j) = db.at(i, j);
    }
    c.d.push_back(std::move(m));
  }
  return c;
}

std::vector<std::size_t> homology_ranks(const ChainComplex& c) {
  std::vector<std::size_t> h;
  for (std::size_t q = 0; q < c.ranks.size(); ++q) {
    std::size_t rank_dq = q == 0 ? 0 : mat_rank(c.diff(q));
    std::size_t rank_dq1 = mat_rank(c.diff(q + 1));
    std::size_t cycles = c.rank(q) - rank_dq;
    h.push_back(cycles - rank_dq1);
  }
  return h;
}

bool is_exact(const ChainComplex& c) {
  auto h = homology_ranks(c);
  return std::all_of(h.begin(), h.end(), [](std::size_t r) { return r == 0; });
}

gf::Mat ComplexMap::at(std::size_t q) const {
  if (q < f.size()) return f[q];
  return gf::Mat(src->p, dst->rank(q), src->rank(q));
}

void ComplexMap::validate() const {
  auto bad = first_noncommuting_degree();
  if (bad) throw input_error("complex map does not commute with differentials in degree " + std::to_string(*bad));
}

std::optional<std::size_t> ComplexMap::first_noncommuting_degree() const {
  std::size_t top = std::max(src->ranks.size(), dst->ranks.size());
  for (std::size_t q = 0; q < top; ++q) {
    gf::Mat m = at(q);
    if (m.rows != dst->rank(q) || m.cols != src->rank(q)) return q;
    if (q == 0) continue;
    gf::Mat lhs = mat_mul(dst->diff(q), at(q));
    gf::Mat rhs = mat_mul(at(q - 1), src->diff(q));
    if (!(lhs == rhs)) return q;
  }
  return std::nullopt;
}

ComplexMap identity_map(const ChainComplex& c) {
  ComplexMap m;
  m.src = &c;
  m.dst = &c;
  for (std::size_t q = 0; q < c.ranks.size(); ++q) m.f.push_back(gf::Mat::identity(c.p, c.rank(q)));
  return m;
}

ComplexMap zero_map(const ChainComplex& src, const ChainComplex& dst) {
  ComplexMap m;
  m.src = &src;
  m.dst = &dst;
  std::size_t top = std::max(src.ranks.size(), dst.ranks.size());
  for (std::size_t q = 0; q < top; ++q) m.f.emplace_back(src.p, dst.rank(q), src.rank(q));
  return m;
}

ComplexMap compose(const ComplexMap& g, const ComplexMap& f) {
  if (g.src != f.dst) throw input_error("complex map composition mismatch");
  ComplexMap m;
  m.src = f.src;
  m.dst = g.dst;
  std::size_t top = std::max(f.f.size(), g.f.size());
  top = std::max({top, m.src->ranks.size(), m.dst->ranks.size()});
  for (std::size_t q = 0; q < top; ++q) m.f.push_back(mat_mul(g.at(q), f.at(q)));
  return m;
}

ComplexMap map_add(const ComplexMap& a, const ComplexMap& b) {
  if (a.src != b.src || a.dst != b.dst) throw input_error("complex map sum mismatch");
  ComplexMap m;
  m.src = a.src;
  m.dst = a.dst;
  std::size_t top = std::max(a.f.size(), b.f.size());
  for (std::size_t q = 0; q < top; ++q) m.f.push_back(mat_add(a.at(q), b.at(q)));
  return m;
}

ComplexMap map_sub(const ComplexMap& a, const ComplexMap& b) {
  if (a.src != b.src || a.dst != b.dst) throw input_error("complex map difference mismatch");
  ComplexMap m;
  m.src = a.src;
  m.dst = a.dst;
  std::size_t top = std::max(a.f.size(), b.f.size());
  for (std::size_t q = 0; q < top; ++q) m.f.push_back(mat_sub(a.at(q), b.at(q)));
  return m;
}

bool map_equal(const ComplexMap& a, const ComplexMap& b) {
  std::size_t top = std::max(a.f.size(), b.f.size());
  for (std::size_t q = 0; q < top; ++q)
    if (!(a.at(q) == b.at(q))) return false;
  return true;
}

uint64_t map_digest(const ComplexMap& m) {
  uint64_t h = 1469598103934665603ull;
  for (std::size_t q = 0; q < m.f.size(); ++q) {
    h = fnv1a(&q, sizeof(q), h);
    h = fnv1a(m.f[q].a.data(), m.f[q].a.size() * sizeof(uint32_t), h);
  }
  return h;
}

}  // namespace gentle::ch
