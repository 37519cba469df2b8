#include "gentle/group.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <sstream>

namespace gentle::grp {

namespace {

std::string residue_label(const std::vector<uint32_t>& r) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i) os << ",";
    os << r[i];
  }
  os << ")";
  return os.str();
}

}  // namespace

FinGroup::FinGroup(std::string name, std::vector<std::string> labels, std::vector<uint32_t> table,
                   std::optional<std::vector<uint32_t>> cyclic_orders, std::vector<std::vector<uint32_t>> residues)
    : name_(std::move(name)),
      elems_(gf::make_basis(std::move(labels), name_)),
      table_(std::move(table)),
      orders_(std::move(cyclic_orders)),
      residues_(std::move(residues)) {
  const std::size_t n = elems_->size();
  if (table_.size() != n * n) throw input_error("group table size mismatch for " + name_);
  // locate the identity
  bool found = false;
  for (uint32_t e = 0; e < n && !found; ++e) {
    bool ok = true;
    for (uint32_t g = 0; g < n && ok; ++g) ok = mul(e, g) == g && mul(g, e) == g;
    if (ok) {
      id_ = e;
      found = true;
    }
  }
  if (!found) throw input_error("group " + name_ + " has no identity");
  inv_.assign(n, 0);
  for (uint32_t g = 0; g < n; ++g) {
    bool ok = false;
    for (uint32_t h = 0; h < n; ++h) {
      if (mul(g, h) == id_ && mul(h, g) == id_) {
        inv_[g] = h;
        ok = true;
        break;
      }
    }
    if (!ok) throw input_error("group " + name_ + ": element " + elems_->label(g) + " has no inverse");
  }
  check_laws();
  if (orders_) {
    if (residues_.size() != n) throw input_error("group " + name_ + ": abelian presentation incomplete");
    for (uint32_t a = 0; a < n; ++a)
      for (uint32_t b = 0; b < n; ++b) {
        std::vector<uint32_t> sum(orders_->size());
        for (std::size_t k = 0; k < orders_->size(); ++k)
          sum[k] = (residues_[a][k] + residues_[b][k]) % (*orders_)[k];
        if (residues_[mul(a, b)] != sum)
          throw input_error("group " + name_ + ": table disagrees with componentwise addition");
      }
  }
}

void FinGroup::check_laws() const {
  const std::size_t n = size();
  for (uint32_t a = 0; a < n; ++a)
    for (uint32_t b = 0; b < n; ++b)
      for (uint32_t c = 0; c < n; ++c)
        if (mul(mul(a, b), c) != mul(a, mul(b, c)))
          throw input_error("group " + name_ + " is not associative");
}

uint32_t FinGroup::order_of(uint32_t a) const {
  uint32_t k = 1, x = a;
  while (x != id_) {
    x = mul(x, a);
    ++k;
  }
  return k;
}

bool FinGroup::is_abelian() const {
  for (uint32_t a = 0; a < size(); ++a)
    for (uint32_t b = a + 1; b < size(); ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

uint32_t FinGroup::element_from_residues(const std::vector<uint32_t>& r) const {
  if (!orders_) throw input_error("group " + name_ + " has no abelian presentation");
  auto idx = elems_->index(residue_label(r));
  if (!idx) throw input_error("residue tuple out of range for " + name_);
  return static_cast<uint32_t>(*idx);
}

GroupPtr trivial_group() { return abelian_group({}); }

GroupPtr cyclic_group(uint32_t n) { return abelian_group({n}); }

GroupPtr abelian_group(const std::vector<uint32_t>& orders) {
  for (auto n : orders)
    if (n == 0) throw input_error("cyclic order must be positive");
  std::size_t n = 1;
  for (auto o : orders) n *= o;
  if (n > 512) throw cap_error("abelian group too large (order " + std::to_string(n) + ")");
  std::vector<std::vector<uint32_t>> residues;
  residues.reserve(n);
  std::vector<uint32_t> cur(orders.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    residues.push_back(cur);
    for (std::size_t k = orders.size(); k-- > 0;) {
      if (++cur[k] < orders[k]) break;
      cur[k] = 0;
    }
  }
  std::vector<std::string> labels;
  labels.reserve(n);
  for (auto& r : residues) labels.push_back(residue_label(r));
  std::vector<uint32_t> table(n * n);
  std::map<std::vector<uint32_t>, uint32_t> index;
  for (uint32_t i = 0; i < n; ++i) index[residues[i]] = i;
  for (uint32_t a = 0; a < n; ++a)
    for (uint32_t b = 0; b < n; ++b) {
      std::vector<uint32_t> sum(orders.size());
      for (std::size_t k = 0; k < orders.size(); ++k) sum[k] = (residues[a][k] + residues[b][k]) % orders[k];
      table[a * n + b] = index[sum];
    }
  std::string name = "Z";
  if (orders.empty())
    name = "1";
  else {
    name.clear();
    for (std::size_t k = 0; k < orders.size(); ++k) {
      if (k) name += "+";
      name += "Z" + std::to_string(orders[k]);
    }
  }
  return std::make_shared<const FinGroup>(name, std::move(labels), std::move(table), orders, std::move(residues));
}

GroupPtr alternating_5() {
  std::array<uint8_t, 5> base{0, 1, 2, 3, 4};
  std::vector<std::array<uint8_t, 5>> perms;
  std::array<uint8_t, 5> cur = base;
  do {
    // parity via inversion count
    int invs = 0;
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j)
        if (cur[i] > cur[j]) ++invs;
    if (invs % 2 == 0) perms.push_back(cur);
  } while (std::next_permutation(cur.begin(), cur.end()));

  std::size_t n = perms.size();
  std::vector<std::string> labels;
  labels.reserve(n);
  std::map<std::array<uint8_t, 5>, uint32_t> index;
  for (uint32_t i = 0; i < n; ++i) {
    std::string l;
    for (auto v : perms[i]) l += static_cast<char>('0' + v);
    labels.push_back(l);
    index[perms[i]] = i;
  }
  std::vector<uint32_t> table(n * n);
  for (uint32_t a = 0; a < n; ++a)
    for (uint32_t b = 0; b < n; ++b) {
      std::array<uint8_t, 5> comp{};
      for (int x = 0; x < 5; ++x) comp[x] = perms[a][perms[b][x]];
      table[a * n + b] = index[comp];
    }
  return std::make_shared<const FinGroup>("A5", std::move(labels), std::move(table));
}

GroupPtr group_from_table(std::string name, std::vector<std::string> labels, std::vector<uint32_t> table) {
  return std::make_shared<const FinGroup>(std::move(name), std::move(labels), std::move(table));
}

GroupRingElt GroupRingElt::zero(GroupPtr g, uint32_t p) {
  auto basis = g->elements();
  return GroupRingElt{std::move(g), gf::SparseVector::zero(basis, p)};
}

GroupRingElt GroupRingElt::one(GroupPtr g, uint32_t p) { return basic(g, p, g->identity()); }

GroupRingElt GroupRingElt::basic(GroupPtr g, uint32_t p, uint32_t elem) {
  auto basis = g->elements();
  return GroupRingElt{std::move(g), gf::SparseVector::unit(basis, p, elem)};
}

GroupRingElt GroupRingElt::plus(const GroupRingElt& o) const { return GroupRingElt{group, coeffs.plus(o.coeffs)}; }

GroupRingElt GroupRingElt::minus(const GroupRingElt& o) const { return GroupRingElt{group, coeffs.minus(o.coeffs)}; }

GroupRingElt GroupRingElt::times(const GroupRingElt& o) const {
  gf::PrimeField F(coeffs.p);
  std::vector<uint32_t> out(group->size(), 0);
  for (auto& [i, ci] : coeffs.terms)
    for (auto& [j, cj] : o.coeffs.terms) {
      uint32_t k = group->mul(i, j);
      out[k] = F.add(out[k], F.mul(ci, cj));
    }
  return GroupRingElt{group, gf::SparseVector::from_dense(group->elements(), coeffs.p, out)};
}

GroupRingElt GroupRingElt::one_minus_g_times(uint32_t g) const {
  gf::PrimeField F(coeffs.p);
  std::vector<uint32_t> out(group->size(), 0);
  for (auto& [i, c] : coeffs.terms) {
    out[i] = F.add(out[i], c);
    uint32_t k = group->mul(g, i);
    out[k] = F.sub(out[k], c);
  }
  return GroupRingElt{group, gf::SparseVector::from_dense(group->elements(), coeffs.p, out)};
}

gf::FpScalar augmentation(const GroupRingElt& x) { return gf::FpScalar{x.coeffs.coeff_sum(), x.coeffs.p}; }

const gf::Subspace& AugFiltration::power(uint32_t s) const {
  if (s == 0) throw input_error("ideal power exponent must be positive");
  if (s <= powers.size()) return powers[s - 1];
  if (stable_index) return powers.back();
  throw cap_error("ideal power I^" + std::to_string(s) + " not computed");
}

AugFiltration aug_ideal_powers(GroupPtr g, uint32_t p, std::optional<uint32_t> s_max) {
  gf::PrimeField F(p);
  const std::size_t n = g->size();
  auto basis = g->elements();

  AugFiltration filt;
  filt.group = g;
  filt.p = p;

  // I^1 = span{[x] - [e]}
  {
    gf::Mat rows(p, n, n);
    std::size_t r = 0;
    for (uint32_t x = 0; x < n; ++x) {
      if (x == g->identity()) continue;
      rows.at(r, x) = 1;
      rows.at(r, g->identity()) = p - 1;
      ++r;
    }
    filt.powers.push_back(gf::Subspace::from_rows(basis, p, rows));
  }

  while (true) {
    const gf::Subspace& cur = filt.powers.back();
    uint32_t s = static_cast<uint32_t>(filt.powers.size());
    if (s_max && s >= *s_max) break;
    // next = span{(1-[g]) * row}
    gf::Mat rows(p, cur.rank() * (n - 1), n);
    std::size_t r = 0;
    for (uint32_t x = 0; x < n; ++x) {
      if (x == g->identity()) continue;
      for (std::size_t i = 0; i < cur.rank(); ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          uint32_t c = cur.rows().at(i, j);
          if (!c) continue;
          rows.at(r, j) = F.add(rows.at(r, j), c);
          uint32_t k = g->mul(x, static_cast<uint32_t>(j));
          rows.at(r, k) = F.sub(rows.at(r, k), c);
        }
        ++r;
      }
    }
    gf::Subspace next = gf::Subspace::from_rows(basis, p, rows);
    if (next.rank() == cur.rank()) {
      filt.stable_index = s;
      break;
    }
    filt.powers.push_back(std::move(next));
    if (filt.powers.size() > n + 2) throw input_error("ideal filtration failed to descend");  // cannot happen
  }
  return filt;
}

GroupFunction GroupFunction::constant(GroupPtr g, uint32_t p, uint32_t c) {
  std::size_t n = g->size();
  return GroupFunction{std::move(g), p, std::vector<uint32_t>(n, c % p)};
}

uint32_t linear_extension(const GroupFunction& f, const GroupRingElt& x) {
  if (x.coeffs.p != f.codomain_p) throw input_error("linear extension prime mismatch");
  gf::PrimeField F(f.codomain_p);
  uint32_t s = 0;
  for (auto& [g, c] : x.coeffs.terms) s = F.add(s, F.mul(c, f.values[g]));
  return s;
}

namespace {

// Dense functional on the group ring; phi(x) = sum coeff(g) phi[g].
uint32_t apply_functional(const gf::PrimeField& F, const std::vector<uint32_t>& phi, const gf::Mat& rows,
                          std::size_t row) {
  uint32_t s = 0;
  for (std::size_t j = 0; j < rows.cols; ++j) {
    uint32_t c = rows.at(row, j);
    if (c) s = F.add(s, F.mul(c, phi[j]));
  }
  return s;
}

bool functional_vanishes(const gf::PrimeField& F, const std::vector<uint32_t>& phi, const gf::Subspace& space) {
  for (std::size_t i = 0; i < space.rank(); ++i)
    if (apply_functional(F, phi, space.rows(), i) != 0) return false;
  return true;
}

// phi nonzero on I^s: peel one generator (1-[g]) at a time.
bool witness_search(const FinGroup& G, const gf::PrimeField& F, const AugFiltration& filt,
                    const std::vector<uint32_t>& phi, uint32_t s, std::vector<uint32_t>& out) {
  if (s == 1) {
    for (uint32_t g = 0; g < G.size(); ++g) {
      if (g == G.identity()) continue;
      // phi(1 - [g]) = phi[e] - phi[g]
      if (F.sub(phi[G.identity()], phi[g]) != 0) {
        out.push_back(g);
        return true;
      }
    }
    return false;
  }
  for (uint32_t g = 0; g < G.size(); ++g) {
    if (g == G.identity()) continue;
    // psi(x) = phi((1-[g]) x): psi[i] = phi[i] - phi[g*i]
    std::vector<uint32_t> psi(G.size());
    for (uint32_t i = 0; i < G.size(); ++i) psi[i] = F.sub(phi[i], phi[G.mul(g, i)]);
    if (!functional_vanishes(F, psi, filt.power(s - 1))) {
      out.push_back(g);
      return witness_search(G, F, filt, psi, s - 1, out);
    }
  }
  return false;
}

}  // namespace

DefectResult gentle_defect(const GroupFunction& f, uint32_t r) {
  AugFiltration filt = aug_ideal_powers(f.domain, f.codomain_p);
  return gentle_defect(f, r, filt);
}

DefectResult gentle_defect(const GroupFunction& f, uint32_t r, const AugFiltration& filt) {
  gf::PrimeField F(f.codomain_p);
  const gf::Subspace& target = filt.power(r + 1);
  if (functional_vanishes(F, f.values, target)) return DefectResult{true, {}};
  DefectResult res;
  res.vanishes = false;
  bool found = witness_search(*f.domain, F, filt, f.values, r + 1, res.witness);
  if (!found) throw input_error("defect witness search failed");  // cannot happen
  return res;
}

DegreeOutcome gentle_degree(const GroupFunction& f) {
  AugFiltration filt = aug_ideal_powers(f.domain, f.codomain_p);
  return gentle_degree(f, filt);
}

DegreeOutcome gentle_degree(const GroupFunction& f, const AugFiltration& filt) {
  gf::PrimeField F(f.codomain_p);
  if (!filt.stable_index) throw input_error("gentle degree needs a stabilized filtration");
  if (!functional_vanishes(F, f.values, filt.powers.back())) return DegreeOutcome{std::nullopt};
  for (uint32_t r = 0;; ++r) {
    if (functional_vanishes(F, f.values, filt.power(r + 1))) return DegreeOutcome{r};
  }
}

Lemma31Result check_lemma_3_1(uint32_t p, uint32_t m, std::size_t size_cap) {
  gf::PrimeField F(p);
  std::size_t n = 1;
  for (uint32_t i = 0; i < m; ++i) {
    n *= p;
    if (n > size_cap) throw cap_error("lemma 3.1 size limit exceeded: p^m > " + std::to_string(size_cap));
  }
  GroupPtr g = abelian_group(std::vector<uint32_t>(m, p));
  uint32_t top = (p - 1) * m + 1;
  AugFiltration filt = aug_ideal_powers(g, p, top);
  Lemma31Result res;
  for (uint32_t s = 1; s <= top; ++s) res.dims.push_back(filt.power(s).rank());
  res.top_vanishes = filt.power(top).rank() == 0;
  res.sharp = top >= 2 ? filt.power(top - 1).rank() > 0 : filt.power(1).rank() > 0;
  if (top == 1) res.sharp = true;  // trivial group: I^0 is the whole ring by convention
  return res;
}

CompositionBoundResult check_composition_bound(const GroupFunction& f, const GroupFunction& g) {
  // the codomain of f is F_{p'}, identified with the cyclic group Z_{p'}
  const auto& orders = g.domain->cyclic_orders();
  if (!orders || orders->size() != 1 || (*orders)[0] != f.codomain_p)
    throw input_error("composition: domain of g must be the cyclic group of f's codomain prime");
  auto rf = gentle_degree(f);
  auto rg = gentle_degree(g);
  if (!rf.degree || !rg.degree) throw input_error("composition bound needs gentle inputs");
  GroupFunction comp{f.domain, g.codomain_p, {}};
  comp.values.reserve(f.domain->size());
  for (uint32_t u = 0; u < f.domain->size(); ++u) {
    uint32_t v = f.values[u];  // residue = element index of Z_{p'}
    comp.values.push_back(g.values[g.domain->element_from_residues({v})]);
  }
  CompositionBoundResult res;
  res.r = *rf.degree;
  res.s = *rg.degree;
  res.holds = gentle_defect(comp, res.r * res.s).vanishes;
  return res;
}

gf::Mat pushforward_matrix(const GroupFunction& f, GroupPtr target, uint32_t ring_p) {
  std::vector<uint32_t> map(f.domain->size());
  for (uint32_t u = 0; u < f.domain->size(); ++u) map[u] = target->element_from_residues({f.values[u]});
  return pushforward_matrix(map, f.domain, std::move(target), ring_p);
}

gf::Mat pushforward_matrix(const std::vector<uint32_t>& map, GroupPtr source, GroupPtr target, uint32_t ring_p) {
  gf::Mat m(ring_p, target->size(), source->size());
  for (uint32_t u = 0; u < source->size(); ++u) m.at(map[u], u) = 1;
  return m;
}

gf::Subspace image_subspace(const gf::Mat& m, gf::BasisPtr target_basis, const gf::Subspace& src) {
  gf::Mat rows = mat_mul(src.rows(), mat_transpose(m));
  return gf::Subspace::from_rows(std::move(target_basis), m.p, rows);
}

bool check_pushforward_bound(const GroupFunction& f, uint32_t r, uint32_t s, uint32_t ring_p) {
  GroupPtr target = cyclic_group(f.codomain_p);
  gf::Mat m = pushforward_matrix(f, target, ring_p);
  AugFiltration src = aug_ideal_powers(f.domain, ring_p);
  AugFiltration dst = aug_ideal_powers(target, ring_p);
  gf::Subspace img = image_subspace(m, target->elements(), src.power(r * s + 1));
  return gf::subspace_leq(img, dst.power(s + 1)).holds;
}

bool check_product_gentle(const std::vector<GroupFunction>& fs, uint32_t r, std::size_t group_cap) {
  std::vector<uint32_t> orders_all;
  std::size_t total = 1;
  for (auto& f : fs) {
    const auto& o = f.domain->cyclic_orders();
    if (!o) throw input_error("product gentleness needs abelian factors");
    for (auto v : *o) orders_all.push_back(v);
    total *= f.domain->size();
    if (total > group_cap) throw cap_error("combined group exceeds size limit");
  }
  GroupPtr prod = abelian_group(orders_all);
  // coordinate j of the product function only sees factor j
  std::size_t offset = 0;
  for (std::size_t j = 0; j < fs.size(); ++j) {
    const auto& f = fs[j];
    std::size_t arity = f.domain->cyclic_orders()->size();
    GroupFunction coord{prod, f.codomain_p, {}};
    coord.values.reserve(prod->size());
    for (uint32_t u = 0; u < prod->size(); ++u) {
      const auto& res = prod->residues()[u];
      std::vector<uint32_t> sub(res.begin() + static_cast<long>(offset),
                                res.begin() + static_cast<long>(offset + arity));
      coord.values.push_back(f.values[f.domain->element_from_residues(sub)]);
    }
    if (!gentle_defect(coord, r).vanishes) return false;
    offset += arity;
  }
  return true;
}

PerfectStabilityResult check_perfect_stability(GroupPtr g, uint32_t p, std::size_t size_cap) {
  if (g->size() > size_cap) throw cap_error("group exceeds size limit for stability check");
  AugFiltration filt = aug_ideal_powers(g, p, 2);
  PerfectStabilityResult res;
  res.dim_i1 = filt.power(1).rank();
  res.dim_i2 = filt.power(2).rank();
  res.stable = res.dim_i1 == res.dim_i2;
  if (res.stable) {
    res.basics_in_i2 = true;
    for (uint32_t x = 0; x < g->size(); ++x) {
      if (x == g->identity()) continue;
      GroupRingElt w = GroupRingElt::basic(g, p, x).minus(GroupRingElt::one(g, p));
      if (!filt.power(2).contains(w.coeffs)) {
        res.basics_in_i2 = false;
        break;
      }
    }
  }
  return res;
}

bool check_coprime_relation(GroupPtr u, uint32_t u1, uint32_t u2, uint32_t p) {
  if (!u->is_abelian()) throw input_error("coprime relation needs an abelian group");
  uint32_t o1 = u->order_of(u1), o2 = u->order_of(u2);
  if (std::gcd(o1, o2) != 1) throw input_error("element orders are not coprime");
  GroupRingElt w = GroupRingElt::basic(u, p, u->mul(u1, u2))
                       .minus(GroupRingElt::basic(u, p, u1))
                       .minus(GroupRingElt::basic(u, p, u2))
                       .plus(GroupRingElt::one(u, p));
  if (w.coeffs.is_zero()) return true;
  AugFiltration filt = aug_ideal_powers(u, p);
  return filt.powers.back().contains(w.coeffs);
}

PolynomialWindowResult check_integer_polynomial(const std::vector<Rational>& coeffs, uint32_t r, long long lo,
                                                long long hi) {
  if (lo > hi) throw input_error("empty window");
  auto eval = [&](long long q) {
    Rational acc(0);
    Rational x(q);
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
  };
  // the defect sum is symmetric in the tuple, so scan non-decreasing tuples
  std::vector<long long> tuple(r + 1, lo);
  PolynomialWindowResult res;
  while (true) {
    Rational sum(0);
    for (uint32_t mask = 0; mask < (1u << (r + 1)); ++mask) {
      long long arg = 0;
      int bits = 0;
      for (uint32_t i = 0; i <= r; ++i)
        if (mask & (1u << i)) {
          arg += tuple[i];
          ++bits;
        }
      Rational term = eval(arg);
      if (bits % 2 == 1) term = Rational(0) - term;
      sum = sum + term;
    }
    if (!sum.is_zero()) {
      res.holds = false;
      res.witness = tuple;
      return res;
    }
    // next non-decreasing tuple
    std::size_t k = tuple.size();
    while (k > 0 && tuple[k - 1] == hi) --k;
    if (k == 0) break;
    ++tuple[k - 1];
    for (std::size_t j = k; j < tuple.size(); ++j) tuple[j] = tuple[k - 1];
  }
  res.holds = true;
  return res;
}

namespace {

long long binomial_ll(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  long long r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

Lemma71Result check_lemma_7_1(const std::vector<uint32_t>& orders, uint32_t p, uint32_t r, uint32_t trials,
                              uint64_t seed, std::size_t size_cap) {
  const std::size_t nfac = orders.size();
  if (nfac > 4) throw cap_error("lemma 7.1 limited to at most 4 factors");
  std::size_t total = 1;
  for (auto o : orders) total *= o;
  if (total > size_cap) throw cap_error("lemma 7.1 product group exceeds size limit");

  gf::PrimeField F(p);
  GroupPtr U = abelian_group(orders);
  AugFiltration filt = aug_ideal_powers(U, p, r + 1);
  const gf::Subspace& target = filt.power(r + 1);

  // stack the pushforward matrices of all projections with |J| <= r
  std::vector<gf::Mat> stacked;
  std::vector<std::vector<std::size_t>> small_subsets;
  for (uint32_t mask = 0; mask < (1u << nfac); ++mask) {
    std::vector<std::size_t> J;
    for (std::size_t i = 0; i < nfac; ++i)
      if (mask & (1u << i)) J.push_back(i);
    if (J.size() > r) continue;
    small_subsets.push_back(J);
    std::vector<uint32_t> sub_orders;
    for (auto i : J) sub_orders.push_back(orders[i]);
    GroupPtr UJ = abelian_group(sub_orders);
    std::vector<uint32_t> map(U->size());
    for (uint32_t u = 0; u < U->size(); ++u) {
      std::vector<uint32_t> res;
      for (auto i : J) res.push_back(U->residues()[u][i]);
      map[u] = UJ->element_from_residues(res);
    }
    stacked.push_back(pushforward_matrix(map, U, UJ, p));
  }
  gf::Mat big = stacked.front();
  for (std::size_t i = 1; i < stacked.size(); ++i) big = mat_vstack(big, stacked[i]);
  gf::Subspace inter = gf::kernel_of_matrix(big, U->elements());

  Lemma71Result out;
  out.kernel_dim = inter.rank();

  // membership trials: random combinations of the kernel basis
  std::mt19937_64 rng(seed);
  out.membership_holds = true;
  for (uint32_t t = 0; t < trials; ++t) {
    std::vector<uint32_t> w(U->size(), 0);
    for (std::size_t i = 0; i < inter.rank(); ++i) {
      uint32_t c = static_cast<uint32_t>(rng() % p);
      if (!c) continue;
      for (std::size_t j = 0; j < U->size(); ++j) w[j] = F.add(w[j], F.mul(c, inter.rows().at(i, j)));
    }
    if (!target.contains_dense(w)) {
      out.membership_holds = false;
      break;
    }
    ++out.trials_run;
  }

  // displayed identity for every u (the binomial form needs r < |I|)
  if (r < nfac) {
    out.identity_holds = true;
    for (uint32_t u = 0; u < U->size() && out.identity_holds; ++u) {
      std::vector<uint32_t> w(U->size(), 0);
      w[u] = F.add(w[u], 1);
      for (const auto& J : small_subsets) {
        long long coef = binomial_ll(static_cast<long long>(nfac) - static_cast<long long>(J.size()) - 1,
                                     static_cast<long long>(r) - static_cast<long long>(J.size()));
        if ((r - J.size()) % 2 == 1) coef = -coef;
        // q_J(u): zero the coordinates outside J
        std::vector<uint32_t> res(orders.size(), 0);
        for (auto i : J) res[i] = U->residues()[u][i];
        uint32_t qu = U->element_from_residues(res);
        uint32_t c = F.reduce_int(coef);
        w[qu] = F.sub(w[qu], c);
      }
      if (!target.contains_dense(w)) out.identity_holds = false;
    }
  } else {
    // intersection includes ker of the identity projection: trivial
    out.identity_holds = inter.rank() == 0;
  }
  return out;
}

}  // namespace gentle::grp
