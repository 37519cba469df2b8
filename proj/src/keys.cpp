#include "gentle/keys.hpp"

#include <algorithm>

namespace gentle::keys {

void CommutativeSquare::validate() const {
  f1.validate();
  f2.validate();
  g1.validate();
  g2.validate();
  if (!map_equal(compose(f1, g1), compose(f2, g2))) throw input_error("square does not commute");
}

uint64_t KeyQuadruple::digest() const {
  uint64_t h = 1469598103934665603ull;
  for (const ComplexMap* m : {&s1, &s2, &t1, &t2}) {
    uint64_t d = map_digest(*m);
    h = fnv1a(&d, sizeof(d), h);
  }
  return h;
}

bool key_identity_holds(const CommutativeSquare& sq, const KeyQuadruple& key) {
  // blocks of (-s1,s2)(-f1,f2) + (g1,g2)(t1,t2) = id on V1 + V2
  std::size_t top = std::max({sq.V1->ranks.size(), sq.V2->ranks.size(), sq.U->ranks.size(), sq.W->ranks.size()});
  for (std::size_t q = 0; q < top; ++q) {
    uint32_t p = sq.U->p;
    gf::Mat b11 = mat_add(mat_mul(key.s1.at(q), sq.f1.at(q)), mat_mul(sq.g1.at(q), key.t1.at(q)));
    gf::Mat b22 = mat_add(mat_mul(key.s2.at(q), sq.f2.at(q)), mat_mul(sq.g2.at(q), key.t2.at(q)));
    gf::Mat b12 = mat_sub(mat_mul(sq.g1.at(q), key.t2.at(q)), mat_mul(key.s1.at(q), sq.f2.at(q)));
    gf::Mat b21 = mat_sub(mat_mul(sq.g2.at(q), key.t1.at(q)), mat_mul(key.s2.at(q), sq.f1.at(q)));
    if (!(b11 == gf::Mat::identity(p, sq.V1->rank(q)))) return false;
    if (!(b22 == gf::Mat::identity(p, sq.V2->rank(q)))) return false;
    if (!b12.is_zero() || !b21.is_zero()) return false;
  }
  return true;
}

ComplexMap sector(const ComplexMap& h, bool check_preconditions) {
  const ChainComplex& Wt = *h.src;  // total space
  const ChainComplex& W = *h.dst;
  uint32_t p = W.p;
  gf::PrimeField F(p);
  std::size_t top = std::max(Wt.ranks.size(), W.ranks.size());

  if (check_preconditions) h.validate();

  // kernel inclusion per degree: rows of ker[q] span ker h_q
  std::vector<gf::Mat> ker;
  for (std::size_t q = 0; q < top; ++q) {
    if (check_preconditions && gf::mat_rank(h.at(q)) != W.rank(q))
      throw input_error("sector: map not surjective in degree " + std::to_string(q));
    ker.push_back(gf::mat_kernel(h.at(q)));
  }

  // kernel differentials: dA[q] expresses d(ker_q) in the ker_{q-1} basis
  std::vector<gf::Mat> dA(top);
  for (std::size_t q = 1; q < top; ++q) {
    gf::Mat img = mat_mul(Wt.diff(q), mat_transpose(ker[q]));  // columns in W~_{q-1}
    gf::Mat A = mat_transpose(ker[q - 1]);
    gf::Mat X(p, ker[q - 1].rows, ker[q].rows);
    for (std::size_t c = 0; c < img.cols; ++c) {
      std::vector<uint32_t> b(img.rows);
      for (std::size_t r = 0; r < img.rows; ++r) b[r] = img.at(r, c);
      auto x = gf::mat_solve(A, b);
      if (!x) throw input_error("sector: kernel is not a subcomplex");  // cannot happen
      for (std::size_t r = 0; r < X.rows; ++r) X.at(r, c) = (*x)[r];
    }
    dA[q] = std::move(X);
  }

  // contracting homotopy of the kernel complex: choose complements H_q of the
  // cycles with d mapping H_q isomorphically onto Z_{q-1}
  std::vector<gf::Mat> Z(top), H(top);
  for (std::size_t q = 0; q < top; ++q) {
    std::size_t n = ker[q].rows;
    gf::Mat d = q < dA.size() && dA[q].cols == n && q >= 1 ? dA[q] : gf::Mat(p, q >= 1 ? ker[q - 1].rows : 0, n);
    gf::Mat z = gf::mat_kernel(d);
    Z[q] = z;
    // complement: standard basis vectors extending the cycle space
    gf::Mat stack = z;
    std::vector<std::size_t> picked;
    for (std::size_t e = 0; e < n && stack.rows < n; ++e) {
      gf::Mat cand(p, 1, n);
      cand.at(0, e) = 1;
      gf::Mat trial = mat_vstack(stack, cand);
      if (gf::mat_rank(trial) > stack.rows) {
        stack = trial;
        picked.push_back(e);
      }
    }
    gf::Mat hmat(p, picked.size(), n);
    for (std::size_t r = 0; r < picked.size(); ++r) hmat.at(r, picked[r]) = 1;
    H[q] = hmat;
  }
  // exactness check: d must map H_{q+1} bijectively onto Z_q; containment
  // d(H_{q+1}) <= Z_q is automatic from d o d = 0
  for (std::size_t q = 0; q < top; ++q) {
    std::size_t zdim = Z[q].rows;
    if (q + 1 < top) {
      if (H[q + 1].rows != zdim)
        throw input_error("sector: kernel complex not exact in degree " + std::to_string(q));
      gf::Mat img = mat_transpose(mat_mul(dA[q + 1], mat_transpose(H[q + 1])));  // rows in ker_q coords
      if (gf::mat_rank(img) != zdim)
        throw input_error("sector: kernel complex not exact in degree " + std::to_string(q));
    } else if (zdim != 0) {
      // top degree: nothing above can hit these cycles
      throw input_error("sector: kernel complex not exact in degree " + std::to_string(q));
    }
  }

  // j_{q-1} = (d|H_q)^{-1} : Z_{q-1} -> H_q; build k_q = j_q o pi_q
  // pi_q projects onto Z_q along H_q
  std::vector<gf::Mat> kmat(top);  // k_q : ker_q -> ker_{q+1}
  for (std::size_t q = 0; q + 1 < top; ++q) {
    std::size_t n = ker[q].rows;
    std::size_t nz = Z[q].rows;
    gf::Mat k(p, ker[q + 1].rows, n);
    if (nz > 0 && n > 0) {
      // solve for each basis vector e of ker_q: e = z + h, z in Z, h in H
      gf::Mat basis = mat_vstack(Z[q], H[q]);  // rows span ker_q
      gf::Mat A = mat_transpose(basis);
      // d|H_{q+1} as matrix Z_q-coords: columns = dA[q+1] H_{q+1}^T expressed in Z_q
      gf::Mat dH = mat_mul(dA[q + 1], mat_transpose(H[q + 1]));  // ker_q coords
      // express columns of dH in the Z_q basis
      gf::Mat ZT = mat_transpose(Z[q]);
      gf::Mat dH_z(p, nz, dH.cols);
      for (std::size_t c = 0; c < dH.cols; ++c) {
        std::vector<uint32_t> b(dH.rows);
        for (std::size_t r = 0; r < dH.rows; ++r) b[r] = dH.at(r, c);
        auto x = gf::mat_solve(ZT, b);
        if (!x) throw input_error("sector: boundary escapes the cycle space");
        for (std::size_t r = 0; r < nz; ++r) dH_z.at(r, c) = (*x)[r];
      }
      // invert dH_z (nz x nz)
      gf::Mat inv = mat_hstack(dH_z, gf::Mat::identity(p, nz));
      auto piv = gf::mat_rref(inv);
      if (piv.size() != nz) throw input_error("sector: kernel contraction is singular");
      gf::Mat dHinv(p, nz, nz);
      for (std::size_t r = 0; r < nz; ++r)
        for (std::size_t c2 = 0; c2 < nz; ++c2) dHinv.at(r, c2) = inv.at(r, nz + c2);
      for (std::size_t e = 0; e < n; ++e) {
        std::vector<uint32_t> b(n, 0);
        b[e] = 1;
        auto x = gf::mat_solve(A, b);
        if (!x) throw input_error("sector: cycle/complement decomposition failed");
        // z-part coefficients are the first nz entries
        std::vector<uint32_t> zcoef(x->begin(), x->begin() + static_cast<long>(nz));
        // k(e) = H_{q+1}^T dHinv zcoef
        std::vector<uint32_t> w(nz, 0);
        for (std::size_t r = 0; r < nz; ++r) {
          uint64_t acc = 0;
          for (std::size_t c2 = 0; c2 < nz; ++c2) acc += static_cast<uint64_t>(dHinv.at(r, c2)) * zcoef[c2];
          w[r] = static_cast<uint32_t>(acc % p);
        }
        for (std::size_t r = 0; r < ker[q + 1].rows; ++r) {
          uint64_t acc = 0;
          for (std::size_t c2 = 0; c2 < nz; ++c2) acc += static_cast<uint64_t>(H[q + 1].at(c2, r)) * w[c2];
          k.at(r, e) = static_cast<uint32_t>(acc % p);
        }
      }
    }
    kmat[q] = std::move(k);
  }
  if (top > 0) kmat[top - 1] = gf::Mat(p, 0, ker[top - 1].rows);

  // naive degreewise section, then the chain-map correction
  ComplexMap s;
  s.src = h.dst;
  s.dst = h.src;
  std::vector<gf::Mat> sigma(top);
  for (std::size_t q = 0; q < top; ++q) {
    gf::Mat sq(p, Wt.rank(q), W.rank(q));
    for (std::size_t c = 0; c < W.rank(q); ++c) {
      std::vector<uint32_t> b(W.rank(q), 0);
      b[c] = 1;
      auto x = gf::mat_solve(h.at(q), b);
      if (!x) throw input_error("sector: map not surjective in degree " + std::to_string(q));
      for (std::size_t r = 0; r < Wt.rank(q); ++r) sq.at(r, c) = (*x)[r];
    }
    sigma[q] = std::move(sq);
  }
  for (std::size_t q = 0; q < top; ++q) {
    gf::Mat m = sigma[q];
    if (q >= 1) {
      // defect D_q = sigma_{q-1} d - d sigma_q lands in the kernel
      gf::Mat D = mat_sub(mat_mul(sigma[q - 1], W.diff(q)), mat_mul(Wt.diff(q), sigma[q]));
      // express D in kernel coordinates
      gf::Mat A = mat_transpose(ker[q - 1]);
      gf::Mat Dk(p, ker[q - 1].rows, D.cols);
      for (std::size_t c = 0; c < D.cols; ++c) {
        std::vector<uint32_t> b(D.rows);
        for (std::size_t r = 0; r < D.rows; ++r) b[r] = D.at(r, c);
        auto x = gf::mat_solve(A, b);
        if (!x) throw input_error("sector: correction defect escapes the kernel");
        for (std::size_t r = 0; r < Dk.rows; ++r) Dk.at(r, c) = (*x)[r];
      }
      // c_q = k_{q-1} Dk, back to ambient coordinates
      gf::Mat ck = mat_mul(kmat[q - 1], Dk);               // ker_q coordinates
      gf::Mat corr = mat_mul(mat_transpose(ker[q]), ck);   // ambient
      m = mat_add(m, corr);
    }
    s.f.push_back(std::move(m));
  }
  // verify
  ComplexMap hs = compose(h, s);
  if (!map_equal(hs, identity_map(W))) throw input_error("sector: h o s != id after correction");
  s.validate();
  return s;
}

void SplitRow::validate() const {
  p.validate();
  q.validate();
  k.validate();
  l.validate();
  if (!map_equal(compose(p, k), identity_map(*U))) throw input_error("split row: p k != id");
  if (!map_equal(compose(l, q), identity_map(*W))) throw input_error("split row: l q != id");
  if (!map_equal(map_add(compose(k, p), compose(q, l)), identity_map(*V)))
    throw input_error("split row: k p + q l != id");
}

KeyQuadruple key_from_split_rows(const SplitRow& upper, const SplitRow& lower, const ComplexMap& f,
                                 const ComplexMap& g, const ComplexMap& h, const ComplexMap& s,
                                 CommutativeSquare* out_square) {
  upper.validate();
  lower.validate();
  f.validate();
  g.validate();
  h.validate();
  if (!map_equal(compose(lower.p, g), compose(f, upper.p))) throw input_error("rows do not commute over p");
  if (!map_equal(compose(g, upper.q), compose(lower.q, h))) throw input_error("rows do not commute over q");
  if (!map_equal(compose(h, s), identity_map(*lower.W))) throw input_error("h s != id");

  // r = q~ s l, k_hat = k~ + r (k f - g k~)
  ComplexMap r = compose(upper.q, compose(s, lower.l));
  ComplexMap khat = map_add(upper.k, compose(r, map_sub(compose(lower.k, f), compose(g, upper.k))));

  KeyQuadruple key;
  key.s1 = zero_map(*lower.U, *upper.U);
  key.s2 = lower.k;
  key.t1 = khat;
  key.t2 = r;

  CommutativeSquare sq;
  sq.U = lower.U;
  sq.V1 = upper.U;
  sq.V2 = lower.V;
  sq.W = upper.V;
  sq.f1 = f;
  sq.f2 = lower.p;
  sq.g1 = upper.p;
  sq.g2 = g;
  sq.validate();
  if (!key_identity_holds(sq, key)) throw input_error("key identity failed");
  if (out_square) *out_square = sq;
  return key;
}

ComplexMap half_key_lift(const CommutativeSquare& sq, const ComplexMap& t1, const ComplexMap& t2,
                         const ComplexMap& k1, const ComplexMap& k2) {
  if (!map_equal(compose(sq.f1, k1), compose(sq.f2, k2)))
    throw input_error("half-key lift: maps are not compatible");
  ComplexMap l = map_add(compose(t1, k1), compose(t2, k2));
  if (!map_equal(compose(sq.g1, l), k1)) throw input_error("half-key lift: g1 l != k1");
  if (!map_equal(compose(sq.g2, l), k2)) throw input_error("half-key lift: g2 l != k2");
  return l;
}

SplitRow split_row_from_sector(const ChainComplex& U, const ChainComplex& V, const ChainComplex& W,
                               const ComplexMap& p, const ComplexMap& q) {
  SplitRow row;
  row.U = &U;
  row.V = &V;
  row.W = &W;
  row.p = p;
  row.q = q;
  row.k = sector(p);
  // l = q^{-1} (id - k p), solved degreewise (q is injective)
  ComplexMap rem = map_sub(identity_map(V), compose(row.k, p));
  ComplexMap l;
  l.src = &V;
  l.dst = &W;
  std::size_t top = std::max(V.ranks.size(), W.ranks.size());
  for (std::size_t d = 0; d < top; ++d) {
    gf::Mat A = q.at(d);
    gf::Mat R = rem.at(d);
    gf::Mat X(V.p, W.rank(d), V.rank(d));
    for (std::size_t c = 0; c < R.cols; ++c) {
      std::vector<uint32_t> b(R.rows);
      for (std::size_t r2 = 0; r2 < R.rows; ++r2) b[r2] = R.at(r2, c);
      auto x = gf::mat_solve(A, b);
      if (!x) throw input_error("split row: id - k p does not factor through q");
      for (std::size_t r2 = 0; r2 < X.rows; ++r2) X.at(r2, c) = (*x)[r2];
    }
    l.f.push_back(std::move(X));
  }
  row.l = l;
  row.validate();
  return row;
}

namespace {

// Hom complexes Hom_n = prod_q Hom(X_q, C_{q+n}), n ranging over -1..top,
// with differential (Df)_q = dC f_q - (-1)^n f_{q-1} dX. The mapping complex
// itself is the good truncation at 0: degree 0 becomes the cycle space (the
// grading-preserving chain maps), higher degrees stay as they are.
struct HomComplexLayout {
  std::vector<std::size_t> offsets;  // per source degree q, block X_q x C_{q+n}
};

struct TruncatedHom {
  ChainComplex naive;                     // degrees 0..top of the full Hom complex
  std::vector<HomComplexLayout> layouts;  // per degree 0..top
  gf::Mat dminus;                         // D_0 : Hom_0 -> Hom_{-1}
  gf::Mat z0;                             // rows: basis of the chain-map space inside Hom_0
  ChainComplex good;                      // the truncated mapping complex
};

std::size_t hom_block_size(const ChainComplex& X, const ChainComplex& C, long n, HomComplexLayout& layout) {
  std::size_t total = 0;
  layout.offsets.assign(X.ranks.size() + 1, 0);
  for (std::size_t q = 0; q < X.ranks.size(); ++q) {
    layout.offsets[q] = total;
    long cq = static_cast<long>(q) + n;
    std::size_t crank = cq >= 0 ? C.rank(static_cast<std::size_t>(cq)) : 0;
    total += X.rank(q) * crank;
  }
  layout.offsets[X.ranks.size()] = total;
  return total;
}

// D_n : Hom_n -> Hom_{n-1}
gf::Mat hom_differential(const ChainComplex& X, const ChainComplex& C, long n, const HomComplexLayout& src,
                         const HomComplexLayout& dst, std::size_t src_total, std::size_t dst_total) {
  uint32_t p = C.p;
  gf::PrimeField F(p);
  gf::Mat d(p, dst_total, src_total);
  for (std::size_t q = 0; q < X.ranks.size(); ++q) {
    long cq = static_cast<long>(q) + n;
    if (cq < 0) continue;
    std::size_t crank = C.rank(static_cast<std::size_t>(cq));
    for (std::size_t a = 0; a < crank; ++a) {
      for (std::size_t b = 0; b < X.rank(q); ++b) {
        std::size_t col = src.offsets[q] + a * X.rank(q) + b;
        // dC o f
        if (cq >= 1) {
          const gf::Mat dC = C.diff(static_cast<std::size_t>(cq));
          for (std::size_t r = 0; r < dC.rows; ++r) {
            uint32_t cval = dC.at(r, a);
            if (!cval) continue;
            std::size_t row = dst.offsets[q] + r * X.rank(q) + b;
            d.at(row, col) = F.add(d.at(row, col), cval);
          }
        }
        // -(-1)^n f o dX
        if (q + 1 < X.ranks.size()) {
          const gf::Mat dX = X.diff(q + 1);
          for (std::size_t x = 0; x < X.rank(q + 1); ++x) {
            uint32_t cval = dX.at(b, x);
            if (!cval) continue;
            std::size_t row = dst.offsets[q + 1] + a * X.rank(q + 1) + x;
            uint32_t signed_val = (n % 2 == 0) ? F.neg(cval) : cval;
            d.at(row, col) = F.add(d.at(row, col), signed_val);
          }
        }
      }
    }
  }
  return d;
}

TruncatedHom hom_complex(const ChainComplex& X, const ChainComplex& C) {
  uint32_t p = C.p;
  TruncatedHom out;
  out.naive.p = p;
  std::size_t maxn = std::max<std::size_t>(C.ranks.size(), 1);
  out.layouts.assign(maxn, {});
  for (std::size_t n = 0; n < maxn; ++n)
    out.naive.ranks.push_back(hom_block_size(X, C, static_cast<long>(n), out.layouts[n]));
  for (std::size_t n = 0; n < maxn; ++n) {
    if (n == 0) {
      out.naive.d.emplace_back(p, 0, out.naive.ranks[0]);
    } else {
      out.naive.d.push_back(hom_differential(X, C, static_cast<long>(n), out.layouts[n], out.layouts[n - 1],
                                             out.naive.ranks[n], out.naive.ranks[n - 1]));
    }
  }
  out.naive.validate();
  // chain-map subspace: kernel of D_0 into degree -1
  HomComplexLayout lm1;
  std::size_t m1_total = hom_block_size(X, C, -1, lm1);
  out.dminus = hom_differential(X, C, 0, out.layouts[0], lm1, out.naive.ranks[0], m1_total);
  out.z0 = gf::mat_kernel(out.dminus);
  // the good truncation
  out.good = out.naive;
  out.good.ranks[0] = out.z0.rows;
  out.good.d[0] = gf::Mat(p, 0, out.z0.rows);
  if (out.good.ranks.size() > 1) {
    // express D_1 in the cycle basis
    gf::Mat img = out.naive.d[1];  // Hom_1 -> Hom_0, lands in cycles
    gf::Mat A = mat_transpose(out.z0);
    gf::Mat d1(p, out.z0.rows, out.naive.ranks[1]);
    for (std::size_t c = 0; c < img.cols; ++c) {
      std::vector<uint32_t> b(img.rows);
      for (std::size_t r = 0; r < img.rows; ++r) b[r] = img.at(r, c);
      auto x = gf::mat_solve(A, b);
      if (!x) throw input_error("hom complex: differential image is not a chain map");
      for (std::size_t r = 0; r < d1.rows; ++r) d1.at(r, c) = (*x)[r];
    }
    out.good.d[1] = std::move(d1);
  }
  out.good.validate();
  return out;
}

// Rewrites a map defined on the naive complexes into the good truncations:
// degree 0 is conjugated through the cycle bases.
ComplexMap truncate_map(const ComplexMap& m, const TruncatedHom& src, const TruncatedHom& dst) {
  ComplexMap out;
  out.src = &src.good;
  out.dst = &dst.good;
  out.f.resize(std::max(m.f.size(), static_cast<std::size_t>(1)));
  for (std::size_t n = 1; n < m.f.size(); ++n) out.f[n] = m.f[n];
  uint32_t p = src.good.p;
  gf::Mat img = mat_mul(m.at(0), mat_transpose(src.z0));  // columns: images of src cycles
  gf::Mat A = mat_transpose(dst.z0);
  gf::Mat m0(p, dst.z0.rows, src.z0.rows);
  for (std::size_t c = 0; c < img.cols; ++c) {
    std::vector<uint32_t> b(img.rows);
    for (std::size_t r = 0; r < img.rows; ++r) b[r] = img.at(r, c);
    auto x = gf::mat_solve(A, b);
    if (!x) throw input_error("hom complex: map does not preserve chain maps in degree 0");
    for (std::size_t r = 0; r < m0.rows; ++r) m0.at(r, c) = (*x)[r];
  }
  out.f[0] = std::move(m0);
  out.validate();
  return out;
}

// Postcomposition with a map of coefficient complexes.
ComplexMap hom_post(const ChainComplex& X, const ChainComplex& HomS, const ChainComplex& HomT,
                    const std::vector<HomComplexLayout>& ls, const std::vector<HomComplexLayout>& lt,
                    const ChainComplex& CS, const ChainComplex& CT, const ComplexMap& c) {
  ComplexMap m;
  m.src = &HomS;
  m.dst = &HomT;
  uint32_t p = CS.p;
  std::size_t top = std::max(HomS.ranks.size(), HomT.ranks.size());
  for (std::size_t n = 0; n < top; ++n) {
    gf::Mat mn(p, HomT.rank(n), HomS.rank(n));
    if (n < HomS.ranks.size() && n < HomT.ranks.size()) {
      for (std::size_t q = 0; q < X.ranks.size(); ++q) {
        gf::Mat cq = c.at(q + n);
        for (std::size_t a = 0; a < CS.rank(q + n); ++a)
          for (std::size_t b = 0; b < X.rank(q); ++b) {
            std::size_t col = ls[n].offsets[q] + a * X.rank(q) + b;
            for (std::size_t r = 0; r < CT.rank(q + n); ++r) {
              uint32_t v = cq.at(r, a);
              if (!v) continue;
              std::size_t row = lt[n].offsets[q] + r * X.rank(q) + b;
              mn.at(row, col) = v;
            }
          }
      }
    }
    m.f.push_back(std::move(mn));
  }
  return m;
}

// Precomposition with a degreewise basis-injection X -> Y given by index
// maps (for the restriction maps of the rows): produces Hom(Y,C) -> Hom(X,C).
ComplexMap hom_pre_restrict(const ChainComplex& X, const ChainComplex& Y,
                            const std::vector<std::vector<std::size_t>>& idx_in_y, const ChainComplex& HomY,
                            const ChainComplex& HomX, const std::vector<HomComplexLayout>& ly,
                            const std::vector<HomComplexLayout>& lx, const ChainComplex& C) {
  ComplexMap m;
  m.src = &HomY;
  m.dst = &HomX;
  uint32_t p = C.p;
  std::size_t top = std::max(HomY.ranks.size(), HomX.ranks.size());
  for (std::size_t n = 0; n < top; ++n) {
    gf::Mat mn(p, HomX.rank(n), HomY.rank(n));
    if (n < HomX.ranks.size() && n < HomY.ranks.size()) {
      for (std::size_t q = 0; q < X.ranks.size(); ++q) {
        for (std::size_t a = 0; a < C.rank(q + n); ++a)
          for (std::size_t b = 0; b < X.rank(q); ++b) {
            std::size_t row = lx[n].offsets[q] + a * X.rank(q) + b;
            std::size_t col = ly[n].offsets[q] + a * Y.rank(q) + idx_in_y[q][b];
            mn.at(row, col) = 1;
          }
      }
    }
    m.f.push_back(std::move(mn));
  }
  return m;
}

}  // namespace

FunctionSquareKey key_for_function_square(simp::CrewPtr L, simp::CrewPtr M, const simp::CrewMap& j,
                                          const ChainComplex& CQ, const ChainComplex& CR, const ComplexMap& c,
                                          std::size_t cap) {
  using simp::Crew;
  uint32_t p = CQ.p;
  // j must be degreewise injective on nondegenerate simplices
  j.validate();
  std::vector<std::vector<uint8_t>> in_image(M->labels.size());
  std::vector<std::vector<std::size_t>> l_to_m(L->labels.size());
  for (std::size_t q = 0; q < M->labels.size(); ++q) in_image[q].assign(M->count(q), 0);
  for (std::size_t q = 0; q < L->labels.size(); ++q) {
    l_to_m[q].assign(L->count(q), 0);
    for (std::size_t i = 0; i < L->count(q); ++i) {
      const simp::Enc& e = j.img[q][i];
      if (e.degenerate()) throw input_error("function square: j is not injective on nondegenerate simplices");
      if (in_image[e.tdim][e.tidx]) throw input_error("function square: j is not injective");
      in_image[e.tdim][e.tidx] = 1;
      l_to_m[q][i] = e.tidx;
    }
  }
  // quotient crew and its acyclicity up to the cap
  simp::CrewPtr N = simp::collapse_subcrew(*M, in_image, "(" + M->name + "/" + L->name + ")");
  {
    ChainComplex red = simp::reduced_chains(*N, p, std::min(cap, N->dim()));
    auto h = ch::homology_ranks(red);
    for (std::size_t q = 0; q < h.size(); ++q)
      if (h[q] != 0)
        throw input_error("function square: quotient is not acyclic in degree " + std::to_string(q));
  }

  FunctionSquareKey out;
  ChainComplex chL = simp::reduced_chains(*L, p, L->dim());
  ChainComplex chM = simp::reduced_chains(*M, p, M->dim());
  ChainComplex chN = simp::reduced_chains(*N, p, N->dim());

  TruncatedHom thQL = hom_complex(chL, CQ);
  TruncatedHom thQM = hom_complex(chM, CQ);
  TruncatedHom thQN = hom_complex(chN, CQ);
  TruncatedHom thRL = hom_complex(chL, CR);
  TruncatedHom thRM = hom_complex(chM, CR);
  TruncatedHom thRN = hom_complex(chN, CR);
  const auto& lQL = thQL.layouts;
  const auto& lQM = thQM.layouts;
  const auto& lQN = thQN.layouts;
  const auto& lRL = thRL.layouts;
  const auto& lRM = thRM.layouts;
  const auto& lRN = thRN.layouts;
  out.QL = std::make_unique<ChainComplex>(thQL.good);
  out.QM = std::make_unique<ChainComplex>(thQM.good);
  out.QN = std::make_unique<ChainComplex>(thQN.good);
  out.RL = std::make_unique<ChainComplex>(thRL.good);
  out.RM = std::make_unique<ChainComplex>(thRM.good);
  out.RN = std::make_unique<ChainComplex>(thRN.good);

  // index maps: L-basis inside M (reduced degree 0 bases both drop basepoints)
  std::vector<std::vector<std::size_t>> lm(chL.ranks.size());
  for (std::size_t q = 0; q < chL.ranks.size(); ++q) {
    lm[q].resize(chL.rank(q));
    for (std::size_t i = 0; i < chL.rank(q); ++i) {
      // reduced degree-0 index -> crew index
      std::size_t li = i;
      if (q == 0 && chL.rank(0) != L->count(0)) li = i >= L->basepoint ? i + 1 : i;
      std::size_t mi = l_to_m[q][li];
      if (q == 0 && chM.rank(0) != M->count(0)) mi = mi > M->basepoint ? mi - 1 : mi;
      lm[q][i] = mi;
    }
  }
  // N-basis inside M
  std::vector<std::vector<std::size_t>> nm(chN.ranks.size());
  {
    for (std::size_t q = 0; q < chN.ranks.size(); ++q) {
      // N simplices carry the labels of their M preimages
      std::vector<std::size_t> m_index_of_label(chN.rank(q));
      std::size_t idx = 0;
      for (std::size_t i = 0; i < N->count(q); ++i) {
        if (q == 0 && i == N->basepoint) continue;
        // find the M simplex with this label
        const std::string& lbl = N->labels[q][i];
        bool found = false;
        for (std::size_t mi = 0; mi < M->count(q); ++mi) {
          if (M->labels[q][mi] == lbl) {
            std::size_t v = mi;
            if (q == 0 && chM.rank(0) != M->count(0)) v = v > M->basepoint ? v - 1 : v;
            m_index_of_label[idx] = v;
            found = true;
            break;
          }
        }
        if (!found) throw input_error("function square: quotient label lookup failed");
        ++idx;
      }
      nm[q] = m_index_of_label;
    }
  }

  // rows: restriction along L -> M; Hom(N,.) includes into Hom(M,.) by
  // precomposing with the projection M -> N, whose matrix is the transpose
  // of the N-restriction. Everything is built on the full Hom complexes and
  // then pushed through the good truncation.
  auto retarget = [&](ComplexMap m, const ChainComplex* src, const ChainComplex* dst) {
    m.src = src;
    m.dst = dst;
    return m;
  };
  ComplexMap pQ = retarget(truncate_map(hom_pre_restrict(chL, chM, lm, thQM.naive, thQL.naive, lQM, lQL, CQ),
                                        thQM, thQL),
                           out.QM.get(), out.QL.get());
  ComplexMap pR = retarget(truncate_map(hom_pre_restrict(chL, chM, lm, thRM.naive, thRL.naive, lRM, lRL, CR),
                                        thRM, thRL),
                           out.RM.get(), out.RL.get());
  auto make_inclusion = [&](const TruncatedHom& thN, const TruncatedHom& thM, const ChainComplex& C,
                            const ChainComplex* src, const ChainComplex* dst) {
    ComplexMap restr = hom_pre_restrict(chN, chM, nm, thM.naive, thN.naive, thM.layouts, thN.layouts, C);
    ComplexMap incl;
    incl.src = &thN.naive;
    incl.dst = &thM.naive;
    for (std::size_t n = 0; n < restr.f.size(); ++n) incl.f.push_back(mat_transpose(restr.f[n]));
    return retarget(truncate_map(incl, thN, thM), src, dst);
  };
  ComplexMap qQ = make_inclusion(thQN, thQM, CQ, out.QN.get(), out.QM.get());
  ComplexMap qR = make_inclusion(thRN, thRM, CR, out.RN.get(), out.RM.get());

  // verticals: postcomposition with c
  ComplexMap cL = retarget(truncate_map(hom_post(chL, thQL.naive, thRL.naive, lQL, lRL, CQ, CR, c), thQL, thRL),
                           out.QL.get(), out.RL.get());
  ComplexMap cM = retarget(truncate_map(hom_post(chM, thQM.naive, thRM.naive, lQM, lRM, CQ, CR, c), thQM, thRM),
                           out.QM.get(), out.RM.get());
  ComplexMap cN = retarget(truncate_map(hom_post(chN, thQN.naive, thRN.naive, lQN, lRN, CQ, CR, c), thQN, thRN),
                           out.QN.get(), out.RN.get());

  SplitRow upper = split_row_from_sector(*out.QL, *out.QM, *out.QN, pQ, qQ);
  SplitRow lower = split_row_from_sector(*out.RL, *out.RM, *out.RN, pR, qR);
  ComplexMap s = sector(cN);

  out.key = key_from_split_rows(upper, lower, cL, cM, cN, s, &out.square);
  out.identity_ok = key_identity_holds(out.square, out.key);
  out.checked_degrees = std::max(out.QL->ranks.size(), out.RM->ranks.size());
  return out;
}

ChainComplex random_complex(std::mt19937_64& rng, uint32_t p, std::size_t maxdeg, std::size_t maxrank) {
  ChainComplex c;
  c.p = p;
  std::size_t top = 1 + rng() % maxdeg;
  for (std::size_t q = 0; q <= top; ++q) c.ranks.push_back(1 + rng() % maxrank);
  // d_1 random; d_{q+1} columns drawn from ker(d_q)
  for (std::size_t q = 0; q <= top; ++q) c.d.emplace_back(p, q == 0 ? 0 : c.ranks[q - 1], c.ranks[q]);
  if (top >= 1) {
    for (auto& v : c.d[1].a) v = static_cast<uint32_t>(rng() % p);
    for (std::size_t q = 2; q <= top; ++q) {
      gf::Mat ker = gf::mat_kernel(c.d[q - 1]);
      gf::PrimeField F(p);
      for (std::size_t col = 0; col < c.ranks[q]; ++col) {
        for (std::size_t kr = 0; kr < ker.rows; ++kr) {
          uint32_t coef = static_cast<uint32_t>(rng() % p);
          if (!coef) continue;
          for (std::size_t r = 0; r < c.ranks[q - 1]; ++r)
            c.d[q].at(r, col) = F.add(c.d[q].at(r, col), F.mul(coef, ker.at(kr, r)));
        }
      }
    }
  }
  c.validate();
  return c;
}

gf::Mat random_invertible(std::mt19937_64& rng, uint32_t p, std::size_t n) {
  while (true) {
    gf::Mat m(p, n, n);
    for (auto& v : m.a) v = static_cast<uint32_t>(rng() % p);
    if (gf::mat_rank(m) == n) return m;
  }
}

ChainComplex random_exact_complex(std::mt19937_64& rng, uint32_t p, std::size_t maxdeg, std::size_t maxrank) {
  // direct sum of identity blocks at random adjacent degrees, conjugated
  ChainComplex c;
  c.p = p;
  std::size_t top = 1 + rng() % maxdeg;
  std::vector<std::size_t> blocks(top);  // block q: F^a in degrees q, q-1
  c.ranks.assign(top + 1, 0);
  for (std::size_t q = 1; q <= top; ++q) {
    blocks[q - 1] = rng() % maxrank;
    c.ranks[q] += blocks[q - 1];
    c.ranks[q - 1] += blocks[q - 1];
  }
  for (std::size_t q = 0; q <= top; ++q) c.d.emplace_back(p, q == 0 ? 0 : c.ranks[q - 1], c.ranks[q]);
  // identity differentials: block q sits first in degree q's "outgoing" part
  for (std::size_t q = 1; q <= top; ++q) {
    std::size_t rows_off = q >= 2 ? blocks[q - 2] : 0;  // degree q-1 incoming block comes first
    (void)rows_off;
    std::size_t src_off = 0;  // outgoing block first in degree q
    std::size_t dst_off = q >= 2 ? blocks[q - 2] : 0;
    for (std::size_t t = 0; t < blocks[q - 1]; ++t) c.d[q].at(dst_off + t, src_off + t) = 1;
  }
  c.validate();
  // conjugate by random isomorphisms
  std::vector<gf::Mat> P;
  for (std::size_t q = 0; q <= top; ++q) P.push_back(random_invertible(rng, p, c.ranks[q]));
  ChainComplex out = c;
  for (std::size_t q = 1; q <= top; ++q) {
    gf::Mat inv = mat_hstack(P[q], gf::Mat::identity(p, c.ranks[q]));
    gf::mat_rref(inv);
    gf::Mat Pq_inv(p, c.ranks[q], c.ranks[q]);
    for (std::size_t r = 0; r < c.ranks[q]; ++r)
      for (std::size_t cc = 0; cc < c.ranks[q]; ++cc) Pq_inv.at(r, cc) = inv.at(r, c.ranks[q] + cc);
    out.d[q] = mat_mul(P[q - 1], mat_mul(c.d[q], Pq_inv));
  }
  out.validate();
  return out;
}

ComplexMap random_chain_map(std::mt19937_64& rng, const ChainComplex& src, const ChainComplex& dst) {
  // sample from the kernel of the chain-map conditions
  uint32_t p = src.p;
  gf::PrimeField F(p);
  std::size_t top = std::max(src.ranks.size(), dst.ranks.size());
  std::vector<std::size_t> off(top + 1, 0);
  std::size_t total = 0;
  for (std::size_t q = 0; q < top; ++q) {
    off[q] = total;
    total += src.rank(q) * dst.rank(q);
  }
  off[top] = total;
  std::size_t rows = 0;
  for (std::size_t q = 1; q < top; ++q) rows += dst.rank(q - 1) * src.rank(q);
  gf::Mat cond(p, rows, total);
  std::size_t row0 = 0;
  for (std::size_t q = 1; q < top; ++q) {
    gf::Mat dS = src.diff(q), dT = dst.diff(q);
    for (std::size_t r = 0; r < dst.rank(q - 1); ++r)
      for (std::size_t x = 0; x < src.rank(q); ++x) {
        std::size_t row = row0 + r * src.rank(q) + x;
        for (std::size_t a = 0; a < dst.rank(q); ++a) {
          uint32_t v = dT.at(r, a);
          if (v) {
            std::size_t idx = off[q] + a * src.rank(q) + x;
            cond.at(row, idx) = F.add(cond.at(row, idx), v);
          }
        }
        for (std::size_t y = 0; y < src.rank(q - 1); ++y) {
          uint32_t v = dS.at(y, x);
          if (v) {
            std::size_t idx = off[q - 1] + r * src.rank(q - 1) + y;
            cond.at(row, idx) = F.sub(cond.at(row, idx), v);
          }
        }
      }
    row0 += dst.rank(q - 1) * src.rank(q);
  }
  gf::Mat ker = gf::mat_kernel(cond);
  std::vector<uint32_t> flat(total, 0);
  for (std::size_t kr = 0; kr < ker.rows; ++kr) {
    uint32_t coef = static_cast<uint32_t>(rng() % p);
    if (!coef) continue;
    for (std::size_t i = 0; i < total; ++i) flat[i] = F.add(flat[i], F.mul(coef, ker.at(kr, i)));
  }
  ComplexMap m;
  m.src = &src;
  m.dst = &dst;
  for (std::size_t q = 0; q < top; ++q) {
    gf::Mat mq(p, dst.rank(q), src.rank(q));
    for (std::size_t a = 0; a < dst.rank(q); ++a)
      for (std::size_t b = 0; b < src.rank(q); ++b) mq.at(a, b) = flat[off[q] + a * src.rank(q) + b];
    m.f.push_back(std::move(mq));
  }
  m.validate();
  return m;
}

TrialData run_key_trial(uint64_t seed, uint32_t p) {
  std::mt19937_64 rng(seed);
  TrialData td;
  auto own = [&](ChainComplex cc) {
    td.own.push_back(std::make_unique<ChainComplex>(std::move(cc)));
    return td.own.back().get();
  };

  ChainComplex* U = own(random_complex(rng, p, 2, 3));
  ChainComplex* W = own(random_complex(rng, p, 2, 3));
  ChainComplex* Ut = own(random_complex(rng, p, 2, 3));
  ChainComplex* E = own(random_exact_complex(rng, p, 2, 2));
  ChainComplex* Wt = own(direct_sum(*W, *E));

  // lower row: V = U + W, conjugated
  ChainComplex* V = own(direct_sum(*U, *W));
  std::vector<gf::Mat> P;
  for (std::size_t q = 0; q < V->ranks.size(); ++q) P.push_back(random_invertible(rng, p, V->rank(q)));
  ChainComplex* Vc = own(*V);
  for (std::size_t q = 1; q < V->ranks.size(); ++q) {
    gf::Mat inv = mat_hstack(P[q], gf::Mat::identity(p, V->rank(q)));
    gf::mat_rref(inv);
    gf::Mat Pinv(p, V->rank(q), V->rank(q));
    for (std::size_t r = 0; r < V->rank(q); ++r)
      for (std::size_t c = 0; c < V->rank(q); ++c) Pinv.at(r, c) = inv.at(r, V->rank(q) + c);
    Vc->d[q] = mat_mul(P[q - 1], mat_mul(V->d[q], Pinv));
  }
  Vc->validate();

  auto block_proj = [&](const ChainComplex& sum, const ChainComplex& first, const ChainComplex& second,
                        bool take_first) {
    // projection from the unconjugated direct sum
    ComplexMap m;
    m.src = &sum;
    m.dst = take_first ? &first : &second;
    for (std::size_t q = 0; q < sum.ranks.size(); ++q) {
      gf::Mat mq(p, take_first ? first.rank(q) : second.rank(q), sum.rank(q));
      std::size_t o = take_first ? 0 : first.rank(q);
      for (std::size_t r = 0; r < mq.rows; ++r) mq.at(r, o + r) = 1;
      m.f.push_back(std::move(mq));
    }
    return m;
  };
  auto block_incl = [&](const ChainComplex& sum, const ChainComplex& first, const ChainComplex& second,
                        bool take_first) {
    ComplexMap m;
    m.src = take_first ? &first : &second;
    m.dst = &sum;
    for (std::size_t q = 0; q < sum.ranks.size(); ++q) {
      gf::Mat mq(p, sum.rank(q), take_first ? first.rank(q) : second.rank(q));
      std::size_t o = take_first ? 0 : first.rank(q);
      for (std::size_t c = 0; c < mq.cols; ++c) mq.at(o + c, c) = 1;
      m.f.push_back(std::move(mq));
    }
    return m;
  };
  auto conj_from = [&](ComplexMap m, const ChainComplex* newdst) {
    // P o m : ... -> Vc
    ComplexMap out = m;
    out.dst = newdst;
    for (std::size_t q = 0; q < m.f.size(); ++q) out.f[q] = mat_mul(P[q], m.f[q]);
    return out;
  };
  auto conj_to = [&](ComplexMap m, const ChainComplex* newsrc) {
    // m o P^{-1} : Vc -> ...
    ComplexMap out = m;
    out.src = newsrc;
    for (std::size_t q = 0; q < m.f.size(); ++q) {
      gf::Mat inv = mat_hstack(P[q], gf::Mat::identity(p, P[q].rows));
      gf::mat_rref(inv);
      gf::Mat Pinv(p, P[q].rows, P[q].rows);
      for (std::size_t r = 0; r < P[q].rows; ++r)
        for (std::size_t c = 0; c < P[q].rows; ++c) Pinv.at(r, c) = inv.at(r, P[q].rows + c);
      out.f[q] = mat_mul(m.f[q], Pinv);
    }
    return out;
  };

  SplitRow lower;
  lower.U = U;
  lower.V = Vc;
  lower.W = W;
  lower.p = conj_to(block_proj(*V, *U, *W, true), Vc);
  lower.q = conj_from(block_incl(*V, *U, *W, false), Vc);
  lower.k = conj_from(block_incl(*V, *U, *W, true), Vc);
  lower.l = conj_to(block_proj(*V, *U, *W, false), Vc);
  lower.validate();

  // upper row: plain direct sum with Ut and Wt
  ChainComplex* Vt = own(direct_sum(*Ut, *Wt));
  SplitRow upper;
  upper.U = Ut;
  upper.V = Vt;
  upper.W = Wt;
  upper.p = block_proj(*Vt, *Ut, *Wt, true);
  upper.q = block_incl(*Vt, *Ut, *Wt, false);
  upper.k = block_incl(*Vt, *Ut, *Wt, true);
  upper.l = block_proj(*Vt, *Ut, *Wt, false);
  upper.validate();

  // verticals
  ComplexMap f = random_chain_map(rng, *Ut, *U);
  // h: W + E -> W projection
  ComplexMap h = block_proj(*Wt, *W, *E, true);
  h.src = Wt;
  h.dst = W;
  // g = k f p~ + q h l~
  ComplexMap g = map_add(compose(lower.k, compose(f, upper.p)), compose(lower.q, compose(h, upper.l)));

  TrialData out = std::move(td);
  ComplexMap s = sector(h);
  out.result.sector_ok = map_equal(compose(h, s), identity_map(*W));

  CommutativeSquare sq;
  KeyQuadruple key = key_from_split_rows(upper, lower, f, g, h, s, &sq);
  out.result.key_ok = key_identity_holds(sq, key);
  out.result.key_digest = key.digest();

  // half-key lift with the tautological compatible pair (T = W of the
  // square, k1 = g1, k2 = g2)
  ComplexMap l = half_key_lift(sq, key.t1, key.t2, sq.g1, sq.g2);
  out.result.lift_ok = map_equal(compose(sq.g1, l), sq.g1) && map_equal(compose(sq.g2, l), sq.g2);

  // and a random compatible pair: k1 = g1 m, k2 = g2 m for random m
  ComplexMap mrand = random_chain_map(rng, *sq.W, *sq.W);
  ComplexMap k1 = compose(sq.g1, mrand);
  ComplexMap k2 = compose(sq.g2, mrand);
  ComplexMap l2 = half_key_lift(sq, key.t1, key.t2, k1, k2);
  out.result.lift_ok = out.result.lift_ok && map_equal(compose(sq.g1, l2), k1) && map_equal(compose(sq.g2, l2), k2);
  return out;
}

}  // namespace gentle::keys
