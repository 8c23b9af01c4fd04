#pragma once

// The derived self-intersection machinery: the Koszul model of
// aleph(V) = Lj^*(j_* V), its formal decomposition in the split model, the
// bounded approximations H^[n] with the comparison maps chi_n, the
// mince/canal exact sequence for the principal-parts instance, and the lax
// monoidal structures (cone products, the split shuffle, the H (+) U[-1]
// matrix product).

#include "sqz/functor.hpp"

namespace sqz {

// --- Koszul bimodel of a complex of B-modules ------------------------------------------

// Tot(C (x)_B Koszul) over A, with the augmentation edge to Cbar and the block
// layout exposed; homology computes the hypertor of C.
template <class K>
struct KoszulBimodel {
  ChainComplex<K> tot;
  ChainComplex<K> cbar;
  GradedMap<K> edge;  // tot -> cbar
  std::map<std::pair<int, int>, Eigen::Index> offsets;  // (i, j) block offsets
  std::vector<Eigen::Index> wcount;
  int len;
};

template <class K>
KoszulBimodel<K> koszul_bimodel(const SquareZero<K>& sq, const ChainComplex<K>& c, int len) {
  const int r = sq.rank;
  std::vector<Eigen::Index> wcount{1};
  for (int p = 1; p <= len + 1; ++p) wcount.push_back(wcount.back() * std::max(r, 0));
  std::map<std::pair<int, int>, Eigen::Index> offs;
  std::vector<Module<K>> terms;
  std::vector<Mat<K>> diffs;
  std::map<int, Module<K>> ca;
  for (int i = c.lo(); i <= c.hi(); ++i) ca.emplace(i, restrict_sigma(sq, c.term(i)));
  int tlo = c.lo() - len, thi = c.hi();
  for (int m = tlo; m <= thi; ++m) {
    std::vector<Module<K>> slice;
    Eigen::Index off = 0;
    for (int i = c.lo(); i <= c.hi(); ++i) {
      int j = i - m;
      if (j < 0 || j > len) continue;
      Eigen::Index bd = ca.at(i).dim() * wcount[j];
      if (bd == 0) continue;
      offs[{i, j}] = off;
      off += bd;
      for (Eigen::Index cc = 0; cc < wcount[j]; ++cc) slice.push_back(ca.at(i));
    }
    terms.push_back(slice.empty() ? Module<K>::zero(sq.base) : direct_sum(slice));
  }
  for (int m = tlo; m < thi; ++m) {
    Mat<K> d = zero_mat<K>(terms[m + 1 - tlo].dim(), terms[m - tlo].dim());
    for (int i = c.lo(); i <= c.hi(); ++i) {
      int j = i - m;
      if (j < 0 || j > len || !offs.count({i, j})) continue;
      Eigen::Index cd = ca.at(i).dim();
      if (cd == 0) continue;
      if (offs.count({i + 1, j}) && c.term(i + 1).dim() > 0) {
        Mat<K> dc = c.diff(i);
        for (Eigen::Index cc = 0; cc < wcount[j]; ++cc)
          d.block(offs.at({i + 1, j}) + cc * dc.rows(), offs.at({i, j}) + cc * dc.cols(),
                  dc.rows(), dc.cols()) = dc;
      }
      if (j - 1 >= 0 && offs.count({i, j - 1})) {
        K sgn = (i % 2 == 0) ? K(1) : K(-1);
        for (Eigen::Index w = 0; w < wcount[j]; ++w) {
          Eigen::Index s1 = w / wcount[j - 1];
          Eigen::Index tail = w % wcount[j - 1];
          d.block(offs.at({i, j - 1}) + tail * cd, offs.at({i, j}) + w * cd, cd, cd) =
              sgn * c.term(i).act(sq.ideal_gen(static_cast<int>(s1)));
        }
      }
    }
    diffs.push_back(std::move(d));
  }
  ChainComplex<K> tot(sq.base, tlo, std::move(terms), std::move(diffs), false);
  ChainComplex<K> cbar = j_upper(sq, c);
  CxPtr<K> totp = cxptr(tot), cbarp = cxptr(cbar);
  GradedMap<K> edge{totp, cbarp, 0, {}};
  for (int i = c.lo(); i <= c.hi(); ++i) {
    if (!offs.count({i, 0}) || cbar.term(i).dim() == 0) continue;
    BView<K> bv = bview(sq, c.term(i));
    Mat<K> m = zero_mat<K>(cbar.term(i).dim(), tot.term(i).dim());
    m.block(0, offs.at({i, 0}), bv.mbar.dim(), bv.v_as_a.dim()) = bv.mbar_proj.matrix;
    edge.set(i, m);
  }
  return {std::move(tot), std::move(cbar), std::move(edge), std::move(offs),
          std::move(wcount), len};
}

// Induced map of bimodels from a B-linear chain map (blockwise word copies).
template <class K>
GradedMap<K> bimodel_map(const SquareZero<K>& sq, const GradedMap<K>& f,
                         const KoszulBimodel<K>& src, const KoszulBimodel<K>& tgt) {
  CxPtr<K> sp = cxptr(src.tot), tp = cxptr(tgt.tot);
  GradedMap<K> out{sp, tp, f.degree, {}};
  for (int m = src.tot.lo(); m <= src.tot.hi(); ++m) {
    Mat<K> block = zero_mat<K>(tgt.tot.term(m + f.degree).dim(), src.tot.term(m).dim());
    bool nz = false;
    for (const auto& [ij, off] : src.offsets) {
      auto [i, j] = ij;
      if (i - j != m) continue;
      Mat<K> comp = f.at(i);
      if (is_zero_mat(comp)) continue;
      auto it = tgt.offsets.find({i + f.degree, j});
      if (it == tgt.offsets.end()) continue;
      for (Eigen::Index w = 0; w < src.wcount[j]; ++w) {
        block.block(it->second + w * comp.rows(), off + w * comp.cols(), comp.rows(),
                    comp.cols()) = comp;
      }
      nz = true;
    }
    if (nz) out.set(m, block);
  }
  return out;
}

// aleph(V) for a complex over A: the bimodel of the pushforward.
template <class K>
KoszulBimodel<K> aleph_model(const SquareZero<K>& sq, const ChainComplex<K>& v, int depth) {
  return koszul_bimodel(sq, j_lower(sq, v), depth);
}

// The split-model decomposition: an explicit isomorphism
// H^{-p}(aleph(V)) = I^{(x)p} (x) V for a module V.
template <class K>
bool gamma_sigma_decomposition_holds(const SquareZero<K>& sq, const Module<K>& v, int nmax) {
  ChainComplex<K> vc = ChainComplex<K>::single(v);
  KoszulBimodel<K> al = aleph_model(sq, vc, nmax + 2);
  Module<K> power = v;
  for (int p = 0; p <= nmax; ++p) {
    HomologyData<K> h = homology_at(al.tot, -p);
    if (h.module.dim() != power.dim()) return false;
    if (p > 0 && power.dim() > 0) {
      // the canonical map: block (0, p) classes -> I^{(x)p} (x) V coordinates
      Mat<K> inj = zero_mat<K>(al.tot.term(-p).dim(), power.dim());
      inj.block(al.offsets.at({0, p}), 0, power.dim(), power.dim()) =
          identity_mat<K>(power.dim());
      Mat<K> cls = zero_mat<K>(h.module.dim(), power.dim());
      for (Eigen::Index c = 0; c < power.dim(); ++c)
        cls.col(c) = h.class_of(Vec<K>(inj.col(c)), Mat<K>(h.cycles.transpose()));
      if (!is_invertible(cls)) return false;
      ModuleMap<K> check{power, h.module, cls};
      if (!check.is_equivariant()) return false;
    }
    if (p < nmax) power = itensor(sq, power);
  }
  return true;
}

// --- chi_n: the comparison aleph -> H^[n] -----------------------------------------------

// e: X -> j_lower(j_upper(X)) for a complex of B-modules (termwise reduction).
template <class K>
GradedMap<K> reduction_map(const SquareZero<K>& sq, const ChainComplex<K>& x) {
  ChainComplex<K> xbar = j_lower(sq, j_upper(sq, x));
  GradedMap<K> out{cxptr(x), cxptr(xbar), 0, {}};
  for (int n = x.lo(); n <= x.hi(); ++n) {
    BView<K> bv = bview(sq, x.term(n));
    if (!is_zero_mat(bv.mbar_proj.matrix)) out.set(n, bv.mbar_proj.matrix);
  }
  return out;
}

template <class K>
struct ChiData {
  EqualizerData<K> mu_eq;       // mu^[n](j V) over B
  KoszulBimodel<K> model_eq;    // Tot(mu^[n](jV) (x) Koszul)
  KoszulBimodel<K> model_v;     // aleph(V)
  GradedMap<K> to_aleph;        // model_eq -> aleph model (a quasi-isomorphism)
  GradedMap<K> to_hn;           // j^*(mu^[n](jV)) -> H^[n](V)
  EqualizerData<K> h_eq;        // H^[n](V)
  std::map<int, bool> verdict;  // homological degree p -> H_p(chi_n) iso
};

// The insertion c_m: j^*(mu^m(j V)) -> H^m(V).
template <class K>
GradedMap<K> mu_to_h_insertion(const SquareZero<K>& sq, const Operation<K>& mu_op,
                               const Operation<K>& h_op, const ChainComplex<K>& jv, int m) {
  ChainComplex<K> x = jv;  // mu^0(jV)
  std::vector<ChainComplex<K>> mupow{x};
  for (int i = 0; i < m; ++i) mupow.push_back(mu_op.apply(mupow.back()));
  // c_1 = id on H(V) = j* mu(j V)
  GradedMap<K> c = identity_chain_map(cxptr(j_upper(sq, mupow[std::min(1, m)])));
  if (m == 0) return identity_chain_map(cxptr(j_upper(sq, jv)));
  for (int lvl = 2; lvl <= m; ++lvl) {
    // j*( mu(e at mu^{lvl-1} jV) ): j* mu^{lvl} jV -> H(j* mu^{lvl-1} jV)
    GradedMap<K> e = reduction_map(sq, mupow[lvl - 1]);
    GradedMap<K> mue = mu_op.apply_map(e);
    GradedMap<K> step = j_upper_map(sq, mue);
    GradedMap<K> hc = h_op.apply_map(c);
    hc.src = step.tgt;
    GradedMap<K> next = compose(hc, step);
    c = next;
  }
  return c;
}

template <class K>
ChiData<K> chi_comparison(const SquareZero<K>& sq, const Operation<K>& mu_op,
                          const NatComponent<K>& nu, const Operation<K>& h_op,
                          const NatComponent<K>& psi, const ChainComplex<K>& v, int n) {
  ChainComplex<K> jv = j_lower(sq, v);
  // mu^[n](jV)
  std::vector<ChainComplex<K>> mupow{jv};
  for (int i = 0; i < std::max(n, 1); ++i) mupow.push_back(mu_op.apply(mupow.back()));
  EqualizerData<K> meq = std_equalizer(mu_op, nu, mupow, n);
  // the canonical quasi-isomorphism q_n: mu^[n](jV) -> jV via first projections
  GradedMap<K> q = meq.incl;
  for (int lvl = n; lvl >= 1; --lvl) {
    GradedMap<K> nu_l = nu(mupow[lvl - 1]);
    nu_l.src = q.tgt;
    q = compose(nu_l, q);
  }
  int depth = (v.hi() - v.lo()) + n + 3;
  KoszulBimodel<K> meq_model = koszul_bimodel(sq, meq.cx, depth);
  KoszulBimodel<K> v_model = aleph_model(sq, v, depth);
  GradedMap<K> a = bimodel_map(sq, q, meq_model, v_model);
  // j^*(mu^[n] jV) -> H^[n](V)
  GradedMap<K> jincl = j_upper_map(sq, meq.incl);
  GradedMap<K> cmap = mu_to_h_insertion(sq, mu_op, h_op, jv, n);
  cmap.src = jincl.tgt;
  GradedMap<K> to_hn_full = compose(cmap, jincl);
  std::vector<ChainComplex<K>> hpow{v};
  for (int i = 0; i < std::max(n, 1); ++i) hpow.push_back(h_op.apply(hpow.back()));
  EqualizerData<K> heq = std_equalizer(h_op, psi, hpow, n);
  GradedMap<K> to_hn{jincl.src, cxptr(heq.cx), 0, {}};
  for (int m = to_hn_full.src->lo(); m <= to_hn_full.src->hi(); ++m) {
    auto sol = solve_matrix<K>(heq.incl.at(m), to_hn_full.at(m));
    if (!sol) throw ValidationError("chi: insertion misses the equalizer");
    if (!is_zero_mat(*sol)) to_hn.set(m, *sol);
  }
  // per-degree verdicts: a is a qis; the composite through the edge must be an
  // iso on homology in degrees -n..0
  ChiData<K> out{std::move(meq), std::move(meq_model), std::move(v_model), std::move(a),
                 std::move(to_hn), std::move(heq), {}};
  GradedMap<K> through = compose(out.to_hn, out.model_eq.edge);
  for (int p = 0; p <= n + 1; ++p) {
    HomologyData<K> hx = homology_at(out.model_eq.tot, -p);
    HomologyData<K> ha = homology_at(out.model_v.tot, -p);
    HomologyData<K> hh = homology_at(out.h_eq.cx, -p);
    Mat<K> am = induced_homology_map(out.to_aleph, hx, ha, -p);
    Mat<K> tm = induced_homology_map(through, hx, hh, -p);
    bool ok = is_invertible(am) && (ha.module.dim() == hh.module.dim()) && is_invertible(tm);
    out.verdict[p] = ok;
  }
  return out;
}

// Simple system map H^[n+1] -> H^[n] (restriction of the first projection).
template <class K>
GradedMap<K> equalizer_system_map(const Operation<K>& h, const NatComponent<K>& psi,
                                  const std::vector<ChainComplex<K>>& hpow,
                                  const EqualizerData<K>& top, const EqualizerData<K>& bot,
                                  int n) {
  GradedMap<K> pi1 = psi(hpow[n]);
  pi1.src = top.incl.tgt;
  GradedMap<K> down = compose(pi1, top.incl);
  GradedMap<K> out{cxptr(top.cx), cxptr(bot.cx), 0, {}};
  for (int m = top.cx.lo(); m <= top.cx.hi(); ++m) {
    auto sol = solve_matrix<K>(bot.incl.at(m), down.at(m));
    if (!sol) throw ValidationError("equalizer system map: projection misses the equalizer");
    if (!is_zero_mat(*sol)) out.set(m, *sol);
  }
  return out;
}

// --- the mince/canal exact sequence for the principal-parts instance ----------------------

// H = cone(Omega (x) - -> P^1(-)) over A, with A-part N = Omega (x) -.
template <class K>
class OmegaTensorFunctor : public DgFunctor<K> {
 public:
  OmegaTensorFunctor(AlgebraPtr<K> a, std::shared_ptr<const KahlerData<K>> kd)
      : alg_(std::move(a)), kd_(std::move(kd)) {}
  ChainComplex<K> on_module(const Module<K>& v) const override {
    return ChainComplex<K>::single(tensor_over(kd_->omega, v).module);
  }
  GradedMap<K> on_map(const Module<K>& v, const Module<K>& w, const Mat<K>& f) const override {
    TensorData<K> ts = tensor_over(kd_->omega, v), tt = tensor_over(kd_->omega, w);
    GradedMap<K> out{cxptr(on_module(v)), cxptr(on_module(w)), 0, {}};
    Mat<K> m = tensor_map(ts, tt, identity_mat<K>(kd_->omega.dim()), f);
    if (!is_zero_mat(m)) out.set(0, m);
    return out;
  }
  AlgebraPtr<K> domain() const override { return alg_; }
  AlgebraPtr<K> codomain() const override { return alg_; }
  const KahlerData<K>& kd() const { return *kd_; }

 private:
  AlgebraPtr<K> alg_;
  std::shared_ptr<const KahlerData<K>> kd_;
};

template <class K>
class PpFunctor : public DgFunctor<K> {
 public:
  PpFunctor(AlgebraPtr<K> a, std::shared_ptr<const KahlerData<K>> kd)
      : alg_(std::move(a)), kd_(std::move(kd)) {}
  ChainComplex<K> on_module(const Module<K>& v) const override {
    return ChainComplex<K>::single(principal_parts(*kd_, v).module);
  }
  GradedMap<K> on_map(const Module<K>& v, const Module<K>& w, const Mat<K>& f) const override {
    PrincipalParts<K> ps = principal_parts(*kd_, v), pt = principal_parts(*kd_, w);
    GradedMap<K> out{cxptr(on_module(v)), cxptr(on_module(w)), 0, {}};
    Mat<K> m = principal_parts_map(*kd_, ps, pt, f);
    if (!is_zero_mat(m)) out.set(0, m);
    return out;
  }
  AlgebraPtr<K> domain() const override { return alg_; }
  AlgebraPtr<K> codomain() const override { return alg_; }

 private:
  AlgebraPtr<K> alg_;
  std::shared_ptr<const KahlerData<K>> kd_;
};

// Omega (x) - -> P^1(-), the kernel inclusion of the principal parts sequence.
template <class K>
class OmegaToPpNat : public DgNat<K> {
 public:
  OmegaToPpNat(std::shared_ptr<const OmegaTensorFunctor<K>> src,
               std::shared_ptr<const PpFunctor<K>> tgt,
               std::shared_ptr<const KahlerData<K>> kd)
      : src_(std::move(src)), tgt_(std::move(tgt)), kd_(std::move(kd)) {}
  GradedMap<K> on_module(const Module<K>& v) const override {
    PrincipalParts<K> pp = principal_parts(*kd_, v);
    GradedMap<K> out{cxptr(src_->on_module(v)), cxptr(tgt_->on_module(v)), 0, {}};
    if (!is_zero_mat(pp.incl.matrix)) out.set(0, pp.incl.matrix);
    return out;
  }
  FunctorPtr<K> source() const override { return src_; }
  FunctorPtr<K> target() const override { return tgt_; }

 private:
  std::shared_ptr<const OmegaTensorFunctor<K>> src_;
  std::shared_ptr<const PpFunctor<K>> tgt_;
  std::shared_ptr<const KahlerData<K>> kd_;
};

// Psi: cone(Omega (x) - -> P^1) -> id, the projection.
template <class K>
class PpConeToIdNat : public DgNat<K> {
 public:
  PpConeToIdNat(std::shared_ptr<const ConeOfNatFunctor<K>> h, FunctorPtr<K> idf,
                std::shared_ptr<const KahlerData<K>> kd)
      : h_(std::move(h)), id_(std::move(idf)), kd_(std::move(kd)) {}
  GradedMap<K> on_module(const Module<K>& v) const override {
    ChainComplex<K> hv = h_->on_module(v);
    PrincipalParts<K> pp = principal_parts(*kd_, v);
    GradedMap<K> out{cxptr(hv), cxptr(ChainComplex<K>::single(v)), 0, {}};
    if (v.dim() > 0) out.set(0, pp.proj.matrix);
    return out;
  }
  FunctorPtr<K> source() const override { return h_; }
  FunctorPtr<K> target() const override { return id_; }

 private:
  std::shared_ptr<const ConeOfNatFunctor<K>> h_;
  FunctorPtr<K> id_;
  std::shared_ptr<const KahlerData<K>> kd_;
};

// Z = U o (Omega (x) -) with its inclusion into H and the factoring nu of
// H(Psi) - Psi_H through it; then the canal sequence ranks.
template <class K>
struct CanalData {
  std::map<int, bool> degreewise_exact;  // per cohomological degree
};

template <class K>
CanalData<K> canal_sequence(const Operation<K>& h_op, const NatComponent<K>& psi,
                            const FunctorPtr<K>& omega_tensor, const FunctorPtr<K>& u_functor,
                            const NatComponent<K>& alpha_incl, const ChainComplex<K>& k, int n) {
  // equalizers H^[n-1], H^[n], H^[n+1]
  std::vector<ChainComplex<K>> hpow{k};
  for (int i = 0; i < n + 1; ++i) hpow.push_back(h_op.apply(hpow.back()));
  EqualizerData<K> eq_nm1 = std_equalizer(h_op, psi, hpow, n - 1);
  EqualizerData<K> eq_n = std_equalizer(h_op, psi, hpow, n);
  EqualizerData<K> eq_np1 = std_equalizer(h_op, psi, hpow, n + 1);
  // x: H^[n+1] -> H(H^[n]) through H(incl_n)
  GradedMap<K> hincl = h_op.apply_map(eq_n.incl);
  ChainComplex<K> h_of_eqn = h_op.apply(eq_n.cx);
  GradedMap<K> x{cxptr(eq_np1.cx), cxptr(h_of_eqn), 0, {}};
  for (int m = eq_np1.cx.lo(); m <= eq_np1.cx.hi(); ++m) {
    auto sol = solve_matrix<K>(hincl.at(m), eq_np1.incl.at(m));
    if (!sol) throw ValidationError("canal: H^{[n+1]} does not factor through H(H^{[n]})");
    if (!is_zero_mat(*sol)) x.set(m, *sol);
  }
  // nu-hat at X = H^[n-1]: solve zeta o nu = H(Psi_X) - Psi_{H(X)}
  const ChainComplex<K>& xc = eq_nm1.cx;
  GradedMap<K> psix = psi(xc);
  GradedMap<K> hpsi = h_op.apply_map(psix);   // H(Psi_X): H(H X) -> H(X)
  GradedMap<K> psih = psi(*psix.src);         // Psi_{H(X)}: H(H X) -> H(X)
  psih.tgt = hpsi.tgt;
  GradedMap<K> diff = sub(hpsi, psih);
  // zeta: U(A(X)) -> H(X): identity and alpha
  ChainComplex<K> ax = omega_tensor->apply(xc);
  ChainComplex<K> uax = u_functor->apply(ax);
  GradedMap<K> alpha = alpha_incl(xc);
  ChainComplex<K> hx = *psix.src;
  GradedMap<K> zeta{cxptr(uax), cxptr(hx), 0, {}};
  for (int m = uax.lo(); m <= uax.hi(); ++m) {
    // U(A(X))^m = A(X)^{m+1} (+) A(X)^m; H(X)^m = A(X)^{m+1} (+) P(X)^m
    Eigen::Index a1 = ax.term(m + 1).dim(), a0 = ax.term(m).dim();
    Eigen::Index p0 = hx.term(m).dim() - a1;
    Mat<K> block = zero_mat<K>(a1 + p0, a1 + a0);
    if (a1 > 0) block.block(0, 0, a1, a1) = identity_mat<K>(a1);
    if (a0 > 0 && p0 > 0) block.block(a1, a1, p0, a0) = alpha.at(m);
    if (!is_zero_mat(block)) zeta.set(m, block);
  }
  GradedMap<K> nuhat{hpsi.src, cxptr(uax), 0, {}};
  for (int m = hpsi.src->lo(); m <= hpsi.src->hi(); ++m) {
    auto sol = solve_matrix<K>(zeta.at(m), diff.at(m));
    if (!sol) throw ValidationError("canal: H(Psi) - Psi_H does not factor through U o A");
    if (!is_zero_mat(*sol)) nuhat.set(m, *sol);
  }
  // the sequence map y: H(H^[n]) -> U(A(H^[n-1]))
  GradedMap<K> in_map{cxptr(eq_n.cx), psix.src, 0, {}};
  {
    GradedMap<K> hincl_nm1 = h_op.apply_map(eq_nm1.incl);
    for (int m = eq_n.cx.lo(); m <= eq_n.cx.hi(); ++m) {
      auto sol = solve_matrix<K>(hincl_nm1.at(m), eq_n.incl.at(m));
      if (!sol) throw ValidationError("canal: H^{[n]} does not factor through H(H^{[n-1]})");
      if (!is_zero_mat(*sol)) in_map.set(m, *sol);
    }
  }
  GradedMap<K> hin = h_op.apply_map(in_map);
  GradedMap<K> y = compose(nuhat, hin);
  y.src = cxptr(h_of_eqn);
  // exactness: degreewise dimension counts and ranks
  CanalData<K> out;
  for (int m = h_of_eqn.lo(); m <= h_of_eqn.hi(); ++m) {
    Eigen::Index dim_a = eq_np1.cx.term(m).dim();
    Eigen::Index dim_b = h_of_eqn.term(m).dim();
    Eigen::Index dim_c = uax.term(m).dim();
    bool ok = true;
    ok = ok && (rank(x.at(m)) == dim_a);
    ok = ok && (rank(y.at(m)) == dim_c);
    ok = ok && (dim_a + dim_c == dim_b);
    ok = ok && is_zero_mat(Mat<K>(y.at(m) * x.at(m)));
    out.degreewise_exact[m] = ok;
  }
  return out;
}

}  // namespace sqz
