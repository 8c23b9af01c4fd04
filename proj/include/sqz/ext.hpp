#pragma once

// Free resolutions (of modules and of bounded complexes), hom complexes with
// explicit bases, Ext groups with a pivot-normalized class representation,
// Yoneda splices of 4-term sequences, Atiyah classes, and the lifting
// machinery used everywhere above (comparison lifts, lifts through surjective
// quasi-isomorphisms, connecting maps).

#include "sqz/complex.hpp"
#include "sqz/kahler.hpp"

namespace sqz {

// Solve post о X о pre = rhs for X in the given hom space.
template <class K>
std::optional<Vec<K>> solve_in_hom(const HomData<K>& hd, const Mat<K>& post, const Mat<K>& pre,
                                   const Mat<K>& rhs) {
  const Eigen::Index n = static_cast<Eigen::Index>(hd.basis.size());
  Mat<K> sys = zero_mat<K>(rhs.size(), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Mat<K> img = post * hd.basis[i] * pre;
    sys.col(i) = Eigen::Map<const Vec<K>>(img.data(), img.size());
  }
  Vec<K> r = Eigen::Map<const Vec<K>>(rhs.data(), rhs.size());
  return solve<K>(sys, r);
}

// --- resolutions -----------------------------------------------------------------

template <class K>
struct Resolution {
  ChainComplex<K> cx;  // free terms in degrees -L..0
  Module<K> target;
  Mat<K> augment;  // P^0 -> M, surjective; exact in degrees > -L
};

template <class K>
Resolution<K> free_resolution(const Module<K>& m, int length, bool minimal = true) {
  std::vector<Module<K>> terms;
  std::vector<Mat<K>> diffs;
  FreeCover<K> c0 = free_cover(m, minimal);
  terms.push_back(c0.free);
  Mat<K> augment = c0.onto.matrix;
  ModuleMap<K> onto = c0.onto;
  for (int i = 1; i <= length; ++i) {
    auto [ker, incl] = kernel(onto);
    FreeCover<K> ci = free_cover(ker, minimal);
    terms.push_back(ci.free);
    diffs.push_back(Mat<K>(incl.matrix * ci.onto.matrix));
    onto = ModuleMap<K>{ci.free, ker, ci.onto.matrix};
  }
  std::reverse(terms.begin(), terms.end());
  std::reverse(diffs.begin(), diffs.end());
  return {ChainComplex<K>(m.algebra(), -length, std::move(terms), std::move(diffs)), m, augment};
}

// Comparison lift of f: M -> N to the resolutions, commuting with the
// augmentations.
template <class K>
GradedMap<K> lift_to_resolutions(const ModuleMap<K>& f, const Resolution<K>& rm,
                                 const Resolution<K>& rn) {
  CxPtr<K> pm = cxptr(rm.cx), pn = cxptr(rn.cx);
  GradedMap<K> out{pm, pn, 0, {}};
  Mat<K> prev;  // f_{i-1}
  for (int n = 0; n >= rm.cx.lo(); --n) {
    const Module<K>& src = rm.cx.term(n);
    const Module<K>& tgt = rn.cx.term(n);
    if (src.dim() == 0) break;
    HomData<K> hd = hom_over(src, tgt);
    Mat<K> post, rhs;
    if (n == 0) {
      post = rn.augment;
      rhs = f.matrix * rm.augment;
    } else {
      post = rn.cx.diff(n);
      rhs = prev * rm.cx.diff(n);
    }
    auto sol = solve_in_hom(hd, post, identity_mat<K>(src.dim()), rhs);
    if (!sol) throw ValidationError("lift_to_resolutions: comparison lift failed");
    Mat<K> fi = hd.from_coords(*sol);
    if (!is_zero_mat(fi)) out.set(n, fi);
    prev = fi;
  }
  return out;
}

// Free approximation of a bounded complex: a complex of free modules with a
// surjective quasi-isomorphism onto it, built degreewise from the top; stupid
// truncation at lo - extra_depth (homology there is a guard band).
template <class K>
struct FreeApprox {
  ChainComplex<K> cx;
  GradedMap<K> onto;  // surjective qis onto the input, degree 0
};

template <class K>
FreeApprox<K> free_approx(const ChainComplex<K>& c, int extra_depth, bool minimal = true) {
  const int top = c.hi(), bottom = c.lo() - extra_depth;
  std::map<int, Module<K>> terms;
  std::map<int, Mat<K>> eps, dd;  // eps^n: F^n -> C^n, dd^n: F^n -> F^{n+1}
  for (int n = top; n >= bottom; --n) {
    if (n == top) {
      FreeCover<K> fc = free_cover(c.term(n), minimal);
      terms.emplace(n, fc.free);
      eps[n] = fc.onto.matrix;
      continue;
    }
    // T^n = {(m, x) in C^n (+) F^{n+1} : d m = eps x, d_F x = 0}
    const Module<K>& fn1 = terms.at(n + 1);
    Module<K> prod = direct_sum<K>({c.term(n), fn1});
    Eigen::Index cd = c.term(n).dim(), fd = fn1.dim();
    Mat<K> dF = (n + 1 < top) ? dd.at(n + 1) : zero_mat<K>(0, fd);
    Mat<K> sys = zero_mat<K>(c.term(n + 1).dim() + dF.rows(), cd + fd);
    sys.block(0, 0, c.term(n + 1).dim(), cd) = c.diff(n);
    sys.block(0, cd, c.term(n + 1).dim(), fd) = -eps.at(n + 1);
    if (dF.rows() > 0) sys.block(c.term(n + 1).dim(), cd, dF.rows(), fd) = dF;
    auto [tmod, incl] = submodule(prod, Subspace<K>(cd + fd, kernel_basis(sys)));
    FreeCover<K> fc = free_cover(tmod, minimal);
    Mat<K> to_prod = incl.matrix * fc.onto.matrix;
    terms.emplace(n, fc.free);
    eps[n] = to_prod.topRows(cd);
    dd[n] = to_prod.bottomRows(fd);
  }
  std::vector<Module<K>> ts;
  std::vector<Mat<K>> ds;
  for (int n = bottom; n <= top; ++n) ts.push_back(terms.at(n));
  for (int n = bottom; n < top; ++n) ds.push_back(dd.at(n));
  ChainComplex<K> fcx(c.algebra(), bottom, std::move(ts), std::move(ds));
  GradedMap<K> onto{cxptr(fcx), cxptr(c), 0, {}};
  for (int n = bottom; n <= top; ++n)
    if (!is_zero_mat(eps.at(n))) onto.set(n, eps.at(n));
  return {std::move(fcx), std::move(onto)};
}

// --- hom complexes -----------------------------------------------------------------

template <class K>
struct HomComplex {
  CxPtr<K> a, b;
  ChainComplex<K> cx;  // complex of k-spaces (modules over the ground field)
  std::map<std::pair<int, int>, HomData<K>> blocks;  // (degree n, source degree p)
  std::map<std::pair<int, int>, Eigen::Index> offsets;
  std::map<int, Eigen::Index> dims;

  Vec<K> to_coords(const GradedMap<K>& f) const {
    Eigen::Index total = dims.count(f.degree) ? dims.at(f.degree) : 0;
    Vec<K> out = Vec<K>::Constant(total, K(0));
    for (int p = a->lo(); p <= a->hi(); ++p) {
      auto it = blocks.find({f.degree, p});
      if (it == blocks.end()) continue;
      Vec<K> c = it->second.to_coords(f.at(p));
      out.segment(offsets.at({f.degree, p}), c.size()) = c;
    }
    return out;
  }
  GradedMap<K> from_coords(int degree, const Vec<K>& coords) const {
    GradedMap<K> f{a, b, degree, {}};
    for (int p = a->lo(); p <= a->hi(); ++p) {
      auto it = blocks.find({degree, p});
      if (it == blocks.end()) continue;
      Eigen::Index off = offsets.at({degree, p});
      Eigen::Index sz = static_cast<Eigen::Index>(it->second.basis.size());
      Mat<K> comp = it->second.from_coords(Vec<K>(coords.segment(off, sz)));
      if (!is_zero_mat(comp)) f.set(p, comp);
    }
    return f;
  }
};

template <class K>
HomComplex<K> hom_complex(CxPtr<K> a, CxPtr<K> b) {
  std::map<std::pair<int, int>, HomData<K>> blocks;
  std::map<std::pair<int, int>, Eigen::Index> offsets;
  std::map<int, Eigen::Index> dims;
  int nlo = b->lo() - a->hi(), nhi = b->hi() - a->lo();
  for (int n = nlo; n <= nhi; ++n) {
    Eigen::Index off = 0;
    for (int p = a->lo(); p <= a->hi(); ++p) {
      if (p + n < b->lo() || p + n > b->hi()) continue;
      HomData<K> hd = hom_over(a->term(p), b->term(p + n));
      offsets[{n, p}] = off;
      off += static_cast<Eigen::Index>(hd.basis.size());
      blocks.emplace(std::make_pair(n, p), std::move(hd));
    }
    dims[n] = off;
  }
  auto kk = ground_field<K>();
  std::vector<Module<K>> terms;
  std::vector<Mat<K>> diffs;
  for (int n = nlo; n <= nhi; ++n)
    terms.push_back(Module<K>(kk, {identity_mat<K>(dims.at(n))}, false));
  for (int n = nlo; n < nhi; ++n) {
    Mat<K> d = zero_mat<K>(dims.at(n + 1), dims.at(n));
    for (int p = a->lo(); p <= a->hi(); ++p) {
      auto it = blocks.find({n, p});
      if (it == blocks.end()) continue;
      const HomData<K>& hd = it->second;
      K sgn = (n % 2 == 0) ? K(-1) : K(1);  // (-1)^{n+1}
      for (size_t bidx = 0; bidx < hd.basis.size(); ++bidx) {
        Eigen::Index col = offsets.at({n, p}) + static_cast<Eigen::Index>(bidx);
        // d_b о f lands in block (n+1, p)
        if (auto jt = blocks.find({n + 1, p}); jt != blocks.end()) {
          Vec<K> c = jt->second.to_coords(Mat<K>(b->diff(p + n) * hd.basis[bidx]));
          if (c.size() > 0) d.block(offsets.at({n + 1, p}), col, c.size(), 1) = c;
        }
        // (-1)^{n+1} f о d_a lands in block (n+1, p-1)
        if (auto jt = blocks.find({n + 1, p - 1}); jt != blocks.end()) {
          Vec<K> c = jt->second.to_coords(Mat<K>(sgn * hd.basis[bidx] * a->diff(p - 1)));
          if (c.size() > 0) d.block(offsets.at({n + 1, p - 1}), col, c.size(), 1) = c;
        }
      }
    }
    diffs.push_back(std::move(d));
  }
  ChainComplex<K> cx(kk, nlo, std::move(terms), std::move(diffs));
  return HomComplex<K>{std::move(a), std::move(b), std::move(cx), std::move(blocks),
                       std::move(offsets), std::move(dims)};
}

template <class K>
bool hom_is_closed(const HomComplex<K>& hc, const GradedMap<K>& f) {
  return is_zero_mat(Mat<K>(hc.cx.diff(f.degree) * hc.to_coords(f)));
}

// Write f = delta(x); the homotopy witness when it exists.
template <class K>
std::optional<GradedMap<K>> hom_write_as_boundary(const HomComplex<K>& hc,
                                                  const GradedMap<K>& f) {
  Vec<K> c = hc.to_coords(f);
  auto x = solve<K>(hc.cx.diff(f.degree - 1), c);
  if (!x) return std::nullopt;
  return hc.from_coords(f.degree - 1, *x);
}

// --- Ext ---------------------------------------------------------------------------

template <class K>
struct ExtSpace {
  Module<K> source, target;
  int degree;
  Resolution<K> res;
  HomComplex<K> hom;
  HomologyData<K> h;  // at the Ext degree

  Eigen::Index dim() const { return h.module.dim(); }

  // normalized coordinates of a cocycle P_p -> N
  Vec<K> normalize(const Mat<K>& cocycle) const {
    GradedMap<K> f{hom.a, hom.b, degree, {}};
    if (!is_zero_mat(cocycle)) f.set(-degree, cocycle);
    Vec<K> c = hom.to_coords(f);
    return h.class_of(c, Mat<K>(h.cycles.transpose()));
  }
  Mat<K> cocycle_of_class(const Vec<K>& cls) const {
    Vec<K> c = h.representative * cls;
    return hom.from_coords(degree, c).at(-degree);
  }
};

template <class K>
ExtSpace<K> ext_space(const Module<K>& m, const Module<K>& n, int p) {
  Resolution<K> res = free_resolution(m, p + 1);
  HomComplex<K> hc = hom_complex(cxptr(res.cx), cxptr(ChainComplex<K>::single(n)));
  HomologyData<K> h = homology_at(hc.cx, p);
  return {m, n, p, std::move(res), std::move(hc), std::move(h)};
}

template <class K>
struct ExtClass {
  int degree = 0;
  Vec<K> coords;  // normalized
  bool is_zero() const { return coords.size() == 0 || is_zero_mat(Mat<K>(coords)); }
  friend bool operator==(const ExtClass& a, const ExtClass& b) {
    return a.degree == b.degree && a.coords == b.coords;
  }
};

// --- extensions and splices ---------------------------------------------------------

// Class of 0 -> N -> Z -> M -> 0 in Ext^1(M, N).
template <class K>
ExtClass<K> extension_class(const ExtSpace<K>& es, const ModuleMap<K>& incl,
                            const ModuleMap<K>& proj) {
  if (es.degree != 1) throw InputError("extension_class: Ext^1 space required");
  const Module<K>& p0 = es.res.cx.term(0);
  const Module<K>& p1 = es.res.cx.term(-1);
  HomData<K> h0 = hom_over(p0, proj.src);
  auto u0c = solve_in_hom(h0, proj.matrix, identity_mat<K>(p0.dim()), es.res.augment);
  if (!u0c) throw ValidationError("extension_class: cannot lift the augmentation");
  Mat<K> u0 = h0.from_coords(*u0c);
  HomData<K> h1 = hom_over(p1, incl.src);
  auto u1c = solve_in_hom(h1, incl.matrix, identity_mat<K>(p1.dim()),
                          Mat<K>(u0 * es.res.cx.diff(-1)));
  if (!u1c) throw ValidationError("extension_class: boundary does not factor");
  return {1, es.normalize(h1.from_coords(*u1c))};
}

// Realize a class e in Ext^1(M, N) as 0 -> N -> Z -> M -> 0.
template <class K>
struct Extension {
  Module<K> total;
  ModuleMap<K> incl;  // N -> Z
  ModuleMap<K> proj;  // Z -> M
};

template <class K>
Extension<K> realize_ext1(const ExtSpace<K>& es, const ExtClass<K>& e) {
  if (es.degree != 1) throw InputError("realize_ext1: Ext^1 space required");
  Mat<K> c = es.cocycle_of_class(e.coords);  // P_1 -> N
  const Module<K>& p0 = es.res.cx.term(0);
  const Module<K>& n = es.target;
  // K1 = ker(augment) = im(d^{-1}), c factors through d^{-1} corestricted
  auto [k1, k1incl] = kernel(ModuleMap<K>{p0, es.res.target, es.res.augment});
  auto d1k = solve_matrix<K>(k1incl.matrix, es.res.cx.diff(-1));
  if (!d1k) throw ValidationError("realize_ext1: resolution is not exact");
  HomData<K> hk1n = hom_over(k1, n);
  auto cbar = solve_in_hom(hk1n, identity_mat<K>(n.dim()), *d1k, c);
  if (!cbar) throw ValidationError("realize_ext1: cocycle does not factor");
  Mat<K> cb = hk1n.from_coords(*cbar);
  // Z = (N (+) P0) / {(cb x, -incl x)}
  Module<K> sum = direct_sum<K>({n, p0});
  Mat<K> anti = zero_mat<K>(k1.dim(), n.dim() + p0.dim());
  anti.block(0, 0, k1.dim(), n.dim()) = cb.transpose();
  anti.block(0, n.dim(), k1.dim(), p0.dim()) = -k1incl.matrix.transpose();
  auto [z, proj, sec] = quotient_module(sum, Subspace<K>(n.dim() + p0.dim(), anti));
  (void)sec;
  Mat<K> ni = zero_mat<K>(n.dim() + p0.dim(), n.dim());
  ni.topRows(n.dim()) = identity_mat<K>(n.dim());
  Mat<K> zin = proj.matrix * ni;
  // Z -> M descends from (0, augment)
  Mat<K> zp = zero_mat<K>(es.res.target.dim(), n.dim() + p0.dim());
  zp.rightCols(p0.dim()) = es.res.augment;
  auto zproj = solve_matrix<K>(Mat<K>(proj.matrix.transpose()),
                               Mat<K>(zp.transpose()));
  if (!zproj) throw ValidationError("realize_ext1: projection does not descend");
  Extension<K> out{z, ModuleMap<K>{n, z, zin}, ModuleMap<K>{z, es.res.target, zproj->transpose()}};
  out.incl.check();
  out.proj.check();
  return out;
}

// Yoneda splice of an exact 0 -> W -> X -> Y -> Z -> 0 into Ext^2(Z, W).
// rand_offset picks a different lift (the class must not depend on it).
template <class K>
ExtClass<K> yoneda_splice(const ExtSpace<K>& es, const ModuleMap<K>& a, const ModuleMap<K>& b,
                          const ModuleMap<K>& c, unsigned rand_offset = 0) {
  if (es.degree != 2) throw InputError("yoneda_splice: Ext^2 space required");
  // exactness
  if (rank(a.matrix) != a.src.dim()) throw InputError("yoneda_splice: W -> X not injective");
  if (rank(c.matrix) != c.tgt.dim()) throw InputError("yoneda_splice: Y -> Z not surjective");
  Mat<K> ib = image_basis(b.matrix), kc = kernel_basis(c.matrix);
  if (!(Subspace<K>(b.tgt.dim(), ib) == Subspace<K>(b.tgt.dim(), kc)))
    throw InputError("yoneda_splice: not exact at the third term");
  Mat<K> ia = image_basis(a.matrix), kb = kernel_basis(b.matrix);
  if (!(Subspace<K>(a.tgt.dim(), ia) == Subspace<K>(a.tgt.dim(), kb)))
    throw InputError("yoneda_splice: not exact at the second term");
  if (!is_zero_mat(Mat<K>(b.matrix * a.matrix)) || !is_zero_mat(Mat<K>(c.matrix * b.matrix)))
    throw InputError("yoneda_splice: consecutive maps do not compose to zero");

  const Module<K>& p0 = es.res.cx.term(0);
  const Module<K>& p1 = es.res.cx.term(-1);
  const Module<K>& p2 = es.res.cx.term(-2);
  auto pick = [&](const HomData<K>& hd, const Mat<K>& post, const Mat<K>& rhs,
                  unsigned salt) -> Mat<K> {
    auto part = solve_in_hom(hd, post, identity_mat<K>(hd.cols), rhs);
    if (!part) throw ValidationError("yoneda_splice: lift failed");
    Mat<K> x = hd.from_coords(*part);
    if (salt) {
      // shift by an element of the solution kernel for lift-independence tests
      Mat<K> sys = zero_mat<K>(post.rows() * x.cols(), static_cast<Eigen::Index>(hd.basis.size()));
      for (size_t i = 0; i < hd.basis.size(); ++i) {
        Mat<K> img = post * hd.basis[i];
        sys.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Vec<K>>(img.data(), img.size());
      }
      Mat<K> kerb = kernel_basis(sys);
      std::mt19937_64 rng(salt);
      Vec<K> mix = Vec<K>::Constant(static_cast<Eigen::Index>(hd.basis.size()), K(0));
      for (Eigen::Index r = 0; r < kerb.rows(); ++r)
        mix += ScalarSampler<K>::sample(rng) * kerb.row(r).transpose();
      x += hd.from_coords(mix);
    }
    return x;
  };
  HomData<K> h0 = hom_over(p0, c.src);
  Mat<K> u0 = pick(h0, c.matrix, es.res.augment, rand_offset ? rand_offset + 1 : 0);
  HomData<K> h1 = hom_over(p1, b.src);
  Mat<K> u1 = pick(h1, b.matrix, Mat<K>(u0 * es.res.cx.diff(-1)), rand_offset ? rand_offset + 2 : 0);
  HomData<K> h2 = hom_over(p2, a.src);
  Mat<K> u2 = pick(h2, a.matrix, Mat<K>(u1 * es.res.cx.diff(-2)), 0);
  return {2, es.normalize(u2)};
}

// Atiyah class of M: the class of 0 -> Omega (x) M -> P^1(M) -> M -> 0.
template <class K>
ExtClass<K> atiyah_class(const KahlerData<K>& kd, const Module<K>& m,
                         const PrincipalParts<K>& pp, const ExtSpace<K>& es) {
  return extension_class(es, pp.incl, pp.proj);
}

// --- lifting through surjective quasi-isomorphisms -----------------------------------

// Kernel subcomplex of a termwise-surjective chain map.
template <class K>
std::pair<ChainComplex<K>, GradedMap<K>> kernel_subcomplex(const GradedMap<K>& eps) {
  std::vector<Module<K>> terms;
  std::vector<Mat<K>> incls, diffs;
  const ChainComplex<K>& q = *eps.src;
  for (int n = q.lo(); n <= q.hi(); ++n) {
    auto [kmod, kincl] = submodule(q.term(n), Subspace<K>(q.term(n).dim(), kernel_basis(eps.at(n))));
    terms.push_back(kmod);
    incls.push_back(kincl.matrix);
  }
  for (int n = q.lo(); n < q.hi(); ++n) {
    auto d = solve_matrix<K>(incls[n + 1 - q.lo()], Mat<K>(q.diff(n) * incls[n - q.lo()]));
    if (!d) throw ValidationError("kernel_subcomplex: differential does not restrict");
    diffs.push_back(*d);
  }
  ChainComplex<K> kc(q.algebra(), q.lo(), std::move(terms), std::move(diffs));
  GradedMap<K> incl{cxptr(kc), eps.src, 0, {}};
  for (int n = q.lo(); n <= q.hi(); ++n)
    if (kc.term(n).dim() > 0) incl.set(n, incls[n - q.lo()]);
  return {std::move(kc), std::move(incl)};
}

// Given f: X -> N closed and eps: Q -> N a termwise-surjective
// quasi-isomorphism with X bounded free, produce g: X -> Q with eps о g = f.
template <class K>
GradedMap<K> lift_through_qis(const GradedMap<K>& f, const GradedMap<K>& eps) {
  const ChainComplex<K>& x = *f.src;
  const ChainComplex<K>& q = *eps.src;
  GradedMap<K> g0{f.src, eps.src, 0, {}};
  for (int n = x.lo(); n <= x.hi(); ++n) {
    if (x.term(n).dim() == 0) continue;
    HomData<K> hd = hom_over(x.term(n), q.term(n));
    auto sol = solve_in_hom(hd, eps.at(n), identity_mat<K>(x.term(n).dim()), f.at(n));
    if (!sol) throw ValidationError("lift_through_qis: degreewise lift failed");
    Mat<K> m = hd.from_coords(*sol);
    if (!is_zero_mat(m)) g0.set(n, m);
  }
  GradedMap<K> obst = hom_delta(g0);  // valued in ker eps
  auto [kc, kincl] = kernel_subcomplex(eps);
  CxPtr<K> kp = kincl.src;
  // rewrite obst through the kernel inclusion
  GradedMap<K> eta{f.src, kp, 1, {}};
  for (int n = x.lo(); n <= x.hi(); ++n) {
    Mat<K> o = obst.at(n);
    if (is_zero_mat(o)) continue;
    auto sol = solve_matrix<K>(kincl.at(n + 1), o);
    if (!sol) throw ValidationError("lift_through_qis: obstruction not valued in the kernel");
    eta.set(n, *sol);
  }
  HomComplex<K> hk = hom_complex(f.src, kp);
  Vec<K> target = hk.to_coords(eta);
  auto hsol = solve<K>(hk.cx.diff(0), target);
  if (!hsol) throw ValidationError("lift_through_qis: homotopy correction failed");
  GradedMap<K> h = hk.from_coords(0, *hsol);
  GradedMap<K> hq = compose(kincl, h);
  return sub(g0, hq);
}

// --- connecting maps ------------------------------------------------------------------

// Connecting map H^n(Z) -> H^{n+1}(X) of a termwise-exact 0 -> X -> Y -> Z -> 0.
template <class K>
Mat<K> connecting_map(const GradedMap<K>& incl, const GradedMap<K>& proj, int n,
                      const HomologyData<K>& hz, const HomologyData<K>& hx1) {
  const ChainComplex<K>& y = *incl.tgt;
  Mat<K> out = zero_mat<K>(hx1.module.dim(), hz.module.dim());
  for (Eigen::Index j = 0; j < hz.module.dim(); ++j) {
    Vec<K> z = hz.representative.col(j);
    auto yl = solve<K>(proj.at(n), z);
    if (!yl) throw ValidationError("connecting_map: projection not surjective");
    Vec<K> dy = y.diff(n) * (*yl);
    auto xl = solve<K>(incl.at(n + 1), dy);
    if (!xl) throw ValidationError("connecting_map: boundary not in the kernel");
    out.col(j) = hx1.class_of(*xl, Mat<K>(hx1.cycles.transpose()));
  }
  return out;
}

}  // namespace sqz
