#pragma once

// Bounded cohomological chain complexes of modules over a fixed algebra.
//
// SIGN TABLE (the single source of truth; every other header imports these):
//   differential      d^n: X^n -> X^{n+1}, d о d = 0
//   shift             X[s]^n = X^{n+s},  d_{X[s]} = (-1)^s d_X;
//                     morphisms shift without sign
//   cone(f: K -> L)   C^n = K^{n+1} (+) L^n,  d_C = [[-d_K, 0], [f, d_L]]
//   hom differential  delta_n(f) = d_L о f + (-1)^{n+1} f о d_K   (hom_delta)
//   bracket           [phi] = phi о d - d о phi for a degree-0 dashed map
//                     (= -delta_0), and hom_delta for degree -1 homotopies;
//                     these are the conventions under which the cone lemmas
//                     hold verbatim
//   tensor            d(x (x) y) = dx (x) y + (-1)^{|x|} x (x) dy
//   iterated cone     Psi^n = (+)_i T^i[-i]^n, differential t^i + (-1)^i d_{T^i}

#include "sqz/module.hpp"

#include <map>
#include <memory>

namespace sqz {

template <class K>
class ChainComplex {
 public:
  ChainComplex() = default;  // empty placeholder, assign before use
  ChainComplex(AlgebraPtr<K> alg, int lo, std::vector<Module<K>> terms, std::vector<Mat<K>> diffs,
               bool check = true)
      : alg_(std::move(alg)), lo_(lo), terms_(std::move(terms)), diffs_(std::move(diffs)) {
    if (terms_.empty()) {
      terms_.push_back(Module<K>::zero(alg_));
      diffs_.clear();
    }
    if (diffs_.size() + 1 != terms_.size())
      throw InputError("complex: need one differential between consecutive terms");
    if (check) validate();
  }

  static ChainComplex zero(AlgebraPtr<K> alg) {
    return ChainComplex(std::move(alg), 0, {}, {}, false);
  }
  static ChainComplex single(Module<K> m, int degree = 0) {
    auto alg = m.algebra();
    return ChainComplex(alg, degree, {std::move(m)}, {}, false);
  }

  const AlgebraPtr<K>& algebra() const { return alg_; }
  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(terms_.size()) - 1; }

  const Module<K>& term(int n) const {
    if (n < lo_ || n > hi()) return zero_term();
    return terms_[n - lo_];
  }
  Mat<K> diff(int n) const {
    if (n >= lo_ && n < hi()) return diffs_[n - lo_];
    return zero_mat<K>(term(n + 1).dim(), term(n).dim());
  }

  Eigen::Index total_dim() const {
    Eigen::Index t = 0;
    for (const auto& m : terms_) t += m.dim();
    return t;
  }

  bool is_zero_complex() const {
    for (const auto& m : terms_)
      if (m.dim() != 0) return false;
    return true;
  }

  void validate() const {
    for (int n = lo_; n < hi(); ++n) {
      ModuleMap<K>{term(n), term(n + 1), diff(n)}.check();
      if (n + 1 < hi() && !is_zero_mat(Mat<K>(diff(n + 1) * diff(n))))
        throw ValidationError("complex: d^2 != 0 at degree " + std::to_string(n));
    }
  }

  ChainComplex trimmed() const {
    int a = lo_, b = hi();
    while (a < b && term(a).dim() == 0) ++a;
    while (b > a && term(b).dim() == 0) --b;
    std::vector<Module<K>> ts;
    std::vector<Mat<K>> ds;
    for (int n = a; n <= b; ++n) ts.push_back(term(n));
    for (int n = a; n < b; ++n) ds.push_back(diff(n));
    return ChainComplex(alg_, a, std::move(ts), std::move(ds), false);
  }

  bool same_as(const ChainComplex& other) const {
    ChainComplex a = trimmed(), b = other.trimmed();
    if (a.lo_ != b.lo_ || a.terms_.size() != b.terms_.size()) return false;
    for (size_t i = 0; i < a.terms_.size(); ++i)
      if (!a.terms_[i].same_as(b.terms_[i])) return false;
    for (size_t i = 0; i < a.diffs_.size(); ++i)
      if (a.diffs_[i] != b.diffs_[i]) return false;
    return true;
  }

 private:
  const Module<K>& zero_term() const {
    static thread_local std::map<const Algebra<K>*, Module<K>> cache;
    auto it = cache.find(alg_.get());
    if (it == cache.end()) it = cache.emplace(alg_.get(), Module<K>::zero(alg_)).first;
    return it->second;
  }

  AlgebraPtr<K> alg_;
  int lo_ = 0;
  std::vector<Module<K>> terms_;
  std::vector<Mat<K>> diffs_;
};

template <class K>
using CxPtr = std::shared_ptr<const ChainComplex<K>>;

template <class K>
CxPtr<K> cxptr(ChainComplex<K> c) {
  return std::make_shared<const ChainComplex<K>>(std::move(c));
}

// A graded map src -> tgt of pure degree; closed maps are chain maps.
template <class K>
struct GradedMap {
  CxPtr<K> src, tgt;
  int degree = 0;
  std::map<int, Mat<K>> comps;  // by source degree

  Mat<K> at(int n) const {
    auto it = comps.find(n);
    if (it != comps.end()) return it->second;
    return zero_mat<K>(tgt->term(n + degree).dim(), src->term(n).dim());
  }
  void set(int n, Mat<K> m) {
    if (m.rows() != tgt->term(n + degree).dim() || m.cols() != src->term(n).dim())
      throw InputError("graded map: component shape mismatch at degree " + std::to_string(n));
    comps[n] = std::move(m);
  }
  bool is_zero() const {
    for (const auto& [n, m] : comps)
      if (!is_zero_mat(m)) return false;
    return true;
  }
};

template <class K>
GradedMap<K> zero_map(CxPtr<K> src, CxPtr<K> tgt, int degree = 0) {
  return GradedMap<K>{std::move(src), std::move(tgt), degree, {}};
}

template <class K>
GradedMap<K> identity_chain_map(const CxPtr<K>& c) {
  GradedMap<K> f{c, c, 0, {}};
  for (int n = c->lo(); n <= c->hi(); ++n)
    if (c->term(n).dim() > 0) f.set(n, identity_mat<K>(c->term(n).dim()));
  return f;
}

template <class K>
GradedMap<K> compose(const GradedMap<K>& g, const GradedMap<K>& f) {
  GradedMap<K> out{f.src, g.tgt, f.degree + g.degree, {}};
  for (int n = f.src->lo(); n <= f.src->hi(); ++n) {
    Mat<K> m = g.at(n + f.degree) * f.at(n);
    if (!is_zero_mat(m)) out.set(n, std::move(m));
  }
  return out;
}

template <class K>
GradedMap<K> add(const GradedMap<K>& a, const GradedMap<K>& b) {
  GradedMap<K> out{a.src, a.tgt, a.degree, {}};
  if (a.degree != b.degree) throw InputError("graded map sum: degree mismatch");
  int lo = std::min(a.src->lo(), b.src->lo()), hi = std::max(a.src->hi(), b.src->hi());
  for (int n = lo; n <= hi; ++n) {
    Mat<K> m = a.at(n) + b.at(n);
    if (!is_zero_mat(m)) out.set(n, std::move(m));
  }
  return out;
}

template <class K>
GradedMap<K> sub(const GradedMap<K>& a, const GradedMap<K>& b) {
  GradedMap<K> nb = b;
  for (auto& [n, m] : nb.comps) m = Mat<K>(-m);
  return add(a, nb);
}

template <class K>
GradedMap<K> scale(const GradedMap<K>& a, const K& c) {
  GradedMap<K> out = a;
  for (auto& [n, m] : out.comps) m = Mat<K>(m * c);
  return out;
}

// delta_n(f) = d о f + (-1)^{n+1} f о d.
template <class K>
GradedMap<K> hom_delta(const GradedMap<K>& f) {
  GradedMap<K> out{f.src, f.tgt, f.degree + 1, {}};
  K sign = (f.degree % 2 == 0) ? K(-1) : K(1);
  for (int n = f.src->lo() - 1; n <= f.src->hi(); ++n) {
    Mat<K> m = f.tgt->diff(n + f.degree) * f.at(n) + sign * (f.at(n + 1) * f.src->diff(n));
    if (!is_zero_mat(m)) out.set(n, std::move(m));
  }
  return out;
}

// [phi] for a degree-0 dashed map: phi о d - d о phi (the cone-lemma convention).
template <class K>
GradedMap<K> bracket0(const GradedMap<K>& f) {
  if (f.degree != 0) throw InputError("bracket0: degree-0 maps only");
  return scale(hom_delta(f), K(-1));
}

template <class K>
bool is_closed(const GradedMap<K>& f) {
  return hom_delta(f).is_zero();
}

// --- shift --------------------------------------------------------------------

template <class K>
ChainComplex<K> shift(const ChainComplex<K>& c, int s) {
  std::vector<Module<K>> ts;
  std::vector<Mat<K>> ds;
  for (int n = c.lo(); n <= c.hi(); ++n) ts.push_back(c.term(n));
  K sign = (s % 2 == 0) ? K(1) : K(-1);
  for (int n = c.lo(); n < c.hi(); ++n) ds.push_back(Mat<K>(sign * c.diff(n)));
  return ChainComplex<K>(c.algebra(), c.lo() - s, std::move(ts), std::move(ds), false);
}

template <class K>
GradedMap<K> shift(const GradedMap<K>& f, int s) {
  GradedMap<K> out{cxptr(shift(*f.src, s)), cxptr(shift(*f.tgt, s)), f.degree, {}};
  for (const auto& [n, m] : f.comps) out.comps[n - s] = m;
  return out;
}

// --- direct sums ----------------------------------------------------------------

template <class K>
struct SumData {
  ChainComplex<K> cx;
  std::vector<GradedMap<K>> inject;   // factor -> sum
  std::vector<GradedMap<K>> project;  // sum -> factor
};

template <class K>
SumData<K> direct_sum_complexes(const std::vector<ChainComplex<K>>& parts) {
  if (parts.empty()) throw InputError("direct_sum_complexes: empty");
  auto alg = parts[0].algebra();
  int lo = parts[0].lo(), hi = parts[0].hi();
  for (const auto& p : parts) {
    lo = std::min(lo, p.lo());
    hi = std::max(hi, p.hi());
  }
  std::vector<Module<K>> ts;
  std::vector<Mat<K>> ds;
  std::map<int, std::vector<Eigen::Index>> offsets;  // per degree, per part
  for (int n = lo; n <= hi; ++n) {
    std::vector<Module<K>> slice;
    Eigen::Index off = 0;
    for (const auto& p : parts) {
      offsets[n].push_back(off);
      slice.push_back(p.term(n));
      off += p.term(n).dim();
    }
    ts.push_back(direct_sum(slice));
  }
  for (int n = lo; n < hi; ++n) {
    Mat<K> d = zero_mat<K>(ts[n + 1 - lo].dim(), ts[n - lo].dim());
    for (size_t i = 0; i < parts.size(); ++i)
      d.block(offsets[n + 1][i], offsets[n][i], parts[i].term(n + 1).dim(),
              parts[i].term(n).dim()) = parts[i].diff(n);
    ds.push_back(std::move(d));
  }
  SumData<K> out{ChainComplex<K>(alg, lo, std::move(ts), std::move(ds), false), {}, {}};
  CxPtr<K> sum = cxptr(out.cx);
  for (size_t i = 0; i < parts.size(); ++i) {
    CxPtr<K> part = cxptr(parts[i]);
    GradedMap<K> in{part, sum, 0, {}}, pr{sum, part, 0, {}};
    for (int n = lo; n <= hi; ++n) {
      Eigen::Index pd = parts[i].term(n).dim();
      if (pd == 0) continue;
      Mat<K> em = zero_mat<K>(sum->term(n).dim(), pd);
      em.block(offsets[n][i], 0, pd, pd) = identity_mat<K>(pd);
      in.set(n, em);
      pr.set(n, Mat<K>(em.transpose()));
    }
    out.inject.push_back(std::move(in));
    out.project.push_back(std::move(pr));
  }
  return out;
}

// --- cone -----------------------------------------------------------------------

template <class K>
struct ConeData {
  ChainComplex<K> cx;          // cone(f)
  GradedMap<K> incl_tgt;       // j : L -> C, closed
  GradedMap<K> proj_src;       // pi: C -> K[1], closed
  GradedMap<K> kappa;          // C -> L, degree 0 dashed
  GradedMap<K> sigma;          // K -> C, degree -1 dashed ("into cone[-1]")
};

template <class K>
ConeData<K> cone(const GradedMap<K>& f) {
  if (f.degree != 0 || !is_closed(f)) throw InputError("cone: map must be a closed degree-0 map");
  const ChainComplex<K>&Kc = *f.src;
  const ChainComplex<K>&Lc = *f.tgt;
  auto alg = Kc.algebra();
  int lo = std::min(Kc.lo() - 1, Lc.lo()), hi = std::max(Kc.hi() - 1, Lc.hi());
  std::vector<Module<K>> ts;
  std::vector<Mat<K>> ds;
  for (int n = lo; n <= hi; ++n) ts.push_back(direct_sum<K>({Kc.term(n + 1), Lc.term(n)}));
  for (int n = lo; n < hi; ++n) {
    Eigen::Index k1 = Kc.term(n + 1).dim(), l0 = Lc.term(n).dim();
    Eigen::Index k2 = Kc.term(n + 2).dim(), l1 = Lc.term(n + 1).dim();
    Mat<K> d = zero_mat<K>(k2 + l1, k1 + l0);
    d.block(0, 0, k2, k1) = -Kc.diff(n + 1);
    d.block(k2, 0, l1, k1) = f.at(n + 1);
    d.block(k2, k1, l1, l0) = Lc.diff(n);
    ds.push_back(std::move(d));
  }
  ConeData<K> out{ChainComplex<K>(alg, lo, std::move(ts), std::move(ds), false),
                  {}, {}, {}, {}};
  CxPtr<K> C = cxptr(out.cx);
  CxPtr<K> Ksh = cxptr(shift(Kc, 1));
  CxPtr<K> Kp = f.src, Lp = f.tgt;
  GradedMap<K> j{Lp, C, 0, {}}, pi{C, Ksh, 0, {}}, kap{C, Lp, 0, {}}, sig{Kp, C, -1, {}};
  for (int n = lo; n <= hi; ++n) {
    Eigen::Index k1 = Kc.term(n + 1).dim(), l0 = Lc.term(n).dim();
    if (l0 > 0) {
      Mat<K> in = zero_mat<K>(k1 + l0, l0);
      in.block(k1, 0, l0, l0) = identity_mat<K>(l0);
      j.set(n, in);
      Mat<K> pr = zero_mat<K>(l0, k1 + l0);
      pr.block(0, k1, l0, l0) = identity_mat<K>(l0);
      kap.set(n, pr);
    }
    if (k1 > 0) {
      Mat<K> pr = zero_mat<K>(k1, k1 + l0);
      pr.block(0, 0, k1, k1) = identity_mat<K>(k1);
      pi.set(n, pr);
    }
  }
  for (int n = Kc.lo(); n <= Kc.hi(); ++n) {
    Eigen::Index kd = Kc.term(n).dim();
    if (kd == 0) continue;
    // sigma: K^n -> C^{n-1} = K^n (+) L^{n-1}, the first-block inclusion
    Eigen::Index l0 = Lc.term(n - 1).dim();
    Mat<K> in = zero_mat<K>(kd + l0, kd);
    in.block(0, 0, kd, kd) = identity_mat<K>(kd);
    sig.set(n, in);
  }
  out.incl_tgt = std::move(j);
  out.proj_src = std::move(pi);
  out.kappa = std::move(kap);
  out.sigma = std::move(sig);
  return out;
}

// Lemma-style lift: given u: T -> cone(f) closed and rho: T -> K (degree 0,
// dashed) with [rho] = pi о u, the map u^ = kappa о u - f о rho is closed and
// u - j о u^ = hom_delta(sigma о rho).
template <class K>
GradedMap<K> cone_lift(const ConeData<K>& cn, const GradedMap<K>& f, const GradedMap<K>& u,
                       const GradedMap<K>& rho) {
  GradedMap<K> piu = compose(cn.proj_src, u);
  GradedMap<K> br = bracket0(rho);
  // bracket0(rho): T -> K degree 1; piu: T -> K[1] degree 0; same components
  for (int n = u.src->lo(); n <= u.src->hi(); ++n)
    if (br.at(n) != piu.at(n)) throw InputError("cone_lift: [rho] != pi о u");
  return sub(compose(cn.kappa, u), compose(f, rho));
}

// --- iterated cone ---------------------------------------------------------------

template <class K>
struct IteratedConeData {
  ChainComplex<K> cx;
  std::vector<GradedMap<K>> inject;   // T^i[-i] -> Psi (dashed, degree 0)
  std::vector<GradedMap<K>> project;  // Psi -> T^i[-i] (dashed, degree 0)
};

// T^0 -> T^1 -> ... -> T^p (t^{i+1} о t^i = 0), Psi = (+)_i T^i[-i] with
// differential t^i + (-1)^i d_{T^i}.
template <class K>
IteratedConeData<K> iterated_cone(const std::vector<ChainComplex<K>>& t,
                                  const std::vector<GradedMap<K>>& maps) {
  if (t.empty()) throw InputError("iterated_cone: empty sequence");
  if (maps.size() + 1 != t.size()) throw InputError("iterated_cone: need p maps for p+1 terms");
  for (size_t i = 0; i + 1 < maps.size(); ++i)
    if (!compose(maps[i + 1], maps[i]).is_zero())
      throw InputError("iterated_cone: consecutive maps do not compose to zero");
  for (const auto& m : maps)
    if (m.degree != 0 || !is_closed(m)) throw InputError("iterated_cone: maps must be closed");
  std::vector<ChainComplex<K>> shifted;
  for (size_t i = 0; i < t.size(); ++i) shifted.push_back(shift(t[i], -static_cast<int>(i)));
  SumData<K> sum = direct_sum_complexes(shifted);
  // overwrite the differential: internal parts got (-1)^i from the shift
  // already; add the connecting blocks t^i
  CxPtr<K> S = cxptr(sum.cx);
  GradedMap<K> d{S, S, 1, {}};
  for (int n = S->lo(); n <= S->hi(); ++n) {
    Mat<K> block = zero_mat<K>(S->term(n + 1).dim(), S->term(n).dim());
    if (block.rows() == 0 || block.cols() == 0) continue;
    block = S->diff(n);
    for (size_t i = 0; i + 1 < t.size(); ++i) {
      // t^i component: T^i[-i]^n = (T^i)^{n-i} -> (T^{i+1})^{n-i} = T^{i+1}[-i-1]^{n+1}
      Mat<K> comp = maps[i].at(n - static_cast<int>(i));
      if (is_zero_mat(comp)) continue;
      block += sum.inject[i + 1].at(n + 1) * comp * sum.project[i].at(n);
    }
    d.set(n, block);
  }
  std::vector<Module<K>> ts;
  std::vector<Mat<K>> ds;
  for (int n = S->lo(); n <= S->hi(); ++n) ts.push_back(S->term(n));
  for (int n = S->lo(); n < S->hi(); ++n) ds.push_back(d.at(n));
  IteratedConeData<K> out{ChainComplex<K>(S->algebra(), S->lo(), std::move(ts), std::move(ds)),
                          {}, {}};
  CxPtr<K> P = cxptr(out.cx);
  for (size_t i = 0; i < t.size(); ++i) {
    GradedMap<K> in = sum.inject[i], pr = sum.project[i];
    in.tgt = P;
    pr.src = P;
    out.inject.push_back(std::move(in));
    out.project.push_back(std::move(pr));
  }
  return out;
}

// --- tensor product ---------------------------------------------------------------

template <class K>
struct TotalTensor {
  ChainComplex<K> cx;
  std::map<std::pair<int, int>, TensorData<K>> blocks;    // (p, q) -> K^p (x) L^q
  std::map<std::pair<int, int>, Eigen::Index> offsets;    // within degree p+q
  ChainComplex<K> left, right;

  // embed a pure block element into the total complex
  Mat<K> inject(int p, int q) const {
    auto it = blocks.find({p, q});
    if (it == blocks.end()) throw InputError("tensor: no such block");
    Eigen::Index bd = it->second.module.dim();
    Mat<K> in = zero_mat<K>(cx.term(p + q).dim(), bd);
    in.block(offsets.at({p, q}), 0, bd, bd) = identity_mat<K>(bd);
    return in;
  }
  Mat<K> project(int p, int q) const { return Mat<K>(inject(p, q).transpose()); }
};

template <class K>
TotalTensor<K> tensor_total(const ChainComplex<K>& a, const ChainComplex<K>& b) {
  auto alg = a.algebra();
  TotalTensor<K> out{ChainComplex<K>::zero(alg), {}, {}, a, b};
  int lo = a.lo() + b.lo(), hi = a.hi() + b.hi();
  std::vector<Module<K>> ts;
  for (int n = lo; n <= hi; ++n) {
    std::vector<Module<K>> slice;
    Eigen::Index off = 0;
    for (int p = a.lo(); p <= a.hi(); ++p) {
      int q = n - p;
      if (q < b.lo() || q > b.hi()) continue;
      TensorData<K> td = tensor_over(a.term(p), b.term(q));
      out.offsets[{p, q}] = off;
      off += td.module.dim();
      slice.push_back(td.module);
      out.blocks.emplace(std::make_pair(p, q), std::move(td));
    }
    ts.push_back(slice.empty() ? Module<K>::zero(alg) : direct_sum(slice));
  }
  std::vector<Mat<K>> ds;
  for (int n = lo; n < hi; ++n) {
    Mat<K> d = zero_mat<K>(ts[n + 1 - lo].dim(), ts[n - lo].dim());
    for (int p = a.lo(); p <= a.hi(); ++p) {
      int q = n - p;
      if (q < b.lo() || q > b.hi()) continue;
      const TensorData<K>& src = out.blocks.at({p, q});
      // d_a (x) id : block (p+1, q)
      if (p + 1 <= a.hi() && out.blocks.count({p + 1, q})) {
        const TensorData<K>& tgt = out.blocks.at({p + 1, q});
        Mat<K> m = tensor_map(src, tgt, a.diff(p), identity_mat<K>(b.term(q).dim()));
        d.block(out.offsets.at({p + 1, q}), out.offsets.at({p, q}), tgt.module.dim(),
                src.module.dim()) = m;
      }
      // (-1)^p id (x) d_b : block (p, q+1)
      if (q + 1 <= b.hi() && out.blocks.count({p, q + 1})) {
        const TensorData<K>& tgt = out.blocks.at({p, q + 1});
        K sign = (p % 2 == 0) ? K(1) : K(-1);
        Mat<K> m = tensor_map(src, tgt, identity_mat<K>(a.term(p).dim()), b.diff(q));
        d.block(out.offsets.at({p, q + 1}), out.offsets.at({p, q}), tgt.module.dim(),
                src.module.dim()) = sign * m;
      }
    }
    ds.push_back(std::move(d));
  }
  out.cx = ChainComplex<K>(alg, lo, std::move(ts), std::move(ds));
  return out;
}

// --- truncation --------------------------------------------------------------------

// Smart truncation keeping cohomology in degrees >= m; returns the truncated
// complex and the canonical chain map C -> tau.
template <class K>
std::pair<ChainComplex<K>, GradedMap<K>> truncate_ge(const ChainComplex<K>& c, int m) {
  if (m <= c.lo()) {
    ChainComplex<K> t = c;
    CxPtr<K> p = cxptr(c), q = cxptr(t);
    GradedMap<K> id{p, q, 0, {}};
    for (int n = c.lo(); n <= c.hi(); ++n)
      if (c.term(n).dim() > 0) id.set(n, identity_mat<K>(c.term(n).dim()));
    return {t, id};
  }
  Subspace<K> img(c.term(m).dim(), image_basis(c.diff(m - 1)));
  auto [q0, proj, sec] = quotient_module(c.term(m), img);
  std::vector<Module<K>> ts{q0};
  std::vector<Mat<K>> ds;
  if (m < c.hi()) ds.push_back(Mat<K>(c.diff(m) * sec));
  for (int n = m + 1; n <= c.hi(); ++n) {
    ts.push_back(c.term(n));
    if (n < c.hi()) ds.push_back(c.diff(n));
  }
  ChainComplex<K> tau(c.algebra(), m, std::move(ts), std::move(ds));
  GradedMap<K> f{cxptr(c), cxptr(tau), 0, {}};
  if (q0.dim() > 0) f.set(m, proj.matrix);
  for (int n = m + 1; n <= c.hi(); ++n)
    if (c.term(n).dim() > 0) f.set(n, identity_mat<K>(c.term(n).dim()));
  return {tau, f};
}

// --- homology -----------------------------------------------------------------------

template <class K>
struct HomologyData {
  Module<K> module;       // H^n as a module over the ring
  Mat<K> representative;  // (dim X^n) x (dim H): cycle representatives
  Mat<K> cycles;          // basis of ker d^n, rows
  Mat<K> to_quotient;     // (dim H) x (dim Z): class of a cycle in Z-coordinates

  // class of a cycle given in ambient coordinates
  Vec<K> class_of(const Vec<K>& v, const Mat<K>& incl) const {
    auto sol = solve<K>(incl, v);
    if (!sol) throw InputError("homology: vector is not a cycle");
    return to_quotient * (*sol);
  }
};

template <class K>
HomologyData<K> homology_at(const ChainComplex<K>& c, int n) {
  Mat<K> z = kernel_basis(c.diff(n));
  Subspace<K> zs(c.term(n).dim(), z);
  auto [zmod, incl] = submodule(c.term(n), zs);
  // boundaries inside Z-coordinates
  Mat<K> bnd = c.diff(n - 1);
  Mat<K> bcols = zero_mat<K>(zmod.dim(), bnd.cols());
  if (zmod.dim() > 0 && bnd.cols() > 0) {
    auto sol = solve_matrix<K>(incl.matrix, bnd);
    if (!sol) throw ValidationError("homology: boundaries are not cycles");
    bcols = *sol;
  }
  Subspace<K> bs(zmod.dim(), Mat<K>(bcols.transpose()));
  auto [h, proj, sec] = quotient_module(zmod, bs);
  HomologyData<K> out;
  out.module = h;
  out.representative = incl.matrix * sec;
  out.cycles = zs.basis();
  out.to_quotient = proj.matrix;
  return out;
}

template <class K>
std::map<int, HomologyData<K>> homology(const ChainComplex<K>& c) {
  std::map<int, HomologyData<K>> out;
  for (int n = c.lo(); n <= c.hi(); ++n) out.emplace(n, homology_at(c, n));
  return out;
}

// Induced map H^n(src) -> H^{n+deg}(tgt) of a closed graded map.
template <class K>
Mat<K> induced_homology_map(const GradedMap<K>& f, const HomologyData<K>& hsrc,
                            const HomologyData<K>& htgt, int n) {
  Mat<K> reps = f.at(n) * hsrc.representative;
  Mat<K> out = zero_mat<K>(htgt.module.dim(), hsrc.module.dim());
  Mat<K> incl = htgt.cycles.transpose();
  for (Eigen::Index j = 0; j < reps.cols(); ++j) {
    auto sol = solve<K>(incl, Vec<K>(reps.col(j)));
    if (!sol) throw ValidationError("induced map: image of a cycle is not a cycle");
    out.col(j) = htgt.to_quotient * (*sol);
  }
  return out;
}

template <class K>
bool is_quasi_iso(const GradedMap<K>& f) {
  if (!is_closed(f)) return false;
  int lo = std::min(f.src->lo(), f.tgt->lo() - f.degree) - 1;
  int hi = std::max(f.src->hi(), f.tgt->hi() - f.degree) + 1;
  for (int n = lo; n <= hi; ++n) {
    HomologyData<K> hs = homology_at(*f.src, n), ht = homology_at(*f.tgt, n + f.degree);
    if (hs.module.dim() != ht.module.dim()) return false;
    Mat<K> ind = induced_homology_map(f, hs, ht, n);
    if (!is_invertible(ind)) return false;
  }
  return true;
}

template <class K>
bool is_exact(const ChainComplex<K>& c) {
  for (int n = c.lo(); n <= c.hi(); ++n)
    if (homology_at(c, n).module.dim() != 0) return false;
  return true;
}

}  // namespace sqz
