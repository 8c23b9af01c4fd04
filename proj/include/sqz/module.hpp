#pragma once

// Finite-dimensional modules over a fixed Algebra, given by one action matrix
// per algebra basis element, plus the constructions on them: sub/quotient,
// direct sum, tensor and hom over the algebra, kernels/cokernels of maps.

#include "sqz/algebra.hpp"

#include <cassert>
#include <numeric>
#include <random>
#include <vector>

namespace sqz {

template <class K>
class Module {
 public:
  Module() = default;
  Module(AlgebraPtr<K> alg, std::vector<Mat<K>> action, bool check = true)
      : alg_(std::move(alg)), action_(std::move(action)) {
    dim_ = action_.empty() ? 0 : action_[0].rows();
    if (check) validate();
  }

  static Module zero(AlgebraPtr<K> alg) {
    std::vector<Mat<K>> act(alg->dim(), zero_mat<K>(0, 0));
    return Module(std::move(alg), std::move(act), false);
  }

  const AlgebraPtr<K>& algebra() const { return alg_; }
  Eigen::Index dim() const { return dim_; }
  const Mat<K>& action(int i) const { return action_[i]; }
  const std::vector<Mat<K>>& actions() const { return action_; }

  Mat<K> act(const Vec<K>& a) const {
    Mat<K> m = zero_mat<K>(dim_, dim_);
    for (Eigen::Index i = 0; i < alg_->dim(); ++i)
      if (a(i) != K(0)) m += a(i) * action_[i];
    return m;
  }

  void validate() const {
    const Eigen::Index d = alg_->dim();
    if (static_cast<Eigen::Index>(action_.size()) != d)
      throw ValidationError("module: one action matrix per algebra basis element required");
    for (const auto& m : action_)
      if (m.rows() != dim_ || m.cols() != dim_)
        throw ValidationError("module: action matrix shape mismatch");
    if (act(alg_->unit()) != identity_mat<K>(dim_))
      throw ValidationError("module: unit does not act as identity");
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Mat<K> lhs = action_[i] * action_[j];
        Mat<K> rhs = act(alg_->mult_basis(i, j));
        if (lhs != rhs)
          throw ValidationError("module: action incompatible with product at (" +
                                std::to_string(i) + "," + std::to_string(j) + ")");
      }
  }

  bool same_as(const Module& other) const {
    if (dim_ != other.dim_) return false;
    for (size_t i = 0; i < action_.size(); ++i)
      if (action_[i] != other.action_[i]) return false;
    return true;
  }

 private:
  AlgebraPtr<K> alg_;
  Eigen::Index dim_ = 0;
  std::vector<Mat<K>> action_;
};

template <class K>
struct ModuleMap {
  Module<K> src;
  Module<K> tgt;
  Mat<K> matrix;  // (dim tgt) x (dim src)

  bool is_equivariant() const {
    for (Eigen::Index i = 0; i < src.algebra()->dim(); ++i)
      if (matrix * src.action(static_cast<int>(i)) != tgt.action(static_cast<int>(i)) * matrix)
        return false;
    return true;
  }
  void check() const {
    if (matrix.rows() != tgt.dim() || matrix.cols() != src.dim())
      throw ValidationError("module map: shape mismatch");
    if (!is_equivariant()) throw ValidationError("module map: not equivariant");
  }
};

template <class K>
ModuleMap<K> compose(const ModuleMap<K>& g, const ModuleMap<K>& f) {
  return {f.src, g.tgt, g.matrix * f.matrix};
}

template <class K>
ModuleMap<K> identity_map(const Module<K>& m) {
  return {m, m, identity_mat<K>(m.dim())};
}

// --- free modules ------------------------------------------------------------

// A^g, basis ordered (copy, algebra basis element) with copy index slowest.
template <class K>
Module<K> free_module(const AlgebraPtr<K>& alg, int g) {
  const Eigen::Index d = alg->dim();
  std::vector<Mat<K>> act(d, zero_mat<K>(g * d, g * d));
  for (Eigen::Index i = 0; i < d; ++i) {
    Mat<K> lm = alg->left_mult(Vec<K>(Vec<K>::Unit(d, i)));
    for (int c = 0; c < g; ++c) act[i].block(c * d, c * d, d, d) = lm;
  }
  return Module<K>(alg, std::move(act), false);
}

// --- sub/quotient/sum --------------------------------------------------------

template <class K>
bool action_closed(const Module<K>& m, const Subspace<K>& w) {
  for (Eigen::Index i = 0; i < m.algebra()->dim(); ++i)
    for (Eigen::Index r = 0; r < w.dim(); ++r) {
      Vec<K> v = m.action(static_cast<int>(i)) * w.basis().row(r).transpose();
      if (!w.contains(v)) return false;
    }
  return true;
}

// Submodule spanned by w (must be action-closed); returns (S, inclusion).
template <class K>
std::pair<Module<K>, ModuleMap<K>> submodule(const Module<K>& m, const Subspace<K>& w) {
  if (!action_closed(m, w)) throw InputError("submodule: subspace not action-closed");
  const Eigen::Index t = w.dim();
  Mat<K> incl = w.basis().transpose();  // dim(m) x t
  std::vector<Mat<K>> act;
  act.reserve(m.algebra()->dim());
  for (Eigen::Index i = 0; i < m.algebra()->dim(); ++i) {
    auto sol = solve_matrix<K>(incl, m.action(static_cast<int>(i)) * incl);
    if (!sol) throw ValidationError("submodule: action does not restrict");
    act.push_back(*sol);
  }
  Module<K> s(m.algebra(), std::move(act), false);
  return {s, ModuleMap<K>{s, m, incl}};
}

// Quotient by w (action-closed); returns (Q, projection, k-linear section).
template <class K>
std::tuple<Module<K>, ModuleMap<K>, Mat<K>> quotient_module(const Module<K>& m,
                                                            const Subspace<K>& w) {
  if (!action_closed(m, w)) throw InputError("quotient: subspace not action-closed");
  QuotientMaps<K> qm = quotient_maps(w);
  std::vector<Mat<K>> act;
  act.reserve(m.algebra()->dim());
  for (Eigen::Index i = 0; i < m.algebra()->dim(); ++i)
    act.push_back(qm.projection * m.action(static_cast<int>(i)) * qm.section);
  Module<K> q(m.algebra(), std::move(act), false);
  return {q, ModuleMap<K>{m, q, qm.projection}, qm.section};
}

template <class K>
Module<K> direct_sum(const std::vector<Module<K>>& parts) {
  if (parts.empty()) throw InputError("direct_sum: empty");
  const auto& alg = parts[0].algebra();
  Eigen::Index total = 0;
  for (const auto& p : parts) total += p.dim();
  std::vector<Mat<K>> act(alg->dim(), zero_mat<K>(total, total));
  for (Eigen::Index i = 0; i < alg->dim(); ++i) {
    Eigen::Index off = 0;
    for (const auto& p : parts) {
      act[i].block(off, off, p.dim(), p.dim()) = p.action(static_cast<int>(i));
      off += p.dim();
    }
  }
  return Module<K>(alg, std::move(act), false);
}

// --- maps: kernel / image / cokernel ----------------------------------------

template <class K>
std::pair<Module<K>, ModuleMap<K>> kernel(const ModuleMap<K>& f) {
  Subspace<K> ker(f.src.dim(), kernel_basis(f.matrix));
  return submodule(f.src, ker);
}

template <class K>
std::pair<Module<K>, ModuleMap<K>> image(const ModuleMap<K>& f) {
  Subspace<K> img(f.tgt.dim(), image_basis(f.matrix));
  return submodule(f.tgt, img);
}

template <class K>
std::pair<Module<K>, ModuleMap<K>> cokernel(const ModuleMap<K>& f) {
  Subspace<K> img(f.tgt.dim(), image_basis(f.matrix));
  auto [q, proj, sec] = quotient_module(f.tgt, img);
  (void)sec;
  return {q, proj};
}

// --- tensor over the algebra --------------------------------------------------

// M (x)_A N with its structural data: the quotient map from M (x)_k N and a
// k-linear section picking representatives.
template <class K>
struct TensorData {
  Module<K> module;
  Mat<K> project;  // (dim T) x (dim M * dim N)
  Mat<K> section;  // (dim M * dim N) x (dim T)
};

template <class K>
TensorData<K> tensor_over(const Module<K>& m, const Module<K>& n) {
  const Eigen::Index dm = m.dim(), dn = n.dim(), d = m.algebra()->dim();
  const Eigen::Index full = dm * dn;
  // relations (a m) (x) n - m (x) (a n), basis ordering: first factor slowest
  Mat<K> rel = zero_mat<K>(d * dm * dn, full);
  Eigen::Index row = 0;
  Mat<K> In = identity_mat<K>(dn), Im = identity_mat<K>(dm);
  for (Eigen::Index t = 0; t < d; ++t) {
    Mat<K> lhs = kronecker(m.action(static_cast<int>(t)), In) -
                 kronecker(Im, n.action(static_cast<int>(t)));
    // every column of lhs applied to each basis vector is a relation; rows of
    // lhs^T span them
    rel.block(row, 0, full, full) = lhs.transpose();
    row += full;
  }
  Subspace<K> relspan(full, rel);
  QuotientMaps<K> qm = quotient_maps(relspan);
  std::vector<Mat<K>> act;
  act.reserve(d);
  for (Eigen::Index t = 0; t < d; ++t)
    act.push_back(qm.projection * kronecker(m.action(static_cast<int>(t)), In) * qm.section);
  Module<K> tens(m.algebra(), std::move(act));
  return {tens, qm.projection, qm.section};
}

// Induced map T(f,g): M (x) N -> M' (x) N' on the A-tensor quotients.
template <class K>
Mat<K> tensor_map(const TensorData<K>& src, const TensorData<K>& tgt, const Mat<K>& f,
                  const Mat<K>& g) {
  return tgt.project * kronecker(f, g) * src.section;
}

// --- hom over the algebra -----------------------------------------------------

// Hom_A(M, N) as a module with action (a f)(m) = a f(m); carries the basis of
// equivariant matrices (column-major flattened coordinates).
template <class K>
struct HomData {
  Module<K> module;
  std::vector<Mat<K>> basis;  // equivariant maps M -> N
  Eigen::Index rows = 0, cols = 0;

  Mat<K> from_coords(const Vec<K>& c) const {
    Mat<K> f = zero_mat<K>(rows, cols);
    for (size_t i = 0; i < basis.size(); ++i)
      if (c(static_cast<Eigen::Index>(i)) != K(0)) f += c(static_cast<Eigen::Index>(i)) * basis[i];
    return f;
  }
  Vec<K> to_coords(const Mat<K>& f) const {
    const Eigen::Index n = static_cast<Eigen::Index>(basis.size());
    Mat<K> sys = zero_mat<K>(f.size(), n);
    for (Eigen::Index i = 0; i < n; ++i)
      sys.col(i) = Eigen::Map<const Vec<K>>(basis[i].data(), basis[i].size());
    Vec<K> rhs = Eigen::Map<const Vec<K>>(f.data(), f.size());
    auto sol = solve<K>(sys, rhs);
    if (!sol) throw InputError("hom: map is not in the hom space");
    return *sol;
  }
};

template <class K>
HomData<K> hom_over(const Module<K>& m, const Module<K>& n) {
  const Eigen::Index dm = m.dim(), dn = n.dim(), d = m.algebra()->dim();
  // F rho^M_t = rho^N_t F; col-major vec: vec(A X B) = (B^T (x)col A) vec X.
  // With col-major flattening, vec(F rho) = (rho^T (x)cm I) vec F where
  // (x)cm is the Kronecker product with *second* factor slowest; reuse
  // kronecker by swapping factors.
  const Eigen::Index full = dm * dn;
  Mat<K> sys = zero_mat<K>(d * full, full);
  for (Eigen::Index t = 0; t < d; ++t) {
    Mat<K> a = kronecker(Mat<K>(m.action(static_cast<int>(t)).transpose()), identity_mat<K>(dn));
    Mat<K> b = kronecker(identity_mat<K>(dm), n.action(static_cast<int>(t)));
    sys.block(t * full, 0, full, full) = a - b;
  }
  Mat<K> ker = kernel_basis(sys);
  std::vector<Mat<K>> basis;
  basis.reserve(ker.rows());
  for (Eigen::Index r = 0; r < ker.rows(); ++r) {
    Mat<K> f = zero_mat<K>(dn, dm);
    for (Eigen::Index c = 0; c < dm; ++c)
      for (Eigen::Index rr2 = 0; rr2 < dn; ++rr2) f(rr2, c) = ker(r, c * dn + rr2);
    basis.push_back(f);
  }
  // action: (a f) = rho^N(a) o f, expressed in the basis
  const Eigen::Index h = static_cast<Eigen::Index>(basis.size());
  Mat<K> coordsys = zero_mat<K>(full, h);
  for (Eigen::Index i = 0; i < h; ++i)
    coordsys.col(i) = Eigen::Map<const Vec<K>>(basis[i].data(), basis[i].size());
  std::vector<Mat<K>> act(d, zero_mat<K>(h, h));
  for (Eigen::Index t = 0; t < d; ++t)
    for (Eigen::Index i = 0; i < h; ++i) {
      Mat<K> g = n.action(static_cast<int>(t)) * basis[i];
      Vec<K> gv = Eigen::Map<const Vec<K>>(g.data(), g.size());
      auto sol = solve<K>(coordsys, gv);
      if (!sol) throw ValidationError("hom: action does not preserve hom space");
      act[t].col(i) = *sol;
    }
  HomData<K> out{Module<K>(m.algebra(), std::move(act)), std::move(basis), dn, dm};
  return out;
}

// --- restriction along an algebra morphism ------------------------------------

// phi: columns are images of the source algebra's basis in the target algebra.
template <class K>
Module<K> restrict_along(const AlgebraPtr<K>& src_alg, const Mat<K>& phi, const Module<K>& m) {
  std::vector<Mat<K>> act;
  act.reserve(src_alg->dim());
  for (Eigen::Index i = 0; i < src_alg->dim(); ++i) act.push_back(m.act(Vec<K>(phi.col(i))));
  return Module<K>(src_alg, std::move(act), false);
}

// --- free covers ---------------------------------------------------------------

template <class K>
struct FreeCover {
  Module<K> free;
  ModuleMap<K> onto;  // surjection free -> M
};

// Column of the cover map for generator g: pi(copy c, e_i) = e_i . g_c.
template <class K>
FreeCover<K> free_cover_on(const Module<K>& m, const Mat<K>& generators) {
  const Eigen::Index d = m.algebra()->dim();
  const int g = static_cast<int>(generators.cols());
  Module<K> f = free_module(m.algebra(), g);
  Mat<K> pi = zero_mat<K>(m.dim(), g * d);
  for (int c = 0; c < g; ++c)
    for (Eigen::Index i = 0; i < d; ++i)
      pi.col(c * d + i) = m.action(static_cast<int>(i)) * generators.col(c);
  ModuleMap<K> onto{f, m, pi};
  if (rank(pi) != m.dim()) throw ValidationError("free_cover: generators do not generate");
  return {f, onto};
}

// Default: one generator per basis vector.  With minimal=true and a known
// radical, generators lift a basis of M / rad M (valid for local algebras).
template <class K>
FreeCover<K> free_cover(const Module<K>& m, bool minimal = true) {
  if (m.dim() == 0) {
    Module<K> z = Module<K>::zero(m.algebra());
    return {z, ModuleMap<K>{z, m, zero_mat<K>(0, 0)}};
  }
  if (minimal && m.algebra()->radical_rows().has_value()) {
    const Mat<K>& rad = *m.algebra()->radical_rows();
    Mat<K> radm = zero_mat<K>(0, m.dim());
    for (Eigen::Index r = 0; r < rad.rows(); ++r)
      radm = vstack(radm, Mat<K>(m.act(Vec<K>(rad.row(r).transpose())).transpose()));
    Subspace<K> radsub(m.dim(), radm);
    QuotientMaps<K> qm = quotient_maps(radsub);
    return free_cover_on(m, qm.section);  // Nakayama: lifts of M/(rad M) generate
  }
  return free_cover_on(m, identity_mat<K>(m.dim()));
}

// --- randomized generation ------------------------------------------------------

// Random module: quotient of A^g by the action-closure of a few random vectors.
template <class K, class Rng>
Module<K> random_module(const AlgebraPtr<K>& alg, int g, int nrel, Rng& rng) {
  Module<K> f = free_module(alg, g);
  Mat<K> seed = random_mat<K>(nrel, f.dim(), rng);
  // close under the action
  Subspace<K> s(f.dim(), seed);
  for (bool grew = true; grew;) {
    grew = false;
    Mat<K> extra = s.basis();
    for (Eigen::Index i = 0; i < alg->dim(); ++i)
      extra = vstack(extra, Mat<K>((f.action(static_cast<int>(i)) * s.basis().transpose()).transpose()));
    Subspace<K> s2(f.dim(), extra);
    if (s2.dim() != s.dim()) {
      s = s2;
      grew = true;
    }
  }
  auto [q, proj, sec] = quotient_module(f, s);
  (void)proj;
  (void)sec;
  return q;
}

// Intertwiner-space search for an explicit module isomorphism.
template <class K>
std::optional<Mat<K>> find_module_iso(const Module<K>& m, const Module<K>& n, unsigned seed = 7) {
  if (m.dim() != n.dim()) return std::nullopt;
  if (m.dim() == 0) return zero_mat<K>(0, 0);
  HomData<K> h = hom_over(m, n);
  if (h.basis.empty()) return std::nullopt;
  for (size_t i = 0; i < h.basis.size(); ++i)
    if (is_invertible(h.basis[i])) return h.basis[i];
  std::mt19937_64 rng(seed);
  for (int tries = 0; tries < 200; ++tries) {
    Mat<K> cand = zero_mat<K>(n.dim(), m.dim());
    for (const auto& b : h.basis) cand += ScalarSampler<K>::sample(rng) * b;
    if (is_invertible(cand)) return cand;
  }
  return std::nullopt;
}

}  // namespace sqz
