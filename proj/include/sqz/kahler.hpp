#pragma once

// Kaehler differentials Omega^1 = I_D / I_D^2 of the diagonal ideal, the
// universal derivation, principal parts P^1(M) = Omega (x) M (+) M with the
// derivation-twisted action, and the lax product on P^1 computed through the
// diagonal-square correspondence on R (x) R and R (x) R (x) R.

#include "sqz/module.hpp"

namespace sqz {

template <class K>
struct KahlerData {
  Module<K> omega;      // Omega^1_A
  Mat<K> deriv;         // d: A -> Omega, (dim Omega) x (dim A), d(e_i) columns
  AlgebraPtr<K> square; // A (x)_k A
  Mat<K> mult;          // A (x) A -> A
  Subspace<K> diag_ideal;
  Subspace<K> diag_ideal_sq;
  Module<K> square_as_module;  // A (x) A as an A-module via the first factor
  ModuleMap<K> ideal_incl;     // I_D -> A (x) A
  ModuleMap<K> omega_proj;     // I_D -> Omega
};

template <class K>
AlgebraPtr<K> tensor_algebra(const AlgebraPtr<K>& a, const AlgebraPtr<K>& b) {
  const Eigen::Index da = a->dim(), db = b->dim(), n = da * db;
  std::vector<std::vector<Vec<K>>> t(n, std::vector<Vec<K>>(n));
  for (Eigen::Index i1 = 0; i1 < da; ++i1)
    for (Eigen::Index j1 = 0; j1 < db; ++j1)
      for (Eigen::Index i2 = 0; i2 < da; ++i2)
        for (Eigen::Index j2 = 0; j2 < db; ++j2) {
          Vec<K> va = a->mult_basis(static_cast<int>(i1), static_cast<int>(i2));
          Vec<K> vb = b->mult_basis(static_cast<int>(j1), static_cast<int>(j2));
          Vec<K> out = Vec<K>::Constant(n, K(0));
          for (Eigen::Index x = 0; x < da; ++x)
            for (Eigen::Index y = 0; y < db; ++y) out(x * db + y) = va(x) * vb(y);
          t[i1 * db + j1][i2 * db + j2] = out;
        }
  Vec<K> unit = Vec<K>::Constant(n, K(0));
  for (Eigen::Index x = 0; x < da; ++x)
    for (Eigen::Index y = 0; y < db; ++y) unit(x * db + y) = a->unit()(x) * b->unit()(y);
  return std::make_shared<Algebra<K>>(std::move(t), unit, a->name() + "(x)" + b->name(),
                                      std::nullopt, false);
}

template <class K>
KahlerData<K> kahler(const AlgebraPtr<K>& a) {
  const Eigen::Index d = a->dim();
  AlgebraPtr<K> t = tensor_algebra(a, a);
  // multiplication map A (x) A -> A
  Mat<K> mult = zero_mat<K>(d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      mult.col(i * d + j) = a->mult_basis(static_cast<int>(i), static_cast<int>(j));
  Subspace<K> ideal(d * d, kernel_basis(mult));
  // ideal squared
  Mat<K> sq = zero_mat<K>(0, d * d);
  for (Eigen::Index i = 0; i < ideal.dim(); ++i)
    for (Eigen::Index j = i; j < ideal.dim(); ++j) {
      Vec<K> prod = t->mult(Vec<K>(ideal.basis().row(i).transpose()),
                            Vec<K>(ideal.basis().row(j).transpose()));
      sq = vstack(sq, Mat<K>(prod.transpose()));
    }
  Subspace<K> ideal_sq(d * d, sq);
  // A-module structure via the first factor
  Mat<K> phi1 = zero_mat<K>(d * d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) phi1(i * d + j, i) = a->unit()(j);
  Module<K> treg = free_module(t, 1);
  Module<K> tmod = restrict_along(a, phi1, treg);
  auto [imod, incl] = submodule(tmod, ideal);
  // I_D^2 in I_D coordinates
  Mat<K> sq_in;
  {
    auto sol = solve_matrix<K>(incl.matrix, Mat<K>(ideal_sq.basis().transpose()));
    if (!sol) throw ValidationError("kahler: ideal square not inside ideal");
    sq_in = sol->transpose();
  }
  auto [omega, proj, sec] = quotient_module(imod, Subspace<K>(imod.dim(), sq_in));
  (void)sec;
  // d(e_i) = class of 1 (x) e_i - e_i (x) 1
  Mat<K> deriv = zero_mat<K>(omega.dim(), d);
  for (Eigen::Index i = 0; i < d; ++i) {
    Vec<K> v = Vec<K>::Constant(d * d, K(0));
    for (Eigen::Index x = 0; x < d; ++x) {
      v(x * d + i) += a->unit()(x);
      v(i * d + x) -= a->unit()(x);
    }
    auto coords = solve<K>(incl.matrix, v);
    if (!coords) throw ValidationError("kahler: derivation image not in the ideal");
    deriv.col(i) = proj.matrix * (*coords);
  }
  return {omega, deriv, t, mult, ideal, ideal_sq, tmod, incl, proj};
}

// Leibniz check d(ab) = a db + b da on all basis pairs.
template <class K>
bool leibniz_holds(const AlgebraPtr<K>& a, const KahlerData<K>& kd) {
  const Eigen::Index d = a->dim();
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      Vec<K> dab = kd.deriv * a->mult_basis(static_cast<int>(i), static_cast<int>(j));
      Vec<K> rhs = kd.omega.act(Vec<K>(Vec<K>::Unit(d, i))) * kd.deriv.col(j) +
                   kd.omega.act(Vec<K>(Vec<K>::Unit(d, j))) * kd.deriv.col(i);
      if (dab != rhs) return false;
    }
  return true;
}

// P^1(M): underlying space (Omega (x)_A M) (+) M, action
// r (w (x) m, m') = (r w (x) m + dr (x) m', r m').
template <class K>
struct PrincipalParts {
  Module<K> module;
  TensorData<K> omega_tensor;  // Omega (x)_A M
  ModuleMap<K> incl;           // Omega (x) M -> P
  ModuleMap<K> proj;           // P -> M
};

template <class K>
PrincipalParts<K> principal_parts(const KahlerData<K>& kd, const Module<K>& m) {
  const auto& a = m.algebra();
  const Eigen::Index d = a->dim();
  TensorData<K> om = tensor_over(kd.omega, m);
  const Eigen::Index t = om.module.dim(), md = m.dim();
  std::vector<Mat<K>> act(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    Mat<K> block = zero_mat<K>(t + md, t + md);
    block.block(0, 0, t, t) = om.module.action(static_cast<int>(i));
    // D_i: m' -> d(e_i) (x) m'
    Mat<K> di = om.project * kronecker(Mat<K>(kd.deriv.col(i)), identity_mat<K>(md));
    block.block(0, t, t, md) = di;
    block.block(t, t, md, md) = m.action(static_cast<int>(i));
    act[i] = std::move(block);
  }
  Module<K> p(a, std::move(act));
  Mat<K> in = zero_mat<K>(t + md, t);
  in.block(0, 0, t, t) = identity_mat<K>(t);
  Mat<K> pr = zero_mat<K>(md, t + md);
  pr.block(0, t, md, md) = identity_mat<K>(md);
  PrincipalParts<K> out{p, om, ModuleMap<K>{om.module, p, in}, ModuleMap<K>{p, m, pr}};
  out.incl.check();
  out.proj.check();
  return out;
}

// P^1 of a module map, (id (x) f) (+) f.
template <class K>
Mat<K> principal_parts_map(const KahlerData<K>& kd, const PrincipalParts<K>& src,
                           const PrincipalParts<K>& tgt, const Mat<K>& f) {
  Eigen::Index ts = src.omega_tensor.module.dim(), tt = tgt.omega_tensor.module.dim();
  Eigen::Index ms = src.module.dim() - ts, mt = tgt.module.dim() - tt;
  Mat<K> out = zero_mat<K>(tt + mt, ts + ms);
  out.block(0, 0, tt, ts) =
      tensor_map(src.omega_tensor, tgt.omega_tensor, identity_mat<K>(kd.omega.dim()), f);
  out.block(tt, ts, mt, ms) = f;
  return out;
}

// Jets J(M) = (A (x)_k M) / I_D^2 (A (x) M), an A-module via the first factor,
// with the comparison map to P^1(M).
template <class K>
struct JetData {
  Module<K> module;
  Mat<K> project;  // (A (x)_k M) -> J(M)
  Mat<K> section;
  Mat<K> psi;      // J(M) -> P^1(M), a (x) m -> (da (x) m, am); iso on the catalog
};

template <class K>
JetData<K> jets(const KahlerData<K>& kd, const PrincipalParts<K>& pp, const Module<K>& m) {
  const auto& a = m.algebra();
  const Eigen::Index d = a->dim(), md = m.dim(), full = d * md;
  // I_D^2 acting on A (x) M through both factors
  Mat<K> sub = zero_mat<K>(0, full);
  for (Eigen::Index r = 0; r < kd.diag_ideal_sq.dim(); ++r) {
    Vec<K> u = kd.diag_ideal_sq.basis().row(r).transpose();
    Mat<K> actu = zero_mat<K>(full, full);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        if (u(i * d + j) != K(0))
          actu += u(i * d + j) *
                  kronecker(a->left_mult(Vec<K>(Vec<K>::Unit(d, i))), m.action(static_cast<int>(j)));
    sub = vstack(sub, Mat<K>(actu.transpose()));
  }
  Subspace<K> subspace(full, sub);
  // first-factor A-module structure on A (x) M
  std::vector<Mat<K>> act(d);
  for (Eigen::Index i = 0; i < d; ++i)
    act[i] = kronecker(a->left_mult(Vec<K>(Vec<K>::Unit(d, i))), identity_mat<K>(md));
  Module<K> am(a, std::move(act), false);
  auto [j, proj, sec] = quotient_module(am, subspace);
  // psi on generators e_i (x) m_k -> (d e_i (x) m_k, e_i m_k)
  Eigen::Index t = pp.omega_tensor.module.dim();
  Mat<K> psi_full = zero_mat<K>(t + md, full);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index k = 0; k < md; ++k) {
      Vec<K> om_part = pp.omega_tensor.project *
                       kronecker(Mat<K>(kd.deriv.col(i)), identity_mat<K>(md)).col(k);
      psi_full.col(i * md + k).head(t) = om_part;
      psi_full.col(i * md + k).tail(md) = m.action(static_cast<int>(i)).col(k);
    }
  // descend through the quotient
  Mat<K> psi = psi_full * sec;
  if (!is_zero_mat(Mat<K>(psi * proj.matrix - psi_full)))
    throw ValidationError("jets: comparison map does not descend");
  return {j, proj.matrix, sec, psi};
}

// --- lax product on principal parts -------------------------------------------

template <class K>
Mat<K> kron3(const Mat<K>& a, const Mat<K>& b, const Mat<K>& c) {
  return kronecker(a, kronecker(b, c));
}

// m: P^1(F) (x)_A P^1(G) -> P^1(F (x)_A G) through the correspondence on
// R (x) R (x) R, quotienting the squared partial-diagonal ideals I12, I13 and
// then the partial diagonal I23.
template <class K>
struct PpProduct {
  TensorData<K> tens_pp;   // P^1(F) (x)_A P^1(G)
  TensorData<K> tens_fg;   // F (x)_A G
  PrincipalParts<K> pp_fg; // P^1(F (x) G)
  Mat<K> product;          // the lax product map
};

template <class K>
PpProduct<K> pp_product(const KahlerData<K>& kd, const Module<K>& f, const Module<K>& g) {
  const auto& a = f.algebra();
  const Eigen::Index d = a->dim(), fd = f.dim(), gd = g.dim();
  PrincipalParts<K> ppf = principal_parts(kd, f), ppg = principal_parts(kd, g);
  JetData<K> jf = jets(kd, ppf, f), jg = jets(kd, ppg, g);
  if (!is_invertible(jf.psi) || !is_invertible(jg.psi))
    throw ValidationError("pp_product: jet comparison is not invertible over this algebra");

  // V = R (x) F (x) G with the three partial actions
  const Eigen::Index vd = d * fd * gd;
  Mat<K> idd = identity_mat<K>(d), idf = identity_mat<K>(fd), idg = identity_mat<K>(gd);
  auto lm = [&](Eigen::Index i) { return a->left_mult(Vec<K>(Vec<K>::Unit(d, i))); };
  std::vector<Mat<K>> g12(d), g13(d), g23(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    g12[i] = kron3(lm(i), idf, idg) - kron3(idd, f.action(static_cast<int>(i)), idg);
    g13[i] = kron3(lm(i), idf, idg) - kron3(idd, idf, g.action(static_cast<int>(i)));
    g23[i] = kron3(idd, f.action(static_cast<int>(i)), idg) -
             kron3(idd, idf, g.action(static_cast<int>(i)));
  }
  Mat<K> sq12 = zero_mat<K>(0, vd), sq13 = zero_mat<K>(0, vd), lin23 = zero_mat<K>(0, vd);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) {
      sq12 = vstack(sq12, Mat<K>((g12[i] * g12[j]).transpose()));
      sq13 = vstack(sq13, Mat<K>((g13[i] * g13[j]).transpose()));
    }
    lin23 = vstack(lin23, Mat<K>(g23[i].transpose()));
  }
  Subspace<K> relP(vd, vstack(sq12, sq13));
  Subspace<K> relQ(vd, vstack(vstack(sq12, sq13), lin23));
  QuotientMaps<K> qmP = quotient_maps(relP), qmQ = quotient_maps(relQ);

  // beta: (R (x) F) (x)_k (R (x) G) -> V, (a (x) f)(b (x) g) -> ab (x) f (x) g
  Mat<K> beta = zero_mat<K>(vd, d * fd * d * gd);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < fd; ++j)
      for (Eigen::Index k2 = 0; k2 < d; ++k2)
        for (Eigen::Index l = 0; l < gd; ++l) {
          Vec<K> prod = a->mult_basis(static_cast<int>(i), static_cast<int>(k2));
          Eigen::Index col = ((i * fd + j) * d + k2) * gd + l;
          for (Eigen::Index x = 0; x < d; ++x)
            if (prod(x) != K(0)) beta((x * fd + j) * gd + l, col) = prod(x);
        }

  // J(F) (x)_A J(G) -> P
  TensorData<K> tjj = tensor_over(jf.module, jg.module);
  Mat<K> beta_bar =
      qmP.projection * beta * kronecker(jf.section, jg.section) * tjj.section;
  Mat<K> theta = qmQ.projection * qmP.section;

  // Q -> J(F (x) G)
  TensorData<K> tfg = tensor_over(f, g);
  PrincipalParts<K> ppfg = principal_parts(kd, tfg.module);
  JetData<K> jfg = jets(kd, ppfg, tfg.module);
  Mat<K> xi = jfg.project * kronecker(idd, tfg.project);
  Mat<K> xi_bar = xi * qmQ.section;
  if (!is_invertible(xi_bar))
    throw ValidationError("pp_product: partial-diagonal quotient does not match the jets");

  // transport along psi's
  TensorData<K> tpp = tensor_over(ppf.module, ppg.module);
  Mat<K> psipsi = tensor_map(tjj, tpp, jf.psi, jg.psi);
  auto psipsi_inv = inverse_matrix(psipsi);
  if (!psipsi_inv) throw ValidationError("pp_product: psi (x) psi is not invertible");
  Mat<K> m = jfg.psi * xi_bar * theta * beta_bar * (*psipsi_inv);
  ModuleMap<K>{tpp.module, ppfg.module, m}.check();
  return {tpp, tfg, ppfg, m};
}

// Unit: A -> P^1(A), second-block inclusion.
template <class K>
Mat<K> pp_unit(const PrincipalParts<K>& pp_of_regular, const AlgebraPtr<K>& a) {
  Eigen::Index t = pp_of_regular.omega_tensor.module.dim();
  Mat<K> u = zero_mat<K>(t + a->dim(), a->dim());
  u.block(t, 0, a->dim(), a->dim()) = identity_mat<K>(a->dim());
  return u;
}

// Canonical iso F (x)_A A -> F, f (x) a -> a f.
template <class K>
Mat<K> tensor_unit_right(const TensorData<K>& td, const Module<K>& f, const AlgebraPtr<K>& a) {
  Mat<K> full = zero_mat<K>(f.dim(), f.dim() * a->dim());
  for (Eigen::Index j = 0; j < f.dim(); ++j)
    for (Eigen::Index i = 0; i < a->dim(); ++i)
      full.col(j * a->dim() + i) = f.action(static_cast<int>(i)).col(j);
  return full * td.section;
}

// Canonical iso A (x)_A F -> F, a (x) f -> a f.
template <class K>
Mat<K> tensor_unit_left(const TensorData<K>& td, const Module<K>& f, const AlgebraPtr<K>& a) {
  Mat<K> full = zero_mat<K>(f.dim(), a->dim() * f.dim());
  for (Eigen::Index i = 0; i < a->dim(); ++i)
    for (Eigen::Index j = 0; j < f.dim(); ++j)
      full.col(i * f.dim() + j) = f.action(static_cast<int>(i)).col(j);
  return full * td.section;
}

}  // namespace sqz
