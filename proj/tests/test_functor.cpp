#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sqz/functor.hpp"

#include <random>

using namespace sqz;

namespace {

template <class K>
Module<K> trivial_module(const AlgebraPtr<K>& a) {
  std::vector<Mat<K>> act;
  act.push_back(identity_mat<K>(1));
  for (Eigen::Index i = 1; i < a->dim(); ++i) act.push_back(zero_mat<K>(1, 1));
  return Module<K>(a, act);
}

struct MuSetup {
  SquareZero<Fp> sq;
  std::shared_ptr<const MuFunctor<Fp>> mu;
  std::shared_ptr<const IdentityFunctor<Fp>> idb;
  std::shared_ptr<const MuToIdNat<Fp>> nu;
  std::shared_ptr<const ConeOfNatFunctor<Fp>> mutilde;
  std::shared_ptr<const ConeInclusionNat<Fp>> theta;
};

MuSetup mu_setup(const AlgebraPtr<Fp>& a, int r) {
  SquareZero<Fp> sq = trivial_extension(a, r);
  auto kb = std::make_shared<const KahlerData<Fp>>(kahler(sq.total));
  auto mu = std::make_shared<const MuFunctor<Fp>>(sq, kb);
  auto idb = std::make_shared<const IdentityFunctor<Fp>>(sq.total);
  auto nu = std::make_shared<const MuToIdNat<Fp>>(mu, idb);
  auto mutilde = std::make_shared<const ConeOfNatFunctor<Fp>>(nu);
  auto theta = std::make_shared<const ConeInclusionNat<Fp>>(nu, mutilde);
  return {std::move(sq), mu, idb, nu, mutilde, theta};
}

struct AcSetup {
  SquareZero<Fp> sq;
  std::shared_ptr<const MuFunctor<Fp>> mu;
  FunctorPtr<Fp> h;
  std::shared_ptr<const IdentityFunctor<Fp>> ida;
  std::shared_ptr<const AcToIdNat<Fp>> psi;
  std::shared_ptr<const ConeOfNatFunctor<Fp>> htilde;
  std::shared_ptr<const ConeInclusionNat<Fp>> theta;
};

AcSetup ac_setup(const AlgebraPtr<Fp>& a, int r) {
  SquareZero<Fp> sq = trivial_extension(a, r);
  auto kb = std::make_shared<const KahlerData<Fp>>(kahler(sq.total));
  auto mu = std::make_shared<const MuFunctor<Fp>>(sq, kb);
  auto jl = std::make_shared<const JLowerFunctor<Fp>>(sq);
  auto ju = std::make_shared<const JUpperFunctor<Fp>>(sq);
  FunctorPtr<Fp> h = std::make_shared<const ComposeFunctor<Fp>>(
      ju, std::make_shared<const ComposeFunctor<Fp>>(mu, jl));
  auto ida = std::make_shared<const IdentityFunctor<Fp>>(sq.base);
  auto psi = std::make_shared<const AcToIdNat<Fp>>(sq, mu, h, ida);
  auto htilde = std::make_shared<const ConeOfNatFunctor<Fp>>(psi);
  auto theta = std::make_shared<const ConeInclusionNat<Fp>>(psi, htilde);
  return {std::move(sq), mu, h, ida, psi, htilde, theta};
}

}  // namespace

TEST_CASE("canonical extension commutes with shifts strictly") {
  auto a = ground_field<Fp>();
  MuSetup ms = mu_setup(a, 1);
  Module<Fp> jk = j_lower(ms.sq, trivial_module(a));
  ChainComplex<Fp> k(ms.sq.total, -1, {jk, jk}, {zero_mat<Fp>(1, 1)});
  for (int s : {-1, 1, 2}) {
    ChainComplex<Fp> l = ms.mutilde->apply(shift(k, s));
    ChainComplex<Fp> r = shift(ms.mutilde->apply(k), s);
    CHECK(l.same_as(r));
  }
}

TEST_CASE("functoriality: G(g o f) = G(g) o G(f), G(id) = id on sampled maps") {
  std::mt19937_64 rng(3);
  auto a = truncated_polynomial<Fp>(2);
  MuSetup ms = mu_setup(a, 1);
  Module<Fp> v = j_lower(ms.sq, random_module(a, 2, 1, rng));
  Module<Fp> w = j_lower(ms.sq, random_module(a, 2, 2, rng));
  if (v.dim() == 0 || w.dim() == 0) return;
  HomData<Fp> h = hom_over(v, w);
  if (h.basis.empty()) return;
  Mat<Fp> f = h.basis[0];
  HomData<Fp> h2 = hom_over(w, v);
  GradedMap<Fp> gid = ms.mutilde->on_map(v, v, identity_mat<Fp>(v.dim()));
  ChainComplex<Fp> gv = ms.mutilde->on_module(v);
  for (int m = gv.lo(); m <= gv.hi(); ++m)
    CHECK(gid.at(m) == identity_mat<Fp>(gv.term(m).dim()));
  if (!h2.basis.empty()) {
    Mat<Fp> g = h2.basis[h2.basis.size() - 1];
    GradedMap<Fp> lhs = ms.mutilde->on_map(v, v, Mat<Fp>(g * f));
    GradedMap<Fp> rhs = compose(ms.mutilde->on_map(w, v, g), ms.mutilde->on_map(v, w, f));
    for (int m = gv.lo(); m <= gv.hi(); ++m) CHECK(lhs.at(m) == rhs.at(m));
  }
}

TEST_CASE("naturality squares of the mu -> id transformation on random maps") {
  std::mt19937_64 rng(5);
  auto a = truncated_polynomial<Fp>(2);
  MuSetup ms = mu_setup(a, 1);
  for (int trial = 0; trial < 10; ++trial) {
    Module<Fp> v = j_lower(ms.sq, random_module(a, 2, 1, rng));
    Module<Fp> w = j_lower(ms.sq, random_module(a, 2, 2, rng));
    if (v.dim() == 0 || w.dim() == 0) continue;
    HomData<Fp> h = hom_over(v, w);
    if (h.basis.empty()) continue;
    Mat<Fp> f = zero_mat<Fp>(w.dim(), v.dim());
    for (const auto& b : h.basis) f += ScalarSampler<Fp>::sample(rng) * b;
    GradedMap<Fp> left = compose(ms.nu->on_module(w), ms.mu->on_map(v, w, f));
    GradedMap<Fp> right = compose(ms.idb->on_map(v, w, f), ms.nu->on_module(v));
    for (int m = -2; m <= 0; ++m) CHECK(left.at(m) == right.at(m));
  }
}

TEST_CASE("mu -> id is a quasi-isomorphism and mu-tilde is exact") {
  std::mt19937_64 rng(7);
  for (const auto& a : {ground_field<Fp>(), truncated_polynomial<Fp>(2)}) {
    MuSetup ms = mu_setup(a, 1);
    Module<Fp> v = j_lower(ms.sq, random_module(a, 2, 1, rng));
    ChainComplex<Fp> vc = ChainComplex<Fp>::single(v);
    GradedMap<Fp> nu_v = ms.nu->at(vc);
    CHECK(is_closed(nu_v));
    CHECK(is_quasi_iso(nu_v));
    ChainComplex<Fp> mt = ms.mutilde->apply(vc);
    CHECK(is_exact(mt));
  }
}

TEST_CASE("Prop coince: Tor^1 of mu(K) and mu-tilde(K)") {
  auto a = ground_field<Fp>();
  MuSetup ms = mu_setup(a, 1);
  Module<Fp> jk = j_lower(ms.sq, trivial_module(a));
  ChainComplex<Fp> kcx = ChainComplex<Fp>::single(jk);
  // Tor^1(K) concentrated in degree 0 with dim 1 (K = j(k) over k[eps])
  ChainComplex<Fp> t1k = tor_complex(ms.sq, kcx, 1);
  CHECK(t1k.term(0).dim() == 1);
  // mu(K): Tor^1 = I (x) Tor^1(K)[1]
  ChainComplex<Fp> muk = ms.mu->apply(kcx);
  ChainComplex<Fp> t1mu = tor_complex(ms.sq, muk, 1);
  for (int n = t1mu.lo(); n <= t1mu.hi(); ++n) {
    Eigen::Index expect = (n == -1) ? 1 : 0;
    CHECK(homology_at(t1mu, n).module.dim() == expect);
  }
  // mu-tilde(K): Tor^1 = I (x) Tor^1[2] (+) Tor^1
  ChainComplex<Fp> mtk = ms.mutilde->apply(kcx);
  ChainComplex<Fp> t1mt = tor_complex(ms.sq, mtk, 1);
  std::map<int, Eigen::Index> dims;
  for (int n = t1mt.lo(); n <= t1mt.hi(); ++n) dims[n] = homology_at(t1mt, n).module.dim();
  CHECK(dims[-2] == 1);
  CHECK(dims[0] == 1);
  CHECK(dims[-1] == 0);
}

TEST_CASE("Cor stair: mu raises admissibility by one") {
  auto a = ground_field<Fp>();
  MuSetup ms = mu_setup(a, 1);
  Module<Fp> jk = j_lower(ms.sq, trivial_module(a));
  ChainComplex<Fp> kcx = ChainComplex<Fp>::single(jk);
  CHECK(admissible(ms.sq, kcx, 0));
  CHECK(!admissible(ms.sq, kcx, 1));
  ChainComplex<Fp> muk = ms.mu->apply(kcx);
  CHECK(admissible(ms.sq, muk, 1));
  CHECK(!admissible(ms.sq, muk, 2));
  ChainComplex<Fp> mu2k = ms.mu->apply(muk);
  CHECK(admissible(ms.sq, mu2k, 2));
}

TEST_CASE("S_{n+1} o S_n = 0 for G = mu-tilde") {
  for (int r : {1, 2}) {
    auto a = ground_field<Fp>();
    MuSetup ms = mu_setup(a, r);
    Module<Fp> jk = j_lower(ms.sq, trivial_module(a));
    ChainComplex<Fp> kcx = ChainComplex<Fp>::single(jk);
    Operation<Fp> g = as_operation<Fp>(ms.mutilde);
    NatComponent<Fp> theta = as_component<Fp>(ms.theta);
    FnTower<Fp> t = fn_tower(g, theta, kcx, 2);
    for (int i = 0; i < 2; ++i) {
      GradedMap<Fp> ss = compose(t.s[i + 1], t.s[i]);
      CHECK(ss.is_zero());
    }
    // S_0 = -Theta (single summand with sign (-1)^{0+0+1}); hence Theta_0 =
    // -S_0 = Theta as the structure theorem requires
    GradedMap<Fp> th0 = theta(kcx);
    for (int m = -1; m <= 1; ++m) CHECK(t.s[0].at(m) == Mat<Fp>(-th0.at(m)));
  }
}

TEST_CASE("S_{n+1} o S_n = 0 for G = H-tilde over A = k") {
  auto a = ground_field<Fp>();
  AcSetup as = ac_setup(a, 1);
  Module<Fp> k = trivial_module(a);
  ChainComplex<Fp> kcx = ChainComplex<Fp>::single(k);
  Operation<Fp> g = as_operation<Fp>(as.htilde);
  NatComponent<Fp> theta = as_component<Fp>(as.theta);
  FnTower<Fp> t = fn_tower(g, theta, kcx, 2);
  for (int i = 0; i < 2; ++i) CHECK(compose(t.s[i + 1], t.s[i]).is_zero());
}

TEST_CASE("Theorem hard: F_0 = id, Theta_0 = Theta, Theta_n closed, identity (iii)") {
  auto a = ground_field<Fp>();
  for (int r : {1}) {
    MuSetup ms = mu_setup(a, r);
    Module<Fp> jk = j_lower(ms.sq, trivial_module(a));
    ChainComplex<Fp> kcx = ChainComplex<Fp>::single(jk);
    Operation<Fp> g = as_operation<Fp>(ms.mutilde);
    NatComponent<Fp> theta = as_component<Fp>(ms.theta);
    // (i) F_0 = id
    FnTower<Fp> t0 = fn_tower(g, theta, kcx, 0);
    CHECK(t0.fn.cx.same_as(kcx));
    for (int n = 0; n <= 2; ++n) {
      FnTower<Fp> t = fn_tower(g, theta, kcx, n);
      CHECK(is_closed(t.theta_n));
      CHECK(hard_identity_holds(g, theta, t, n));
      // cone exact sequence termwise: dims of F_n = dims of G^n[-n] + F_{n-1}
      if (n > 0) {
        FnTower<Fp> tp = fn_tower(g, theta, kcx, n - 1);
        ChainComplex<Fp> gsh = shift(t.pows[n], -n);
        for (int m = t.fn.cx.lo(); m <= t.fn.cx.hi(); ++m)
          CHECK(t.fn.cx.term(m).dim() == gsh.term(m).dim() + tp.fn.cx.term(m).dim());
      }
    }
  }
}

TEST_CASE("Theorem hard for the H-tilde instance over A = k, r = 1") {
  auto a = ground_field<Fp>();
  AcSetup as = ac_setup(a, 1);
  Module<Fp> k = trivial_module(a);
  ChainComplex<Fp> kcx = ChainComplex<Fp>::single(k);
  Operation<Fp> g = as_operation<Fp>(as.htilde);
  NatComponent<Fp> theta = as_component<Fp>(as.theta);
  for (int n = 0; n <= 2; ++n) {
    FnTower<Fp> t = fn_tower(g, theta, kcx, n);
    CHECK(is_closed(t.theta_n));
    CHECK(hard_identity_holds(g, theta, t, n));
  }
}

TEST_CASE("inductive construction reproduces the direct one") {
  auto a = ground_field<Fp>();
  MuSetup ms = mu_setup(a, 1);
  Module<Fp> jk = j_lower(ms.sq, trivial_module(a));
  ChainComplex<Fp> kcx = ChainComplex<Fp>::single(jk);
  Operation<Fp> g = as_operation<Fp>(ms.mutilde);
  NatComponent<Fp> theta = as_component<Fp>(ms.theta);
  for (int n = 0; n <= 1; ++n) {
    FnTower<Fp> tn = fn_tower(g, theta, kcx, n);
    FnTower<Fp> tn1 = fn_tower(g, theta, kcx, n + 1);
    // F_{n+1} = cone(Theta_n)[-1] on the nose
    ConeData<Fp> cd = cone(tn.theta_n);
    ChainComplex<Fp> find = shift(cd.cx, -1);
    CHECK(find.same_as(tn1.fn.cx));
    // kappa_{n+1} = last-factor projection; mu_{n+1}, Theta_{n+1}, rho_{n+1}
    GradedMap<Fp> kap = tn1.fn.project[n + 1];
    GradedMap<Fp> pi = tower_projection(tn1, tn, n + 1);
    GradedMap<Fp> gtau = g.apply_map(tn.fn.inject[n]);
    // mu_{n+1} = G(tau_n) o kappa_{n+1} - rho_n o Pi_{n+1} in this engine's
    // conventions (the engine's rho is the paper's negated, bracket flipped)
    GradedMap<Fp> mu_ind{cxptr(tn1.fn.cx), cxptr(tn.gfn), -1, {}};
    for (int m = tn1.fn.cx.lo(); m <= tn1.fn.cx.hi(); ++m) {
      Mat<Fp> c = gtau.at(m - 1) * kap.at(m) - compose(tn.rho_n, pi).at(m);
      if (!is_zero_mat(c)) mu_ind.set(m, c);
    }
    // the boundary of mu_{n+1} is the composition G(Pi_{n+1}) o Theta_{F_{n+1}}
    // (up to the global bracket sign of this engine's conventions)
    GradedMap<Fp> theta_f = theta(tn1.fn.cx);
    GradedMap<Fp> gpi = g.apply_map(pi);
    GradedMap<Fp> target = compose(gpi, theta_f);
    GradedMap<Fp> br = hom_delta(mu_ind);
    for (int m = tn1.fn.cx.lo(); m <= tn1.fn.cx.hi(); ++m)
      CHECK(br.at(m) == Mat<Fp>(-target.at(m)));
    // Theta_{n+1} = G(kappa_{n+1}) o Theta_{F_{n+1}} - G(Theta_n) o mu_{n+1}
    GradedMap<Fp> gkap = g.apply_map(kap);
    GradedMap<Fp> gthn = g.apply_map(tn.theta_n);
    GradedMap<Fp> cand{cxptr(tn1.fn.cx), tn1.theta_n.tgt, 0, {}};
    for (int m = tn1.fn.cx.lo(); m <= tn1.fn.cx.hi(); ++m) {
      Mat<Fp> c = gkap.at(m) * theta_f.at(m) - gthn.at(m - 1) * mu_ind.at(m);
      if (!is_zero_mat(c)) cand.set(m, c);
    }
    for (int m = tn1.fn.cx.lo(); m <= tn1.fn.cx.hi(); ++m)
      CHECK(cand.at(m) == tn1.theta_n.at(m));
    // rho_{n+1} = G(sigma_{n+1}) o mu_{n+1} up to the same bracket sign
    GradedMap<Fp> sigma{cxptr(tn.fn.cx), cxptr(tn1.fn.cx), 0, {}};
    for (int i = 0; i <= n; ++i)
      sigma = add(sigma, compose(tn1.fn.inject[i], tn.fn.project[i]));
    GradedMap<Fp> gsigma = g.apply_map(sigma);
    GradedMap<Fp> rho_ind{cxptr(tn1.fn.cx), cxptr(tn1.gfn), -1, {}};
    for (int m = tn1.fn.cx.lo(); m <= tn1.fn.cx.hi(); ++m) {
      Mat<Fp> c = gsigma.at(m - 1) * mu_ind.at(m);
      if (!is_zero_mat(c)) rho_ind.set(m, c);
    }
    for (int m = tn1.fn.cx.lo(); m <= tn1.fn.cx.hi(); ++m)
      CHECK(rho_ind.at(m) == Mat<Fp>(-tn1.rho_n.at(m)));
  }
}

TEST_CASE("Theorem strange: exact sequence and corollary zwip") {
  auto a = ground_field<Fp>();
  MuSetup ms = mu_setup(a, 1);
  Module<Fp> jk = j_lower(ms.sq, trivial_module(a));
  ChainComplex<Fp> kcx = ChainComplex<Fp>::single(jk);
  Operation<Fp> g = as_operation<Fp>(ms.mutilde);
  NatComponent<Fp> theta = as_component<Fp>(ms.theta);
  for (int n = 1; n <= 2; ++n) {
    FnTower<Fp> tn1 = fn_tower(g, theta, kcx, n + 1);
    FnTower<Fp> tn = fn_tower(g, theta, kcx, n);
    FnTower<Fp> tnm1 = fn_tower(g, theta, kcx, n - 1);
    StrangeData<Fp> sd = strange_sequence(g, theta, tn1, tn, tnm1, n);
    CHECK(is_closed(sd.p));
    CHECK(is_closed(sd.nu));
    // p lifts Pi_{n+1}
    GradedMap<Fp> pi = tower_projection(tn1, tn, n + 1);
    GradedMap<Fp> iota_comp = compose(sd.delta_fn.iota, sd.p);
    for (int m = tn1.fn.cx.lo(); m <= tn1.fn.cx.hi(); ++m)
      CHECK(iota_comp.at(m) == pi.at(m));
    // zwip: p_{n+1} equalizes Delta(Pi_n) and p_n o iota
    StrangeData<Fp> sdn = strange_sequence(g, theta, tn, tnm1,
                                           (n >= 2) ? fn_tower(g, theta, kcx, n - 2) : tnm1,
                                           n - 1, false);
    DeltaStep<Fp> src_step = delta_step(g, theta, tn.fn.cx);
    DeltaStep<Fp> tgt_step = delta_step(g, theta, tnm1.fn.cx);
    GradedMap<Fp> pin = tower_projection(tn, tnm1, n);
    GradedMap<Fp> dpi = delta_map(g, theta, pin, src_step, tgt_step);
    GradedMap<Fp> route1 = compose(dpi, sd.p);
    GradedMap<Fp> route2 = compose(sdn.p, compose(sd.delta_fn.iota, sd.p));
    for (int m = tn1.fn.cx.lo(); m <= tn1.fn.cx.hi(); ++m)
      CHECK(route1.at(m) == route2.at(m));
  }
}

TEST_CASE("Theorem orange: j_n is an isomorphism onto the equalizer") {
  auto a = ground_field<Fp>();
  for (int r : {1, 2}) {
    MuSetup ms = mu_setup(a, r);
    Module<Fp> jk = j_lower(ms.sq, trivial_module(a));
    ChainComplex<Fp> kcx = ChainComplex<Fp>::single(jk);
    Operation<Fp> g = as_operation<Fp>(ms.mutilde);
    NatComponent<Fp> theta = as_component<Fp>(ms.theta);
    int nmax = (r == 1) ? 3 : 2;
    for (int n = 1; n <= nmax; ++n) {
      OrangeData<Fp> od = orange_comparison(g, theta, kcx, n);
      CHECK(is_closed(od.jn));
      CHECK(is_closed(od.jn_core));
      // explicit inverse is a chain map and inverts
      CHECK(is_closed(od.jn_inverse));
      GradedMap<Fp> round = compose(od.jn_inverse, od.jn_core);
      for (int m = od.equalizer.cx.lo(); m <= od.equalizer.cx.hi(); ++m) {
        Eigen::Index d = round.src->term(m).dim();
        if (d > 0) CHECK(round.at(m) == identity_mat<Fp>(d));
      }
    }
  }
}

TEST_CASE("Theorem orange for the H-tilde instance, n = 2") {
  auto a = ground_field<Fp>();
  AcSetup as = ac_setup(a, 1);
  Module<Fp> k = trivial_module(a);
  ChainComplex<Fp> kcx = ChainComplex<Fp>::single(k);
  Operation<Fp> g = as_operation<Fp>(as.htilde);
  NatComponent<Fp> theta = as_component<Fp>(as.theta);
  OrangeData<Fp> od = orange_comparison(g, theta, kcx, 2);
  CHECK(is_closed(od.jn_core));
  CHECK(is_closed(od.jn_inverse));
}

TEST_CASE("Prop since: the split T equalizers are the truncated sums") {
  auto a = ground_field<Fp>();
  for (int r : {1, 2}) {
    SquareZero<Fp> sq = trivial_extension(a, r);
    auto t = std::make_shared<const SplitTFunctor<Fp>>(sq);
    auto ida = std::make_shared<const IdentityFunctor<Fp>>(sq.base);
    auto psi = std::make_shared<const SplitTToIdNat<Fp>>(t, ida);
    Operation<Fp> h = as_operation<Fp>(t);
    NatComponent<Fp> psic = as_component<Fp>(psi);
    Module<Fp> k = trivial_module(a);
    ChainComplex<Fp> kcx = ChainComplex<Fp>::single(k);
    std::vector<ChainComplex<Fp>> hpow{kcx};
    int nmax = 3;
    for (int i = 0; i < nmax; ++i) hpow.push_back(h.apply(hpow.back()));
    EqualizerData<Fp> eq = std_equalizer(h, psic, hpow, nmax);
    // H^[3](k) = (+)_{p<=3} I^{(x)p} (x) k [p]: dims r^p in degree -p
    Eigen::Index expect = 1;
    for (int p = 0; p <= nmax; ++p) {
      CHECK(eq.cx.term(-p).dim() == expect);
      expect *= r;
    }
    // derived comparison is a quasi-isomorphism
    Operation<Fp> ht = cone_to_id_operation(h, psic);
    NatComponent<Fp> tt = cone_to_id_inclusion<Fp>(psic);
    HEqualizers<Fp> he = h_equalizers(h, psic, ht, tt, kcx, 2);
    CHECK(is_closed(he.compare));
    GradedMap<Fp> full = compose(he.derived.incl, he.compare);
    CHECK(is_closed(full));
    CHECK(is_quasi_iso(he.compare));
  }
}

TEST_CASE("derived equalizer comparison for the AC instance over A = k") {
  auto a = ground_field<Fp>();
  AcSetup as = ac_setup(a, 1);
  Module<Fp> k = trivial_module(a);
  ChainComplex<Fp> kcx = ChainComplex<Fp>::single(k);
  Operation<Fp> h = as_operation<Fp>(as.h);
  NatComponent<Fp> psic = as_component<Fp>(as.psi);
  Operation<Fp> ht = cone_to_id_operation(h, psic);
  NatComponent<Fp> tt = cone_to_id_inclusion<Fp>(psic);
  for (int n = 1; n <= 2; ++n) {
    HEqualizers<Fp> he = h_equalizers(h, psic, ht, tt, kcx, n);
    CHECK(is_closed(he.compare));
    CHECK(is_quasi_iso(he.compare));
  }
}

TEST_CASE("Prop morita: a quasi-isomorphism H -> T compatible with the projections") {
  // Gamma: H(V) -> T(V) in the split model: on homology it is an iso; the
  // induced maps on standard equalizers are quasi-isomorphisms
  auto a = ground_field<Fp>();
  AcSetup as = ac_setup(a, 2);
  SquareZero<Fp>& sq = as.sq;
  auto tf = std::make_shared<const SplitTFunctor<Fp>>(sq);
  auto ida = std::make_shared<const IdentityFunctor<Fp>>(sq.base);
  auto tpsi = std::make_shared<const SplitTToIdNat<Fp>>(tf, ida);
  Module<Fp> k = trivial_module(a);
  ChainComplex<Fp> kcx = ChainComplex<Fp>::single(k);
  // check H(k) and T(k) have the same homology (H simeq T)
  ChainComplex<Fp> hk = as.h->apply(kcx);
  ChainComplex<Fp> tk = tf->apply(kcx);
  for (int m = -1; m <= 0; ++m)
    CHECK(homology_at(hk, m).module.dim() == homology_at(tk, m).module.dim());
  CHECK(homology_at(hk, -1).module.dim() == 2);  // I (x) k, r = 2
  CHECK(homology_at(hk, 0).module.dim() == 1);
}
