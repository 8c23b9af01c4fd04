#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sqz/ext.hpp"

#include <random>

using namespace sqz;

namespace {

// random two-term complex M -> N over a
template <class K, class Rng>
ChainComplex<K> random_two_term(const AlgebraPtr<K>& a, Rng& rng, int lo = -1) {
  Module<K> m = random_module(a, 2, 1, rng);
  Module<K> n = random_module(a, 2, 1, rng);
  HomData<K> h = hom_over(m, n);
  Mat<K> d = zero_mat<K>(n.dim(), m.dim());
  for (const auto& b : h.basis) d += ScalarSampler<K>::sample(rng) * b;
  return ChainComplex<K>(a, lo, {m, n}, {d});
}

template <class K, class Rng>
GradedMap<K> random_chain_selfmap(const ChainComplex<K>& c, Rng& rng) {
  // a random closed degree-0 endomorphism: solve the closedness system
  HomComplex<K> hc = hom_complex(cxptr(c), cxptr(c));
  Mat<K> ker = kernel_basis(hc.cx.diff(0));
  Vec<K> mix = Vec<K>::Constant(ker.cols(), K(0));
  for (Eigen::Index r = 0; r < ker.rows(); ++r)
    mix += ScalarSampler<K>::sample(rng) * ker.row(r).transpose();
  return hc.from_coords(0, mix);
}

}  // namespace

TEST_CASE("cone of the identity is contractible (homology zero)") {
  std::mt19937_64 rng(3);
  auto a = truncated_polynomial<Fp>(2);
  ChainComplex<Fp> c = random_two_term(a, rng);
  ConeData<Fp> cd = cone(identity_chain_map(cxptr(c)));
  CHECK(is_exact(cd.cx));
}

TEST_CASE("cone of zero map is K[1] (+) L") {
  std::mt19937_64 rng(5);
  auto a = ground_field<Fp>();
  ChainComplex<Fp> k = random_two_term(a, rng), l = random_two_term(a, rng);
  ConeData<Fp> cd = cone(zero_map(cxptr(k), cxptr(l)));
  SumData<Fp> sd = direct_sum_complexes<Fp>({shift(k, 1), l});
  CHECK(cd.cx.same_as(sd.cx));
}

TEST_CASE("cone homology of multiplication by x on k[x]/(x^2)") {
  auto a = truncated_polynomial<Fp>(2);
  Module<Fp> reg = free_module(a, 1);
  Vec<Fp> x(2);
  x << Fp(0), Fp(1);
  ChainComplex<Fp> c = ChainComplex<Fp>::single(reg);
  GradedMap<Fp> f = zero_map(cxptr(c), cxptr(c));
  f.set(0, reg.act(x));
  ConeData<Fp> cd = cone(f);
  auto h = homology(cd.cx);
  CHECK(h.at(-1).module.dim() == 1);
  CHECK(h.at(0).module.dim() == 1);
}

TEST_CASE("Lemma MC identities hold for every cone built") {
  std::mt19937_64 rng(7);
  for (const auto& a : catalog<Fp>()) {
    ChainComplex<Fp> k = random_two_term(a, rng), l = random_two_term(a, rng);
    HomComplex<Fp> hc = hom_complex(cxptr(k), cxptr(l));
    Mat<Fp> ker = kernel_basis(hc.cx.diff(0));
    if (ker.rows() == 0) continue;
    GradedMap<Fp> f = hc.from_coords(0, Vec<Fp>(ker.row(0).transpose()));
    f.src = cxptr(k);
    f.tgt = cxptr(l);
    ConeData<Fp> cd = cone(f);
    // (i) composition cone(f) -> K[1] -> L[1] equals [kappa]
    GradedMap<Fp> f1 = shift(f, 1);
    GradedMap<Fp> comp = compose(f1, cd.proj_src);
    GradedMap<Fp> brk = bracket0(cd.kappa);
    for (int n = cd.cx.lo(); n <= cd.cx.hi(); ++n) CHECK(comp.at(n) == brk.at(n));
    // (ii) composition K -> L -> cone(f) equals hom_delta(sigma)
    GradedMap<Fp> jf = compose(cd.incl_tgt, f);
    GradedMap<Fp> bs = hom_delta(cd.sigma);
    for (int n = k.lo(); n <= k.hi(); ++n) CHECK(jf.at(n) == bs.at(n));
  }
}

TEST_CASE("doublecone: cone{L -> cone(f)}[-1] = K (+) cone(id_L)[-1]") {
  std::mt19937_64 rng(9);
  auto a = truncated_polynomial<Fp>(2);
  for (int trial = 0; trial < 5; ++trial) {
    ChainComplex<Fp> k = random_two_term(a, rng), l = random_two_term(a, rng);
    HomComplex<Fp> hc = hom_complex(cxptr(k), cxptr(l));
    Mat<Fp> ker = kernel_basis(hc.cx.diff(0));
    Vec<Fp> mix = Vec<Fp>::Constant(ker.cols(), Fp(0));
    for (Eigen::Index r = 0; r < ker.rows(); ++r)
      mix += ScalarSampler<Fp>::sample(rng) * ker.row(r).transpose();
    GradedMap<Fp> f = hc.from_coords(0, mix);
    ConeData<Fp> cd = cone(f);
    ConeData<Fp> dd = cone(cd.incl_tgt);
    ChainComplex<Fp> z = shift(dd.cx, -1);
    // explicit splitting: K embeds by (f, -id, 0)-style, and the complement is
    // cone(id_L)[-1]; verify via an isomorphism of complexes assembled blockwise
    ConeData<Fp> il = cone(identity_chain_map(cxptr(l)));
    SumData<Fp> rhs = direct_sum_complexes<Fp>({k, shift(il.cx, -1)});
    // dimension and homology agreement (an explicit iso is checked in the
    // functor suite via Eq. fib; here we check the canonical invariants)
    for (int n = z.lo(); n <= z.hi(); ++n) CHECK(z.term(n).dim() == rhs.cx.term(n).dim());
    for (int n = z.lo(); n <= z.hi(); ++n)
      CHECK(homology_at(z, n).module.dim() == homology_at(rhs.cx, n).module.dim());
  }
}

TEST_CASE("shift round trip and signs") {
  std::mt19937_64 rng(11);
  auto a = fat_point<Fp>();
  ChainComplex<Fp> c = random_two_term(a, rng);
  CHECK(shift(shift(c, 1), -1).same_as(c));
  CHECK(shift(c, 1).diff(-2) == Mat<Fp>(-c.diff(-1)));
}

TEST_CASE("iterated cone: single term and contractible two-term") {
  std::mt19937_64 rng(13);
  auto a = truncated_polynomial<Fp>(2);
  ChainComplex<Fp> t0 = random_two_term(a, rng);
  IteratedConeData<Fp> single = iterated_cone<Fp>({t0}, {});
  CHECK(single.cx.same_as(t0));
  IteratedConeData<Fp> two = iterated_cone<Fp>({t0, t0}, {identity_chain_map(cxptr(t0))});
  CHECK(is_exact(two.cx));
}

TEST_CASE("iterated cone of two terms equals cone(t)[-1] with the minus sign") {
  std::mt19937_64 rng(15);
  auto a = truncated_polynomial<Fp>(2);
  ChainComplex<Fp> k = random_two_term(a, rng);
  GradedMap<Fp> f = random_chain_selfmap(k, rng);
  IteratedConeData<Fp> psi = iterated_cone<Fp>({k, k}, {f});
  // cone(Lambda)[-1] with Lambda = -t^0 on the last factor (Lemma-style peel)
  GradedMap<Fp> lambda = scale(f, Fp(-1));
  ChainComplex<Fp> peeled = shift(cone(lambda).cx, -1);
  // reorder: cone(g)[-1] = K (+) L[-1] with our block order (K-part first);
  // Psi = T0 (+) T1[-1]; same order, so complexes must agree on the nose
  CHECK(psi.cx.same_as(peeled));
}

TEST_CASE("three-term iterated cone homology matches cone-of-cone") {
  std::mt19937_64 rng(17);
  auto a = truncated_polynomial<Fp>(2);
  // Koszul-like segment: A ->x A ->x A over k[x]/(x^2), maps compose to zero
  Module<Fp> reg = free_module(a, 1);
  Vec<Fp> x(2);
  x << Fp(0), Fp(1);
  ChainComplex<Fp> c = ChainComplex<Fp>::single(reg);
  GradedMap<Fp> f = zero_map(cxptr(c), cxptr(c));
  f.set(0, reg.act(x));
  IteratedConeData<Fp> psi = iterated_cone<Fp>({c, c, c}, {f, f});
  CHECK(!compose(f, f).is_zero() == false);
  // peel per Lemma: Psi_T = cone(Lambda)[-1], Lambda = -t^1 on the last factor of Psi_{T'}
  IteratedConeData<Fp> psi2 = iterated_cone<Fp>({c, c}, {f});
  // Lambda: Psi_{T'} -> T^2[-1], equal to -t^1 on the T^1[-1] factor (degree 1)
  GradedMap<Fp> lambda = zero_map(cxptr(psi2.cx), cxptr(shift(c, -1)));
  lambda.set(1, Mat<Fp>(-(f.at(0) * psi2.project[1].at(1))));
  CHECK(is_closed(lambda));
  ChainComplex<Fp> peeled = shift(cone(lambda).cx, -1);
  CHECK(psi.cx.same_as(peeled));
}

TEST_CASE("tensor with the unit complex is the identity up to iso") {
  std::mt19937_64 rng(19);
  auto a = truncated_polynomial<Fp>(2);
  ChainComplex<Fp> c = random_two_term(a, rng);
  ChainComplex<Fp> unit = ChainComplex<Fp>::single(free_module(a, 1));
  TotalTensor<Fp> t = tensor_total(c, unit);
  CHECK(t.cx.total_dim() == c.total_dim());
  for (int n = c.lo(); n <= c.hi(); ++n)
    CHECK(homology_at(t.cx, n).module.dim() == homology_at(c, n).module.dim());
}

TEST_CASE("tensor total d^2 = 0 and brute-force dims") {
  std::mt19937_64 rng(21);
  auto a = truncated_polynomial<Fp>(2);
  ChainComplex<Fp> c = random_two_term(a, rng), d = random_two_term(a, rng);
  TotalTensor<Fp> t = tensor_total(c, d);
  CHECK_NOTHROW(t.cx.validate());
  Eigen::Index expect = 0;
  for (int p = c.lo(); p <= c.hi(); ++p)
    for (int q = d.lo(); q <= d.hi(); ++q)
      expect += tensor_over(c.term(p), d.term(q)).module.dim();
  CHECK(t.cx.total_dim() == expect);
}

TEST_CASE("smart truncation: H^n(tau^{>= m} K) = H^n(K) for n >= m, 0 below") {
  std::mt19937_64 rng(23);
  auto a = truncated_polynomial<Fp>(3);
  Module<Fp> k(a, {identity_mat<Fp>(1), zero_mat<Fp>(1, 1), zero_mat<Fp>(1, 1)});
  Resolution<Fp> res = free_resolution(k, 3);
  ChainComplex<Fp> c = res.cx;
  for (int m = c.lo(); m <= c.hi(); ++m) {
    auto [tau, to_tau] = truncate_ge(c, m);
    CHECK(is_closed(to_tau));
    for (int n = c.lo() - 1; n <= c.hi() + 1; ++n) {
      Eigen::Index expect = (n >= m) ? homology_at(c, n).module.dim() : 0;
      CHECK(homology_at(tau, n).module.dim() == expect);
    }
  }
}

TEST_CASE("hom complex: H^0 = chain maps modulo homotopy; id not a boundary") {
  std::mt19937_64 rng(25);
  auto a = truncated_polynomial<Fp>(2);
  ChainComplex<Fp> c = random_two_term(a, rng);
  HomComplex<Fp> hc = hom_complex(cxptr(c), cxptr(c));
  GradedMap<Fp> idm = identity_chain_map(cxptr(c));
  idm.src = hc.a;
  idm.tgt = hc.b;
  CHECK(hom_is_closed(hc, idm));
  // id ~ 0 iff contractible
  bool contractible = is_exact(c);
  CHECK(hom_write_as_boundary(hc, idm).has_value() == contractible);
  // contractibility of cone(id) detected
  ConeData<Fp> cd = cone(identity_chain_map(cxptr(c)));
  HomComplex<Fp> hcc = hom_complex(cxptr(cd.cx), cxptr(cd.cx));
  GradedMap<Fp> idc = identity_chain_map(cxptr(cd.cx));
  idc.src = hcc.a;
  idc.tgt = hcc.b;
  CHECK(hom_write_as_boundary(hcc, idc).has_value());
}

TEST_CASE("qis detection") {
  auto a = truncated_polynomial<Fp>(2);
  Module<Fp> k(a, {identity_mat<Fp>(1), zero_mat<Fp>(1, 1)});
  Resolution<Fp> res = free_resolution(k, 3);
  // augmentation from the truncated resolution is not a qis (homology at -3)
  GradedMap<Fp> aug{cxptr(res.cx), cxptr(ChainComplex<Fp>::single(k)), 0, {}};
  aug.set(0, res.augment);
  CHECK(is_closed(aug));
  CHECK(!is_quasi_iso(aug));
  // identity is
  CHECK(is_quasi_iso(identity_chain_map(cxptr(res.cx))));
  // K -> 0 with K exact
  ConeData<Fp> cd = cone(identity_chain_map(cxptr(res.cx)));
  GradedMap<Fp> tozero = zero_map(cxptr(cd.cx), cxptr(ChainComplex<Fp>::zero(a)));
  CHECK(is_quasi_iso(tozero));
}

TEST_CASE("cone_lift: u with image in L and rho = 0 gives kappa o u") {
  std::mt19937_64 rng(27);
  auto a = truncated_polynomial<Fp>(2);
  ChainComplex<Fp> k = random_two_term(a, rng), l = random_two_term(a, rng);
  HomComplex<Fp> hc = hom_complex(cxptr(k), cxptr(l));
  Mat<Fp> ker = kernel_basis(hc.cx.diff(0));
  Vec<Fp> mix = Vec<Fp>::Constant(ker.cols(), Fp(0));
  for (Eigen::Index r = 0; r < ker.rows(); ++r)
    mix += ScalarSampler<Fp>::sample(rng) * ker.row(r).transpose();
  GradedMap<Fp> f = hc.from_coords(0, mix);
  ConeData<Fp> cd = cone(f);
  // u := j o (any chain map T -> L); here T = L, u = j
  GradedMap<Fp> u = cd.incl_tgt;
  GradedMap<Fp> rho = zero_map(u.src, f.src, 0);
  GradedMap<Fp> uhat = cone_lift(cd, f, u, rho);
  CHECK(is_closed(uhat));
  for (int n = l.lo(); n <= l.hi(); ++n) CHECK(uhat.at(n) == compose(cd.kappa, u).at(n));
  // diagram identity u - j o uhat = hom_delta(sigma o rho) = 0 here
  GradedMap<Fp> lhs = sub(u, compose(cd.incl_tgt, uhat));
  CHECK(lhs.is_zero());
}

TEST_CASE("cone_lift with f = id and a built null-homotopy") {
  std::mt19937_64 rng(29);
  auto a = ground_field<Fp>();
  ChainComplex<Fp> k = random_two_term(a, rng);
  GradedMap<Fp> idk = identity_chain_map(cxptr(k));
  ConeData<Fp> cd = cone(idk);
  CxPtr<Fp> cp = cxptr(cd.cx);
  // u: T -> cone(id) a random closed map; pi o u must be null-homotopic since
  // cone(id) is contractible; find rho with bracket0(rho) = pi o u
  ChainComplex<Fp> t = random_two_term(a, rng);
  HomComplex<Fp> hct = hom_complex(cxptr(t), cp);
  Mat<Fp> ker = kernel_basis(hct.cx.diff(0));
  if (ker.rows() > 0) {
    GradedMap<Fp> u = hct.from_coords(0, Vec<Fp>(ker.row(ker.rows() - 1).transpose()));
    GradedMap<Fp> piu = compose(cd.proj_src, u);
    // solve bracket0(rho) = piu: bracket0 = -hom_delta on degree 0
    HomComplex<Fp> hk = hom_complex(u.src, idk.src);
    GradedMap<Fp> piu_k{u.src, idk.src, 1, piu.comps};
    auto sol = solve<Fp>(Mat<Fp>(-hk.cx.diff(0)), hk.to_coords(piu_k));
    REQUIRE(sol.has_value());
    GradedMap<Fp> rho = hk.from_coords(0, *sol);
    GradedMap<Fp> uhat = cone_lift(cd, idk, u, rho);
    CHECK(is_closed(uhat));
    GradedMap<Fp> lhs = sub(u, compose(cd.incl_tgt, uhat));
    GradedMap<Fp> sigrho = compose(cd.sigma, rho);
    GradedMap<Fp> rhs = hom_delta(sigrho);
    for (int n = t.lo(); n <= t.hi(); ++n) CHECK(lhs.at(n) == rhs.at(n));
  }
}
