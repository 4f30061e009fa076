#include <random>

#include "doctest.h"
#include "dqg/haar.hpp"
#include "dqg/kernel.hpp"
#include "fixtures.hpp"

using namespace dqg;
using namespace dqg::test;

namespace {

Config state_mode() {
  Config c;
  c.mode = HaarNormalization::State;
  return c;
}

}  // namespace

TEST_CASE("Haar weight of C(G) is counting measure") {
  for (const auto& name : group_names()) {
    CAPTURE(name);
    const Group g = load_group(name);
    const QuantumGroup qg = group_qg(name);
    const HaarData h = compute_haar(qg);
    CHECK(h.identities.pass());
    CHECK(h.alpha0 == g.identity);
    for (int x = 0; x < g.order; ++x) {
      CHECK(std::abs(h.phi(x) - cplx(1)) <= 1e-12);
      CHECK(std::abs(h.psi(x) - cplx(1)) <= 1e-12);
    }
    const HaarData hs = compute_haar(qg, state_mode());
    for (int x = 0; x < g.order; ++x) CHECK(std::abs(hs.phi(x) - cplx(1.0 / g.order)) <= 1e-12);
  }
}

TEST_CASE("Haar weight of the group algebra is the Plancherel weight") {
  // On CG = (+) M_{d_i}, the left invariant weight with phi(h0) = 1 is sum_i d_i Tr_i.
  for (const auto& name : group_names()) {
    CAPTURE(name);
    const QuantumGroup dq = dual_qg(group_qg(name));
    const HaarData h = compute_haar(dq);
    CHECK(h.identities.pass());
    const BlockShape& s = dq.shape();
    CHECK(s.block_dim(h.alpha0) == 1);
    for (int a = 0; a < s.block_count(); ++a) {
      const int d = s.block_dim(a);
      CHECK(max_abs(h.rho[static_cast<std::size_t>(a)] - double(d) * CMatrix::Identity(d, d)) <= 1e-10);
    }
  }
}

TEST_CASE("modular degeneracy: theta = 1 and phi = psi on Kac fixtures") {
  std::vector<QuantumGroup> all;
  for (const auto& name : group_names()) {
    all.push_back(group_qg(name));
    all.push_back(dual_qg(all.back()));
  }
  all.push_back(load_qg("kac_paljutkin.qg"));
  for (const auto& qg : all) {
    CAPTURE(qg.name());
    for (const Config& cfg : {Config{}, state_mode()}) {
      const HaarData h = compute_haar(qg, cfg);
      CHECK(max_abs_diff(h.theta, AlgebraElement::identity(qg.shape())) <= 1e-9);
      CHECK(max_abs(h.phi - h.psi) <= 1e-9);
      CHECK(left_invariance_residual(qg, h.phi) <= 1e-10);
      CHECK(right_invariance_residual(qg, h.psi) <= 1e-10);
    }
  }
}

TEST_CASE("normalization modes differ by the scalar phi(1)") {
  const QuantumGroup qg = load_qg("kac_paljutkin.qg");
  const HaarData a = compute_haar(qg), b = compute_haar(qg, state_mode());
  const cplx total = apply_functional(a.phi, qg.shape().identity());
  CHECK(std::abs(total - cplx(8)) <= 1e-10);  // sum_a n_a^2 for a Kac algebra with phi(h0) = 1
  CHECK(max_abs(a.phi / total - b.phi) <= 1e-12);
  CHECK(std::abs(apply_functional(b.phi, qg.shape().identity()) - cplx(1)) <= 1e-12);
}

TEST_CASE("counit block absorbs everything through the counit") {
  const QuantumGroup qg = load_qg("kac_paljutkin.qg");
  const CounitBlock cb = find_counit_block(qg, 1e-9);
  const CVector eps = qg.epsilon_vector();
  std::mt19937_64 rng(9);
  const AlgebraElement x = AlgebraElement::from_coefficients(qg.shape(), random_cvector(qg.dim(), rng));
  const cplx ex = eps.cwiseProduct(x.coefficients()).sum();
  CHECK(max_abs_diff(cb.h0 * x, ex * cb.h0) <= 1e-12);
  CHECK(max_abs_diff(x * cb.h0, ex * cb.h0) <= 1e-12);
}

TEST_CASE("slice map and product form") {
  const QuantumGroup qg = group_qg("s3");
  const HaarData h = compute_haar(qg);
  std::mt19937_64 rng(10);
  const CMatrix t = random_hermitian(3, rng);
  const CVector a = random_cvector(qg.dim(), rng);
  const OperatorTensor x = OperatorTensor::elementary(t, AlgebraElement::from_coefficients(qg.shape(), a));
  CHECK(max_abs(slice_id_phi(x, h) - apply_functional(h.phi, a) * t) <= 1e-12);
  const CMatrix b = product_form(qg.shape(), h.phi);
  for (Index k = 0; k < qg.dim(); ++k)
    for (Index l = 0; l < qg.dim(); ++l)
      CHECK(std::abs(b(k, l) - cplx(k == l ? 1.0 : 0.0)) <= 1e-12);
}

TEST_CASE("haar computation requires a verified quantum group") {
  QuantumGroup qg = to_quantum_group(parse_qg(read_text_file(data_path("corrupted.qg"))));
  CHECK_THROWS_AS(compute_haar(qg), Error);
}
