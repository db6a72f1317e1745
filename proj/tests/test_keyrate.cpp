#include <cmath>

#include "doctest.h"
#include "ghzswitch/channels.h"
#include "ghzswitch/ghz_diagonal.h"
#include "ghzswitch/keyrate.h"
#include "oracle.h"

using namespace ghzswitch;

TEST_SUITE("keyrate") {

TEST_CASE("qber_x") {
  const auto labels = client_labels(4);
  CHECK(qber_x(DensityMatrix::ghz(labels)) == doctest::Approx(0.0));
  CHECK(qber_x(DensityMatrix::maximally_mixed(labels)) == doctest::Approx(0.5));
  const DensityMatrix dephased = apply_dephasing(DensityMatrix::ghz(labels), labels[2], 0.1);
  const double parity = oracle::expect(oracle::dephase(oracle::ghz(4), 2, 4, 0.1), "XXXX");
  CHECK(qber_x(dephased) == doctest::Approx((1 - parity) / 2).epsilon(1e-14));
  CHECK(qber_x(dephased) == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("qber_z") {
  const auto labels = client_labels(3);
  const DensityMatrix g = DensityMatrix::ghz(labels);
  CHECK(qber_z(g, 2) == doctest::Approx(0.0));
  CHECK(qber_z(g, 3) == doctest::Approx(0.0));

  const double a = 0.7;
  const DensityMatrix mixed = apply_dark_count_mix(g, labels[2], a);
  const double zz = oracle::expect(oracle::depolarize(oracle::ghz(3), 2, 3, a), "ZIZ");
  CHECK(qber_z(mixed, 3) == doctest::Approx((1 - zz) / 2).epsilon(1e-14));
  CHECK(qber_z(mixed, 3) == doctest::Approx((1 - a) / 2).epsilon(1e-14));
  CHECK(qber_z(mixed, 2) == doctest::Approx(0.0));

  DensityMatrix d = g;
  for (std::size_t i = 0; i < labels.size(); ++i) d = apply_dephasing(d, labels[i], 0.1 * static_cast<double>(i + 1));
  CHECK(qber_z(d, 2) == doctest::Approx(0.0));
  CHECK(qber_z(d, 3) == doctest::Approx(0.0));
  CHECK_THROWS(qber_z(g, 1));
  CHECK_THROWS(qber_z(g, 4));
}

TEST_CASE("binary_entropy") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
  CHECK(binary_entropy(0.25) == doctest::Approx(oracle::h2(0.25)).epsilon(1e-14));
  CHECK(binary_entropy(0.25) == doctest::Approx(binary_entropy(0.75)).epsilon(1e-15));
  CHECK(binary_entropy(0.25) == doctest::Approx(0.811278).epsilon(1e-6));
  CHECK_THROWS(binary_entropy(-0.1));
  CHECK_THROWS(binary_entropy(1.1));
}

TEST_CASE("cka_rate") {
  const KeyRate ideal = cka_rate(123.0, 0.0, {0.0, 0.0, 0.0});
  CHECK(ideal.raw == 123.0);
  CHECK(ideal.clamped == 123.0);

  const KeyRate dead = cka_rate(10.0, 0.5, {0.02, 0.05});
  CHECK(dead.raw == doctest::Approx(-10.0 * oracle::h2(0.05)).epsilon(1e-14));
  CHECK(dead.raw <= 0.0);
  CHECK(dead.clamped == 0.0);

  CHECK(cka_rate(1.0, 0.25, {0.0}).raw == doctest::Approx(1 - oracle::h2(0.25)).epsilon(1e-14));
  CHECK(cka_rate(1.0, 0.25, {0.0}).raw == doctest::Approx(0.188722).epsilon(1e-5));
  CHECK_THROWS(cka_rate(1.0, 0.1, {}));
}

TEST_CASE("bipartite baseline divides by the network uses") {
  for (double rate : {0.0, 1.0, 3.0, 7.25, -2.5, 1e-17, 123456.789}) {
    CHECK(bipartite_baseline(rate, 4) == rate / 3);
  }
  CHECK(bipartite_baseline(9.0, 2) == 9.0);
  CHECK_THROWS(bipartite_baseline(1.0, 1));
}

TEST_CASE("worst pairwise QBER is picked by entropy") {
  RunStatistics s;
  s.q_z = {0.1, 0.95, 0.2};
  s.stderr_q_z = {0.01, 0.02, 0.03};
  CHECK(s.q_z_argmax() == 2);
  CHECK(s.q_z_max() == 0.2);
  CHECK(s.q_z_max_stderr() == 0.03);
}

}  // TEST_SUITE
