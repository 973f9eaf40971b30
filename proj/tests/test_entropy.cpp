#include <doctest.h>

#include <cmath>
#include <limits>

#include <unsupported/Eigen/MatrixFunctions>

#include "polardyn/channels.hpp"
#include "polardyn/entropy.hpp"
#include "test_support.hpp"

using namespace polardyn;
using namespace polardyn::testing;

TEST_SUITE("entropy") {

TEST_CASE("linear entropy in matrix and Bloch form agree") {
  Rng rng(51);
  for (int d = 2; d <= 5; ++d) {
    const HermitianBasis basis(d);
    for (int trial = 0; trial < 10; ++trial) {
      const CMat rho = random_density(d, rng);
      CHECK(std::abs(linear_entropy(rho) - linear_entropy_from_bloch(vectorize(rho, basis).bloch)) < 1e-12);
    }
    CHECK(linear_entropy(random_pure_state(d, rng)) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(linear_entropy(CMat(CMat::Identity(d, d) / double(d))) == doctest::Approx(max_bloch_norm_squared(d)));
  }
  CHECK_THROWS_AS(linear_entropy(CMat::Identity(2, 2)), InvalidArgument);
  CHECK_THROWS_AS(linear_entropy_from_bloch(BlochVector{2, Eigen::Vector3d(1.0, 0.0, 0.0)}), InvalidArgument);
}

TEST_CASE("isotropic linear entropy curve") {
  const std::vector<double> times{0.0, 0.5, 1.0, 3.0};
  const EntropyTrace pure = isotropic_entropy_curve(1.0, 4, 0.0, times);
  for (std::size_t i = 0; i < times.size(); ++i)
    CHECK(std::abs(pure.values[i] - 0.75 * (1.0 - std::exp(-2.0 * times[i]))) < 1e-15);
  const EntropyTrace mixed = isotropic_entropy_curve(0.5, 2, 0.2, {0.0, 100.0});
  CHECK(mixed.values[0] == doctest::Approx(0.2));
  CHECK(mixed.values[1] == doctest::Approx(0.5));
  CHECK_THROWS_AS(isotropic_entropy_curve(1.0, 2, 0.6, times), InvalidArgument);
  CHECK_THROWS_AS(isotropic_entropy_curve(-1.0, 2, 0.0, times), InvalidArgument);
}

TEST_CASE("block-weighted prediction reduces to the isotropic curve") {
  const SubspaceWeights w{{0.2, 0.3, 0.1}};
  for (double t : {0.0, 0.4, 2.0}) {
    const double expected = isotropic_entropy_curve(0.7, 3, 2.0 / 3.0 - 0.6, {t}).values[0];
    CHECK(std::abs(predicted_linear_entropy(w, {0.7, 0.7, 0.7}, 3, t) - expected) < 1e-14);
  }
  CHECK_THROWS_AS(predicted_linear_entropy(w, {0.7}, 3, 1.0), InvalidArgument);
  CHECK_THROWS_AS(predicted_linear_entropy(w, {0.7, 0.7, 0.7}, 3, -1.0), InvalidArgument);
}

TEST_CASE("von Neumann entropy") {
  Rng rng(52);
  CHECK(von_neumann_entropy(random_pure_state(3, rng)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(von_neumann_entropy(CMat(CMat::Identity(4, 4) / 4.0)) == doctest::Approx(std::log(4.0)));
  const CMat rho = random_density(3, rng);
  // oracle: -Tr(rho log rho) with the reference matrix logarithm
  const double oracle = -(rho * rho.log()).trace().real();
  CHECK(von_neumann_entropy(rho) == doctest::Approx(oracle).epsilon(1e-12));

  CMat slightly_negative = CMat::Zero(2, 2);
  slightly_negative(0, 0) = 1.0 + 1e-12;
  slightly_negative(1, 1) = -1e-12;
  CHECK(von_neumann_entropy(slightly_negative) == doctest::Approx(0.0).epsilon(1e-9));
  CMat negative = CMat::Zero(2, 2);
  negative(0, 0) = 1.1;
  negative(1, 1) = -0.1;
  CHECK_THROWS_AS(von_neumann_entropy(negative), InvalidArgument);
}

TEST_CASE("qubit entropy from the radius") {
  CHECK(qubit_entropy_from_radius(0.0) == doctest::Approx(std::log(2.0)));
  CHECK(qubit_entropy_from_radius(1.0) == 0.0);
  const EntropyTrace trace = qubit_vn_isotropic_curve(0.5, 1.0, {0.0, 1.0, 50.0});
  CHECK(trace.values[0] == 0.0);
  CHECK(trace.values[2] == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(qubit_vn_isotropic_curve(0.5, 1.5, {0.0}), InvalidArgument);
}

TEST_CASE("relative entropy") {
  Rng rng(53);
  for (int d = 2; d <= 4; ++d) {
    const CMat rho = random_density(d, rng);
    const CMat sigma = random_density(d, rng);
    CHECK(std::abs(relative_entropy(rho, rho)) < 1e-12);
    CHECK(relative_entropy(rho, sigma) > 0.0);
    const double oracle = (rho * (rho.log() - sigma.log())).trace().real();
    CHECK(relative_entropy(rho, sigma) == doctest::Approx(oracle).epsilon(1e-10));
    const CMat mixed = CMat::Identity(d, d) / double(d);
    CHECK(relative_entropy(rho, mixed) == doctest::Approx(std::log(double(d)) - von_neumann_entropy(rho)));
  }
  CMat ground = CMat::Zero(2, 2);
  ground(0, 0) = 1.0;
  CHECK(relative_entropy(CMat(CMat::Identity(2, 2) / 2.0), ground) == std::numeric_limits<double>::infinity());
  CHECK(relative_entropy(ground, ground) == doctest::Approx(0.0));
}

TEST_CASE("unital maps exchange no entropy with the maximally mixed state") {
  Rng rng(54);
  const GalleryChannel ch = depolarizing(0.3);
  const CMat in = random_pure_state(2, rng);
  const EntropySplit split = entropy_production_exchange(in, ch.channel.apply(in), CMat::Identity(2, 2) / 2.0);
  CHECK(std::abs(split.delta_e) < 1e-14);
  CHECK(split.delta_p == doctest::Approx(split.delta_s));
  CHECK(split.delta_p > 0.0);
}

TEST_CASE("production equals the drop in relative entropy to a fixed point") {
  // Generalized amplitude damping from the NMR model has a full-rank fixed point.
  const NmrParams p{0.0, 0.8, 0.3, 0.1};
  const LindbladGenerator gen = nmr_generator(p);
  const HermitianBasis basis(2);
  const double z = nmr_equilibrium_z(p);
  const CMat sigma = density_from_bloch(BlochVector{2, Eigen::Vector3d(0.0, 0.0, z)}, basis);
  CHECK(max_abs(apply_generator(gen, sigma)) < 1e-14);
  Rng rng(55);
  for (int trial = 0; trial < 10; ++trial) {
    const CMat in = random_density(2, rng);
    const HomogeneousMatrix h = nmr_matrix(p, 0.7);
    const Vec x = h.linear_part() * vectorize(in, basis).bloch.coords + h.translation();
    const CMat out = density_from_bloch(BlochVector{2, x}, basis);
    const EntropySplit split = entropy_production_exchange(in, out, sigma);
    CHECK(split.delta_p >= -1e-12);
    CHECK(split.delta_p == doctest::Approx(relative_entropy(in, sigma) - relative_entropy(out, sigma)));
    CHECK(split.delta_s == doctest::Approx(split.delta_p + split.delta_e));
  }
}

TEST_CASE("singular fixed point gives infinite production") {
  const AmplitudeDamping ad = amplitude_damping(0.4);
  CMat ground = CMat::Zero(2, 2);
  ground(0, 0) = 1.0;
  const CMat in = CMat::Identity(2, 2) / 2.0;
  const EntropySplit split = entropy_production_exchange(in, ad.channel.apply(in), ground);
  CHECK(split.delta_p == std::numeric_limits<double>::infinity());
  CHECK(split.delta_e == -std::numeric_limits<double>::infinity());
}

}
