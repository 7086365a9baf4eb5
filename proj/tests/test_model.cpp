#include "hmmaccel/model.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace hmmaccel;

namespace {

HmmModel<double> chain_model() {
  HmmModel<double> m;
  m.pi = Eigen::Vector2d(1, 0);
  m.a.resize(2, 2);
  m.a << 0, 1, 1, 0;
  m.b.resize(2, 2);
  m.b << 1, 0, 0, 1;
  return m;
}

}  // namespace

TEST_CASE("validate_model accepts the degenerate one-state model") {
  HmmModel<double> m{Eigen::VectorXd::Ones(1), Eigen::MatrixXd::Ones(1, 1),
                     Eigen::MatrixXd::Ones(1, 1)};
  CHECK(validate_model(m).empty());
}

TEST_CASE("validate_model reports a pi that does not sum to one") {
  auto m = chain_model();
  m.pi << 0.5, 0.6;
  const auto v = validate_model(m);
  REQUIRE(v.size() == 1);
  CHECK(v[0] == "pi sums to 1.1");
}

TEST_CASE("validate_model reports each bad row") {
  Rng rng(3);
  auto m = oracle::random_model(3, 4, rng);
  m.a.row(1) << 0.5, 0.5, 0.1;
  m.b.row(2) << 0.2, 0.2, 0.2, 0.2;
  const auto v = validate_model(m);
  REQUIRE(v.size() == 2);
  CHECK(v[0].find("a row 1") == 0);
  CHECK(v[1].find("b row 2") == 0);
}

TEST_CASE("validate_model flags negative entries and shape errors") {
  auto m = chain_model();
  m.a << 1.5, -0.5, 1, 0;
  const auto v = validate_model(m);
  CHECK(v.size() == 2);

  auto bad_shape = chain_model();
  bad_shape.a.resize(3, 2);
  bad_shape.a.setConstant(0.5);
  CHECK(validate_model(bad_shape) == std::vector<std::string>{"a must be n_states x n_states"});
}

TEST_CASE("renormalized fixes rows that are only scaled") {
  auto m = chain_model();
  m.pi << 2, 0;
  m.b << 3, 0, 0, 0.5;
  const auto fixed = renormalized(m);
  CHECK(validate_model(fixed).empty());
  CHECK(fixed.pi(0) == 1.0);
}

TEST_CASE("sample_sequences with deterministic emission repeats one symbol") {
  HmmModel<double> m{Eigen::VectorXd::Ones(1), Eigen::MatrixXd::Ones(1, 1),
                     Eigen::MatrixXd(1, 3)};
  m.b << 0, 1, 0;
  const auto d = sample_sequences(m, 20, 7, 42);
  REQUIRE(d.sequences.size() == 20);
  for (const auto& s : d.sequences) CHECK(s == ObservationSequence(7, 1));
}

TEST_CASE("sample_sequences follows a deterministic chain") {
  const auto d = sample_sequences(chain_model(), 3, 6, 9);
  for (const auto& s : d.sequences) CHECK(s == ObservationSequence{0, 1, 0, 1, 0, 1});
}

TEST_CASE("sample_sequences is reproducible and in range") {
  Rng rng(11);
  const auto m = oracle::random_model(3, 10, rng);
  const auto x = sample_sequences(m, 200, 5, 77);
  const auto y = sample_sequences(m, 200, 5, 77);
  const auto z = sample_sequences(m, 200, 5, 78);
  CHECK(x.sequences == y.sequences);
  CHECK(x.sequences != z.sequences);
  for (const auto& s : x.sequences) {
    CHECK(s.size() == 5);
    for (auto v : s) CHECK((v >= 0 && v < 10));
  }
}

TEST_CASE("sample_sequences rejects invalid input") {
  auto m = chain_model();
  CHECK_THROWS_AS(sample_sequences(m, 0, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_sequences(m, 3, 0, 1), std::invalid_argument);
  m.pi << 0.5, 0.6;
  CHECK_THROWS_AS(sample_sequences(m, 3, 3, 1), std::invalid_argument);
}

TEST_CASE("empirical symbol frequencies approach the stationary emission mixture") {
  Rng rng(5);
  auto m = oracle::random_model(3, 10, rng);
  // Start in the stationary distribution so every position is stationary.
  m.pi = oracle::stationary(m.a);
  m.pi /= m.pi.sum();
  const Eigen::VectorXd expected = (m.pi.transpose() * m.b).transpose();

  const auto d = sample_sequences(m, 10000, 5, 2024);
  Eigen::VectorXd all = Eigen::VectorXd::Zero(10);
  Eigen::VectorXd first = Eigen::VectorXd::Zero(10);
  for (const auto& s : d.sequences) {
    first(s[0]) += 1;
    for (auto v : s) all(v) += 1;
  }
  all /= 50000.0;
  first /= 10000.0;
  CHECK((all - expected).cwiseAbs().maxCoeff() <= 0.02);
  CHECK((first - expected).cwiseAbs().maxCoeff() <= 0.02);
}

TEST_CASE("first symbol distribution approaches pi * B for a non-stationary pi") {
  Rng rng(8);
  const auto m = oracle::random_model(3, 4, rng);
  const Eigen::VectorXd expected = (m.pi.transpose() * m.b).transpose();
  const auto d = sample_sequences(m, 10000, 3, 31);
  Eigen::VectorXd first = Eigen::VectorXd::Zero(4);
  for (const auto& s : d.sequences) first(s[0]) += 1.0 / 10000.0;
  CHECK((first - expected).cwiseAbs().maxCoeff() <= 0.02);
}

TEST_CASE("derived seeds differ per stream") {
  CHECK(derive_seed(1, 1) != derive_seed(1, 2));
  CHECK(derive_seed(1, 1) != derive_seed(2, 1));
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
}
