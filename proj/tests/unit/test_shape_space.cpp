#include "helpers.hpp"

#include "wardrobe/shape_space.hpp"

#include <Eigen/Eigenvalues>

using namespace testing;
using doctest::Approx;

namespace {

std::vector<Points> random_samples(std::mt19937_64& rng, int count, int vertices, double spread) {
  std::normal_distribution<double> g(0.0, spread);
  Points base(vertices, 3);
  for (int i = 0; i < base.size(); ++i) base.data()[i] = g(rng) * 10.0;
  std::vector<Points> out;
  for (int s = 0; s < count; ++s) {
    Points p = base;
    for (int i = 0; i < p.size(); ++i) p.data()[i] += g(rng);
    out.push_back(p);
  }
  return out;
}

Eigen::VectorXd flat(const Points& p) { return Eigen::Map<const Eigen::VectorXd>(p.data(), p.size()); }

}  // namespace

TEST_SUITE("shape_space") {
  TEST_CASE("identical samples give the sample as mean and zero spectrum") {
    std::mt19937_64 rng(1);
    const Points sample = random_samples(rng, 1, 20, 0.01).front();
    const PcaFitResult fit = fit_pca({sample, sample, sample}, 2);
    CHECK(max_row_distance(fit.space.mean, sample) < 1e-15);
    CHECK(fit.space.singular_values.cwiseAbs().maxCoeff() < 1e-14);
    const Encoding e = encode(fit.space, sample);
    CHECK(e.z.cwiseAbs().maxCoeff() < 1e-14);
    CHECK(e.residual.cwiseAbs().maxCoeff() < 1e-14);
  }

  TEST_CASE("two samples span one component and reconstruct exactly") {
    std::mt19937_64 rng(2);
    const auto samples = random_samples(rng, 2, 30, 0.002);
    const PcaFitResult fit = fit_pca(samples, 5);
    CHECK(fit.space.component_count() == 1);
    CHECK_FALSE(fit.warning.empty());
    CHECK(fit.space.singular_values[0] > 0.0);
    for (const auto& s : samples) {
      const Encoding e = encode(fit.space, s);
      CHECK(e.residual.cwiseAbs().maxCoeff() < 1e-12);
      CHECK(max_row_distance(decode(fit.space, e.z), s) < 1e-12);
    }
  }

  TEST_CASE("basis matches a dense covariance eigendecomposition") {
    std::mt19937_64 rng(3);
    const auto samples = random_samples(rng, 10, 15, 0.01);
    const int nc = 6;
    const PcaFitResult fit = fit_pca(samples, nc);
    CHECK(fit.warning.empty());

    Eigen::MatrixXd X(45, 10);
    for (int s = 0; s < 10; ++s) X.col(s) = flat(samples[s]);
    const Eigen::VectorXd mean = X.rowwise().mean();
    CHECK((flat(fit.space.mean) - mean).cwiseAbs().maxCoeff() < 1e-12);
    X.colwise() -= mean;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(X * X.transpose());
    for (int c = 0; c < nc; ++c) {
      const Eigen::Index k = 44 - c;  // eigenvalues ascend
      CHECK(fit.space.singular_values[c] == Approx(std::sqrt(eig.eigenvalues()[k])).epsilon(1e-9));
      CHECK(std::abs(fit.space.basis.col(c).dot(eig.eigenvectors().col(k))) == Approx(1.0).epsilon(1e-9));
    }
  }

  TEST_CASE("basis is orthonormal with positive dominant entries") {
    std::mt19937_64 rng(4);
    const PcaFitResult fit = fit_pca(random_samples(rng, 12, 40, 0.01), 8);
    const Eigen::MatrixXd& B = fit.space.basis;
    CHECK((B.transpose() * B - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
    for (int c = 0; c < B.cols(); ++c) {
      Eigen::Index arg;
      B.col(c).cwiseAbs().maxCoeff(&arg);
      CHECK(B(arg, c) > 0.0);
    }
    for (int c = 1; c < B.cols(); ++c) CHECK(fit.space.singular_values[c] <= fit.space.singular_values[c - 1]);
  }

  TEST_CASE("fits are deterministic") {
    std::mt19937_64 a(5), b(5);
    const auto fa = fit_pca(random_samples(a, 8, 25, 0.01), 4, "shirt");
    const auto fb = fit_pca(random_samples(b, 8, 25, 0.01), 4, "shirt");
    CHECK(fa.space.basis == fb.space.basis);
    CHECK(fa.space.garment_class == "shirt");
  }

  TEST_CASE("encode and decode are mutually consistent") {
    std::mt19937_64 rng(6);
    const auto samples = random_samples(rng, 9, 30, 0.005);
    const PcaShapeSpace space = fit_pca(samples, 8).space;

    const Encoding at_mean = encode(space, space.mean);
    CHECK(at_mean.z.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(at_mean.residual.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(decode(space, Eigen::VectorXd::Zero(8)) == space.mean);

    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::VectorXd z = fixtures::random_vector(rng, 8, 0.05);
      const Encoding e = encode(space, decode(space, z));
      CHECK((e.z - z).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(e.residual.cwiseAbs().maxCoeff() < 1e-12);
      CHECK(e.clipped == 0);
    }
    // Training samples lie in the span when n_c = samples - 1.
    for (const auto& s : samples) CHECK(encode(space, s).residual.cwiseAbs().maxCoeff() < 1e-9);

    const Eigen::VectorXd z1 = fixtures::random_vector(rng, 8, 0.05), z2 = fixtures::random_vector(rng, 8, 0.05);
    CHECK(max_row_distance(decode(space, z1 + z2) - space.mean,
                           (decode(space, z1) - space.mean) + (decode(space, z2) - space.mean)) < 1e-12);
    const Points residual = Points::Constant(space.vertex_count(), 3, 0.001);
    CHECK(max_row_distance(decode(space, z1, residual), decode(space, z1) + residual) < 1e-15);
  }

  TEST_CASE("reconstruction error does not grow with more components") {
    std::mt19937_64 rng(7);
    const auto samples = random_samples(rng, 12, 30, 0.01);
    const Points probe = random_samples(rng, 1, 30, 0.01).front() + samples[0] - samples[1];
    double previous = std::numeric_limits<double>::infinity();
    for (int nc = 0; nc <= 11; ++nc) {
      PcaShapeSpace space = fit_pca(samples, nc).space;
      space.residual_cap = 1e9;
      const Encoding e = encode(space, probe);
      const double err = (probe - decode(space, e.z)).norm();
      CHECK(err <= previous + 1e-12);
      previous = err;
    }
  }

  TEST_CASE("residual rows are capped at one centimeter") {
    std::mt19937_64 rng(8);
    const PcaShapeSpace space = fit_pca(random_samples(rng, 5, 20, 0.001), 4).space;
    CHECK(space.residual_cap == 0.01);
    Points far = space.mean;
    far.row(3) += Eigen::RowVector3d(0.0, 0.5, 0.0);
    far.row(7) += Eigen::RowVector3d(0.3, 0.0, 0.0);
    const Encoding e = encode(space, far);
    CHECK(e.clipped >= 2);
    CHECK(e.residual.rowwise().norm().maxCoeff() <= 0.01 + 1e-15);
  }

  TEST_CASE("shape space input errors") {
    std::mt19937_64 rng(9);
    const auto samples = random_samples(rng, 4, 10, 0.01);
    CHECK_THROWS_WITH_AS(fit_pca({samples[0]}, 1), doctest::Contains("at least 2"), Error);
    CHECK_THROWS_AS(fit_pca(samples, -1), Error);
    CHECK_THROWS_WITH_AS(fit_pca({samples[0], Points::Zero(9, 3)}, 1), doctest::Contains("sample 1 has 9"), Error);
    const PcaShapeSpace space = fit_pca(samples, 3).space;
    CHECK_THROWS_WITH_AS(encode(space, Points::Zero(11, 3)), doctest::Contains("11 vertices"), Error);
    CHECK_THROWS_AS(decode(space, Eigen::VectorXd::Zero(2)), Error);
    CHECK_THROWS_AS(decode(space, Eigen::VectorXd::Zero(3), Points::Zero(2, 3)), Error);
  }
}
