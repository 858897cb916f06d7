#include <doctest.h>

#include <cstdio>
#include <random>

#include "sls/dictionary.hpp"
#include "sls/matrix_io.hpp"
#include "test_support.hpp"

using namespace sls;
using test::random_matrix;

TEST_CASE("normalize_columns") {
  SUBCASE("3-4-5 column") {
    Matrix m(2, 1);
    m.col(0) << 3, 4;
    const Dictionary d = normalize_columns(Dictionary::from_matrix(m));
    CHECK(d.atoms(0, 0) == doctest::Approx(0.6));
    CHECK(d.atoms(1, 0) == doctest::Approx(0.8));
    CHECK(d.scales(0) == doctest::Approx(5.0));
  }

  SUBCASE("identity is unchanged with unit scales") {
    const Dictionary d = normalize_columns(Dictionary::from_matrix(Matrix::Identity(4, 4)));
    CHECK((d.atoms - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((d.scales - Vector::Ones(4)).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("random matrix gets exactly unit norms") {
    std::mt19937_64 rng(3);
    const Dictionary d =
        normalize_columns(Dictionary::from_matrix(random_matrix(20, 30, rng)));
    for (Index j = 0; j < 30; ++j)
      CHECK(std::abs(d.atoms.col(j).norm() - 1.0) < 1e-12);
  }

  SUBCASE("idempotent") {
    std::mt19937_64 rng(5);
    const Dictionary once =
        normalize_columns(Dictionary::from_matrix(random_matrix(10, 12, rng)));
    const Dictionary twice = normalize_columns(once);
    CHECK((once.atoms - twice.atoms).cwiseAbs().maxCoeff() < 1e-15);
  }

  SUBCASE("zero column is rejected with its index") {
    Matrix m = Matrix::Identity(3, 3);
    m.col(1).setZero();
    try {
      normalize_columns(Dictionary::from_matrix(m));
      FAIL("expected ZeroColumn");
    } catch (const ZeroColumn& err) {
      CHECK(err.column == 1);
    }
  }
}

TEST_CASE("mutual_coherence") {
  SUBCASE("orthonormal dictionary has coherence zero") {
    const Dictionary d = Dictionary::from_matrix(Matrix::Identity(4, 4), true);
    CHECK(mutual_coherence(d) == doctest::Approx(0.0));
  }

  SUBCASE("duplicated column gives coherence one") {
    Matrix m(3, 2);
    m.col(0) << 1, 0, 0;
    m.col(1) << 1, 0, 0;
    CHECK(mutual_coherence(Dictionary::from_matrix(m, true)) == doctest::Approx(1.0));
  }

  SUBCASE("matches the double-loop oracle") {
    std::mt19937_64 rng(7);
    const Dictionary d =
        normalize_columns(Dictionary::from_matrix(random_matrix(10, 15, rng)));
    double expected = 0.0;
    for (Index i = 0; i < 15; ++i)
      for (Index j = 0; j < 15; ++j)
        if (i != j)
          expected = std::max(expected, std::abs(d.atoms.col(i).dot(d.atoms.col(j))));
    CHECK(mutual_coherence(d) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(mutual_coherence(d) >= 0.0);
    CHECK(mutual_coherence(d) <= 1.0 + 1e-12);
  }

  SUBCASE("invariant under permutation and sign flips") {
    std::mt19937_64 rng(11);
    Dictionary d = normalize_columns(Dictionary::from_matrix(random_matrix(8, 10, rng)));
    const double base = mutual_coherence(d);
    Dictionary shuffled = d;
    shuffled.atoms.col(0).swap(shuffled.atoms.col(7));
    shuffled.atoms.col(3) *= -1.0;
    CHECK(mutual_coherence(shuffled) == doctest::Approx(base).epsilon(1e-12));
  }

  SUBCASE("unnormalized input is rejected") {
    const Dictionary d = Dictionary::from_matrix(2.0 * Matrix::Identity(3, 3));
    CHECK_THROWS_AS(mutual_coherence(d), NotNormalized);
  }
}

TEST_CASE("build_convolution_dictionary") {
  SUBCASE("unit impulse at upsampling 1 gives the identity") {
    ConvolutionSpec spec;
    spec.impulse_response = Vector::Ones(1);
    spec.signal_length = 5;
    spec.upsampling = 1;
    spec.observation_length = 5;
    const ConvolutionDictionary built = build_convolution_dictionary(spec);
    CHECK(built.dropped_atoms == 0);
    CHECK((built.dictionary.atoms - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("two-tap response yields shifted pairs with adjacent coherence 0.5") {
    ConvolutionSpec spec;
    spec.impulse_response = Vector::Constant(2, 1.0 / std::sqrt(2.0));
    spec.signal_length = 3;
    spec.upsampling = 1;
    spec.observation_length = 3;
    const Dictionary d = build_convolution_dictionary(spec).dictionary;
    REQUIRE(d.n_atoms() == 3);
    // interior adjacent pair: both fully inside the window
    CHECK(d.atoms.col(0).dot(d.atoms.col(1)) == doctest::Approx(0.5));
  }

  SUBCASE("interior zero column is an error when the grid skips the response") {
    ConvolutionSpec spec;
    spec.impulse_response = Vector::Ones(1);  // shorter than the upsampling step
    spec.signal_length = 6;
    spec.upsampling = 3;
    spec.observation_length = 4;
    CHECK_THROWS_AS(build_convolution_dictionary(spec), ZeroColumn);
  }

  SUBCASE("trailing positions outside the window are dropped and reported") {
    ConvolutionSpec spec;
    spec.impulse_response = Vector::Ones(2);
    spec.signal_length = 12;
    spec.upsampling = 1;
    spec.observation_length = 6;
    const ConvolutionDictionary built = build_convolution_dictionary(spec);
    CHECK(built.kept_atoms == 6);
    CHECK(built.dropped_atoms == 6);
  }

  SUBCASE("atoms are shift-structured across one observation sample") {
    const ConvolutionSpec spec = default_convolution_spec(40, 100, 3);
    // rebuild without normalization to compare raw shifts
    const Index u = spec.upsampling;
    const Index filter_len = spec.impulse_response.size();
    const Dictionary d = build_convolution_dictionary(spec).dictionary;
    for (Index j = 30; j < 60; ++j) {
      // both atoms fully interior: response within the window
      if (j + u + filter_len > (d.n_obs() - 1) * u) break;
      Vector lhs = d.atoms.col(j + u).segment(1, d.n_obs() - 1);
      Vector rhs = d.atoms.col(j).segment(0, d.n_obs() - 1);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  SUBCASE("default pulse hits the coherence calibration window") {
    const ConvolutionDictionary built =
        build_convolution_dictionary(default_convolution_spec());
    CHECK(built.dictionary.n_atoms() == 1000);
    CHECK(built.dictionary.n_obs() == 350);
    const double mu = mutual_coherence(built.dictionary);
    CHECK(mu >= 0.78);
    CHECK(mu <= 0.84);
  }
}

TEST_CASE("matrix file round trip") {
  std::mt19937_64 rng(13);
  const Matrix m = random_matrix(7, 5, rng, -3.0, 3.0);
  const std::string path = "roundtrip_test_matrix.txt";
  save_matrix(path, m);
  const Matrix loaded = load_matrix(path);
  REQUIRE(loaded.rows() == 7);
  REQUIRE(loaded.cols() == 5);
  CHECK((loaded - m).cwiseAbs().maxCoeff() == 0.0);  // 17 digits round-trip exactly
  std::remove(path.c_str());

  const Dictionary d = normalize_columns(Dictionary::from_matrix(m));
  save_dictionary(path, d);
  const Dictionary loaded_dict = load_dictionary(path);
  CHECK(loaded_dict.normalized);
  std::remove(path.c_str());
}
