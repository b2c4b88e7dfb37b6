#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/oracles.hpp"
#include "tgcm/csr.hpp"
#include "tgcm/rng.hpp"
#include "tgcm/tensor.hpp"

using namespace tgcm;

namespace {

Mat<double> random_mat(Rng& rng, int rows, int cols, double lo = -2.0,
                       double hi = 2.0) {
  Mat<double> m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = rng.uniform(lo, hi);
  return m;
}

}  // namespace

TEST_CASE("matmul basics") {
  Mat<float> x(1, 2);
  x << 1, 2;
  Mat<float> y(2, 1);
  y << 3, 4;
  CHECK(matmul(x, y)(0, 0) == 11.0f);

  Mat<float> id = Mat<float>::Identity(2, 2);
  Mat<float> m(2, 2);
  m << 1, 2, 3, 4;
  CHECK(matmul(id, m) == m);
  CHECK(matmul(Mat<float>(Mat<float>::Zero(2, 2)), m).isZero());

  Mat<float> bad(3, 3);
  CHECK_THROWS_AS(matmul(x, bad), Error);
}

TEST_CASE("matmul associativity within float tolerance") {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    Mat<float> a = random_mat(rng, 4, 4).cast<float>();
    Mat<float> b = random_mat(rng, 4, 4).cast<float>();
    Mat<float> c = random_mat(rng, 4, 4).cast<float>();
    Mat<float> left = matmul(matmul(a, b), c);
    Mat<float> right = matmul(a, matmul(b, c));
    CHECK((left - right).cwiseAbs().maxCoeff() < 1e-4f);
  }
}

TEST_CASE("spmm equals the dense product") {
  Csr<float> id = Csr<float>::identity(3);
  Mat<float> x(3, 2);
  x << 1, 2, 3, 4, 5, 6;
  CHECK(spmm(id, x) == x);

  auto half = to_csr<float>({{0, 0, 0.5f}, {0, 1, 0.5f}, {1, 0, 0.5f}, {1, 1, 0.5f}}, 2);
  Mat<float> col(2, 1);
  col << 1, 3;
  Mat<float> out = spmm(half, col);
  CHECK(out(0, 0) == doctest::Approx(2.0f));
  CHECK(out(1, 0) == doctest::Approx(2.0f));

  Csr<float> zero(2);
  CHECK(spmm(zero, col).isZero());

  CHECK_THROWS_AS(spmm(zero, x), Error);
}

TEST_CASE("spmm matches the triple-loop oracle on random sparse matrices") {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    int n = rng.next_int(1, 8);
    int d = rng.next_int(1, 5);
    std::vector<Triplet<float>> triplets;
    std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (rng.next_double() < 0.4) {
          double v = rng.uniform(-2.0, 2.0);
          triplets.emplace_back(r, c, static_cast<float>(v));
          dense[r][c] = static_cast<float>(v);
        }
    Csr<float> s = to_csr(std::move(triplets), n);
    Mat<float> x = random_mat(rng, n, d).cast<float>();
    std::vector<std::vector<double>> xd(n, std::vector<double>(d));
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < d; ++c) xd[r][c] = x(r, c);
    auto want = oracle::matmul_dense(dense, xd);
    Mat<float> got = spmm(s, x);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < d; ++c)
        CHECK(std::abs(got(r, c) - want[static_cast<std::size_t>(r)]
                                       [static_cast<std::size_t>(c)]) < 1e-6);
  }
}

TEST_CASE("leaky_relu and its derivative convention") {
  Mat<float> x(1, 3);
  x << 3.0f, -1.0f, 0.0f;
  Mat<float> y = leaky_relu(x, 0.2f);
  CHECK(y(0, 0) == 3.0f);
  CHECK(y(0, 1) == doctest::Approx(-0.2f));
  CHECK(y(0, 2) == 0.0f);

  Mat<float> d = leaky_relu_deriv(x, 0.2f);
  CHECK(d(0, 0) == 1.0f);
  CHECK(d(0, 1) == 0.2f);
  CHECK(d(0, 2) == 1.0f);  // derivative 1 at exactly 0

  // idempotent on the nonnegative side
  Mat<float> pos(1, 2);
  pos << 0.0f, 5.0f;
  CHECK(leaky_relu(leaky_relu(pos, 0.2f), 0.2f) == leaky_relu(pos, 0.2f));
}

TEST_CASE("softmax_row is stabilized and normalized") {
  Mat<double> zeros(1, 2);
  zeros << 0, 0;
  Mat<double> p = softmax_row(zeros);
  CHECK(p(0, 0) == doctest::Approx(0.5));
  CHECK(p(0, 1) == doctest::Approx(0.5));

  Mat<double> x(1, 2);
  x << std::log(2.0), 0.0;
  p = softmax_row(x);
  CHECK(p(0, 0) == doctest::Approx(2.0 / 3.0));
  CHECK(p(0, 1) == doctest::Approx(1.0 / 3.0));

  Mat<double> big(1, 2);
  big << 1000.0, 1000.0;
  p = softmax_row(big);
  CHECK(std::isfinite(p(0, 0)));
  CHECK(p(0, 0) == doctest::Approx(0.5));

  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    Mat<double> row = random_mat(rng, 1, rng.next_int(1, 6), -30.0, 30.0);
    Mat<double> out = softmax_row(row);
    CHECK(std::abs(out.sum() - 1.0) < 1e-6);
    for (Index j = 0; j < out.cols(); ++j) CHECK(out(0, j) > 0.0);
  }
}

TEST_CASE("concat_rows") {
  Mat<float> a(1, 1);
  a << 1;
  Mat<float> b(1, 2);
  b << 2, 3;
  Mat<float> joined = concat_rows<float>({a, b});
  CHECK(joined.cols() == 3);
  CHECK(joined(0, 0) == 1);
  CHECK(joined(0, 1) == 2);
  CHECK(joined(0, 2) == 3);

  CHECK(concat_rows<float>({a}) == a);
  Mat<float> swapped = concat_rows<float>({b, a});
  CHECK(swapped(0, 0) == 2);
  CHECK(swapped(0, 2) == 1);

  CHECK_THROWS_AS(concat_rows<float>({}), Error);
  Mat<float> tall(2, 1);
  CHECK_THROWS_AS(concat_rows<float>({tall}), Error);
}

TEST_CASE("gradcheck is exact for quadratics") {
  Param<double> theta("theta", Mat<double>::Constant(1, 1, 3.0));
  theta.grad(0, 0) = 6.0;  // d(theta^2) at 3
  auto loss = [&]() { return theta.value(0, 0) * theta.value(0, 0); };
  auto report = gradcheck(loss, {&theta});
  CHECK(report.max_rel_error < 1e-10);
}

TEST_CASE("gradcheck flags a doubled analytic gradient at ~1/3") {
  Param<double> theta("theta", Mat<double>::Constant(1, 1, 3.0));
  theta.grad(0, 0) = 12.0;  // doubled on purpose
  auto loss = [&]() { return theta.value(0, 0) * theta.value(0, 0); };
  auto report = gradcheck(loss, {&theta});
  CHECK(report.max_rel_error == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  CHECK(report.worst_param == "theta");
}

TEST_CASE("gradcheck over no parameters returns zero") {
  auto loss = []() { return 42.0; };
  auto report = gradcheck(loss, {});
  CHECK(report.max_rel_error == 0.0);
}

TEST_CASE("gradcheck raises on a non-finite loss") {
  Param<double> theta("theta", Mat<double>::Constant(1, 1, 1.0));
  auto loss = [&]() { return std::log(-theta.value(0, 0)); };
  CHECK_THROWS_AS(gradcheck(loss, {&theta}), Error);
}
