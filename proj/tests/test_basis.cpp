#include <doctest.h>

#include <cmath>
#include <vector>

#include "vnn/basis.hpp"

using namespace vnn;

TEST_CASE("fourier member ordering and values") {
    const BasisFamily f = make_family(BasisKind::fourier, 6, 1.0);
    CHECK(eval_basis(f, 1, 3.7) == 1.0);
    CHECK(eval_basis(f, 2, 0.0) == 0.0);           // sin(0)
    CHECK(eval_basis(f, 3, 0.0) == 1.0);           // cos(0)
    CHECK(eval_basis(f, 4, 0.25) == doctest::Approx(std::sin(2 * 0.25)).epsilon(1e-15));
    CHECK(eval_basis(f, 5, 0.25) == doctest::Approx(std::cos(2 * 0.25)).epsilon(1e-15));
    CHECK(eval_basis(f, 6, 0.25) == doctest::Approx(std::sin(3 * 0.25)).epsilon(1e-15));

    const BasisFamily f2 = make_family(BasisKind::fourier, 3, 2.5);
    CHECK(eval_basis(f2, 2, 0.4) == doctest::Approx(std::sin(1.0)).epsilon(1e-15));
}

TEST_CASE("polynomial members are monomials") {
    const BasisFamily f = make_family(BasisKind::polynomial, 4);
    CHECK(eval_basis(f, 1, 5.0) == 1.0);
    CHECK(eval_basis(f, 2, 5.0) == 5.0);
    CHECK(eval_basis(f, 3, 2.0) == 4.0);
    CHECK(eval_basis(f, 4, -2.0) == -8.0);
    CHECK(eval_basis(f, 1, 0.0) == 1.0);  // x^0 at 0
}

TEST_CASE("classic members") {
    const BasisFamily f = make_family(BasisKind::classic, 4);
    CHECK(eval_basis(f, 1, 0.5) == 0.5);
    // tanh(1), high-precision value 0.76159415595576488812...
    CHECK(eval_basis(f, 2, 1.0) == doctest::Approx(0.7615941559557649).epsilon(1e-15));
    CHECK(eval_basis(f, 3, 0.0) == 0.5);
    CHECK(eval_basis(f, 4, -3.0) == 0.0);
    CHECK(eval_basis(f, 4, 3.0) == 3.0);
}

TEST_CASE("analytic derivatives at pinned points") {
    const BasisFamily fourier = make_family(BasisKind::fourier, 3, 1.0);
    CHECK(eval_basis_deriv(fourier, 1, 5.0) == 0.0);

    const BasisFamily poly = make_family(BasisKind::polynomial, 3);
    CHECK(eval_basis_deriv(poly, 3, 2.0) == 4.0);
    CHECK(eval_basis_deriv(poly, 1, 9.0) == 0.0);

    const BasisFamily classic = make_family(BasisKind::classic, 4);
    CHECK(eval_basis_deriv(classic, 4, 0.0) == 0.0);  // kink convention
    CHECK(eval_basis_deriv(classic, 4, 2.0) == 1.0);
    CHECK(eval_basis_deriv(classic, 1, -7.0) == 1.0);
}

TEST_CASE("derivatives match central differences") {
    const double h = 1e-6;
    const std::vector<double> grid = {-2.1, -1.3, -0.7, -0.2, 0.0, 0.2, 0.9, 1.5, 2.1};
    std::vector<BasisFamily> families = {
        make_family(BasisKind::fourier, 6, 1.0), make_family(BasisKind::fourier, 5, 2.3),
        make_family(BasisKind::polynomial, 6), make_family(BasisKind::classic, 4)};
    for (const BasisFamily& f : families) {
        for (std::size_t i = 1; i <= f.size; ++i) {
            for (double x : grid) {
                if (f.kind == BasisKind::classic && i == 4 && x == 0.0) continue;
                const double fd = (eval_basis(f, i, x + h) - eval_basis(f, i, x - h)) / (2 * h);
                const double an = eval_basis_deriv(f, i, x);
                const double err = std::abs(fd - an);
                const double scale = std::max(std::abs(fd), std::abs(an));
                const bool pass = err <= 1e-9 || (scale > 0 && err / scale <= 1e-6);
                CAPTURE(basis_kind_name(f.kind));
                CAPTURE(i);
                CAPTURE(x);
                CHECK(pass);
            }
        }
    }
}

TEST_CASE("basis_matrix pinned examples") {
    const Mat a = basis_matrix(make_family(BasisKind::polynomial, 2), {0.0, 0.0});
    CHECK(a.rows == 2);
    CHECK(a.cols == 2);
    CHECK(a(0, 0) == 1.0);
    CHECK(a(0, 1) == 1.0);
    CHECK(a(1, 0) == 0.0);
    CHECK(a(1, 1) == 0.0);

    const Mat b = basis_matrix(make_family(BasisKind::fourier, 1, 1.0), {3.7});
    CHECK(b.rows == 1);
    CHECK(b.cols == 1);
    CHECK(b(0, 0) == 1.0);

    const Mat c = basis_matrix(make_family(BasisKind::classic, 2), {1.0, -1.0});
    CHECK(c(0, 0) == 1.0);
    CHECK(c(0, 1) == -1.0);
    CHECK(c(1, 0) == doctest::Approx(0.7615941559557649).epsilon(1e-15));
    CHECK(c(1, 1) == doctest::Approx(-0.7615941559557649).epsilon(1e-15));
}

TEST_CASE("basis_matrix agrees with eval_basis exactly") {
    const BasisFamily f = make_family(BasisKind::fourier, 5, 1.7);
    const Vec nets = {0.3, -1.2, 2.8, 0.0};
    const Mat m = basis_matrix(f, nets);
    for (std::size_t i = 0; i < f.size; ++i) {
        for (std::size_t j = 0; j < nets.size(); ++j) {
            CHECK(m(i, j) == eval_basis(f, i + 1, nets[j]));
        }
    }
}

TEST_CASE("repeated evaluation is bit-identical") {
    const BasisFamily f = make_family(BasisKind::fourier, 6, 2.3);
    for (double x : {0.123, -4.56, 789.0}) {
        for (std::size_t i = 1; i <= f.size; ++i) {
            CHECK(eval_basis(f, i, x) == eval_basis(f, i, x));
            CHECK(eval_basis_deriv(f, i, x) == eval_basis_deriv(f, i, x));
        }
    }
}

TEST_CASE("family validation") {
    CHECK_THROWS_AS(make_family(BasisKind::classic, 5), std::invalid_argument);
    CHECK_THROWS_AS(make_family(BasisKind::fourier, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_family(BasisKind::fourier, 3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_family(BasisKind::fourier, 3, -1.0), std::invalid_argument);

    const BasisFamily f = make_family(BasisKind::polynomial, 3);
    CHECK_THROWS_AS(eval_basis(f, 0, 1.0), std::out_of_range);
    CHECK_THROWS_AS(eval_basis(f, 4, 1.0), std::out_of_range);
    CHECK_THROWS_AS(eval_basis_deriv(f, 4, 1.0), std::out_of_range);
}
