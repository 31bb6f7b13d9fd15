#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "simtext/distributions.hpp"
#include "simtext/error.hpp"

using namespace simtext::stats;

TEST_CASE("normal cdf") {
  CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(norm_cdf(0.25) == doctest::Approx(0.598706325683).epsilon(1e-10));
  CHECK(norm_cdf(-1.0) == doctest::Approx(0.158655253931).epsilon(1e-10));
  CHECK(norm_cdf(1.6448536269514722) == doctest::Approx(0.95).epsilon(1e-12));
}

TEST_CASE("incomplete beta closed forms") {
  for (double x : {0.05, 0.3, 0.5, 0.77, 0.99}) {
    CHECK(inc_beta(1.0, 1.0, x) == doctest::Approx(x).epsilon(1e-14));
    double cubic = 3.0 * x * x - 2.0 * x * x * x;
    CHECK(inc_beta(2.0, 2.0, x) == doctest::Approx(cubic).epsilon(1e-13));
  }
  CHECK(inc_beta(7.5, 7.5, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(inc_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(inc_beta(2.0, 3.0, 1.0) == 1.0);
  CHECK_THROWS_AS(inc_beta(-1.0, 1.0, 0.5), simtext::AnalysisError);
}

TEST_CASE("student t cdf") {
  CHECK(t_cdf(0.0, 7.0) == 0.5);
  CHECK(t_cdf(1.0, 5.0) == doctest::Approx(0.818391266175).epsilon(1e-10));
  CHECK(t_cdf(-2.5, 10.0) == doctest::Approx(0.0157234221183).epsilon(1e-10));
  CHECK(t_cdf(2.0, 1.0) == doctest::Approx(0.85241638235).epsilon(1e-10));
  CHECK(t_cdf(0.5, 1478.7) == doctest::Approx(0.691425263432).epsilon(1e-10));
  CHECK(t_cdf(1.1403, 1581.0) ==
        doctest::Approx(0.872832975123).epsilon(1e-10));
  CHECK(t_cdf(-0.3, 3.7) == doctest::Approx(0.390133743566).epsilon(1e-10));
  CHECK(t_cdf(4.2, 65793.0) == doctest::Approx(0.999986636708).epsilon(1e-10));
  CHECK_THROWS_AS(t_cdf(1.0, 0.0), simtext::AnalysisError);
}

TEST_CASE("student t ppf") {
  CHECK(t_ppf(0.5, 12.0) == 0.0);
  CHECK(t_ppf(0.975, 786.0) == doctest::Approx(1.96298671525).epsilon(1e-9));
  CHECK(t_ppf(0.975, 126.0) == doctest::Approx(1.97897060197).epsilon(1e-9));
  CHECK(t_ppf(0.975, 1478.7) == doctest::Approx(1.96156957132).epsilon(1e-9));
  CHECK(t_ppf(0.995, 30.0) == doctest::Approx(2.74999565357).epsilon(1e-9));
  for (double p : {0.01, 0.2, 0.6, 0.999}) {
    CHECK(t_cdf(t_ppf(p, 9.0), 9.0) == doctest::Approx(p).epsilon(1e-12));
  }
  CHECK_THROWS_AS(t_ppf(0.0, 5.0), simtext::AnalysisError);
  CHECK_THROWS_AS(t_ppf(1.0, 5.0), simtext::AnalysisError);
}

TEST_CASE("central f") {
  CHECK(f_cdf(0.0, 2.0, 10.0) == 0.0);
  CHECK(f_ppf(0.95, 2.0, 326.0) == doctest::Approx(3.02343057054).epsilon(1e-9));
  CHECK(f_ppf(0.95, 3.0, 100.0) == doctest::Approx(2.69553425489).epsilon(1e-9));
  for (double p : {0.05, 0.5, 0.9}) {
    CHECK(f_cdf(f_ppf(p, 4.0, 17.0), 4.0, 17.0) ==
          doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("noncentral t cdf") {
  CHECK(noncentral_t_cdf(1.963, 786.0, 2.8071) ==
        doctest::Approx(0.199420958906).epsilon(1e-8));
  CHECK(noncentral_t_cdf(0.0, 10.0, 1.0) ==
        doctest::Approx(0.158655253931).epsilon(1e-10));
  CHECK(noncentral_t_cdf(2.0, 30.0, 2.5) ==
        doctest::Approx(0.308334453648).epsilon(1e-8));
  CHECK(noncentral_t_cdf(-1.0, 8.0, -0.5) ==
        doctest::Approx(0.32446182132).epsilon(1e-8));
  CHECK(noncentral_t_cdf(3.0, 120.0, 2.0) ==
        doctest::Approx(0.835384787279).epsilon(1e-8));
  CHECK(noncentral_t_cdf(1.5, 60.0, 3.5) ==
        doctest::Approx(0.0234250429245).epsilon(1e-8));
  CHECK(noncentral_t_cdf(-2.0, 15.0, 1.0) ==
        doctest::Approx(0.00256825232932).epsilon(1e-8));
  CHECK(noncentral_t_cdf(5.0, 200.0, 4.0) ==
        doctest::Approx(0.832504618241).epsilon(1e-8));
  // zero noncentrality reduces to the central t
  CHECK(noncentral_t_cdf(1.7, 23.0, 0.0) ==
        doctest::Approx(t_cdf(1.7, 23.0)).epsilon(1e-12));
}

TEST_CASE("noncentral f cdf") {
  CHECK(noncentral_f_cdf(3.0229, 2.0, 326.0, 9.84) ==
        doctest::Approx(0.194965724355).epsilon(1e-8));
  CHECK(noncentral_f_cdf(1.0, 3.0, 40.0, 2.0) ==
        doctest::Approx(0.355106654753).epsilon(1e-8));
  CHECK(noncentral_f_cdf(2.5, 2.0, 100.0, 5.0) ==
        doctest::Approx(0.406999130095).epsilon(1e-8));
  CHECK(noncentral_f_cdf(4.0, 5.0, 20.0, 10.0) ==
        doctest::Approx(0.714272335122).epsilon(1e-8));
  CHECK(noncentral_f_cdf(0.5, 2.0, 326.0, 9.84) ==
        doctest::Approx(0.00769861898108).epsilon(1e-8));
  CHECK(noncentral_f_cdf(3.0, 1.0, 50.0, 1.0) ==
        doctest::Approx(0.758383227029).epsilon(1e-8));
  CHECK(noncentral_f_cdf(0.0, 2.0, 10.0, 3.0) == 0.0);
  CHECK(noncentral_f_cdf(2.2, 3.0, 30.0, 0.0) ==
        doctest::Approx(f_cdf(2.2, 3.0, 30.0)).epsilon(1e-12));
}
