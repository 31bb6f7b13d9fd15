#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "simtext/error.hpp"
#include "simtext/rng.hpp"
#include "simtext/stats.hpp"
#include "testutil.hpp"

using namespace simtext;
using stats::GroupSummary;

namespace {

std::vector<double> normals(std::size_t n, double mean, double sd,
                            std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = mean + sd * rng.next_normal();
  return out;
}

}  // namespace

TEST_CASE("welch t on published group summaries") {
  auto r1 = stats::welch_t({800, 75.53, 5.57}, {800, 69.84, 7.45});
  CHECK(r1.t == doctest::Approx(17.3014).epsilon(1e-4));
  CHECK(r1.df == doctest::Approx(1479.59).epsilon(1e-4));
  CHECK(r1.p < 0.001);

  auto r2 = stats::welch_t({800, 17.59, 11.15}, {800, 12.86, 14.27});
  CHECK(r2.t == doctest::Approx(7.3875212).epsilon(1e-6));
  CHECK(r2.df == doctest::Approx(1509.70756).epsilon(1e-6));

  auto r3 = stats::welch_t({800, 92.73, 6.89}, {800, 92.32, 7.48});
  CHECK(r3.t == doctest::Approx(1.1406).epsilon(1e-3));
  CHECK(r3.p == doctest::Approx(0.2543).epsilon(1e-3));

  auto r4 = stats::welch_t({34584, 69.77, 7.14}, {34584, 67.79, 6.60});
  CHECK(r4.t == doctest::Approx(37.8701).epsilon(1e-4));
}

TEST_CASE("welch t properties") {
  GroupSummary a{50, 10.0, 2.0};
  GroupSummary b{60, 8.5, 3.0};
  auto fwd = stats::welch_t(a, b);
  auto rev = stats::welch_t(b, a);
  CHECK(fwd.t == doctest::Approx(-rev.t).epsilon(1e-12));
  CHECK(fwd.df == doctest::Approx(rev.df).epsilon(1e-12));
  CHECK(fwd.p == doctest::Approx(rev.p).epsilon(1e-12));

  auto same = stats::welch_t(a, a);
  CHECK(same.t == 0.0);
  CHECK(same.p == 1.0);

  CHECK_THROWS_AS(stats::welch_t({10, 1.0, 0.0}, {10, 2.0, 0.0}),
                  AnalysisError);
}

TEST_CASE("cohens d") {
  CHECK(stats::cohens_d({800, 75.53, 5.57}, {800, 69.84, 7.45}) ==
        doctest::Approx(0.8651).epsilon(1e-3));
  CHECK(stats::cohens_d({34584, 69.77, 7.14}, {34584, 67.79, 6.60}) ==
        doctest::Approx(0.2879).epsilon(1e-3));
  CHECK(stats::cohens_d({800, 17.59, 11.15}, {800, 12.86, 14.27}) ==
        doctest::Approx(0.3694).epsilon(1e-3));
  CHECK(stats::cohens_d({10, 5.0, 1.0}, {10, 5.0, 2.0}) == 0.0);
  // scale invariance
  double base = stats::cohens_d({20, 3.0, 1.5}, {20, 2.0, 1.2});
  double scaled = stats::cohens_d({20, 9.0, 4.5}, {20, 6.0, 3.6});
  CHECK(base == doctest::Approx(scaled).epsilon(1e-12));
  CHECK_THROWS_AS(stats::cohens_d({5, 1.0, 0.0}, {5, 1.0, 0.0}),
                  AnalysisError);
}

TEST_CASE("quantile interpolation") {
  std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  CHECK(stats::quantile_sorted(v, 0.25) == doctest::Approx(1.75));
  CHECK(stats::quantile_sorted(v, 0.5) == doctest::Approx(2.5));
  CHECK(stats::quantile_sorted(v, 0.0) == 1.0);
  CHECK(stats::quantile_sorted(v, 1.0) == 4.0);
}

TEST_CASE("bootstrap ci determinism and worker invariance") {
  auto a = normals(120, 0.6, 1.0, 11);
  auto b = normals(110, 0.0, 1.0, 12);
  auto c1 = stats::bootstrap_d_ci(a, b, 2000, 99, 1);
  auto c2 = stats::bootstrap_d_ci(a, b, 2000, 99, 1);
  CHECK(c1.lower == c2.lower);
  CHECK(c1.upper == c2.upper);
  auto c4 = stats::bootstrap_d_ci(a, b, 2000, 99, 4);
  CHECK(c1.lower == c4.lower);
  CHECK(c1.upper == c4.upper);
  auto other = stats::bootstrap_d_ci(a, b, 2000, 100, 1);
  CHECK(other.lower != c1.lower);
  CHECK(c1.lower < c1.upper);
}

TEST_CASE("bootstrap ci straddles zero for identical samples") {
  auto a = normals(80, 0.0, 1.0, 5);
  auto ci = stats::bootstrap_d_ci(a, a, 1500, 3);
  CHECK(ci.lower < 0.0);
  CHECK(ci.upper > 0.0);
}

TEST_CASE("bootstrap ci width shrinks with n") {
  auto big_a = normals(2000, 0.5, 1.0, 21);
  auto big_b = normals(2000, 0.0, 1.0, 22);
  std::vector<double> small_a(big_a.begin(), big_a.begin() + 100);
  std::vector<double> small_b(big_b.begin(), big_b.begin() + 100);
  auto wide = stats::bootstrap_d_ci(small_a, small_b, 1500, 7);
  auto narrow = stats::bootstrap_d_ci(big_a, big_b, 1500, 7);
  CHECK(narrow.upper - narrow.lower < wide.upper - wide.lower);
}

TEST_CASE("bootstrap rejects degenerate and undersized input") {
  std::vector<double> flat(50, 3.0);
  CHECK_THROWS_AS(stats::bootstrap_d_ci(flat, flat, 1500, 1), AnalysisError);
  std::vector<double> one{1.0};
  CHECK_THROWS_AS(stats::bootstrap_d_ci(one, flat, 1500, 1), AnalysisError);
  auto a = normals(30, 0.0, 1.0, 2);
  CHECK_THROWS_AS(stats::bootstrap_d_ci(a, a, 999, 1), AnalysisError);
}

TEST_CASE("pearson correlation") {
  CHECK(stats::pearson_r({1, 2, 3}, {1, 2, 4}) ==
        doctest::Approx(0.9819805060619655).epsilon(1e-12));
  CHECK(stats::pearson_r({1, 2, 3, 4}, {1, 2, 3, 4}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(stats::pearson_r({1, 2, 3, 4}, {-1, -2, -3, -4}) ==
        doctest::Approx(-1.0).epsilon(1e-12));
  CHECK_THROWS_AS(stats::pearson_r({1, 2}, {1, 2}), AnalysisError);
  CHECK_THROWS_AS(stats::pearson_r({1, 2, 3}, {1, 2}), AnalysisError);
  CHECK_THROWS_AS(stats::pearson_r({1, 1, 1}, {1, 2, 3}), AnalysisError);
}

TEST_CASE("fisher confidence interval") {
  auto ci = stats::fisher_ci(0.84, 822);
  CHECK(ci.lower == doctest::Approx(0.8186422).epsilon(1e-6));
  CHECK(ci.upper == doctest::Approx(0.8590375).epsilon(1e-6));
  // rounds to the published two decimals
  CHECK(std::round(ci.lower * 100) / 100 == doctest::Approx(0.82));
  CHECK(std::round(ci.upper * 100) / 100 == doctest::Approx(0.86));

  auto zero = stats::fisher_ci(0.0, 403);
  CHECK(zero.upper == doctest::Approx(0.0976874698941034).epsilon(1e-12));
  CHECK(zero.lower == doctest::Approx(-zero.upper).epsilon(1e-12));

  auto wide = stats::fisher_ci(0.5, 20);
  auto tight = stats::fisher_ci(0.5, 200);
  CHECK(wide.upper - wide.lower > tight.upper - tight.lower);
  CHECK_THROWS_AS(stats::fisher_ci(1.0, 100), AnalysisError);
  CHECK_THROWS_AS(stats::fisher_ci(0.2, 3), AnalysisError);
}

TEST_CASE("cronbach alpha from moments") {
  // three items with the published SDs and pairwise correlations
  double s1 = 1.05, s2 = 1.16, s3 = 1.12;
  Eigen::MatrixXd cov(3, 3);
  cov << s1 * s1, 0.65 * s1 * s2, 0.65 * s1 * s3,
         0.65 * s1 * s2, s2 * s2, 0.84 * s2 * s3,
         0.65 * s1 * s3, 0.84 * s2 * s3, s3 * s3;
  double alpha = stats::cronbach_alpha_from_covariance(cov);
  CHECK(alpha == doctest::Approx(0.882735).epsilon(1e-5));
}

TEST_CASE("cronbach alpha from raw ratings") {
  // identical items
  std::vector<double> base = normals(200, 0.0, 1.0, 31);
  std::vector<std::vector<double>> same{base, base, base};
  CHECK(stats::cronbach_alpha(same) == doctest::Approx(1.0).epsilon(1e-12));

  // independent items: alpha near zero
  std::vector<std::vector<double>> indep{normals(4000, 0, 1, 41),
                                         normals(4000, 0, 1, 42),
                                         normals(4000, 0, 1, 43)};
  CHECK(std::fabs(stats::cronbach_alpha(indep)) < 0.1);

  // invariant to item order and per-item constant shifts
  std::vector<std::vector<double>> items{normals(300, 0, 1, 51),
                                         normals(300, 0, 1, 52),
                                         normals(300, 0, 1, 53)};
  for (std::size_t i = 0; i < 300; ++i) {
    items[1][i] += 0.6 * items[0][i];
    items[2][i] += 0.5 * items[0][i];
  }
  double a1 = stats::cronbach_alpha(items);
  std::vector<std::vector<double>> permuted{items[2], items[0], items[1]};
  CHECK(stats::cronbach_alpha(permuted) == doctest::Approx(a1).epsilon(1e-12));
  std::vector<std::vector<double>> shifted = items;
  for (auto& v : shifted[1]) v += 100.0;
  CHECK(stats::cronbach_alpha(shifted) == doctest::Approx(a1).epsilon(1e-12));

  CHECK_THROWS_AS(stats::cronbach_alpha({base}), AnalysisError);
  std::vector<std::vector<double>> flat{{1, 1, 1}, {2, 2, 2}};
  CHECK_THROWS_AS(stats::cronbach_alpha(flat), AnalysisError);
}

TEST_CASE("ols exact fit and group difference") {
  Eigen::MatrixXd X(6, 2);
  Eigen::VectorXd y(6);
  for (int i = 0; i < 6; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = i;
    y(i) = 2.0 * i;
  }
  auto fit = stats::ols(y, X);
  CHECK(fit.beta[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fit.beta[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));

  // indicator-only model equals difference of group means
  auto ga = normals(40, 3.0, 1.0, 61);
  auto gb = normals(50, 1.5, 1.2, 62);
  Eigen::MatrixXd Xg(90, 2);
  Eigen::VectorXd yg(90);
  for (int i = 0; i < 40; ++i) {
    Xg(i, 0) = 1.0;
    Xg(i, 1) = 1.0;
    yg(i) = ga[i];
  }
  for (int i = 0; i < 50; ++i) {
    Xg(40 + i, 0) = 1.0;
    Xg(40 + i, 1) = 0.0;
    yg(40 + i) = gb[i];
  }
  auto gfit = stats::ols(yg, Xg);
  double diff = stats::summarize(ga).mean - stats::summarize(gb).mean;
  CHECK(gfit.beta[1] == doctest::Approx(diff).epsilon(1e-10));

  // orthogonal covariate leaves the group coefficient unchanged
  Eigen::MatrixXd Xo(90, 3);
  Xo.leftCols(2) = Xg;
  for (int i = 0; i < 90; ++i) Xo(i, 2) = (i % 2 == 0) ? 1.0 : -1.0;
  // make the covariate exactly orthogonal to intercept and indicator
  Eigen::MatrixXd P = Xg * (Xg.transpose() * Xg).ldlt().solve(
                                Xg.transpose() * Xo.col(2));
  Xo.col(2) -= P;
  auto ofit = stats::ols(yg, Xo);
  CHECK(ofit.beta[1] == doctest::Approx(gfit.beta[1]).epsilon(1e-9));

  // collinear design rejected
  Eigen::MatrixXd Xr(6, 2);
  Xr.col(0).setOnes();
  Xr.col(1).setOnes();
  CHECK_THROWS_AS(stats::ols(y, Xr), AnalysisError);
}

TEST_CASE("power sample sizes") {
  stats::PowerRequest t_small;
  t_small.design = stats::Design::two_sample_t;
  t_small.effect = 0.20;
  CHECK(stats::power_n(t_small) == 788);
  CHECK(stats::power_at(t_small, 788) >= 0.80);
  CHECK(stats::power_at(t_small, 786) < 0.80);

  stats::PowerRequest t_mid = t_small;
  t_mid.effect = 0.5;
  CHECK(stats::power_n(t_mid) == 128);

  stats::PowerRequest rm;
  rm.design = stats::Design::rm_anova_within;
  rm.effect = 0.10;
  rm.measurements = 3;
  CHECK(stats::power_n(rm) == 164);
  CHECK(stats::power_at(rm, 164) >= 0.80);
  CHECK(stats::power_at(rm, 163) < 0.80);

  stats::PowerRequest rm_uni = rm;
  rm_uni.convention = stats::RmConvention::univariate;
  CHECK(stats::power_n(rm_uni) == 163);

  // monotone in effect and in target power
  stats::PowerRequest strong = t_small;
  strong.effect = 0.4;
  CHECK(stats::power_n(strong) < stats::power_n(t_small));
  stats::PowerRequest stricter = t_small;
  stricter.power = 0.90;
  CHECK(stats::power_n(stricter) > stats::power_n(t_small));

  stats::PowerRequest bad = t_small;
  bad.effect = 0.0;
  CHECK_THROWS_AS(stats::power_n(bad), AnalysisError);
}

TEST_CASE("density summary histogram and kde") {
  auto sample = normals(10000, 0.0, 1.0, 123);
  auto d = stats::density_summary(sample, 40);
  REQUIRE(d.counts.size() == 40);
  REQUIRE(d.bin_edges.size() == 41);
  std::size_t total = 0;
  for (auto c : d.counts) total += c;
  CHECK(total == sample.size());
  CHECK_FALSE(d.kde_skipped);
  REQUIRE(d.kde_x.size() == 256);

  // density near zero close to the standard normal peak
  std::size_t nearest = 0;
  for (std::size_t i = 1; i < d.kde_x.size(); ++i) {
    if (std::fabs(d.kde_x[i]) < std::fabs(d.kde_x[nearest])) nearest = i;
  }
  CHECK(d.kde_y[nearest] == doctest::Approx(0.3989).epsilon(0.05));

  // trapezoidal integral close to one
  double integral = 0.0;
  for (std::size_t i = 1; i < d.kde_x.size(); ++i) {
    integral += 0.5 * (d.kde_y[i] + d.kde_y[i - 1]) *
                (d.kde_x[i] - d.kde_x[i - 1]);
  }
  CHECK(integral == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("density summary constant data") {
  std::vector<double> flat(25, 7.0);
  auto d = stats::density_summary(flat, 10);
  REQUIRE(d.counts.size() == 1);
  CHECK(d.counts[0] == 25);
  CHECK(d.kde_skipped);
  CHECK_FALSE(d.warning.empty());
  CHECK_THROWS_AS(stats::density_summary({1.0}, 10), AnalysisError);
}

TEST_CASE("density csv and svg output") {
  TempDir tmp;
  auto a = normals(500, 0.0, 1.0, 77);
  auto b = normals(500, 1.0, 1.2, 78);
  auto da = stats::density_summary(a, 20);
  auto db = stats::density_summary(b, 20);
  auto path = tmp.file("density.csv");
  stats::write_density_csv(path, da);
  std::string csv = read_file(path);
  CHECK(csv.rfind("x,density\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 257);

  std::string svg = stats::density_svg({{"group_a", da}, {"group_b", db}});
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("group_a") != std::string::npos);
  CHECK(svg.find("group_b") != std::string::npos);
  CHECK(std::count(svg.begin(), svg.end(), '<') > 4);
  // deterministic
  CHECK(svg == stats::density_svg({{"group_a", da}, {"group_b", db}}));
}
