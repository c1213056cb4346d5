#include "doctest.h"

#include <stdexcept>

#include <cmath>
#include <fstream>
#include <random>

#include "besicomp/reproduce.hpp"
#include "besicomp/special_functions.hpp"
#include "besicomp/stats.hpp"
#include "besicomp/table.hpp"

using namespace besicomp;

namespace {

std::vector<ComplexityEntry> reference_table() {
    static const std::vector<ComplexityEntry> table =
        load_complexity_table(std::string(BESICOMP_SOURCE_DIR) + "/data/complexity_table.csv");
    return table;
}

ResidualSeries series_of(std::vector<double> values) {
    ResidualSeries s;
    u64 d = 2;
    for (double v : values) {
        while (!is_prime(d)) ++d;
        s.entries.push_back({d, v});
        ++d;
    }
    return s;
}

} // namespace

TEST_CASE("normal quantile and cdf") {
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963985).epsilon(1e-9));
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
    CHECK(normal_quantile(0.025) == doctest::Approx(-1.959963985).epsilon(1e-9));
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
    CHECK(normal_cdf(normal_quantile(0.7)) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
}

TEST_CASE("student t quantiles from the incomplete beta") {
    const double t368 = student_t_quantile(0.975, 368);
    CHECK(t368 > 1.966);
    CHECK(t368 < 1.967);
    CHECK(t368 == doctest::Approx(1.96643127).epsilon(1e-7));
    CHECK(student_t_quantile(0.975, 150) == doctest::Approx(1.97590533).epsilon(1e-7));
    CHECK(student_t_quantile(0.975, 151) == doctest::Approx(1.97579892).epsilon(1e-7));
    // symmetry and round trip
    CHECK(student_t_quantile(0.1, 17) == doctest::Approx(-student_t_quantile(0.9, 17)));
    CHECK(student_t_cdf(student_t_quantile(0.42, 9), 9) == doctest::Approx(0.42).epsilon(1e-10));
}

TEST_CASE("regularized incomplete beta basics") {
    CHECK(regularized_incomplete_beta(2, 3, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(2, 3, 1.0) == 1.0);
    // I_x(1, 1) = x
    CHECK(regularized_incomplete_beta(1, 1, 0.37) == doctest::Approx(0.37).epsilon(1e-12));
    // I_x(2, 2) = x^2 (3 - 2x)
    CHECK(regularized_incomplete_beta(2, 2, 0.3) ==
          doctest::Approx(0.09 * (3 - 0.6)).epsilon(1e-12));
}

TEST_CASE("ols slope test on a hand example") {
    // y = 0.5 x + noise on x = 2,3,5,7,11: strongly significant slope
    ResidualSeries s = series_of({1.1, 1.4, 2.6, 3.4, 5.6});
    const StatReport report = ols_slope_test(s);
    CHECK(report.stat("slope") == doctest::Approx(0.5046875).epsilon(1e-10));
    CHECK(report.stat("intercept") == doctest::Approx(-0.00625).epsilon(1e-7));
    CHECK(report.stat("T") == doctest::Approx(28.8899982693).epsilon(1e-8));
    CHECK(report.stat("df") == 3.0);
    CHECK_FALSE(report.accept);
    CHECK(report.acceptance_region->second ==
          doctest::Approx(student_t_quantile(0.975, 3)).epsilon(1e-12));
}

TEST_CASE("ols residual orthogonality") {
    std::mt19937_64 gen(99);
    ResidualSeries s;
    u64 d = 2;
    for (int i = 0; i < 200; ++i) {
        while (!is_prime(d)) ++d;
        const double noise = static_cast<double>(gen() % 1000) / 1000.0 - 0.5;
        s.entries.push_back({d, 0.001 * static_cast<double>(d) + noise});
        ++d;
    }
    const StatReport report = ols_slope_test(s);
    const double slope = report.stat("slope");
    const double intercept = report.stat("intercept");
    double sum_e = 0, sum_xe = 0, scale = 0;
    for (const ResidualEntry& e : s.entries) {
        const double err = e.residual - (intercept + slope * static_cast<double>(e.d));
        sum_e += err;
        sum_xe += static_cast<double>(e.d) * err;
        scale += std::fabs(static_cast<double>(e.d) * err);
    }
    CHECK(std::fabs(sum_e) < 1e-8 * (1.0 + scale));
    CHECK(std::fabs(sum_xe) < 1e-8 * (1.0 + scale));
}

TEST_CASE("ols degenerate inputs") {
    CHECK_THROWS_AS(ols_slope_test(series_of({1.0, 2.0})), std::invalid_argument);

    // exact fit y = 2x + 1 -> infinite-T flag instead of dividing by zero
    ResidualSeries s;
    for (u64 d : {2ull, 3ull, 5ull, 7ull}) {
        s.entries.push_back({d, 2.0 * static_cast<double>(d) + 1.0});
    }
    const StatReport report = ols_slope_test(s);
    CHECK(report.stat("slope") == doctest::Approx(2.0));
    CHECK(std::isinf(report.stat("T")));
    CHECK(report.note.find("infinite_T") != std::string::npos);
}

TEST_CASE("shapiro-wilk closed form at n = 3") {
    const std::vector<double> v{1.0, 2.0, 3.0};
    const StatReport report = shapiro_wilk(v);
    CHECK(report.stat("W") == doctest::Approx(1.0).epsilon(1e-12));

    // any 3-point sample symmetric about its mean scores W = 1
    const std::vector<double> sym{-5.0, 1.5, 8.0};
    CHECK(shapiro_wilk(sym).stat("W") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("shapiro-wilk error paths") {
    const std::vector<double> two{1.0, 2.0};
    CHECK_THROWS_AS(shapiro_wilk(two), std::invalid_argument);
    const std::vector<double> flat(10, 3.0);
    CHECK_THROWS_AS(shapiro_wilk(flat), std::invalid_argument);
    const std::vector<double> big(5001, 0.0);
    CHECK_THROWS_AS(shapiro_wilk(big), std::invalid_argument);
}

TEST_CASE("shapiro-wilk W never exceeds one") {
    std::mt19937_64 gen(7);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> v(50);
        for (double& x : v) x = normal(gen);
        const StatReport report = shapiro_wilk(v);
        CHECK(report.stat("W") <= 1.0);
        CHECK(report.stat("W") > 0.0);
    }
}

TEST_CASE("shapiro-wilk calibration on normal samples") {
    // With n = 370 draws from an actual normal, p should exceed 0.05 nearly
    // always; require at least 90 of 100 seeds.
    std::mt19937_64 gen(2024);
    std::normal_distribution<double> normal(0.0, 1.0);
    int accepted = 0;
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> v(370);
        for (double& x : v) x = normal(gen);
        if (*shapiro_wilk(v).p_value > 0.05) ++accepted;
    }
    CHECK(accepted >= 90);
}

TEST_CASE("mann-whitney hand example") {
    ResidualSeries s = series_of({1.0, 2.0, 3.0, 4.0});
    const StatReport report = mann_whitney_scatter(s, 2.5, RankKey::AbsValue);
    // above group {3,4} has ranks 3,4: R = 7, z = (7-5)/sqrt(5/3)
    CHECK(report.stat("rank_sum_above") == doctest::Approx(7.0));
    CHECK(report.stat("z") == doctest::Approx(2.0 / std::sqrt(5.0 / 3.0)).epsilon(1e-12));
    CHECK(report.accept);

    // the mirrored group sum: R_above + R_below = n(n+1)/2
    const double below = 10.0 - report.stat("rank_sum_above");
    CHECK(below == doctest::Approx(3.0));
}

TEST_CASE("mann-whitney rank sums with midranks") {
    std::mt19937_64 gen(5);
    ResidualSeries s;
    u64 d = 2;
    for (int i = 0; i < 101; ++i) {
        while (!is_prime(d)) ++d;
        // coarse grid forces ties
        s.entries.push_back({d, static_cast<double>(gen() % 7) - 3.0});
        ++d;
    }
    const double lambda = s.mean();
    for (RankKey key : {RankKey::AbsValue, RankKey::AbsDeviation, RankKey::PrimeIndex}) {
        const StatReport report = mann_whitney_scatter(s, lambda, key);
        const double n = static_cast<double>(s.entries.size());
        const double r_above = report.stat("rank_sum_above");
        // recompute the below sum and check the total
        double r_below = n * (n + 1) / 2 - r_above;
        CHECK(r_below > 0);
        CHECK(report.stat("n_above") + report.stat("n_below") == n);
    }
}

TEST_CASE("mann-whitney empty split") {
    ResidualSeries s = series_of({1.0, 2.0, 3.0});
    CHECK_THROWS_AS(mann_whitney_scatter(s, 10.0, RankKey::AbsValue), std::invalid_argument);
}

TEST_CASE("histogram") {
    const std::vector<double> values{-0.6, -0.55, 0.1, 0.2, 0.3, 1.0};
    const auto bins = histogram(values, 0.25, 0.0);
    REQUIRE_FALSE(bins.empty());
    CHECK(bins.front().start == doctest::Approx(-0.75));
    CHECK(bins.front().count == 2);
    u64 total = 0;
    for (const HistogramBin& bin : bins) total += bin.count;
    CHECK(total == values.size());

    CHECK(histogram({}, 0.25, 0.0).empty());
    const std::vector<double> clustered{0.1, 0.11, 0.12};
    const auto one = histogram(clustered, 1.0, 0.0);
    REQUIRE(one.size() == 1);
    CHECK(one.front().count == 3);
    CHECK_THROWS_AS(histogram(clustered, 0.0, 0.0), std::invalid_argument);
    const std::vector<double> spread{-1e18, 1e18};
    CHECK_THROWS_AS(histogram(spread, 0.25, 0.0), std::invalid_argument);
}

TEST_CASE("residual series against the reference table") {
    const auto table = reference_table();
    REQUIRE(table.size() == 370);

    const ResidualSeries random = residual_series(ExpectationModel::Random, table);
    CHECK(random.entries.size() == 370);
    CHECK(random.mean() == doctest::Approx(-0.8560326946).epsilon(1e-8));

    const ResidualSeries star = residual_series(ExpectationModel::Star, table);
    CHECK(star.entries.size() == 152);
    CHECK(star.mean() == doctest::Approx(0.57635456).epsilon(1e-6));

    const ResidualSeries dstar = residual_series(ExpectationModel::DoubleStar, table);
    CHECK(dstar.entries.size() == 153);
    CHECK(dstar.mean() == doctest::Approx(0.29677515).epsilon(1e-6));
}

TEST_CASE("full battery on the random residual series") {
    const ResidualSeries series = residual_series(ExpectationModel::Random, reference_table());
    const double lambda = series.mean();

    const StatReport ols = ols_slope_test(series);
    CHECK(ols.stat("slope") == doctest::Approx(4.937064071e-05).epsilon(1e-6));
    CHECK(ols.stat("sigma_s") == doctest::Approx(8.738228065e-05).epsilon(1e-6));
    CHECK(ols.stat("T") == doctest::Approx(0.5649960191).epsilon(1e-6));
    CHECK(ols.stat("intercept") == doctest::Approx(-0.9131914871).epsilon(1e-6));
    CHECK(ols.accept);

    const StatReport sw = shapiro_wilk(series.residuals());
    CHECK(sw.stat("W") == doctest::Approx(0.9913701577).scale(1).epsilon(5e-6));
    CHECK(*sw.p_value == doctest::Approx(0.0296309235).scale(1).epsilon(2e-3));
    CHECK_FALSE(sw.accept); // normality rejected at 5%

    const StatReport u1 = mann_whitney_scatter(series, lambda, RankKey::AbsDeviation);
    CHECK(u1.stat("z") == doctest::Approx(-0.91126809).epsilon(1e-6));
    CHECK(u1.accept);
    const StatReport u1_literal = mann_whitney_scatter(series, lambda, RankKey::AbsValue);
    CHECK(u1_literal.stat("z") == doctest::Approx(-14.76662988).epsilon(1e-6));
    const StatReport u2 = mann_whitney_scatter(series, lambda, RankKey::PrimeIndex);
    CHECK(u2.stat("z") == doctest::Approx(-0.39652082).epsilon(1e-6));
    CHECK(u2.accept);
}

TEST_CASE("histogram of the random residuals matches the reference bars") {
    const ResidualSeries series = residual_series(ExpectationModel::Random, reference_table());
    const auto bins = histogram(series.residuals(), 0.25, 0.0);
    u64 modal_count = 0;
    double modal_start = 0;
    for (const HistogramBin& bin : bins) {
        if (bin.count > modal_count) {
            modal_count = bin.count;
            modal_start = bin.start;
        }
    }
    CHECK(modal_start == doctest::Approx(-0.75));
    CHECK(modal_count == 39);
}

TEST_CASE("reference checks all pass on the bundled table") {
    const ReproductionReport report = run_reproduction(reference_table());
    CHECK(report.n_star == 152);
    CHECK(report.n_double_star == 153);
    CHECK(report.n_small == 2);
    CHECK(report.n_unstarred == 63);
    for (const ReferenceCheck& check : report.checks) {
        CAPTURE(check.name);
        CAPTURE(check.computed);
        CHECK(check.pass);
    }
}

TEST_CASE("csv round trip") {
    const auto table = reference_table();
    const std::string tmp = "roundtrip_test_table.csv";
    save_complexity_table(tmp, table);
    const auto reloaded = load_complexity_table(tmp);
    REQUIRE(reloaded.size() == table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        CHECK(reloaded[i].d == table[i].d);
        CHECK(reloaded[i].count == table[i].count);
    }
    std::remove(tmp.c_str());

    // real formatting keeps 12 significant digits
    CHECK(format_real(29.9646660830096) == "29.964666083");
    CHECK(format_real(4.937064071e-05) == "4.937064071e-05");
    CHECK(csv_split("a,\"b,c\",d") == std::vector<std::string>{"a", "b,c", "d"});
    CHECK(csv_escape("{\"1\":24}") == "\"{\"\"1\"\":24}\"");
}

TEST_CASE("serialized reals re-ingest to 12 significant digits") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> mag(-6.0, 6.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double x = normal(gen) * std::pow(10.0, mag(gen));
        const double back = std::stod(format_real(x));
        CHECK(std::fabs(back - x) <= 5e-12 * std::fabs(x));
    }
}

TEST_CASE("table verification names the first differing prime") {
    const std::vector<ComplexityEntry> good{{3, 6}, {5, 13}, {7, 25}};
    CHECK_NOTHROW(verify_complexity_table(good, 1));
    const std::vector<ComplexityEntry> bad{{3, 6}, {5, 14}, {7, 25}};
    CHECK_THROWS_WITH_AS(verify_complexity_table(bad, 1), doctest::Contains("prime 5"),
                         std::runtime_error);
}

TEST_CASE("table loader rejects malformed input") {
    const std::string tmp = "malformed_table.csv";
    {
        std::ofstream out(tmp);
        out << "d,C_d\n4,10\n";
    }
    CHECK_THROWS_AS(load_complexity_table(tmp), std::runtime_error);
    {
        std::ofstream out(tmp);
        out << "x,y\n3,6\n";
    }
    CHECK_THROWS_AS(load_complexity_table(tmp), std::runtime_error);
    std::remove(tmp.c_str());
    CHECK_THROWS_AS(load_complexity_table("no_such_file.csv"), std::runtime_error);
}
