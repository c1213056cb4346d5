#include "besicomp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "besicomp/special_functions.hpp"
#include "besicomp/symmetry.hpp"

namespace besicomp {

double ResidualSeries::mean() const {
    double sum = 0;
    for (const ResidualEntry& e : entries) sum += e.residual;
    return entries.empty() ? 0.0 : sum / static_cast<double>(entries.size());
}

std::vector<double> ResidualSeries::residuals() const {
    std::vector<double> out;
    out.reserve(entries.size());
    for (const ResidualEntry& e : entries) out.push_back(e.residual);
    return out;
}

double StatReport::stat(const std::string& name) const {
    for (const auto& [key, value] : statistics) {
        if (key == name) return value;
    }
    throw std::out_of_range("StatReport: no statistic named " + name);
}

const char* to_string(RankKey key) {
    switch (key) {
        case RankKey::AbsValue: return "abs_value";
        case RankKey::AbsDeviation: return "abs_deviation";
        case RankKey::PrimeIndex: return "prime_index";
    }
    return "?";
}

StatReport ols_slope_test(const ResidualSeries& series) {
    const std::size_t n = series.entries.size();
    if (n < 3) throw std::invalid_argument("ols_slope_test: need at least 3 points");

    double xbar = 0, ybar = 0;
    for (const ResidualEntry& e : series.entries) {
        xbar += static_cast<double>(e.d);
        ybar += e.residual;
    }
    xbar /= static_cast<double>(n);
    ybar /= static_cast<double>(n);

    double sxx = 0, sxy = 0;
    for (const ResidualEntry& e : series.entries) {
        const double dx = static_cast<double>(e.d) - xbar;
        sxx += dx * dx;
        sxy += dx * (e.residual - ybar);
    }
    if (sxx == 0) throw std::invalid_argument("ols_slope_test: zero variance in x");

    const double slope = sxy / sxx;
    const double intercept = ybar - slope * xbar;
    double sse = 0;
    for (const ResidualEntry& e : series.entries) {
        const double err = e.residual - (intercept + slope * static_cast<double>(e.d));
        sse += err * err;
    }
    const double df = static_cast<double>(n - 2);
    const double t_crit = student_t_quantile(0.975, df);

    StatReport report;
    report.test = "ols_slope_t";
    report.acceptance_region = {-t_crit, t_crit};
    if (sse <= 0) {
        report.statistics = {{"slope", slope}, {"intercept", intercept}, {"sigma_s", 0.0},
                             {"T", std::numeric_limits<double>::infinity()}, {"df", df}};
        report.note = "infinite_T: perfect fit (SSE = 0)";
        report.accept = false;
        report.p_value = 0.0;
        return report;
    }
    const double sigma_s = std::sqrt(sse / df / sxx);
    const double t = slope / sigma_s;
    report.statistics = {{"slope", slope}, {"intercept", intercept}, {"sigma_s", sigma_s},
                         {"T", t}, {"df", df}};
    report.p_value = 2.0 * (1.0 - student_t_cdf(std::fabs(t), df));
    report.accept = std::fabs(t) <= t_crit;
    return report;
}

namespace {

double polynomial(std::span<const double> coeff, double x) {
    double r = 0;
    for (std::size_t i = coeff.size(); i-- > 0;) r = r * x + coeff[i];
    return r;
}

/// Midranks (ties get the average of the ranks they span), 1-based.
std::vector<double> midranks(std::span<const double> keys) {
    const std::size_t n = keys.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    std::vector<double> rank(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && keys[order[j + 1]] == keys[order[i]]) ++j;
        const double shared = 0.5 * static_cast<double>((i + 1) + (j + 1));
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = shared;
        i = j + 1;
    }
    return rank;
}

} // namespace

StatReport shapiro_wilk(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 3 || n > 5000) {
        throw std::invalid_argument("shapiro_wilk: sample size must lie in [3, 5000]");
    }
    std::vector<double> x(values.begin(), values.end());
    std::sort(x.begin(), x.end());
    if (x.front() == x.back()) {
        throw std::invalid_argument("shapiro_wilk: all sample values are identical");
    }

    // Expected normal order statistics (Blom scores) and their corrections.
    std::vector<double> a(n, 0.0);
    const double an = static_cast<double>(n);
    if (n == 3) {
        a[0] = -std::sqrt(0.5);
        a[2] = std::sqrt(0.5);
    } else {
        std::vector<double> m(n);
        double ssq = 0;
        for (std::size_t i = 0; i < n; ++i) {
            m[i] = normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
            ssq += m[i] * m[i];
        }
        const double rsn = 1.0 / std::sqrt(an);
        static constexpr double c1[6] = {0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
        static constexpr double c2[6] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
        const double a_n = m[n - 1] / std::sqrt(ssq) + polynomial(c1, rsn);
        a[n - 1] = a_n;
        a[0] = -a_n;
        std::size_t interior_lo = 1;
        double phi;
        if (n > 5) {
            const double a_n1 = m[n - 2] / std::sqrt(ssq) + polynomial(c2, rsn);
            a[n - 2] = a_n1;
            a[1] = -a_n1;
            interior_lo = 2;
            phi = (ssq - 2 * m[n - 1] * m[n - 1] - 2 * m[n - 2] * m[n - 2]) /
                  (1 - 2 * a_n * a_n - 2 * a_n1 * a_n1);
        } else {
            phi = (ssq - 2 * m[n - 1] * m[n - 1]) / (1 - 2 * a_n * a_n);
        }
        const double scale = std::sqrt(phi);
        for (std::size_t i = interior_lo; i < n - interior_lo; ++i) a[i] = m[i] / scale;
    }

    const double xbar = std::accumulate(x.begin(), x.end(), 0.0) / an;
    double numerator = 0, ssd = 0;
    for (std::size_t i = 0; i < n; ++i) {
        numerator += a[i] * x[i];
        ssd += (x[i] - xbar) * (x[i] - xbar);
    }
    double w = numerator * numerator / ssd;
    if (w > 1.0) w = 1.0;

    double p;
    if (n == 3) {
        constexpr double pi = 3.141592653589793238462643;
        p = 6.0 / pi * (std::asin(std::sqrt(w)) - std::asin(std::sqrt(0.75)));
        p = std::clamp(p, 0.0, 1.0);
    } else if (n <= 11) {
        const double gamma = -2.273 + 0.459 * an;
        const double wt = -std::log(gamma - std::log1p(-w));
        static constexpr double c3[4] = {0.5440, -0.39978, 0.025054, -0.0006714};
        static constexpr double c4[4] = {1.3822, -0.77857, 0.062767, -0.0020322};
        const double mu = polynomial(c3, an);
        const double sigma = std::exp(polynomial(c4, an));
        p = 1.0 - normal_cdf((wt - mu) / sigma);
    } else {
        const double wt = std::log1p(-w);
        const double ln_n = std::log(an);
        static constexpr double c5[4] = {-1.5861, -0.31082, -0.083751, 0.0038915};
        static constexpr double c6[3] = {-0.4803, -0.082676, 0.0030302};
        const double mu = polynomial(c5, ln_n);
        const double sigma = std::exp(polynomial(c6, ln_n));
        p = 1.0 - normal_cdf((wt - mu) / sigma);
    }

    StatReport report;
    report.test = "shapiro_wilk";
    report.statistics = {{"W", w}, {"n", an}};
    report.p_value = p;
    report.accept = p > 0.05;
    return report;
}

StatReport mann_whitney_scatter(const ResidualSeries& series, double lambda, RankKey key) {
    const std::size_t n = series.entries.size();
    std::vector<double> keys(n);
    for (std::size_t i = 0; i < n; ++i) {
        switch (key) {
            case RankKey::AbsValue: keys[i] = std::fabs(series.entries[i].residual); break;
            case RankKey::AbsDeviation:
                keys[i] = std::fabs(series.entries[i].residual - lambda);
                break;
            case RankKey::PrimeIndex: keys[i] = static_cast<double>(i + 1); break;
        }
    }
    const std::vector<double> rank = midranks(keys);
    double r_above = 0;
    std::size_t n1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (series.entries[i].residual > lambda) {
            r_above += rank[i];
            ++n1;
        }
    }
    const std::size_t n2 = n - n1;
    if (n1 == 0 || n2 == 0) {
        throw std::invalid_argument("mann_whitney_scatter: one side of the split is empty");
    }
    const double dn = static_cast<double>(n);
    const double dn1 = static_cast<double>(n1), dn2 = static_cast<double>(n2);
    const double z = (r_above - dn1 * (dn + 1) / 2) / std::sqrt(dn1 * dn2 * (dn + 1) / 12);
    const double z_crit = normal_quantile(0.975);

    StatReport report;
    report.test = "mann_whitney";
    report.statistics = {{"z", z}, {"rank_sum_above", r_above}, {"n_above", dn1},
                         {"n_below", dn2}, {"lambda", lambda}};
    report.p_value = 2.0 * (1.0 - normal_cdf(std::fabs(z)));
    report.acceptance_region = {-z_crit, z_crit};
    report.accept = std::fabs(z) <= z_crit;
    report.note = std::string("ranking_key=") + to_string(key);
    return report;
}

ResidualSeries residual_series(ExpectationModel model, std::span<const ComplexityEntry> table) {
    ResidualSeries series;
    series.model = model;
    for (const ComplexityEntry& entry : table) {
        double expectation;
        if (model == ExpectationModel::Random) {
            expectation = static_cast<double>(expected_random(entry.d));
        } else {
            const PrimeClass tag = classify_prime(entry.d).tag;
            if (model == ExpectationModel::Star && tag != PrimeClass::Star) continue;
            if (model == ExpectationModel::DoubleStar && tag != PrimeClass::DoubleStar) continue;
            expectation = static_cast<double>(coarse_constrained(entry.d, model));
        }
        const double residual =
            (static_cast<double>(entry.count) - expectation) / static_cast<double>(entry.d);
        series.entries.push_back({entry.d, residual});
    }
    return series;
}

std::vector<HistogramBin> histogram(std::span<const double> values, double bin_width,
                                    double anchor) {
    if (!(bin_width > 0)) throw std::invalid_argument("histogram: bin width must be positive");
    if (values.empty()) return {};
    long long lo = std::numeric_limits<long long>::max();
    long long hi = std::numeric_limits<long long>::min();
    std::vector<long long> bins;
    bins.reserve(values.size());
    for (double v : values) {
        const long long k = static_cast<long long>(std::floor((v - anchor) / bin_width));
        bins.push_back(k);
        lo = std::min(lo, k);
        hi = std::max(hi, k);
    }
    if (hi - lo + 1 > (1ll << 24)) {
        throw std::invalid_argument("histogram: bin width too small for the value spread");
    }
    std::vector<HistogramBin> out(static_cast<std::size_t>(hi - lo + 1));
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].start = anchor + static_cast<double>(lo + static_cast<long long>(i)) * bin_width;
    }
    for (long long k : bins) ++out[static_cast<std::size_t>(k - lo)].count;
    return out;
}

} // namespace besicomp
