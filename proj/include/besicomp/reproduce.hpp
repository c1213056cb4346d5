#pragma once

#include <span>
#include <string>
#include <vector>

#include "besicomp/stats.hpp"

namespace besicomp {

/// Full test battery over one residual series.
struct ModelBattery {
    ExpectationModel model = ExpectationModel::Random;
    ResidualSeries series;
    double lambda = 0; // sample mean of the series
    StatReport ols;
    StatReport shapiro;
    StatReport mw_abs_value;
    StatReport mw_abs_deviation;
    StatReport mw_prime_index;
};

ModelBattery run_battery(ExpectationModel model, std::span<const ComplexityEntry> table);

/// One reference statistic with its tolerance.
struct ReferenceCheck {
    std::string name;
    double computed = 0;
    double reference = 0;
    double tolerance = 0;
    bool pass = false;
};

struct ReproductionReport {
    std::size_t n_star = 0;
    std::size_t n_double_star = 0;
    std::size_t n_unstarred = 0;
    std::size_t n_small = 0;
    std::vector<ModelBattery> batteries; // random, star, double_star
    std::vector<ReferenceCheck> checks;

    bool all_pass() const;
};

/// Run the whole pipeline on a complexity table: classify every prime,
/// build the three residual series, run every test, and compare the key
/// statistics against the reference values. The z of -0.911 is checked
/// under the abs-deviation ranking key (the key that reproduces it); the
/// abs-value variant is reported alongside.
ReproductionReport run_reproduction(std::span<const ComplexityEntry> table);

} // namespace besicomp
