#include "besicomp/reproduce.hpp"

#include <cmath>

#include "besicomp/symmetry.hpp"

namespace besicomp {

ModelBattery run_battery(ExpectationModel model, std::span<const ComplexityEntry> table) {
    ModelBattery battery;
    battery.model = model;
    battery.series = residual_series(model, table);
    battery.lambda = battery.series.mean();
    battery.ols = ols_slope_test(battery.series);
    battery.shapiro = shapiro_wilk(battery.series.residuals());
    battery.mw_abs_value = mann_whitney_scatter(battery.series, battery.lambda, RankKey::AbsValue);
    battery.mw_abs_deviation =
        mann_whitney_scatter(battery.series, battery.lambda, RankKey::AbsDeviation);
    battery.mw_prime_index =
        mann_whitney_scatter(battery.series, battery.lambda, RankKey::PrimeIndex);
    return battery;
}

bool ReproductionReport::all_pass() const {
    for (const ReferenceCheck& check : checks) {
        if (!check.pass) return false;
    }
    return true;
}

ReproductionReport run_reproduction(std::span<const ComplexityEntry> table) {
    ReproductionReport report;
    for (const ComplexityEntry& entry : table) {
        switch (classify_prime(entry.d).tag) {
            case PrimeClass::Star: ++report.n_star; break;
            case PrimeClass::DoubleStar: ++report.n_double_star; break;
            case PrimeClass::Unstarred: ++report.n_unstarred; break;
            case PrimeClass::Small: ++report.n_small; break;
        }
    }

    report.batteries.push_back(run_battery(ExpectationModel::Random, table));
    report.batteries.push_back(run_battery(ExpectationModel::Star, table));
    report.batteries.push_back(run_battery(ExpectationModel::DoubleStar, table));
    const ModelBattery& random = report.batteries[0];
    const ModelBattery& star = report.batteries[1];
    const ModelBattery& dstar = report.batteries[2];

    auto add = [&report](const std::string& name, double computed, double reference,
                         double tolerance) {
        report.checks.push_back(ReferenceCheck{name, computed, reference, tolerance,
                                               std::fabs(computed - reference) <= tolerance});
    };
    add("s", random.ols.stat("slope"), 4.94e-5, 0.05e-5);
    add("T", random.ols.stat("T"), 0.565, 0.01);
    add("W", random.shapiro.stat("W"), 0.991, 0.001);
    add("p_W", *random.shapiro.p_value, 0.0296, 0.005);
    add("U1", random.mw_abs_deviation.stat("z"), -0.911, 0.02);
    add("U2", random.mw_prime_index.stat("z"), -0.397, 0.02);
    add("Lambda", random.lambda, -0.856, 0.002);
    add("T_star", star.ols.stat("T"), 1.43, 0.03);
    add("Lambda_star", star.lambda, 0.576, 0.003);
    add("U1_star", star.mw_abs_deviation.stat("z"), -0.673, 0.03);
    add("U2_star", star.mw_prime_index.stat("z"), 0.721, 0.03);
    add("T_double_star", dstar.ols.stat("T"), -1.50, 0.03);
    add("Lambda_double_star", dstar.lambda, 0.297, 0.003);
    add("U1_double_star", dstar.mw_abs_deviation.stat("z"), -1.08, 0.03);
    add("U2_double_star", dstar.mw_prime_index.stat("z"), -1.77, 0.03);
    return report;
}

} // namespace besicomp
