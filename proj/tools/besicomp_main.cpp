#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "besicomp/arrangement.hpp"
#include "besicomp/expectation.hpp"
#include "besicomp/reproduce.hpp"
#include "besicomp/stats.hpp"
#include "besicomp/symmetry.hpp"
#include "besicomp/table.hpp"

using nlohmann::json;
using namespace besicomp;

namespace {

struct Options {
    std::string range = "3:100";
    std::string model = "random";
    std::string format = "csv";
    std::string fixture = "data/complexity_table.csv";
    std::string out;
    u64 seed = 1;
    u64 samples = 1000;
    bool recompute = false;
    bool coarse = false;
};

std::pair<u64, u64> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--range", "expected LO:HI");
    const u64 lo = std::stoull(text.substr(0, colon));
    const u64 hi = std::stoull(text.substr(colon + 1));
    if (lo > hi) throw CLI::ValidationError("--range", "need LO <= HI");
    return {lo, hi};
}

ExpectationModel parse_model(const std::string& name) {
    if (name == "random") return ExpectationModel::Random;
    if (name == "star") return ExpectationModel::Star;
    if (name == "double_star") return ExpectationModel::DoubleStar;
    throw CLI::ValidationError("--model", "expected random, star or double_star");
}

/// Stream to --out or stdout.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw std::runtime_error("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::string label_text(u32 label) {
    return label == kInfinityLabel ? "inf" : std::to_string(label);
}

json stat_report_json(const StatReport& report) {
    json j;
    j["test"] = report.test;
    for (const auto& [name, value] : report.statistics) j["statistics"][name] = value;
    if (report.p_value) j["p_value"] = *report.p_value;
    if (report.acceptance_region) {
        j["acceptance_region"] = {report.acceptance_region->first,
                                  report.acceptance_region->second};
    }
    j["accept"] = report.accept;
    if (!report.note.empty()) j["note"] = report.note;
    return j;
}

nlohmann::ordered_json histogram_json(const std::vector<u64>& hist) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (std::size_t m = 0; m < hist.size(); ++m) {
        if (hist[m] > 0) j[std::to_string(m)] = hist[m];
    }
    return j;
}

void write_residuals_csv(const std::string& path, const ResidualSeries& series) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << "d,residual\n";
    for (const ResidualEntry& e : series.entries) {
        out << e.d << ',' << format_real(e.residual) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_histogram_csv(const std::string& path, const std::vector<HistogramBin>& bins) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << "bin_start,count\n";
    for (const HistogramBin& bin : bins) {
        out << format_real(bin.start) << ',' << bin.count << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

int cmd_complexity(const Options& opt) {
    const auto [lo, hi] = parse_range(opt.range);
    if (lo <= 2 && hi >= 2) {
        std::cerr << "note: d = 2 is excluded (direct counting yields 4 points of multiplicity"
                     " != 1, the reference table lists C_2 = 1; see README)\n";
    }
    const auto rows = complexity_range(lo, hi, 0);
    Output output(opt.out);
    if (opt.format == "json") {
        json j = json::array();
        for (const ComplexityRow& row : rows) {
            j.push_back({{"d", row.d}, {"C_d", row.count},
                         {"mult_histogram", histogram_json(row.histogram)}});
        }
        output.stream() << j.dump(2) << '\n';
    } else {
        output.stream() << "d,C_d,mult_histogram_json\n";
        for (const ComplexityRow& row : rows) {
            output.stream() << row.d << ',' << row.count << ','
                            << csv_escape(histogram_json(row.histogram).dump()) << '\n';
        }
    }
    if (!opt.recompute) return 0;

    const auto table = load_complexity_table(opt.fixture);
    std::size_t verified = 0, mismatches = 0;
    for (const ComplexityEntry& entry : table) {
        if (entry.d < std::max<u64>(lo, 3) || entry.d > hi) continue;
        const auto it = std::lower_bound(rows.begin(), rows.end(), entry.d,
                                         [](const ComplexityRow& r, u64 d) { return r.d < d; });
        if (it == rows.end() || it->d != entry.d) continue;
        ++verified;
        if (it->count != entry.count) {
            ++mismatches;
            std::cerr << "MISMATCH at d = " << entry.d << ": table " << entry.count
                      << ", computed " << it->count << '\n';
        }
    }
    std::cerr << "verified " << verified << " prime(s) against " << opt.fixture << ", "
              << mismatches << " mismatches\n";
    return mismatches == 0 ? 0 : 1;
}

int cmd_classify(const Options& opt) {
    const auto [lo, hi] = parse_range(opt.range);
    Output output(opt.out);
    json j = json::array();
    if (opt.format == "csv") output.stream() << "d,class,offending_orbit\n";
    for (u64 d : primes_in_range(lo, hi)) {
        const Classification cls = classify_prime(d);
        if (opt.format == "json") {
            json row{{"d", d}, {"class", to_string(cls.tag)}};
            if (!cls.offending_orbit.empty()) {
                json orbit = json::array();
                for (u32 label : cls.offending_orbit) orbit.push_back(label_text(label));
                row["offending_orbit"] = orbit;
            }
            j.push_back(row);
        } else {
            std::string orbit;
            for (u32 label : cls.offending_orbit) {
                if (!orbit.empty()) orbit += ';';
                orbit += label_text(label);
            }
            output.stream() << d << ',' << to_string(cls.tag) << ',' << orbit << '\n';
        }
    }
    if (opt.format == "json") output.stream() << j.dump(2) << '\n';
    return 0;
}

int cmd_orbits(const Options& opt) {
    const auto [lo, hi] = parse_range(opt.range);
    Output output(opt.out);
    json j = json::array();
    for (u64 d : primes_in_range(std::max<u64>(lo, 5), hi)) {
        PrimeField field(d);
        const Arrangement arr = build_pv_arrangement(d);
        const PropositionReport props = verify_propositions(field, arr);
        json orbits = json::array();
        for (const auto& check : props.orbits) {
            json labels = json::array();
            for (u32 label : check.orbit.labels) labels.push_back(label_text(label));
            json o{{"labels", labels},
                   {"cardinality", check.orbit.labels.size()},
                   {"through_origin", check.orbit.through_origin}};
            if (check.applicable) {
                o["propositions"] = {{"p1", check.p1}, {"p2", check.p2}, {"p3", check.p3}};
            }
            orbits.push_back(o);
        }
        j.push_back({{"d", d}, {"orbits", orbits},
                     {"theta_unique_fixed_point", props.theta_unique_fixed_point},
                     {"all_pass", props.all_pass()}});
    }
    output.stream() << j.dump(2) << '\n';
    return 0;
}

int cmd_expect(const Options& opt) {
    const auto [lo, hi] = parse_range(opt.range);
    const ExpectationModel model = parse_model(opt.model);
    Output output(opt.out);
    output.stream() << "d,model,value,asymptotic_main,residual\n";
    for (u64 d : primes_in_range(std::max<u64>(lo, 2), hi)) {
        ExpectationReport report;
        if (model == ExpectationModel::Random) {
            report = expected_random_report(d);
        } else if ((model == ExpectationModel::Star && d % 6 == 1 && d >= 7) ||
                   (model == ExpectationModel::DoubleStar && d % 6 == 5)) {
            report = opt.coarse ? coarse_constrained_report(d, model)
                                : expected_constrained(d, model);
        } else {
            continue; // incompatible with the constrained model
        }
        output.stream() << d << ',' << to_string(model) << ','
                        << format_real(static_cast<double>(report.value)) << ','
                        << format_real(static_cast<double>(report.asymptotic_main)) << ','
                        << format_real(static_cast<double>(report.residual)) << '\n';
    }
    return 0;
}

int cmd_montecarlo(const Options& opt) {
    const auto [lo, hi] = parse_range(opt.range);
    Output output(opt.out);
    output.stream() << "d,samples,seed,mean,std_error,expected,z_gap\n";
    for (u64 d : primes_in_range(std::max<u64>(lo, 2), hi)) {
        const MonteCarloEstimate est = monte_carlo_all_but_simple(d, opt.samples, opt.seed);
        const double expected = static_cast<double>(expected_random(d));
        const double gap = est.std_error > 0 ? (est.mean - expected) / est.std_error : 0.0;
        output.stream() << d << ',' << est.samples << ',' << est.seed << ','
                        << format_real(est.mean) << ',' << format_real(est.std_error) << ','
                        << format_real(expected) << ',' << format_real(gap) << '\n';
    }
    return 0;
}

int cmd_stats(const Options& opt) {
    const auto table = load_complexity_table(opt.fixture);
    const ModelBattery battery = run_battery(parse_model(opt.model), table);
    Output output(opt.out);
    json j;
    j["model"] = to_string(battery.model);
    j["n"] = battery.series.entries.size();
    j["lambda"] = battery.lambda;
    j["tests"] = json::array({stat_report_json(battery.ols), stat_report_json(battery.shapiro),
                              stat_report_json(battery.mw_abs_value),
                              stat_report_json(battery.mw_abs_deviation),
                              stat_report_json(battery.mw_prime_index)});
    output.stream() << j.dump(2) << '\n';
    return 0;
}

int cmd_reproduce(const Options& opt) {
    const auto table = load_complexity_table(opt.fixture);
    if (table.size() != 370) {
        std::cerr << "warning: reference table has " << table.size() << " rows, expected 370\n";
    }
    if (opt.recompute) {
        std::cerr << "recomputing every complexity for verification...\n";
        verify_complexity_table(table, 0);
        std::cerr << "table verified\n";
    }
    const ReproductionReport report = run_reproduction(table);

    const std::string dir = opt.out.empty() ? "." : opt.out;
    json j;
    j["counts"] = {{"star", report.n_star}, {"double_star", report.n_double_star},
                   {"unstarred", report.n_unstarred}, {"small", report.n_small}};
    for (const ModelBattery& battery : report.batteries) {
        const std::string name = to_string(battery.model);
        write_residuals_csv(dir + "/residuals_" + name + ".csv", battery.series);
        write_histogram_csv(dir + "/hist_" + name + ".csv",
                            histogram(battery.series.residuals(), 0.25, 0.0));
        json b;
        b["n"] = battery.series.entries.size();
        b["lambda"] = battery.lambda;
        b["tests"] = json::array({stat_report_json(battery.ols), stat_report_json(battery.shapiro),
                                  stat_report_json(battery.mw_abs_value),
                                  stat_report_json(battery.mw_abs_deviation),
                                  stat_report_json(battery.mw_prime_index)});
        j["models"][name] = b;
    }
    json checks = json::array();
    for (const ReferenceCheck& check : report.checks) {
        checks.push_back({{"name", check.name}, {"computed", check.computed},
                          {"reference", check.reference}, {"tolerance", check.tolerance},
                          {"pass", check.pass}});
    }
    j["reference_checks"] = checks;
    {
        std::ofstream out(dir + "/report.json", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write report.json under " + dir);
        out << j.dump(2) << '\n';
    }

    std::printf("classified: %zu star, %zu double_star, %zu unstarred, %zu small\n",
                report.n_star, report.n_double_star, report.n_unstarred, report.n_small);
    for (const ReferenceCheck& check : report.checks) {
        std::printf("[%s] %-18s = %12.6g   (reference %g +- %g)\n",
                    check.pass ? "PASS" : "FAIL", check.name.c_str(), check.computed,
                    check.reference, check.tolerance);
    }
    std::printf("%s\n", report.all_pass() ? "all reference checks passed"
                                          : "reference checks FAILED");
    return report.all_pass() ? 0 : 1;
}

int cmd_table(const Options& opt) {
    const auto table = load_complexity_table(opt.fixture);
    Output output(opt.out);
    output.stream() << "d,C_d\n";
    for (const ComplexityEntry& entry : table) {
        output.stream() << entry.d << ',' << entry.count << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"minimal Besicovitch arrangements over F_d^2: complexity counts, orbit"
                 " structure, expectation models and the residual test battery"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&opt](CLI::App* cmd, bool with_model = false) {
        cmd->add_option("--range", opt.range, "prime range LO:HI");
        cmd->add_option("--format", opt.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--out", opt.out, "output path (default stdout)");
        cmd->add_option("--fixture", opt.fixture, "reference complexity table CSV");
        if (with_model) {
            cmd->add_option("--model", opt.model, "random, star or double_star");
        }
    };

    auto* complexity_cmd =
        app.add_subcommand("complexity", "C_d and multiplicity histogram per prime");
    add_common(complexity_cmd);
    complexity_cmd->add_flag("--recompute", opt.recompute,
                             "verify computed values against the reference table");

    auto* classify_cmd = app.add_subcommand("classify", "star/double_star/unstarred tags");
    add_common(classify_cmd);

    auto* orbits_cmd = app.add_subcommand("orbits", "orbit decomposition and geometry checks");
    add_common(orbits_cmd);

    auto* expect_cmd = app.add_subcommand("expect", "expected all-but-simple counts");
    add_common(expect_cmd, true);
    expect_cmd->add_flag("--coarse", opt.coarse,
                         "use the coarse bookkeeping variant of the constrained models");

    auto* mc_cmd = app.add_subcommand("montecarlo", "sampled mean vs closed form");
    add_common(mc_cmd);
    mc_cmd->add_option("--seed", opt.seed, "RNG seed");
    mc_cmd->add_option("--samples", opt.samples, "number of sampled arrangements")
        ->check(CLI::PositiveNumber);

    auto* stats_cmd = app.add_subcommand("stats", "test battery for one residual series");
    add_common(stats_cmd, true);

    auto* reproduce_cmd =
        app.add_subcommand("reproduce", "full pipeline: residuals, histograms, all tests");
    add_common(reproduce_cmd);
    reproduce_cmd->add_flag("--recompute", opt.recompute,
                            "recompute all complexities instead of trusting the table");

    auto* table_cmd = app.add_subcommand("table", "emit the reference complexity table");
    add_common(table_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        if (complexity_cmd->parsed()) return cmd_complexity(opt);
        if (classify_cmd->parsed()) return cmd_classify(opt);
        if (orbits_cmd->parsed()) return cmd_orbits(opt);
        if (expect_cmd->parsed()) return cmd_expect(opt);
        if (mc_cmd->parsed()) return cmd_montecarlo(opt);
        if (stats_cmd->parsed()) return cmd_stats(opt);
        if (reproduce_cmd->parsed()) return cmd_reproduce(opt);
        if (table_cmd->parsed()) return cmd_table(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
