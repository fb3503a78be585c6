// Copyright 2026 The retrobell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "retrobell/retrobell.h"

namespace retrobell::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;
constexpr const char* kFormatEnv = "RETROBELL_FORMAT";

/// A constraint violation detected after parsing; maps to exit code 1.
class ConstraintError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Format { Csv, Json };

struct RunConfig {
    std::string subcommand;
    double gamma = 0.1;
    double epsilon = 0.0;
    double theta = 0.0;
    double alice = 0.0;
    double bob = 0.0;
    bool have_theta = false;
    bool have_bob = false;
    double source_angle = 0.0;
    rb_chsh_settings chsh = rb_chsh_default_settings();
    double half_range = kPi / 100.0;
    std::uint32_t steps = 200;
    std::uint64_t budget = 0;
    std::uint64_t n_samples = 1'000'000;
    std::uint64_t seed = 1;
    double concentration_k = 0.0;
    std::uint32_t grid = 360;
    std::vector<double> gammas = {1e-4, 1e-3, 1e-2, 1e-1, 1.0};
    std::string format_name;
    Format format = Format::Json;
    std::string output_path;
    std::string plot_data_path;
    std::uint32_t workers = 1;
    bool degrees = false;
};

// Shortest representation that round-trips to the same double.
std::string format_number(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

using Cell = std::variant<double, std::int64_t, std::uint64_t, std::string, bool>;

std::string format_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                return format_number(v);
            } else if constexpr (std::is_same_v<T, std::string>) {
                return v;
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else {
                return std::to_string(v);
            }
        },
        c);
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;

    std::string to_csv() const {
        std::string s;
        auto line = [&](const auto& cells, auto fmt) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) s += ',';
                s += fmt(cells[i]);
            }
            s += '\n';
        };
        line(header, [](const std::string& h) { return h; });
        for (const auto& r : rows) {
            line(r, format_cell);
        }
        return s;
    }
};

struct Document {
    Json config;
    Json results;
    Table table;
};

void check(rb_status status) {
    if (status != RB_OK) {
        const std::string detail = rb_last_error();
        throw ConstraintError(detail.empty() ? rb_status_string(status) : detail);
    }
}

struct ModelDeleter {
    void operator()(rb_model* m) const { rb_model_destroy(m); }
};
using ModelHandle = std::unique_ptr<rb_model, ModelDeleter>;

ModelHandle make_model(const RunConfig& cfg) {
    rb_model* raw = nullptr;
    check(rb_model_create(cfg.gamma, cfg.epsilon, &raw));
    return ModelHandle(raw);
}

Json model_config(const RunConfig& cfg) {
    return Json{{"gamma", cfg.gamma}, {"epsilon", cfg.epsilon}};
}

const char* const kOutcomeKeys[4] = {"p_ab", "p_a_bbar", "p_abar_b", "p_abar_bbar"};

Json settings_json(const rb_chsh_settings& s) {
    return Json{{"a1", s.a1}, {"a2", s.a2}, {"b1", s.b1}, {"b2", s.b2}};
}

// Alice and Bob angles from --theta, or --alice/--bob.
void resolve_pair(RunConfig& cfg) {
    if (cfg.have_theta) {
        cfg.bob = cfg.alice + cfg.theta;
    }
}

Json distribution_json(const rb_distribution& d) {
    Json j;
    for (int i = 0; i < 4; ++i) {
        j[kOutcomeKeys[i]] = d.p[i];
    }
    return j;
}

Document cmd_probs(RunConfig& cfg) {
    resolve_pair(cfg);
    auto model = make_model(cfg);
    rb_distribution d{};
    check(rb_joint_distribution(model.get(), cfg.alice, cfg.bob, &d));
    double e = 0, pa = 0, pb = 0, res[2] = {0, 0};
    check(rb_correlation(&d, &e));
    check(rb_alice_marginal(&d, &pa));
    check(rb_bob_marginal(&d, &pb));
    check(rb_symmetry_residuals(model.get(), cfg.alice, cfg.bob, res));

    Document doc;
    doc.config = model_config(cfg);
    doc.config["alice_angle"] = cfg.alice;
    doc.config["bob_angle"] = cfg.bob;
    doc.config["theta"] = d.theta;
    doc.results = distribution_json(d);
    doc.results["correlation"] = e;
    doc.results["alice_marginal"] = pa;
    doc.results["bob_marginal"] = pb;
    doc.results["symmetry_residuals"] = Json::array({res[0], res[1]});
    doc.table.header = {"theta", "gamma", "epsilon", "p_ab", "p_a_bbar", "p_abar_b", "p_abar_bbar",
                        "correlation", "alice_marginal", "bob_marginal"};
    doc.table.rows.push_back({d.theta, cfg.gamma, cfg.epsilon, d.p[0], d.p[1], d.p[2], d.p[3], e, pa, pb});
    return doc;
}

Document cmd_ratio(RunConfig& cfg) {
    auto model = make_model(cfg);
    double ratio = 0;
    check(rb_single_particle_ratio(model.get(), cfg.theta, &ratio));
    const double p_aligned = ratio / (1.0 + ratio);
    Document doc;
    doc.config = model_config(cfg);
    doc.config["theta"] = cfg.theta;
    doc.results = Json{{"ratio", ratio}, {"p_aligned", p_aligned}, {"p_anti_aligned", 1.0 - p_aligned}};
    doc.table.header = {"theta", "gamma", "ratio", "p_aligned", "p_anti_aligned"};
    doc.table.rows.push_back({cfg.theta, cfg.gamma, ratio, p_aligned, 1.0 - p_aligned});
    return doc;
}

Document cmd_chsh(RunConfig& cfg) {
    auto model = make_model(cfg);
    rb_chsh_result r{};
    check(rb_chsh(model.get(), &cfg.chsh, &r));
    double closed = 0;
    check(rb_s_closed_form(cfg.gamma, &closed));
    Document doc;
    doc.config = model_config(cfg);
    doc.config["settings"] = settings_json(cfg.chsh);
    doc.results = Json{{"s_value", r.s_value},
                       {"correlations", Json::array({r.correlations[0], r.correlations[1],
                                                     r.correlations[2], r.correlations[3]})},
                       {"s_closed_form", closed},
                       {"tsirelson_bound", 2.0 * std::numbers::sqrt2}};
    doc.table.header = {"gamma", "epsilon", "s_value", "e_a1_b1", "e_a1_b2", "e_a2_b1", "e_a2_b2",
                        "s_closed_form"};
    doc.table.rows.push_back({cfg.gamma, cfg.epsilon, r.s_value, r.correlations[0], r.correlations[1],
                              r.correlations[2], r.correlations[3], closed});
    return doc;
}

void write_plot_data(const std::string& path, const std::string& comment,
                     const std::vector<std::pair<double, double>>& points) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw ConstraintError("cannot open plot data file " + path);
    }
    f << "# " << comment << '\n';
    for (const auto& [x, y] : points) {
        f << format_number(x) << ' ' << format_number(y) << '\n';
    }
}

Document cmd_sweep(RunConfig& cfg) {
    if (cfg.gammas.empty()) {
        throw ConstraintError("--gammas must list at least one value");
    }
    std::vector<rb_sweep_row> rows(cfg.gammas.size());
    check(rb_gamma_sweep(cfg.gammas.data(), cfg.gammas.size(), &cfg.chsh, rows.data()));
    Document doc;
    doc.config = Json{{"gammas", cfg.gammas}, {"settings", settings_json(cfg.chsh)}};
    doc.results = Json::array();
    doc.table.header = {"gamma", "s_numeric", "s_closed", "deviation_from_tsirelson"};
    std::vector<std::pair<double, double>> plot;
    for (const auto& r : rows) {
        doc.results.push_back(Json{{"gamma", r.gamma},
                                   {"s_numeric", r.s_numeric},
                                   {"s_closed", r.s_closed},
                                   {"deviation_from_tsirelson", r.deviation_from_tsirelson}});
        doc.table.rows.push_back({r.gamma, r.s_numeric, r.s_closed, r.deviation_from_tsirelson});
        plot.emplace_back(r.gamma, r.s_numeric);
    }
    if (!cfg.plot_data_path.empty()) {
        write_plot_data(cfg.plot_data_path, "gamma s_numeric", plot);
    }
    return doc;
}

Document cmd_grid(RunConfig& cfg) {
    auto model = make_model(cfg);
    double max_s = 0;
    rb_chsh_settings argmax{};
    check(rb_grid_search(model.get(), &cfg.chsh, cfg.half_range, cfg.steps, cfg.workers, cfg.budget,
                         &max_s, &argmax));
    double closed = 0;
    check(rb_s_closed_form(cfg.gamma, &closed));
    Document doc;
    doc.config = model_config(cfg);
    doc.config["base"] = settings_json(cfg.chsh);
    doc.config["half_range"] = cfg.half_range;
    doc.config["steps"] = cfg.steps;
    doc.config["workers"] = cfg.workers;
    doc.results = Json{{"max_s", max_s},
                       {"argmax", settings_json(argmax)},
                       {"s_closed_form", closed},
                       {"excess_over_closed_form", max_s - closed}};
    doc.table.header = {"gamma", "half_range", "steps", "max_s", "a1", "a2", "b1", "b2", "s_closed_form",
                        "excess_over_closed_form"};
    doc.table.rows.push_back({cfg.gamma, cfg.half_range, static_cast<std::uint64_t>(cfg.steps), max_s,
                              argmax.a1, argmax.a2, argmax.b1, argmax.b2, closed, max_s - closed});
    return doc;
}

Document cmd_sample(RunConfig& cfg) {
    resolve_pair(cfg);
    auto model = make_model(cfg);
    rb_empirical e{};
    check(rb_estimate_distribution(model.get(), cfg.alice, cfg.bob, cfg.n_samples, cfg.seed, cfg.workers, &e));
    rb_distribution d{};
    check(rb_joint_distribution(model.get(), cfg.alice, cfg.bob, &d));

    Document doc;
    doc.config = model_config(cfg);
    doc.config["alice_angle"] = cfg.alice;
    doc.config["bob_angle"] = cfg.bob;
    doc.config["n_samples"] = cfg.n_samples;
    doc.config["seed"] = cfg.seed;
    doc.config["workers"] = cfg.workers;
    Json outcomes = Json::array();
    doc.table.header = {"outcome", "count", "frequency", "std_error", "expected"};
    for (int i = 0; i < 4; ++i) {
        const auto o = static_cast<rb_outcome>(i);
        outcomes.push_back(Json{{"outcome", rb_outcome_name(o)},
                                {"count", e.counts[i]},
                                {"frequency", e.frequencies[i]},
                                {"std_error", e.std_errors[i]},
                                {"expected", d.p[i]}});
        doc.table.rows.push_back({std::string(rb_outcome_name(o)), e.counts[i], e.frequencies[i],
                                  e.std_errors[i], d.p[i]});
    }
    doc.results = Json{{"n_samples", e.n_samples}, {"outcomes", outcomes}};
    if (cfg.concentration_k > 0.0) {
        double fraction = 0;
        check(rb_anomaly_concentration(model.get(), cfg.alice, cfg.bob, cfg.n_samples, cfg.seed,
                                       cfg.concentration_k, cfg.workers, &fraction));
        doc.config["concentration_k"] = cfg.concentration_k;
        doc.results["split_anomaly_fraction"] = fraction;
        doc.table.header.push_back("split_anomaly_fraction");
        for (auto& row : doc.table.rows) {
            row.push_back(fraction);
        }
    }
    return doc;
}

std::vector<double> bob_grid(std::uint32_t n) {
    std::vector<double> grid(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        grid[i] = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
    }
    return grid;
}

Document cmd_audit(RunConfig& cfg) {
    if (cfg.grid < 1) {
        throw ConstraintError("--grid must be at least 1");
    }
    auto model = make_model(cfg);
    const auto grid = bob_grid(cfg.grid);
    rb_audit_result r{};
    check(rb_signaling_audit(model.get(), cfg.alice, grid.data(), grid.size(), &r));
    if (!cfg.plot_data_path.empty()) {
        std::vector<std::pair<double, double>> plot;
        for (double b : grid) {
            rb_distribution d{};
            double pa = 0;
            check(rb_joint_distribution(model.get(), cfg.alice, b, &d));
            check(rb_alice_marginal(&d, &pa));
            plot.emplace_back(b, pa);
        }
        write_plot_data(cfg.plot_data_path, "bob_angle alice_marginal", plot);
    }
    Document doc;
    doc.config = model_config(cfg);
    doc.config["alice_angle"] = cfg.alice;
    doc.config["grid"] = cfg.grid;
    doc.results = Json{{"max_deviation", r.max_deviation}, {"worst_bob_angle", r.worst_bob_angle}};
    doc.table.header = {"alice_angle", "gamma", "epsilon", "grid", "max_deviation", "worst_bob_angle"};
    doc.table.rows.push_back({cfg.alice, cfg.gamma, cfg.epsilon, static_cast<std::uint64_t>(cfg.grid),
                              r.max_deviation, r.worst_bob_angle});
    return doc;
}

Document cmd_separable(RunConfig& cfg) {
    resolve_pair(cfg);
    auto model = make_model(cfg);
    rb_distribution d{};
    check(rb_separable_distribution(model.get(), cfg.alice, cfg.bob, cfg.source_angle, &d));
    double pa = 0, pb = 0, e = 0;
    check(rb_alice_marginal(&d, &pa));
    check(rb_bob_marginal(&d, &pb));
    check(rb_correlation(&d, &e));
    Document doc;
    doc.config = model_config(cfg);
    doc.config["alice_angle"] = cfg.alice;
    doc.config["bob_angle"] = cfg.bob;
    doc.config["source_angle"] = cfg.source_angle;
    doc.results = distribution_json(d);
    doc.results["correlation"] = e;
    doc.results["alice_marginal"] = pa;
    doc.results["bob_marginal"] = pb;
    doc.table.header = {"alice_angle", "bob_angle", "source_angle", "gamma", "p_ab", "p_a_bbar",
                        "p_abar_b", "p_abar_bbar", "alice_marginal", "bob_marginal"};
    doc.table.rows.push_back({cfg.alice, cfg.bob, cfg.source_angle, cfg.gamma, d.p[0], d.p[1], d.p[2],
                              d.p[3], pa, pb});
    return doc;
}

void to_radians(RunConfig& cfg) {
    const double k = kPi / 180.0;
    for (double* a : {&cfg.theta, &cfg.alice, &cfg.bob, &cfg.source_angle, &cfg.half_range,
                      &cfg.chsh.a1, &cfg.chsh.a2, &cfg.chsh.b1, &cfg.chsh.b2}) {
        *a *= k;
    }
}

void validate(RunConfig& cfg) {
    if (cfg.format_name.empty()) {
        const char* env = std::getenv(kFormatEnv);
        cfg.format_name = (env != nullptr && *env != '\0') ? env : "json";
    }
    if (cfg.format_name == "json") {
        cfg.format = Format::Json;
    } else if (cfg.format_name == "csv") {
        cfg.format = Format::Csv;
    } else {
        throw ConstraintError("output format must be csv or json, got '" + cfg.format_name + "'");
    }
    if (!(cfg.gamma > 0.0) || !std::isfinite(cfg.gamma)) {
        throw ConstraintError("gamma must be positive, got " + format_number(cfg.gamma));
    }
    for (double g : cfg.gammas) {
        if (!(g > 0.0) || !std::isfinite(g)) {
            throw ConstraintError("every sweep gamma must be positive, got " + format_number(g));
        }
    }
    if (cfg.n_samples < 1) {
        throw ConstraintError("sample count must be at least 1");
    }
    if (cfg.workers < 1) {
        throw ConstraintError("worker count must be at least 1");
    }
    if (cfg.steps < 1) {
        throw ConstraintError("--steps must be at least 1");
    }
}

std::string render(const RunConfig& cfg, const Document& doc) {
    if (cfg.format == Format::Csv) {
        return doc.table.to_csv();
    }
    Json config = doc.config;
    config["subcommand"] = cfg.subcommand;
    config["format"] = cfg.format_name;
    Json top{{"version", rb_version()}, {"config", config}, {"results", doc.results}};
    return top.dump(2) + "\n";
}

void add_model_options(CLI::App* sub, RunConfig& cfg, bool with_epsilon) {
    sub->add_option("--gamma", cfg.gamma, "Lorentzian half-width of the anomaly weight (radians)")
        ->capture_default_str();
    if (with_epsilon) {
        sub->add_option("--epsilon", cfg.epsilon, "Symmetry-breaking shift of the weight peak (radians)")
            ->capture_default_str();
    }
}

void add_pair_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--alice", cfg.alice, "Alice's setting angle")->capture_default_str();
    auto* bob = sub->add_option_function<double>(
        "--bob", [&cfg](double v) { cfg.bob = v; cfg.have_bob = true; }, "Bob's setting angle");
    sub->add_option_function<double>(
           "--theta", [&cfg](double v) { cfg.theta = v; cfg.have_theta = true; },
           "Relative angle bob - alice (sets Bob's angle)")
        ->excludes(bob);
}

void add_chsh_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--a1", cfg.chsh.a1, "Alice's first setting")->capture_default_str();
    sub->add_option("--a2", cfg.chsh.a2, "Alice's second setting")->capture_default_str();
    sub->add_option("--b1", cfg.chsh.b1, "Bob's first setting")->capture_default_str();
    sub->add_option("--b2", cfg.chsh.b2, "Bob's second setting")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Retrocausal spin-history model of Bell correlations", "retrobell"};
    app.require_subcommand(1);
    app.add_option("--format", cfg.format_name,
                   std::string("Output format: csv or json (default from ") + kFormatEnv + ", else json)")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("-o,--output", cfg.output_path, "Write the document here instead of stdout");
    app.add_flag("--degrees", cfg.degrees, "Interpret all angle arguments as degrees");
    app.fallthrough();

    auto* probs = app.add_subcommand("probs", "Four-outcome joint distribution at (theta, gamma)");
    add_model_options(probs, cfg, true);
    add_pair_options(probs, cfg);

    auto* ratio = app.add_subcommand("ratio", "One-particle outcome ratio P(theta)/P(pi + theta)");
    add_model_options(ratio, cfg, false);
    ratio->add_option("--theta", cfg.theta, "Angle between preparation and measurement")
        ->capture_default_str();

    auto* chsh = app.add_subcommand("chsh", "CHSH quantity S for four settings");
    add_model_options(chsh, cfg, true);
    add_chsh_options(chsh, cfg);

    auto* sweep = app.add_subcommand("sweep-gamma", "S against gamma at fixed settings");
    sweep->add_option("--gammas", cfg.gammas, "Gamma values to evaluate")->delimiter(',');
    sweep->add_option("--plot-data", cfg.plot_data_path, "Write 'gamma s_numeric' columns to PATH");
    add_chsh_options(sweep, cfg);

    auto* grid = app.add_subcommand("grid-search", "Exhaustive scan of S around the base settings");
    add_model_options(grid, cfg, true);
    add_chsh_options(grid, cfg);
    grid->add_option("--range", cfg.half_range, "Half-range of each angle offset")->capture_default_str();
    grid->add_option("--steps", cfg.steps, "Increments per axis (steps + 1 points)")->capture_default_str();
    grid->add_option("--budget", cfg.budget, "Maximum number of S evaluations (0: library default)");
    grid->add_option("--workers", cfg.workers, "Worker threads")->capture_default_str();

    auto* sample = app.add_subcommand("sample", "Monte Carlo estimate of the joint distribution");
    add_model_options(sample, cfg, false);
    add_pair_options(sample, cfg);
    sample->add_option("--n", cfg.n_samples, "Number of sampled histories")->capture_default_str();
    sample->add_option("--seed", cfg.seed, "Seed of the pseudorandom streams")->capture_default_str();
    sample->add_option("--workers", cfg.workers, "Worker threads")->capture_default_str();
    sample->add_option("--concentration-k", cfg.concentration_k,
                       "Also report the fraction of histories with both anomalies above k*gamma");

    auto* audit = app.add_subcommand("audit", "Alice's marginal as Bob's setting scans a full circle");
    add_model_options(audit, cfg, true);
    audit->add_option("--alice", cfg.alice, "Alice's setting angle")->capture_default_str();
    audit->add_option("--grid", cfg.grid, "Number of Bob angles on [0, 2pi)")->capture_default_str();
    audit->add_option("--plot-data", cfg.plot_data_path, "Write 'bob_angle alice_marginal' columns to PATH");

    auto* separable = app.add_subcommand("separable", "Product distribution of two independent particles");
    add_model_options(separable, cfg, false);
    add_pair_options(separable, cfg);
    separable->add_option("--source-angle", cfg.source_angle, "Common preparation direction")
        ->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        cfg.subcommand = app.get_subcommands().front()->get_name();
        if (cfg.degrees) {
            to_radians(cfg);
        }
        validate(cfg);
        Document doc;
        const auto& name = cfg.subcommand;
        if (name == "probs") doc = cmd_probs(cfg);
        else if (name == "ratio") doc = cmd_ratio(cfg);
        else if (name == "chsh") doc = cmd_chsh(cfg);
        else if (name == "sweep-gamma") doc = cmd_sweep(cfg);
        else if (name == "grid-search") doc = cmd_grid(cfg);
        else if (name == "sample") doc = cmd_sample(cfg);
        else if (name == "audit") doc = cmd_audit(cfg);
        else doc = cmd_separable(cfg);

        const std::string text = render(cfg, doc);
        if (cfg.output_path.empty()) {
            out << text;
        } else {
            std::ofstream f(cfg.output_path, std::ios::binary);
            if (!f) {
                throw ConstraintError("cannot open output file " + cfg.output_path);
            }
            f << text;
        }
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitConstraint;
    }
}

}  // namespace retrobell::cli
