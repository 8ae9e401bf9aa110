// Command-line front end: run, compare, plan, export-plots, validate-config.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sonn/sonn.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kDefaultArm = fs::path(SONN_DATA_DIR) / "ur3.json";

std::vector<sonn::ExperimentConfig> load_all(const std::vector<std::string>& files,
                                             const std::optional<std::string>& out) {
    std::vector<sonn::ExperimentConfig> all;
    for (const auto& f : files) {
        auto cells = sonn::load_experiments(f, kDefaultArm);
        for (auto& c : cells) {
            if (out) c.output_dir = *out;
            all.push_back(std::move(c));
        }
    }
    return all;
}

sonn::Vector parse_joints(const std::string& text, const char* what) {
    std::vector<double> values;
    std::stringstream in(text);
    for (std::string field; std::getline(in, field, ',');) {
        const auto v = sonn::detail::parse_double(sonn::detail::trim(field));
        if (!v) throw sonn::ConfigError(std::string(what) + ": '" + field + "' is not a number");
        values.push_back(*v);
    }
    if (values.size() != static_cast<std::size_t>(sonn::kJointCount)) {
        throw sonn::ConfigError(std::string(what) + ": expected 6 comma-separated angles");
    }
    return Eigen::Map<sonn::Vector>(values.data(), sonn::kJointCount);
}

sonn::Network read_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw sonn::Error("cannot open network file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw sonn::ParseError(path + ": " + e.what());
    }
    return sonn::network_from_json(j);
}

void print_row(const sonn::ResultsRow& r, const fs::path& dir) {
    std::cout << r.id << ": " << sonn::to_string(r.model) << " #N=" << r.original.n_neurons
              << " QE=" << r.original.qe << " #Con.=" << r.original.n_edges << " CM=" << r.original.cm;
    if (r.reduced) std::cout << " #Red.=" << r.reduced->n_edges << " CM(red.)=" << r.reduced->cm;
    std::cout << " -> " << dir.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learn reduced robot configuration spaces with self-organizing networks"};
    app.require_subcommand(1);

    std::vector<std::string> run_configs;
    std::optional<std::string> run_out;
    auto* run = app.add_subcommand("run", "Run every experiment in the given config files");
    run->add_option("configs", run_configs, "Experiment config files (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--out", run_out, "Override the output directory");

    std::vector<std::string> cmp_configs;
    std::optional<std::string> cmp_out;
    auto* compare = app.add_subcommand("compare", "Run experiments and print the model comparison table");
    compare->add_option("configs", cmp_configs, "Experiment config files (JSON)")->required()->check(CLI::ExistingFile);
    compare->add_option("--out", cmp_out, "Output directory (default: that of the first experiment)");

    std::string plan_net, plan_start, plan_goal, plan_arm = kDefaultArm.string();
    std::optional<std::string> plan_json, plan_csv;
    bool plan_topological = false;
    auto* plan = app.add_subcommand("plan", "Plan a joint-space path on a trained network");
    plan->add_option("--network", plan_net, "Network JSON")->required()->check(CLI::ExistingFile);
    plan->add_option("--start", plan_start, "Start configuration, 6 comma-separated degrees")->required();
    plan->add_option("--goal", plan_goal, "Goal configuration, 6 comma-separated degrees")->required();
    plan->add_option("--arm", plan_arm, "Arm model JSON for the Cartesian path length")->check(CLI::ExistingFile);
    plan->add_option("--json", plan_json, "Write the plan as JSON here");
    plan->add_option("--csv", plan_csv, "Write the waypoints as CSV here");
    plan->add_flag("--topological-only", plan_topological, "Ignore temporal and lattice edges");

    std::string exp_net, exp_data, exp_out;
    std::optional<std::string> exp_format;
    std::vector<int> exp_joints{0, 1, 2};
    auto* exporter = app.add_subcommand("export-plots", "Write 3-joint projections of samples, neurons and edges");
    exporter->add_option("--network", exp_net, "Network JSON")->required()->check(CLI::ExistingFile);
    exporter->add_option("--dataset", exp_data, "Dataset file")->required()->check(CLI::ExistingFile);
    exporter->add_option("--format", exp_format, "Dataset format: csv or json (default: from extension)");
    exporter->add_option("--joints", exp_joints, "Three distinct joint indices (0-5)")->expected(3)->delimiter(',');
    exporter->add_option("--out", exp_out, "Output directory")->required();

    std::vector<std::string> val_configs;
    auto* validate = app.add_subcommand("validate-config", "Check config files without running them");
    validate->add_option("configs", val_configs, "Experiment config files (JSON)")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            int failures = 0;
            for (const auto& c : load_all(run_configs, run_out)) {
                try {
                    const auto outcome = sonn::run_experiment(c);
                    print_row(outcome.row, outcome.directory);
                } catch (const sonn::Error& e) {
                    std::cerr << "error: " << e.what() << '\n';
                    ++failures;
                }
            }
            return failures == 0 ? 0 : 1;
        }
        if (*compare) {
            const auto configs = load_all(cmp_configs, cmp_out);
            const auto rows = sonn::compare_models(configs);
            const fs::path dir = cmp_out ? fs::path(*cmp_out) : configs.front().output_dir;
            fs::create_directories(dir);
            {
                std::ofstream csv(dir / "comparison.csv");
                sonn::write_comparison_csv(csv, rows);
                std::ofstream txt(dir / "comparison.txt");
                sonn::write_comparison_text(txt, rows);
            }
            sonn::write_comparison_text(std::cout, rows);
            int failures = 0;
            for (const auto& r : rows) {
                if (!r.result) {
                    std::cerr << "error: " << r.failure << '\n';
                    ++failures;
                }
            }
            return failures == 0 ? 0 : 1;
        }
        if (*plan) {
            const auto net = read_network(plan_net);
            sonn::PlanOptions opt;
            if (plan_topological) opt.edges = sonn::EdgeFilter::only(sonn::EdgeKind::topological);
            auto result = sonn::plan(net, parse_joints(plan_start, "--start"), parse_joints(plan_goal, "--goal"), opt);
            result.stats = sonn::path_stats(result, sonn::load_arm_model(plan_arm));
            if (plan_json) {
                std::ofstream out(*plan_json);
                out << sonn::plan_to_json(result).dump(2) << '\n';
            }
            if (plan_csv) {
                std::ofstream out(*plan_csv);
                sonn::write_waypoints_csv(out, result);
            }
            std::cout << "neurons on path: " << result.stats.resolution << ", max jump: " << result.stats.max_jump
                      << " deg, cartesian length: " << result.stats.cartesian_length << " m\n";
            if (!plan_json && !plan_csv) sonn::write_waypoints_csv(std::cout, result);
            return 0;
        }
        if (*exporter) {
            const auto net = read_network(exp_net);
            const auto format = exp_format ? sonn::dataset_format_from_string(*exp_format)
                                           : sonn::dataset_format_for(exp_data);
            const auto data = sonn::load_dataset(exp_data, format);
            sonn::export_plot_data(net, data, {exp_joints[0], exp_joints[1], exp_joints[2]}, exp_out);
            std::cout << "wrote samples.csv, neurons.csv, edges.csv to " << exp_out << '\n';
            return 0;
        }
        if (*validate) {
            const auto configs = load_all(val_configs, std::nullopt);
            for (const auto& c : configs) {
                if (c.dataset.path && !fs::exists(*c.dataset.path)) {
                    throw sonn::ConfigError(c.id + ": dataset.path: file not found: " + c.dataset.path->string());
                }
                if (!c.arm_path.empty() && !fs::exists(c.arm_path)) {
                    throw sonn::ConfigError(c.id + ": arm: file not found: " + c.arm_path.string());
                }
            }
            std::cout << "ok: " << configs.size() << " experiment(s)\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
