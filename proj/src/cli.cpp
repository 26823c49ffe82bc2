/*
 * Copyright 2026 The cmca Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "cmca/cli.hpp"

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "cmca/analysis.hpp"
#include "cmca/csv.hpp"
#include "cmca/output.hpp"
#include "cmca/serve.hpp"

namespace cmca {

namespace {

struct DataArgs {
    std::string data;
    std::string recode;
    std::string groups;
    std::string normalization = "centered";
    Eigen::Index k_prime = 2;
};

struct FitArgs {
    std::string target;
    std::string background;
    std::optional<double> alpha;
    bool auto_alpha = false;
    std::string sweep;
    double epsilon = 1e-3;
    double tol = 1e-6;
    int max_iter = 50;
    std::size_t top_variables = 9;
    std::vector<std::string> plots;
    std::string components = "1,2";
    std::string color_rule;
    std::string out = "cmca-out";
};

struct McaArgs {
    std::string subset;
    std::string out = "cmca-out";
};

struct EncodeArgs {
    std::string subset;
    std::string out = "cmca-out";
};

struct ServeArgs {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string static_dir;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void add_data_options(CLI::App& cmd, DataArgs& a)
{
    cmd.add_option("--data", a.data, "Input CSV (header row, RFC-4180)")->required();
    cmd.add_option("--recode", a.recode, "RecodeSpec JSON");
    cmd.add_option("--groups", a.groups, "Group-label column (overrides the RecodeSpec)");
    cmd.add_option("--normalization", a.normalization, "raw | centered | ca")
        ->check(CLI::IsMember({"raw", "centered", "ca"}));
    cmd.add_option("--k-prime", a.k_prime, "Number of components")->check(CLI::PositiveNumber);
}

Dataset load_dataset(const DataArgs& a)
{
    RecodeSpec spec;
    if (!a.recode.empty())
        spec = RecodeSpec::load(a.recode);
    if (!a.groups.empty())
        spec.group_column = a.groups;
    if (spec.group_column.empty())
        throw UsageError("no group column: pass --groups or set group_column in the RecodeSpec");
    return Dataset::load(a.data, std::move(spec));
}

std::pair<int, int> parse_components(const std::string& text)
{
    int a = 0, b = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%d,%d%c", &a, &b, &tail) != 2)
        throw UsageError("--components expects two indices like 1,2");
    return {a, b};
}

std::vector<double> parse_sweep(const std::string& text)
{
    double lo = 0, hi = 0, step = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &lo, &hi, &step, &tail) != 3)
        throw UsageError("--sweep expects lo:hi:step");
    return make_grid(lo, hi, step);
}

std::string sweep_dir_name(double alpha)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "alpha_%.6f", alpha);
    return buf;
}

std::vector<PlotSpec> plot_specs(const FitArgs& a, const std::string& axis_prefix)
{
    std::vector<std::string> kinds = a.plots.empty() ? std::vector<std::string>{"rows"} : a.plots;
    std::vector<PlotSpec> specs;
    for (const auto& k : kinds) {
        PlotSpec spec;
        spec.kind = parse_plot_kind(k);
        spec.components = parse_components(a.components);
        spec.color_rule = spec.kind == PlotKind::Rows ? a.color_rule : std::string();
        spec.top_n = a.top_variables;
        spec.axis_prefix = axis_prefix;
        specs.push_back(spec);
    }
    return specs;
}

void add_fit_files(OutputTree& tree, const std::string& prefix, const FitResult& fit, const FitArgs& a,
                   const RecodeSpec& recode)
{
    tree.add(prefix + "row_coordinates.csv", row_coordinates_csv(fit));
    tree.add(prefix + "category_coordinates.csv",
             category_coordinates_csv(fit.vocabulary, fit.categories.values, fit.categories.zero_mass, fit_meta(fit),
                                      "cPC"));
    tree.add(prefix + "loadings.csv", loadings_csv(fit));
    if (fit.trace)
        tree.add(prefix + "alpha_trace.csv", trace_csv(*fit.trace));
    if (fit.model.components() < 2)
        return;
    for (auto spec : plot_specs(a, "cPC")) {
        spec.title = fit.options.target + " vs " + fit.options.background + ", alpha=" +
                     csv::format_number(fit.model.alpha);
        tree.add(prefix + "plot_" + to_string(spec.kind) + ".svg",
                 render_scatter(fit_plot_points(fit, spec, recode), spec));
    }
}

int cmd_fit(const DataArgs& d, const FitArgs& a)
{
    const int modes = (a.alpha ? 1 : 0) + (a.auto_alpha ? 1 : 0) + (a.sweep.empty() ? 0 : 1);
    if (modes != 1)
        throw UsageError("pass exactly one of --alpha, --auto-alpha, --sweep");
    if (a.top_variables < 1)
        throw UsageError("--top-variables must be >= 1");
    parse_components(a.components);
    const auto data = load_dataset(d);

    FitOptions options;
    options.target = a.target;
    options.background = a.background;
    options.k_prime = d.k_prime;
    options.normalization = parse_normalization(d.normalization);
    options.auto_options = {a.epsilon, a.tol, a.max_iter};
    options.top_n = a.top_variables;

    OutputTree tree;
    if (!a.sweep.empty()) {
        SweepOptions sweep{a.target, a.background, parse_sweep(a.sweep), d.k_prime, options.normalization};
        const auto result = run_sweep(data, sweep);
        tree.add("sweep_summary.csv", sweep_summary_csv(result.points));
        for (const auto& point : result.points) {
            const auto dir = sweep_dir_name(point.alpha) + "/";
            if (!point.ok()) {
                tree.add(dir + "error.json", nlohmann::json{{"error", to_string(*point.error)},
                                                            {"message", point.message}}
                                                     .dump() +
                                                 "\n");
                continue;
            }
            auto point_options = options;
            point_options.alpha = point.alpha;
            add_fit_files(tree, dir, interpret(result.inputs, *point.model, std::nullopt, point_options), a, data.spec);
        }
    } else {
        if (a.alpha)
            options.alpha = *a.alpha;
        add_fit_files(tree, "", run_fit(data, options), a, data.spec);
    }
    tree.commit(a.out);
    return kExitOk;
}

int cmd_mca(const DataArgs& d, const McaArgs& a, const FitArgs& plot_args)
{
    const auto data = load_dataset(d);
    McaOptions options;
    if (!a.subset.empty())
        options.subset = a.subset;
    options.k_prime = d.k_prime;
    options.normalization = parse_normalization(d.normalization);
    const auto mca = run_mca(data, options);

    OutputTree tree;
    tree.add("row_coordinates.csv", mca_row_coordinates_csv(mca));
    tree.add("category_coordinates.csv", mca_category_coordinates_csv(mca));
    tree.add("eigenvalues.csv", eigenvalues_csv(mca.model.eigenvalues,
                                                "k_prime=" + std::to_string(mca.model.components())));
    if (mca.model.components() >= 2) {
        PlotSpec spec;
        spec.components = parse_components(plot_args.components);
        spec.axis_prefix = "PC";
        spec.title = a.subset.empty() ? std::string("MCA, all rows") : "MCA, " + a.subset;
        tree.add("plot_rows.svg", render_scatter(mca_plot_points(mca, spec), spec));
    }
    tree.commit(a.out);
    return kExitOk;
}

int cmd_encode(const DataArgs& d, const EncodeArgs& a)
{
    const auto data = load_dataset(d);
    const CategoricalTable table = a.subset.empty() ? data.table : subset_group(data.table, a.subset);
    const auto g = one_hot<double>(table, data.vocabulary);
    const auto z = correspondence(g, parse_normalization(d.normalization));
    const auto b = burt(z);
    OutputTree tree;
    tree.add("disjunctive.csv", matrix_csv(g.values, data.vocabulary, "disjunctive"));
    tree.add("correspondence.csv", matrix_csv(z.values, data.vocabulary, "correspondence"));
    tree.add("burt.csv", matrix_csv(b.values, data.vocabulary, "burt"));
    tree.commit(a.out);
    return kExitOk;
}

int cmd_serve(const DataArgs& d, const ServeArgs& a, std::ostream& out, std::ostream& err)
{
    RecodeSpec spec;
    if (!d.recode.empty())
        spec = RecodeSpec::load(d.recode);
    if (!d.groups.empty())
        spec.group_column = d.groups;
    if (spec.group_column.empty())
        throw UsageError("no group column: pass --groups or set group_column in the RecodeSpec");

    Service service;
    std::optional<std::filesystem::path> static_dir;
    if (!a.static_dir.empty())
        static_dir = a.static_dir;
    HttpServer server(service, static_dir);
    const int port = server.bind(a.host, a.port);
    out << "listening on http://" << a.host << ":" << port << std::endl;

    std::jthread loader([&] {
        try {
            service.set_dataset(std::make_shared<const Dataset>(Dataset::load(d.data, spec)));
        } catch (const Error& e) {
            err << nlohmann::json{{"error", to_string(e.code())}, {"exit", kExitData}, {"message", e.what()}}.dump()
                << std::endl;
            server.stop();
        }
    });
    server.run();
    return service.ready() ? kExitOk : kExitData;
}

void report(std::ostream& err, std::string_view code, int exit, const std::string& message)
{
    err << nlohmann::json{{"error", code}, {"exit", exit}, {"message", message}}.dump() << std::endl;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Contrastive multiple correspondence analysis", "cmca"};
    app.require_subcommand(1);

    DataArgs data_args;
    FitArgs fit_args;
    McaArgs mca_args;
    EncodeArgs encode_args;
    ServeArgs serve_args;

    auto* fit = app.add_subcommand("fit", "Contrastive fit at a fixed, automatic, or swept alpha");
    add_data_options(*fit, data_args);
    fit->add_option("--target", fit_args.target, "Target group label")->required();
    fit->add_option("--background", fit_args.background, "Background group label")->required();
    fit->add_option("--alpha", fit_args.alpha, "Fixed contrast parameter");
    fit->add_flag("--auto-alpha", fit_args.auto_alpha, "Select alpha by the trace-ratio iteration");
    fit->add_option("--sweep", fit_args.sweep, "Grid lo:hi:step, one sub-directory per alpha");
    fit->add_option("--epsilon", fit_args.epsilon, "Denominator regularizer (alpha <= 1/epsilon)");
    fit->add_option("--tol", fit_args.tol, "Convergence tolerance on alpha");
    fit->add_option("--max-iter", fit_args.max_iter, "Iteration budget for --auto-alpha");
    fit->add_option("--top-variables", fit_args.top_variables, "Variables colored in category plots");
    fit->add_option("--plot", fit_args.plots, "rows | category_coordinates | category_loadings (repeatable)");
    fit->add_option("--components", fit_args.components, "Plotted components, e.g. 1,2");
    fit->add_option("--color-rule", fit_args.color_rule, "Color target rows by a RecodeSpec color rule");
    fit->add_option("--out", fit_args.out, "Output directory");

    auto* mca = app.add_subcommand("mca", "Standard MCA of all rows or one group");
    add_data_options(*mca, data_args);
    mca->add_option("--subset", mca_args.subset, "Restrict to one group label");
    mca->add_option("--components", fit_args.components, "Plotted components, e.g. 1,2");
    mca->add_option("--out", mca_args.out, "Output directory");

    auto* encode = app.add_subcommand("encode", "Export disjunctive, correspondence and Burt matrices");
    add_data_options(*encode, data_args);
    encode->add_option("--subset", encode_args.subset, "Restrict to one group label");
    encode->add_option("--out", encode_args.out, "Output directory");

    auto* serve = app.add_subcommand("serve", "Serve the JSON API (and explorer assets) over HTTP");
    add_data_options(*serve, data_args);
    serve->add_option("--host", serve_args.host, "Bind address");
    serve->add_option("--port", serve_args.port, "Port (0 picks a free port)");
    serve->add_option("--static", serve_args.static_dir, "Directory of built explorer assets");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        report(err, "UsageError", kExitUsage, e.what());
        return kExitUsage;
    }

    try {
        if (fit->parsed())
            return cmd_fit(data_args, fit_args);
        if (mca->parsed())
            return cmd_mca(data_args, mca_args, fit_args);
        if (encode->parsed())
            return cmd_encode(data_args, encode_args);
        return cmd_serve(data_args, serve_args, out, err);
    } catch (const UsageError& e) {
        report(err, "UsageError", kExitUsage, e.what());
        return kExitUsage;
    } catch (const Error& e) {
        const int code = e.kind() == ErrorKind::Numerical ? kExitNumerical : kExitData;
        report(err, to_string(e.code()), code, e.what());
        return code;
    } catch (const std::exception& e) {
        report(err, "InternalError", kExitData, e.what());
        return kExitData;
    }
}

} // namespace cmca
