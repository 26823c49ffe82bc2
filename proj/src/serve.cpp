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
#include "cmca/serve.hpp"

#include <cmath>

#include "httplib.h"

namespace cmca {

using nlohmann::json;

namespace {

HttpResponse json_response(int status, const json& body)
{
    return {status, body.dump(), "application/json"};
}

HttpResponse error_response(int status, std::string_view code, const std::string& message)
{
    return json_response(status, json{{"error", code}, {"message", message}});
}

int status_for(const Error& e)
{
    return e.kind() == ErrorKind::Numerical ? 422 : e.kind() == ErrorKind::Io ? 500 : 400;
}

json nullable(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

json row_array(const CategoricalTable& table, const Matrix<double>& coords, const char* role)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < coords.rows(); ++i) {
        const auto r = static_cast<std::size_t>(i);
        json c = json::array();
        for (Eigen::Index j = 0; j < coords.cols(); ++j)
            c.push_back(coords(i, j));
        rows.push_back({{"row_id", table.row_ids[r]}, {"group", table.group_of_row[r]}, {"role", role},
                        {"coordinates", std::move(c)}});
    }
    return rows;
}

Normalization normalization_from(const json& req)
{
    return parse_normalization(req.value("normalization", std::string("centered")));
}

json parse_body(const std::string& body)
{
    json req = json::parse(body, nullptr, false);
    if (req.is_discarded() || !req.is_object())
        throw Error(ErrorCode::InvalidArgument, "request body must be a JSON object");
    return req;
}

std::string required_string(const json& req, const char* key)
{
    if (!req.contains(key) || !req.at(key).is_string())
        throw Error(ErrorCode::InvalidArgument, std::string("missing string field '") + key + "'");
    return req.at(key).get<std::string>();
}

// Cache keys carry alpha rounded to 1e-6, and the fit uses that rounded value.
long long alpha_key(double alpha)
{
    return std::llround(alpha * 1e6);
}

} // namespace

json trace_to_json(const AlphaTrace& trace)
{
    json steps = json::array();
    for (const auto& s : trace.steps)
        steps.push_back({{"t", s.t}, {"alpha", s.alpha}, {"numerator", nullable(s.numerator)},
                         {"denominator", nullable(s.denominator)}});
    return {{"converged", trace.converged},
            {"epsilon", trace.epsilon},
            {"final_alpha", trace.final_alpha},
            {"steps", std::move(steps)}};
}

json fit_to_json(const FitResult& fit)
{
    json out;
    out["target"] = fit.options.target;
    out["background"] = fit.options.background;
    out["alpha"] = fit.model.alpha;
    out["k_prime"] = fit.model.components();
    out["normalization"] = std::string(to_string(fit.options.normalization));

    json eig = json::array();
    for (Eigen::Index j = 0; j < fit.model.eigenvalues.size(); ++j)
        eig.push_back(fit.model.eigenvalues(j));
    out["eigenvalues"] = std::move(eig);

    json rows = row_array(fit.target.table, fit.target_rows, "target");
    for (auto& r : row_array(fit.background.table, fit.background_rows, "background"))
        rows.push_back(std::move(r));
    out["rows"] = std::move(rows);

    json categories = json::array();
    for (std::size_t k = 0; k < fit.vocabulary.size(); ++k) {
        const auto& e = fit.vocabulary.entries()[k];
        json c = json::array();
        for (Eigen::Index j = 0; j < fit.categories.values.cols(); ++j)
            c.push_back(fit.categories.values(static_cast<Eigen::Index>(k), j));
        categories.push_back({{"variable", fit.vocabulary.variable_names()[e.variable]},
                              {"level", e.level},
                              {"zero_mass", static_cast<bool>(fit.categories.zero_mass[k])},
                              {"coordinates", std::move(c)}});
    }
    out["categories"] = std::move(categories);

    json totals = json::array();
    for (std::size_t v = 0; v < fit.vocabulary.num_variables(); ++v) {
        json t = json::array();
        for (Eigen::Index j = 0; j < fit.loadings.per_variable_total.cols(); ++j)
            t.push_back(fit.loadings.per_variable_total(static_cast<Eigen::Index>(v), j));
        totals.push_back({{"variable", fit.vocabulary.variable_names()[v]}, {"totals", std::move(t)}});
    }
    out["per_variable_totals"] = std::move(totals);

    json top = json::array();
    for (const auto& ranking : fit.top) {
        json comp = json::array();
        for (const auto& rv : ranking)
            comp.push_back({{"variable", rv.name}, {"total", rv.total}});
        top.push_back(std::move(comp));
    }
    out["top_variables"] = std::move(top);
    out["trace"] = fit.trace ? trace_to_json(*fit.trace) : json(nullptr);
    return out;
}

json sweep_to_json(const std::vector<SweepPoint<double>>& points)
{
    json entries = json::array();
    for (const auto& p : points) {
        json e = {{"alpha", p.alpha}, {"status", p.ok() ? "ok" : "failed"}};
        if (p.ok()) {
            e["lambda1"] = nullable(p.lambda1);
            e["lambda2"] = nullable(p.lambda2);
            e["sigma2_target"] = nullable(p.sigma2_target);
            e["sigma2_background"] = nullable(p.sigma2_background);
        } else {
            e["error"] = std::string(to_string(*p.error));
            e["message"] = p.message;
        }
        entries.push_back(std::move(e));
    }
    return {{"entries", std::move(entries)}};
}

void Service::set_dataset(std::shared_ptr<const Dataset> dataset)
{
    std::lock_guard lock(mutex_);
    dataset_ = std::move(dataset);
    cache_.clear();
}

bool Service::ready() const
{
    return dataset() != nullptr;
}

std::shared_ptr<const Dataset> Service::dataset() const
{
    std::lock_guard lock(mutex_);
    return dataset_;
}

HttpResponse Service::handle(const std::string& method, const std::string& path, const std::string& body)
{
    if (path == "/api/meta") {
        if (method != "GET")
            return error_response(405, "MethodNotAllowed", "use GET");
        return meta();
    }
    if (path == "/api/fit" || path == "/api/sweep") {
        if (method != "POST")
            return error_response(405, "MethodNotAllowed", "use POST");
        return path == "/api/fit" ? fit(body) : sweep(body);
    }
    return error_response(404, "NotFound", "no route for " + path);
}

HttpResponse Service::meta() const
{
    const auto data = dataset();
    if (!data)
        return error_response(503, "NotReady", "dataset is still loading");
    json variables = json::array();
    for (const auto& s : data->table.schemas)
        variables.push_back({{"name", s.name}, {"levels", s.levels}, {"missing_code", s.missing_code}});
    json groups = json::object();
    json order = json::array();
    for (const auto& label : data->table.group_labels()) {
        groups[label] = data->table.count_group(label);
        order.push_back(label);
    }
    json rules = json::array();
    for (const auto& r : data->spec.color_rules)
        rules.push_back({{"name", r.name}, {"other", r.other_name}, {"variables", r.variables},
                         {"levels", r.levels}, {"match", r.match == MatchMode::Any ? "any" : "all"}});
    return json_response(200, {{"group_column", data->table.group_column},
                               {"rows", data->table.num_rows()},
                               {"variables", std::move(variables)},
                               {"groups", std::move(groups)},
                               {"group_order", std::move(order)},
                               {"categories", data->vocabulary.size()},
                               {"color_rules", std::move(rules)}});
}

HttpResponse Service::compute_fit(const Dataset& data, const FitOptions& options)
{
    ++computations_;
    try {
        return json_response(200, fit_to_json(run_fit(data, options)));
    } catch (const NonconvergenceError& e) {
        return json_response(422, {{"error", to_string(e.code())}, {"message", e.what()},
                                   {"trace", trace_to_json(e.trace())}});
    } catch (const Error& e) {
        return error_response(status_for(e), to_string(e.code()), e.what());
    } catch (const std::exception& e) {
        return error_response(500, "InternalError", e.what());
    }
}

HttpResponse Service::fit(const std::string& body)
{
    const auto data = dataset();
    if (!data)
        return error_response(503, "NotReady", "dataset is still loading");

    FitOptions options;
    std::string key;
    try {
        const json req = parse_body(body);
        options.target = required_string(req, "target");
        options.background = required_string(req, "background");
        options.k_prime = req.value("k_prime", Eigen::Index{2});
        options.normalization = normalization_from(req);
        options.top_n = req.value("top_n", std::size_t{9});
        options.auto_options.epsilon = req.value("epsilon", options.auto_options.epsilon);
        options.auto_options.tol = req.value("tol", options.auto_options.tol);
        options.auto_options.max_iter = req.value("max_iter", options.auto_options.max_iter);

        if (!req.contains("alpha"))
            throw Error(ErrorCode::InvalidArgument, "missing field 'alpha' (number or \"auto\")");
        const auto& a = req.at("alpha");
        std::string alpha_part;
        if (a.is_string() && a.get<std::string>() == "auto") {
            alpha_part = "auto";
        } else if (a.is_number()) {
            const double raw = a.get<double>();
            if (!std::isfinite(raw) || raw < 0.0)
                throw Error(ErrorCode::InvalidArgument, "alpha must be finite and >= 0");
            const auto q = alpha_key(raw);
            options.alpha = static_cast<double>(q) / 1e6;
            alpha_part = std::to_string(q);
        } else {
            throw Error(ErrorCode::InvalidArgument, "alpha must be a number or \"auto\"");
        }
        key = json::array({options.target, options.background, alpha_part, options.k_prime,
                           std::string(to_string(options.normalization)), options.auto_options.epsilon,
                           options.auto_options.tol, options.auto_options.max_iter, options.top_n})
                  .dump();
    } catch (const Error& e) {
        return error_response(400, to_string(e.code()), e.what());
    } catch (const json::exception& e) {
        return error_response(400, "InvalidArgument", e.what());
    }

    std::promise<HttpResponse> promise;
    std::shared_future<HttpResponse> future;
    bool owner = false;
    {
        std::lock_guard lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) {
            future = it->second;
        } else {
            future = promise.get_future().share();
            cache_.emplace(key, future);
            owner = true;
        }
    }
    if (owner)
        promise.set_value(compute_fit(*data, options));
    return future.get();
}

HttpResponse Service::sweep(const std::string& body) const
{
    const auto data = dataset();
    if (!data)
        return error_response(503, "NotReady", "dataset is still loading");
    SweepOptions options;
    try {
        const json req = parse_body(body);
        options.target = required_string(req, "target");
        options.background = required_string(req, "background");
        options.k_prime = req.value("k_prime", Eigen::Index{2});
        options.normalization = normalization_from(req);
        if (!req.contains("grid") || !req.at("grid").is_array())
            throw Error(ErrorCode::InvalidArgument, "missing array field 'grid'");
        options.grid = req.at("grid").get<std::vector<double>>();
        if (options.grid.empty())
            throw Error(ErrorCode::InvalidArgument, "grid is empty");
    } catch (const Error& e) {
        return error_response(400, to_string(e.code()), e.what());
    } catch (const json::exception& e) {
        return error_response(400, "InvalidArgument", e.what());
    }
    try {
        return json_response(200, sweep_to_json(run_sweep(*data, options).points));
    } catch (const Error& e) {
        return error_response(status_for(e), to_string(e.code()), e.what());
    }
}

struct HttpServer::Impl {
    Service& service;
    httplib::Server server;

    explicit Impl(Service& s) : service(s) {}
};

HttpServer::HttpServer(Service& service, std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>(service))
{
    auto route = [this](const httplib::Request& req, httplib::Response& res) {
        const auto r = impl_->service.handle(req.method, req.path, req.body);
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    };
    impl_->server.Get(R"(/api/.*)", route);
    impl_->server.Post(R"(/api/.*)", route);
    if (static_dir && !impl_->server.set_mount_point("/", static_dir->string()))
        throw Error(ErrorCode::MissingFile, "static asset directory " + static_dir->string() + " not found");
}

HttpServer::~HttpServer()
{
    stop();
}

int HttpServer::bind(const std::string& host, int port)
{
    if (port == 0)
        return impl_->server.bind_to_any_port(host);
    if (!impl_->server.bind_to_port(host, port))
        throw Error(ErrorCode::OutputFailure, "cannot bind " + host + ":" + std::to_string(port));
    return port;
}

void HttpServer::run()
{
    impl_->server.listen_after_bind();
}

void HttpServer::stop()
{
    if (impl_)
        impl_->server.stop();
}

} // namespace cmca
