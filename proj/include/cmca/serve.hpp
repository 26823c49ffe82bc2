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
#pragma once

#include <atomic>
#include <filesystem>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "json.hpp"

#include "cmca/analysis.hpp"

namespace cmca {

struct HttpResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

nlohmann::json fit_to_json(const FitResult& fit);
nlohmann::json trace_to_json(const AlphaTrace& trace);
nlohmann::json sweep_to_json(const std::vector<SweepPoint<double>>& points);

/// JSON API over one immutable dataset. Thread-safe: handlers only read the
/// dataset, and fit results are memoized per parameter key with concurrent
/// duplicate requests sharing a single computation.
class Service {
public:
    Service() = default;

    void set_dataset(std::shared_ptr<const Dataset> dataset);
    bool ready() const;

    HttpResponse handle(const std::string& method, const std::string& path, const std::string& body);

    HttpResponse meta() const;
    HttpResponse fit(const std::string& body);
    HttpResponse sweep(const std::string& body) const;

    std::size_t computations() const noexcept { return computations_.load(); }

private:
    std::shared_ptr<const Dataset> dataset() const;
    HttpResponse compute_fit(const Dataset& data, const FitOptions& options);

    mutable std::mutex mutex_;
    std::shared_ptr<const Dataset> dataset_;
    std::map<std::string, std::shared_future<HttpResponse>> cache_;
    std::atomic<std::size_t> computations_{0};
};

/// cpp-httplib binding: /api/* routes to `Service`, everything else to the
/// static asset directory when one is given.
class HttpServer {
public:
    HttpServer(Service& service, std::optional<std::filesystem::path> static_dir = std::nullopt);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds and returns the port (port 0 picks a free one).
    int bind(const std::string& host, int port);
    /// Blocks until stop().
    void run();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace cmca
