// Copyright 2026 the genie authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "genie/engine/service.h"

#include <chrono>
#include <condition_variable>
#include <deque>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "genie/engine/engine.h"
#include "genie/error.h"
#include "genie/gridstore/grid_field.h"
#include "genie/gridstore/field_io.h"
#include "genie/qlang/parser.h"

namespace genie::engine {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

thread_local Clock::time_point request_start;

int status_for(const std::string &code) {
  if (code == "NotFound" || code == "UnknownQuery" || code == "NoData") return 404;
  if (code == "NoPriorQuery" || code == "Busy") return 409;
  if (code == "Internal" || code == "IOError" || code == "SimulatorFailed") return 500;
  return 400;
}

void reply(httplib::Response &res, int status, const json &body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void fail(httplib::Response &res, const std::string &code, const std::string &message) {
  reply(res, status_for(code), {{"error", {{"code", code}, {"message", message}}}});
}

json error_json(const Error &e) {
  json j = {{"code", e.code()}, {"message", e.what()}};
  if (const auto *s = dynamic_cast<const qlang::SyntaxError *>(&e)) {
    j["line"] = s->line();
    j["column"] = s->column();
    j["expected"] = s->expected();
  }
  return j;
}

// [lon_min, lat_min, lon_max, lat_max], "lon_min,lat_min,lon_max,lat_max" or named keys
gridstore::BBox parse_bbox(const json &j) {
  gridstore::BBox b;
  if (j.is_array() && j.size() == 4) {
    b.lon_min = j[0].get<double>();
    b.lat_min = j[1].get<double>();
    b.lon_max = j[2].get<double>();
    b.lat_max = j[3].get<double>();
  } else if (j.is_object()) {
    b.lat_min = j.at("lat_min").get<double>();
    b.lat_max = j.at("lat_max").get<double>();
    b.lon_min = j.at("lon_min").get<double>();
    b.lon_max = j.at("lon_max").get<double>();
  } else if (j.is_string()) {
    json arr = json::array();
    std::stringstream ss(j.get<std::string>());
    std::string part;
    while (std::getline(ss, part, ',')) arr.push_back(std::stod(part));
    if (arr.size() != 4) throw Error("InvalidArgument", "bbox needs four numbers");
    return parse_bbox(arr);
  } else {
    throw Error("InvalidArgument", "bbox must be [lon_min, lat_min, lon_max, lat_max]");
  }
  if (!(b.lat_min < b.lat_max) || !(b.lon_min < b.lon_max)) throw Error("InvalidArgument", "empty bbox");
  return b;
}

std::string hint_text(const json &hints) {
  if (hints.is_null()) return {};
  if (hints.is_string()) return hints.get<std::string>();
  if (!hints.is_object()) throw Error("InvalidArgument", "hints must be an object or a hint clause");
  std::string out = "(";
  for (auto it = hints.begin(); it != hints.end(); ++it) {
    if (out.size() > 1) out += ", ";
    out += it.key() + "=";
    if (it->is_number()) {
      out += fmt::format("{}", it->get<double>());
    } else {
      auto s = it->get<std::string>();
      std::string quoted;
      for (char c : s) quoted += c == '\'' ? std::string("''") : std::string(1, c);
      out += "'" + quoted + "'";
    }
  }
  return out + ")";
}

gridstore::Attribute parse_attribute(const std::string &s) {
  auto dot = s.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == s.size()) {
    throw Error("InvalidArgument", "attribute must be table.column");
  }
  return {s.substr(0, dot), s.substr(dot + 1)};
}

}  // namespace

struct Service::Impl {
  struct QueryState {
    std::string id;
    std::string text;
    std::string status = "queued";
    std::vector<json> epochs;
    json error;
    Session session;
  };

  Engine &engine;
  httplib::Server server;
  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::function<void()>> jobs;
  std::vector<std::thread> workers;
  std::map<std::string, std::shared_ptr<QueryState>> queries;
  std::uint64_t next_id = 1;
  bool stopping = false;
  std::thread serve_thread;

  Impl(Engine &e, int n) : engine(e) {
    for (int k = 0; k < std::max(1, n); ++k) workers.emplace_back([this] { work(); });
    routes();
  }

  ~Impl() {
    server.stop();
    if (serve_thread.joinable()) serve_thread.join();
    {
      std::lock_guard lock(mu);
      stopping = true;
    }
    cv.notify_all();
    for (auto &w : workers) w.join();
  }

  void work() {
    for (;;) {
      std::function<void()> job;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return stopping || !jobs.empty(); });
        if (jobs.empty()) return;
        job = std::move(jobs.front());
        jobs.pop_front();
      }
      job();
    }
  }

  void submit(std::function<void()> job) {
    {
      std::lock_guard lock(mu);
      jobs.push_back(std::move(job));
    }
    cv.notify_one();
  }

  std::shared_ptr<QueryState> find(const std::string &id) {
    std::lock_guard lock(mu);
    auto it = queries.find(id);
    return it == queries.end() ? nullptr : it->second;
  }

  void run_job(const std::shared_ptr<QueryState> &q, const std::function<void(const EpochSink &)> &body) {
    {
      std::lock_guard lock(mu);
      q->status = "running";
      q->error = nullptr;
    }
    EpochSink sink = [this, q](const EpochResult &r) {
      auto j = r.to_json(engine.domain());
      std::lock_guard lock(mu);
      q->epochs.push_back(std::move(j));
    };
    try {
      body(sink);
      std::lock_guard lock(mu);
      q->status = "done";
    } catch (const Error &e) {
      std::lock_guard lock(mu);
      q->status = "error";
      q->error = error_json(e);
    } catch (const std::exception &e) {
      std::lock_guard lock(mu);
      q->status = "error";
      q->error = {{"code", "Internal"}, {"message", e.what()}};
    }
  }

  void post_query(const httplib::Request &req, httplib::Response &res) {
    auto body = json::parse(req.body);
    auto text = body.at("text").get<std::string>();
    qlang::parse_statement(text);
    auto q = std::make_shared<QueryState>();
    q->text = text;
    {
      std::lock_guard lock(mu);
      q->id = fmt::format("q{}", next_id++);
      q->session.id = q->id;
      queries[q->id] = q;
    }
    submit([this, q] {
      run_job(q, [&](const EpochSink &sink) { engine.execute(q->text, q->session, sink); });
    });
    reply(res, 202, {{"query_id", q->id}});
  }

  void get_epochs(const httplib::Request &req, httplib::Response &res) {
    auto q = find(req.path_params.at("id"));
    if (!q) return fail(res, "UnknownQuery", "no such query");
    std::size_t after = req.has_param("after") ? std::stoul(req.get_param_value("after")) : 0;
    std::lock_guard lock(mu);
    json epochs = json::array();
    for (std::size_t k = after; k < q->epochs.size(); ++k) epochs.push_back(q->epochs[k]);
    json out = {{"query_id", q->id}, {"status", q->status}, {"epochs", epochs}, {"next", q->epochs.size()}};
    if (!q->error.is_null()) out["error"] = q->error;
    reply(res, 200, out);
  }

  void post_refine(const httplib::Request &req, httplib::Response &res) {
    auto q = find(req.path_params.at("id"));
    if (!q) return fail(res, "UnknownQuery", "no such query");
    auto body = json::parse(req.body);
    auto box = parse_bbox(body.at("bbox"));
    auto hint = hint_text(body.value("hints", json()));
    if (!hint.empty()) qlang::parse_hint(hint);
    {
      std::lock_guard lock(mu);
      if (q->status != "done" || q->session.last_epoch < 1) {
        return fail(res, "NoPriorQuery", "the query has no completed epoch to refine");
      }
      q->status = "queued";
    }
    submit([this, q, box, hint] {
      run_job(q, [&](const EpochSink &sink) { engine.refine(q->session, box, hint, sink); });
    });
    reply(res, 202, {{"query_id", q->id}});
  }

  void get_field(const httplib::Request &req, httplib::Response &res) {
    if (!req.has_param("attribute")) return fail(res, "InvalidArgument", "attribute is required");
    const auto &domain = engine.domain();
    auto attr = parse_attribute(req.get_param_value("attribute"));
    auto &store = engine.store();
    auto box = req.has_param("bbox") ? parse_bbox(json(req.get_param_value("bbox"))) : domain.bbox();
    gridstore::Extent want{domain.to_rect(box), 0, domain.duration()};
    if (want.rect.empty()) return fail(res, "InvalidArgument", "bbox is outside the domain");
    auto common = store.common_grid(attr, want);
    if (!common) return fail(res, "NoData", fmt::format("nothing materialized for {}", attr.str()));
    int s = req.has_param("res") ? gridstore::resolution_quanta(std::stod(req.get_param_value("res"))) : common->first;
    std::int64_t ts = req.has_param("tres") ? gridstore::resolution_seconds(std::stod(req.get_param_value("tres")))
                                            : common->second;
    int ps = std::gcd(s, common->first);
    std::int64_t pt = std::gcd(ts, common->second);
    want.rect = gridstore::align_rect(want.rect, s, domain.full_rect());
    std::tie(want.t0, want.t1) = gridstore::align_span(want.t0, want.t1, ts, domain.duration());
    auto field = store.paint(attr, want, ps, pt).field;
    if (ps != s || pt != ts) field = gridstore::aggregate(field, s, ts);
    if (req.get_param_value("format") == "dense") return reply(res, 200, gridstore::field_dense_json(field, domain));
    int step = 0;
    if (req.has_param("t")) {
      auto t = domain.rel(gridstore::parse_timestamp(req.get_param_value("t")));
      if (t < field.extent.t0 || t >= field.extent.t1) return fail(res, "InvalidArgument", "t is outside the field");
      step = static_cast<int>((t - field.extent.t0) / field.tres);
    }
    reply(res, 200, gridstore::field_geojson(field, domain, step));
  }

  template <typename F>
  httplib::Server::Handler guarded(F f) {
    return [f](const httplib::Request &req, httplib::Response &res) {
      try {
        f(req, res);
      } catch (const Error &e) {
        reply(res, status_for(e.code()), {{"error", error_json(e)}});
      } catch (const json::exception &e) {
        fail(res, "InvalidArgument", e.what());
      } catch (const std::invalid_argument &e) {
        fail(res, "InvalidArgument", e.what());
      } catch (const std::out_of_range &e) {
        fail(res, "InvalidArgument", e.what());
      } catch (const std::exception &e) {
        fail(res, "Internal", e.what());
      }
    };
  }

  void routes() {
    server.set_pre_routing_handler([](const httplib::Request &, httplib::Response &) {
      request_start = Clock::now();
      return httplib::Server::HandlerResponse::Unhandled;
    });
    server.set_post_routing_handler([](const httplib::Request &, httplib::Response &res) {
      auto ms = std::chrono::duration<double, std::milli>(Clock::now() - request_start).count();
      res.set_header("X-Genie-Version", kVersion);
      res.set_header("X-Genie-Elapsed-Ms", fmt::format("{:.3f}", ms));
    });
    server.Post("/v1/query", guarded([this](const auto &req, auto &res) { post_query(req, res); }));
    server.Get("/v1/query/:id/epochs", guarded([this](const auto &req, auto &res) { get_epochs(req, res); }));
    server.Post("/v1/query/:id/refine", guarded([this](const auto &req, auto &res) { post_refine(req, res); }));
    server.Get("/v1/coverage", guarded([this](const httplib::Request &req, httplib::Response &res) {
                 std::optional<gridstore::Attribute> attr;
                 if (req.has_param("attribute")) attr = parse_attribute(req.get_param_value("attribute"));
                 res.set_content(engine.coverage().geojson(attr).dump(), "application/geo+json");
               }));
    server.Get("/v1/field", guarded([this](const auto &req, auto &res) { get_field(req, res); }));
    server.Get("/v1/catalog", guarded([this](const httplib::Request &, httplib::Response &res) {
                 reply(res, 200, engine.catalog().to_json());
               }));
    server.set_error_handler([](const httplib::Request &, httplib::Response &res) {
      if (res.body.empty()) {
        res.set_content(json{{"error", {{"code", res.status == 404 ? "NotFound" : "HttpError"},
                                        {"message", httplib::status_message(res.status)}}}}
                            .dump(),
                        "application/json");
      }
    });
  }
};

Service::Service(Engine &engine, int workers) : impl_(std::make_unique<Impl>(engine, workers)) {}

Service::~Service() = default;

int Service::bind(const std::string &host, int port) {
  if (port == 0) {
    int p = impl_->server.bind_to_any_port(host);
    if (p < 0) throw Error("IOError", fmt::format("cannot bind {}", host));
    return p;
  }
  if (!impl_->server.bind_to_port(host, port)) throw Error("IOError", fmt::format("cannot bind {}:{}", host, port));
  return port;
}

void Service::run() { impl_->server.listen_after_bind(); }

void Service::start() {
  impl_->serve_thread = std::thread([this] { run(); });
  impl_->server.wait_until_ready();
}

void Service::stop() {
  impl_->server.stop();
  if (impl_->serve_thread.joinable()) impl_->serve_thread.join();
}

}  // namespace genie::engine
