#pragma once

// HTTP JSON API (cpp-httplib) over the engine, a persistent collection and
// background search jobs. All routes live under /api/v1.

#include "ifsgraph/collection.hpp"
#include "ifsgraph/graph_export.hpp"
#include "ifsgraph/render.hpp"

#include <httplib.h>

#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <map>
#include <memory>
#include <random>
#include <thread>

namespace ifsgraph {

// ---------------------------------------------------------------- jobs

enum class JobState { Pending, Running, Done, Cancelled };

inline const char* to_string(JobState s) {
  switch (s) {
    case JobState::Pending: return "Pending";
    case JobState::Running: return "Running";
    case JobState::Done: return "Done";
    case JobState::Cancelled: return "Cancelled";
  }
  return "?";
}

struct SearchJob {
  std::string id;
  SearchConfig config;
  SearchProgress progress;
  std::atomic<bool> cancel_requested{false};

  mutable std::mutex mu;  // guards the fields below
  JobState state = JobState::Pending;
  std::vector<std::string> result_ids;
  std::optional<std::string> error;
  SearchStats stats;
};

inline Json job_to_json(const SearchJob& job) {
  Json j;
  j["id"] = job.id;
  std::lock_guard lock(job.mu);
  j["state"] = to_string(job.state);
  j["cancel_requested"] = job.cancel_requested.load();
  const std::size_t candidates = job.progress.candidates.load();
  const std::size_t pruned = job.progress.pruned_far.load();
  Json p;
  p["tried"] = job.progress.tried.load();
  p["found"] = job.progress.found.load();
  p["candidates"] = candidates;
  p["pruned_far"] = pruned;
  p["prune_ratio"] = candidates + pruned > 0 ? static_cast<double>(pruned) / static_cast<double>(candidates + pruned) : 0.0;
  if (job.state == JobState::Done || job.state == JobState::Cancelled) {
    p["seconds"] = job.stats.seconds;
    p["candidates_per_second"] = job.stats.candidates_per_second();
  }
  j["progress"] = std::move(p);
  j["result_ids"] = job.result_ids;
  j["error"] = job.error ? Json(*job.error) : Json(nullptr);
  j["config"] = config_to_json(job.config);
  return j;
}

enum class CancelResult { Ok, NotFound, Conflict };

/// FIFO job queue drained by `max_running` runner threads.
class JobManager {
 public:
  JobManager(Collection& collection, std::size_t workers, std::size_t max_running)
      : collection_(collection), workers_(std::max<std::size_t>(1, workers)) {
    for (std::size_t i = 0; i < std::max<std::size_t>(1, max_running); ++i) runners_.emplace_back([this] { run(); });
  }

  ~JobManager() {
    {
      std::lock_guard lock(mu_);
      stopping_ = true;
      for (auto& [_, job] : jobs_) job->cancel_requested = true;
    }
    cv_.notify_all();
    for (auto& t : runners_) t.join();
  }

  JobManager(const JobManager&) = delete;
  JobManager& operator=(const JobManager&) = delete;

  std::string submit(SearchConfig cfg) {
    auto job = std::make_shared<SearchJob>();
    job->config = std::move(cfg);
    {
      std::lock_guard lock(mu_);
      job->id = "job-" + std::to_string(++counter_);
      jobs_.emplace(job->id, job);
      queue_.push_back(job);
    }
    cv_.notify_one();
    return job->id;
  }

  [[nodiscard]] std::shared_ptr<SearchJob> find(const std::string& id) const {
    std::lock_guard lock(mu_);
    auto it = jobs_.find(id);
    return it == jobs_.end() ? nullptr : it->second;
  }

  [[nodiscard]] std::vector<std::shared_ptr<SearchJob>> list() const {
    std::lock_guard lock(mu_);
    std::vector<std::shared_ptr<SearchJob>> out;
    for (const auto& [_, job] : jobs_) out.push_back(job);
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
      return x->id.size() != y->id.size() ? x->id.size() < y->id.size() : x->id < y->id;
    });
    return out;
  }

  CancelResult cancel(const std::string& id) {
    auto job = find(id);
    if (!job) return CancelResult::NotFound;
    std::lock_guard lock(job->mu);
    if (job->state == JobState::Done || job->state == JobState::Cancelled) return CancelResult::Conflict;
    job->cancel_requested = true;
    if (job->state == JobState::Pending) job->state = JobState::Cancelled;
    return CancelResult::Ok;
  }

 private:
  void run() {
    for (;;) {
      std::shared_ptr<SearchJob> job;
      {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
        if (stopping_) return;
        job = queue_.front();
        queue_.pop_front();
      }
      {
        std::lock_guard lock(job->mu);
        if (job->state != JobState::Pending) continue;
        job->state = JobState::Running;
      }
      SearchResult result;
      std::optional<std::string> error;
      try {
        result = run_search(job->config, {workers_, &job->cancel_requested, &job->progress});
      } catch (const std::exception& e) {
        error = e.what();
      }
      std::vector<std::string> ids;
      for (const ExampleRecord& r : result.records) {
        try {
          ids.push_back(collection_.append(r).first.id);
        } catch (const std::exception& e) {
          error = e.what();
          break;
        }
      }
      std::lock_guard lock(job->mu);
      job->result_ids = std::move(ids);
      job->error = std::move(error);
      job->stats = result.stats;
      job->state = result.cancelled || job->cancel_requested ? JobState::Cancelled : JobState::Done;
    }
  }

  Collection& collection_;
  std::size_t workers_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  bool stopping_ = false;
  std::size_t counter_ = 0;
  std::map<std::string, std::shared_ptr<SearchJob>> jobs_;
  std::deque<std::shared_ptr<SearchJob>> queue_;
  std::vector<std::thread> runners_;
};

// ---------------------------------------------------------------- config

struct ServiceConfig {
  std::filesystem::path collection_path = "collection.jsonl";
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t max_workers = std::max(1u, std::thread::hardware_concurrency());
  std::size_t max_running_jobs = 1;
  BuildCaps caps;
};

/// "host:port", "host" or ":port".
inline std::pair<std::string, int> parse_bind(const std::string& addr, std::string host = "127.0.0.1", int port = 8080) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos) return {addr.empty() ? host : addr, port};
  if (colon > 0) host = addr.substr(0, colon);
  const std::string p = addr.substr(colon + 1);
  if (p.empty() || p.find_first_not_of("0123456789") != std::string::npos || p.size() > 5)
    throw std::invalid_argument("bad bind address \"" + addr + "\"");
  port = std::stoi(p);
  if (port > 65535) throw std::invalid_argument("bad port in \"" + addr + "\"");
  return {host, port};
}

/// Reads COLLECTION_PATH, BIND_ADDR and MAX_WORKERS.
inline ServiceConfig service_config_from_env() {
  ServiceConfig cfg;
  if (const char* p = std::getenv("COLLECTION_PATH"); p && *p) cfg.collection_path = p;
  if (const char* b = std::getenv("BIND_ADDR"); b && *b) std::tie(cfg.host, cfg.port) = parse_bind(b);
  if (const char* w = std::getenv("MAX_WORKERS"); w && *w) {
    const long n = std::strtol(w, nullptr, 10);
    if (n < 1) throw std::invalid_argument("MAX_WORKERS must be a positive integer");
    cfg.max_workers = static_cast<std::size_t>(n);
  }
  return cfg;
}

// ---------------------------------------------------------------- service

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

inline ApiResponse json_response(int status, const Json& j) { return {status, "application/json", j.dump()}; }

inline ApiResponse error_response(int status, std::string kind, std::string message, Json extra = Json::object()) {
  Json j;
  j["error"] = std::move(kind);
  j["message"] = std::move(message);
  for (auto& [k, v] : extra.items()) j[k] = v;
  return json_response(status, j);
}

inline Json violations_json(const std::vector<Violation>& vs) {
  Json a = Json::array();
  for (const auto& v : vs)
    a.push_back(Json{{"map", v.map_index ? Json(*v.map_index + 1) : Json(nullptr)}, {"message", v.message}});
  return a;
}

using QueryParams = std::multimap<std::string, std::string>;

namespace service_detail {

inline std::optional<std::string> param(const QueryParams& q, const std::string& key) {
  auto it = q.find(key);
  if (it == q.end()) return std::nullopt;
  return it->second;
}

inline std::size_t parse_count(const std::string& s, const std::string& what, std::size_t max = 1u << 30) {
  if (s.empty() || s.size() > 10 || s.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument(what + ": expected a non-negative integer");
  const auto v = std::stoull(s);
  if (v > max) throw std::invalid_argument(what + ": at most " + std::to_string(max));
  return static_cast<std::size_t>(v);
}

inline double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": expected a number");
  }
  if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(what + ": expected a number");
  return v;
}

inline bool parse_bool(const std::string& s, const std::string& what) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw std::invalid_argument(what + ": expected true or false");
}

/// Applies one filter key; shared by individual query parameters and the
/// comma-separated `filter=key:value,...` form.
inline void apply_filter(ExampleFilter& f, const std::string& key, const std::string& value) {
  if (key == "kind") f.kind = value;
  else if (key == "connected") f.report.connected = parse_bool(value, key);
  else if (key == "class") f.report.attractor_class = attractor_class_from_string(value);
  else if (key == "min_types") f.report.min_types = parse_count(value, key);
  else if (key == "max_types") f.report.max_types = parse_count(value, key);
  else if (key == "min_fli") f.report.min_fli = parse_count(value, key);
  else if (key == "max_fli") f.report.max_fli = parse_count(value, key);
  else throw std::invalid_argument("unknown filter \"" + key + "\"");
}

}  // namespace service_detail

class Service {
 public:
  explicit Service(ServiceConfig cfg)
      : cfg_(std::move(cfg)), collection_(cfg_.collection_path), jobs_(collection_, cfg_.max_workers, cfg_.max_running_jobs) {}

  [[nodiscard]] Collection& collection() { return collection_; }
  [[nodiscard]] JobManager& jobs() { return jobs_; }
  [[nodiscard]] const ServiceConfig& config() const { return cfg_; }

  ApiResponse analyze(const std::string& body, const QueryParams& q = {}) const {
    IfsSpec spec;
    BuildCaps caps = cfg_.caps;
    try {
      spec = spec_from_text(body);
      if (auto v = service_detail::param(q, "max_types")) caps.max_types = service_detail::parse_count(*v, "max_types");
    } catch (const std::exception& e) {
      return error_response(400, "schema", e.what());
    }
    try {
      ExampleRecord r = ifsgraph::analyze(spec, caps);
      if (r.outcome.kind == "TooComplex")
        return error_response(422, "too_complex", r.outcome.reason.value_or("caps exceeded"),
                              Json{{"candidate_count", r.outcome.candidates}});
      return {200, "application/json", export_record(r)};
    } catch (const ValidationError& e) {
      return error_response(400, "validation", e.what(), Json{{"violations", violations_json(e.violations())}});
    }
  }

  ApiResponse start_search(const std::string& body) {
    SearchConfig cfg;
    try {
      cfg = config_from_text(body);
    } catch (const std::exception& e) {
      return error_response(400, "schema", e.what());
    }
    const std::string id = jobs_.submit(std::move(cfg));
    return json_response(202, Json{{"job_id", id}});
  }

  ApiResponse get_job(const std::string& id) const {
    auto job = jobs_.find(id);
    if (!job) return error_response(404, "not_found", "unknown job " + id);
    return json_response(200, job_to_json(*job));
  }

  ApiResponse list_jobs() const {
    Json a = Json::array();
    for (const auto& job : jobs_.list()) a.push_back(job_to_json(*job));
    return json_response(200, Json{{"jobs", std::move(a)}});
  }

  ApiResponse cancel_job(const std::string& id) {
    switch (jobs_.cancel(id)) {
      case CancelResult::NotFound: return error_response(404, "not_found", "unknown job " + id);
      case CancelResult::Conflict: return error_response(409, "conflict", "job " + id + " has already finished");
      case CancelResult::Ok: break;
    }
    return get_job(id);
  }

  ApiResponse list_examples(const QueryParams& q) const {
    using namespace service_detail;
    ExampleSort sort = ExampleSort::Complexity;
    ExampleFilter filter;
    std::size_t limit = 50;
    std::optional<std::string> cursor;
    try {
      if (auto s = param(q, "sort")) {
        if (*s == "complexity") sort = ExampleSort::Complexity;
        else if (*s == "id") sort = ExampleSort::Id;
        else if (*s == "created") sort = ExampleSort::Created;
        else throw std::invalid_argument("sort: expected complexity, id or created");
      }
      if (auto l = param(q, "limit")) limit = parse_count(*l, "limit", 1000);
      cursor = param(q, "cursor");
      for (const auto& [key, value] : q) {
        if (key == "filter") {
          std::stringstream ss(value);
          std::string item;
          while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            const auto colon = item.find(':');
            if (colon == std::string::npos) throw std::invalid_argument("filter: expected key:value, got \"" + item + "\"");
            apply_filter(filter, item.substr(0, colon), item.substr(colon + 1));
          }
        } else if (key != "sort" && key != "limit" && key != "cursor") {
          apply_filter(filter, key, value);
        }
      }
    } catch (const std::exception& e) {
      return error_response(400, "bad_request", e.what());
    }
    ExamplePage page;
    try {
      page = collection_.page(sort, filter, cursor, limit);
    } catch (const std::out_of_range& e) {
      return error_response(400, "bad_request", e.what());
    }
    Json items = Json::array();
    for (const auto& r : page.items) items.push_back(record_to_json(r));
    return json_response(200, Json{{"items", std::move(items)},
                                   {"next_cursor", page.next_cursor ? Json(*page.next_cursor) : Json(nullptr)},
                                   {"total", page.total}});
  }

  ApiResponse get_example(const std::string& id) const {
    auto r = collection_.get(id);
    if (!r) return error_response(404, "not_found", "unknown example " + id);
    return {200, "application/json", export_record(*r)};
  }

  /// Body may carry {"seed": n}; without one a fresh seed is drawn and
  /// retried until the child is new to the collection.
  ApiResponse mutate_example(const std::string& id, const std::string& body) {
    auto parent = collection_.get(id);
    if (!parent) return error_response(404, "not_found", "unknown example " + id);
    std::optional<std::uint64_t> seed;
    try {
      if (!body.empty()) {
        const Json j = Json::parse(body);
        json_detail::expect_keys(j, "mutate", {}, {"seed"});
        if (j.contains("seed")) {
          if (!j["seed"].is_number_unsigned()) throw SchemaError("seed: expected a non-negative integer");
          seed = j["seed"].get<std::uint64_t>();
        }
      }
    } catch (const std::exception& e) {
      return error_response(400, "schema", e.what());
    }
    const SearchConfig family = family_of(parent->spec);
    const auto pool = symmetry_pool(family);
    const int attempts = seed ? 1 : 64;
    for (int a = 0; a < attempts; ++a) {
      SearchRng rng(seed ? *seed : fresh_seed());
      IfsSpec child_spec;
      try {
        child_spec = mutate(parent->spec, rng, family, pool);
      } catch (const SearchError& e) {
        return error_response(422, "stuck", e.what());
      }
      ExampleRecord child = ifsgraph::analyze(child_spec, cfg_.caps);
      if (child.outcome.kind == "TooComplex")
        return error_response(422, "too_complex", child.outcome.reason.value_or("caps exceeded"),
                              Json{{"candidate_count", child.outcome.candidates}});
      child.parent_id = parent->id;
      auto [stored, inserted] = collection_.append(std::move(child));
      if (inserted || seed) return {inserted ? 201 : 200, "application/json", export_record(stored)};
    }
    return error_response(409, "conflict", "no new child found for " + id);
  }

  ApiResponse render_example(const std::string& id, const QueryParams& q) const {
    using namespace service_detail;
    auto r = collection_.get(id);
    if (!r) return error_response(404, "not_found", "unknown example " + id);
    RenderRequest req;
    req.spec = r->spec;
    std::string format = "ppm";
    try {
      for (const auto& [key, _] : q)
        if (key != "w" && key != "h" && key != "window" && key != "coloring" && key != "depth" && key != "format")
          throw std::invalid_argument("unknown parameter \"" + key + "\"");
      if (auto w = param(q, "w")) req.width = static_cast<int>(parse_count(*w, "w", 4096));
      req.height = req.width;
      if (auto h = param(q, "h")) req.height = static_cast<int>(parse_count(*h, "h", 4096));
      if (auto win = param(q, "window"); win && *win != "auto") req.window = parse_window(*win);
      if (auto c = param(q, "coloring")) req.coloring = coloring_from_string(*c);
      if (auto d = param(q, "depth"); d && *d != "auto") req.depth = static_cast<int>(parse_count(*d, "depth", 64));
      if (auto f = param(q, "format")) format = *f;
      if (format != "ppm" && format != "png") throw std::invalid_argument("format: expected ppm or png");
      const RenderResult out = render(req);
      ApiResponse resp{200, format == "png" ? "image/png" : "image/x-portable-pixmap",
                       format == "png" ? to_png(out.image) : to_ppm(out.image)};
      return resp;
    } catch (const std::exception& e) {
      return error_response(400, "bad_request", e.what());
    }
  }

  ApiResponse example_dot(const std::string& id) const {
    auto r = collection_.get(id);
    if (!r) return error_response(404, "not_found", "unknown example " + id);
    const auto ng = graph_of(build(r->spec, cfg_.caps));
    if (!ng) return error_response(422, "no_graph", "outcome " + r->outcome.kind + " has no neighbor graph");
    return {200, "text/vnd.graphviz", export_dot(*ng)};
  }

  ApiResponse collection_info() const {
    return json_response(200, Json{{"name", collection_.name()},
                                   {"created_at", collection_.created_at()},
                                   {"size", collection_.size()}});
  }

  /// "cx,cy,half_width" in standard coordinates.
  static Window parse_window(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    if (parts.size() != 3) throw std::invalid_argument("window: expected cx,cy,half_width");
    Window w{service_detail::parse_double(parts[0], "window"), service_detail::parse_double(parts[1], "window"),
             service_detail::parse_double(parts[2], "window")};
    if (!(w.half_width > 0.0)) throw std::invalid_argument("window: half-width must be positive");
    return w;
  }

  /// Registers every route on `server`.
  void mount(httplib::Server& server) {
    auto send = [](httplib::Response& res, const ApiResponse& a) {
      res.status = a.status;
      res.set_content(a.body, a.content_type);
    };
    auto params = [](const httplib::Request& req) {
      QueryParams q;
      for (const auto& [k, v] : req.params) q.emplace(k, v);
      return q;
    };
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    server.Options(R"(/api/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
    server.Get("/api/v1/health", [send](const httplib::Request&, httplib::Response& res) {
      send(res, json_response(200, Json{{"status", "ok"}}));
    });
    server.Get("/api/v1/collection",
               [this, send](const httplib::Request&, httplib::Response& res) { send(res, collection_info()); });
    server.Post("/api/v1/analyze", [this, send, params](const httplib::Request& req, httplib::Response& res) {
      send(res, analyze(req.body, params(req)));
    });
    server.Post("/api/v1/search", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, start_search(req.body));
    });
    server.Get("/api/v1/search", [this, send](const httplib::Request&, httplib::Response& res) { send(res, list_jobs()); });
    server.Get(R"(/api/v1/search/([A-Za-z0-9-]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, get_job(req.matches[1]));
    });
    server.Post(R"(/api/v1/search/([A-Za-z0-9-]+)/cancel)",
                [this, send](const httplib::Request& req, httplib::Response& res) { send(res, cancel_job(req.matches[1])); });
    server.Get("/api/v1/examples", [this, send, params](const httplib::Request& req, httplib::Response& res) {
      send(res, list_examples(params(req)));
    });
    server.Get(R"(/api/v1/examples/([0-9a-f]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, get_example(req.matches[1]));
    });
    server.Post(R"(/api/v1/examples/([0-9a-f]+)/mutate)",
                [this, send](const httplib::Request& req, httplib::Response& res) {
                  send(res, mutate_example(req.matches[1], req.body));
                });
    server.Get(R"(/api/v1/examples/([0-9a-f]+)/render)",
               [this, send, params](const httplib::Request& req, httplib::Response& res) {
                 send(res, render_example(req.matches[1], params(req)));
               });
    server.Get(R"(/api/v1/examples/([0-9a-f]+)/neighborgraph\.dot)",
               [this, send](const httplib::Request& req, httplib::Response& res) { send(res, example_dot(req.matches[1])); });
    server.set_exception_handler([send](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      std::string msg = "internal error";
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        msg = e.what();
      } catch (...) {
      }
      send(res, error_response(500, "internal", msg));
    });
  }

 private:
  std::uint64_t fresh_seed() {
    static std::random_device rd;
    std::lock_guard lock(seed_mu_);
    return splitmix64((static_cast<std::uint64_t>(rd()) << 32) ^ rd() ^ ++seed_counter_);
  }

  ServiceConfig cfg_;
  Collection collection_;
  JobManager jobs_;
  std::mutex seed_mu_;
  std::uint64_t seed_counter_ = 0;
};

}  // namespace ifsgraph
