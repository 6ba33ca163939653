// ifsgraph: command-line front end.
//
// Exit codes: 0 success, 1 invalid input, 2 TooComplex, 3 OscViolation.

#include "ifsgraph/ifsgraph.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace ifsgraph;

constexpr int kExitInvalid = 1;
constexpr int kExitTooComplex = 2;
constexpr int kExitOsc = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << data;
  if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

int outcome_exit(const std::string& kind) {
  if (kind == "TooComplex") return kExitTooComplex;
  if (kind == "OscViolation") return kExitOsc;
  return 0;
}

std::string summary_line(const ExampleRecord& r) {
  char buf[256];
  if (!r.is_graph()) {
    std::snprintf(buf, sizeof buf, "outcome=%s candidates=%zu", r.outcome.kind.c_str(), r.outcome.candidates);
    return buf;
  }
  std::snprintf(buf, sizeof buf, "types=%zu fli=%zu alpha=%.4f beta=%.4f class=%s", r.neighbor_count, r.fli,
                r.dimension->alpha, r.dimension->beta_global, to_string(r.topology->classification));
  return buf;
}

void report_outcome(const ExampleRecord& r) {
  if (r.outcome.kind == "TooComplex")
    std::cerr << "too complex: " << r.outcome.reason.value_or("") << " (" << r.outcome.candidates << " candidates)\n";
  if (r.outcome.kind == "OscViolation" && r.outcome.witness) {
    auto word = [](const std::vector<std::size_t>& w) {
      std::string s;
      for (std::size_t k : w) s += std::to_string(k + 1);
      return s;
    };
    std::cerr << "open set condition fails: f_" << word(r.outcome.witness->first) << " = f_"
              << word(r.outcome.witness->second) << "\n";
  }
}

IfsSpec load_spec(const std::string& path) { return spec_from_text(read_file(path)); }

Window parse_window(const std::string& s) { return Service::parse_window(s); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neighbor graphs, topology and dimension of planar self-similar sets"};
  app.require_subcommand(1);

  std::string spec_path, out_path, config_path, window_arg, coloring_arg = "mono", format_arg, bind_arg,
      collection_arg;
  std::size_t max_types = BuildCaps{}.max_types, max_candidates = BuildCaps{}.max_candidates;
  bool as_summary = false, as_json = false, dot_json = false;
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  int width = 512, height = 0;
  std::string depth_arg = "auto";
  std::int64_t triple_d = 1, triple_bound = 20;

  auto* analyze_cmd = app.add_subcommand("analyze", "Build the neighbor graph and print the record");
  analyze_cmd->add_option("spec", spec_path, "IFS JSON file")->required();
  analyze_cmd->add_option("--max-types", max_types, "Neighbor type cap");
  analyze_cmd->add_option("--max-candidates", max_candidates, "Candidate map cap");
  auto* summary_flag = analyze_cmd->add_flag("--summary", as_summary, "One-line summary");
  analyze_cmd->add_flag("--json", as_json, "Record JSON (default)")->excludes(summary_flag);

  auto* search_cmd = app.add_subcommand("search", "Run a parameter search");
  search_cmd->add_option("config", config_path, "Search config JSON")->required();
  search_cmd->add_option("--out", out_path, "Results, one record per line")->required();
  search_cmd->add_option("--workers", workers, "Analysis threads")->check(CLI::PositiveNumber);

  auto* render_cmd = app.add_subcommand("render", "Rasterize the attractor");
  render_cmd->add_option("spec", spec_path, "IFS JSON file")->required();
  render_cmd->add_option("--out", out_path, "Output image (.ppm or .png)")->required();
  render_cmd->add_option("--window", window_arg, "cx,cy,half_width in standard coordinates, or auto");
  render_cmd->add_option("--width", width, "Pixels")->check(CLI::Range(16, 16384));
  render_cmd->add_option("--height", height, "Pixels (default: width)")->check(CLI::Range(16, 16384));
  render_cmd->add_option("--coloring", coloring_arg, "mono, first or second");
  render_cmd->add_option("--depth", depth_arg, "Word length, or auto");
  render_cmd->add_option("--format", format_arg, "ppm or png (default: from extension)");

  auto* dot_cmd = app.add_subcommand("export-dot", "Print the neighbor graph as DOT");
  dot_cmd->add_option("spec", spec_path, "IFS JSON file")->required();
  dot_cmd->add_flag("--json", dot_json, "Print the graph as JSON instead");
  dot_cmd->add_option("--max-types", max_types, "Neighbor type cap");

  auto* triples_cmd = app.add_subcommand("triples", "Primitive solutions of u^2 + d v^2 = w^2");
  triples_cmd->add_option("-d", triple_d, "Square-free d")->required()->check(CLI::Range(1, 1000000));
  triples_cmd->add_option("--bound", triple_bound, "Largest w")->required()->check(CLI::Range(1, 1000000));

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--bind", bind_arg, "host:port (default: BIND_ADDR or 127.0.0.1:8080)");
  serve_cmd->add_option("--collection", collection_arg, "JSON-lines store (default: COLLECTION_PATH)");
  auto* serve_workers = serve_cmd->add_option("--workers", workers, "Analysis threads per job");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze_cmd) {
      IfsSpec spec;
      ExampleRecord r;
      try {
        spec = load_spec(spec_path);
        r = analyze(spec, {max_types, max_candidates});
      } catch (const ValidationError& e) {
        std::cerr << "invalid specification:\n";
        for (const auto& v : e.violations()) std::cerr << "  " << describe(v) << "\n";
        return kExitInvalid;
      }
      std::cout << (as_summary ? summary_line(r) : export_record(r)) << "\n";
      report_outcome(r);
      return outcome_exit(r.outcome.kind);
    }

    if (*search_cmd) {
      const SearchConfig cfg = config_from_text(read_file(config_path));
      const SearchResult res = run_search(cfg, {workers, nullptr, nullptr});
      write_file(out_path, results_jsonl(res.records));
      std::cerr << "tried=" << res.stats.tried << " analyzed=" << res.stats.analyzed << " found=" << res.stats.found
                << " rate=" << res.stats.candidates_per_second() << "/s prune_ratio=" << res.stats.prune_ratio()
                << " rng=" << kSearchRngName << "\n";
      return 0;
    }

    if (*render_cmd) {
      RenderRequest req;
      req.spec = load_spec(spec_path);
      if (auto v = validate(req.spec); !v.empty()) throw ValidationError(v);
      req.width = width;
      req.height = height > 0 ? height : width;
      if (!window_arg.empty() && window_arg != "auto") req.window = parse_window(window_arg);
      req.coloring = coloring_from_string(coloring_arg);
      if (depth_arg != "auto") {
        std::size_t used = 0;
        const int d = std::stoi(depth_arg, &used);
        if (used != depth_arg.size()) throw std::invalid_argument("--depth: expected an integer or auto");
        req.depth = d;
      }
      std::string format = format_arg;
      if (format.empty()) format = out_path.size() >= 4 && out_path.substr(out_path.size() - 4) == ".png" ? "png" : "ppm";
      if (format != "ppm" && format != "png") throw std::invalid_argument("--format: expected ppm or png");
      const RenderResult out = render(req);
      write_file(out_path, format == "png" ? to_png(out.image) : to_ppm(out.image));
      std::cerr << "depth=" << out.depth << " points=" << out.points << (out.capped ? " capped" : "") << "\n";
      return 0;
    }

    if (*dot_cmd) {
      const IfsSpec spec = load_spec(spec_path);
      if (auto v = validate(spec); !v.empty()) throw ValidationError(v);
      const BuildOutcome outcome = build(spec, BuildCaps{max_types, BuildCaps{}.max_candidates});
      const auto ng = graph_of(outcome);
      if (!ng) {
        const ExampleRecord r = make_record(spec, outcome);
        report_outcome(r);
        return outcome_exit(r.outcome.kind);
      }
      std::cout << (dot_json ? graph_to_json(*ng).dump(2) + "\n" : export_dot(*ng));
      return 0;
    }

    if (*triples_cmd) {
      for (const Triple& t : euclid_triples(triple_d, triple_bound)) std::cout << t.u << " " << t.v << " " << t.w << "\n";
      return 0;
    }

    if (*serve_cmd) {
      ServiceConfig cfg = service_config_from_env();
      if (!bind_arg.empty()) std::tie(cfg.host, cfg.port) = parse_bind(bind_arg);
      if (!collection_arg.empty()) cfg.collection_path = collection_arg;
      if (serve_workers->count() > 0) cfg.max_workers = workers;
      Service service(cfg);
      httplib::Server server;
      service.mount(server);
      std::cerr << "listening on http://" << cfg.host << ":" << cfg.port << "/api/v1 (collection "
                << cfg.collection_path.string() << ")\n";
      if (!server.listen(cfg.host, cfg.port)) {
        std::cerr << "cannot bind " << cfg.host << ":" << cfg.port << "\n";
        return kExitInvalid;
      }
      return 0;
    }
  } catch (const ValidationError& e) {
    std::cerr << "invalid specification:\n";
    for (const auto& v : e.violations()) std::cerr << "  " << describe(v) << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return 0;
}
