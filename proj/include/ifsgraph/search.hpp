#pragma once

// Randomized and mutation-driven search over a declared IFS family.
//
// Every candidate i draws from its own generator, seeded from (seed, i), so
// the result depends on the config alone and not on the worker count or on
// completion order.

#include "ifsgraph/record.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

namespace ifsgraph {

inline constexpr const char* kSearchRngName = "mt19937_64(splitmix64(seed ^ splitmix64(index)))";

struct SearchFilters {
  std::optional<bool> connected;
  std::optional<std::size_t> min_types;
  std::optional<std::size_t> max_types;
  std::optional<AttractorClass> attractor_class;
  std::optional<std::size_t> min_fli;
  std::optional<std::size_t> max_fli;
};

struct SearchConfig {
  FieldSpec field = make_field(Rational(0));
  Rational b;
  Rational c;
  std::vector<SymmetryDescriptor> generators;
  std::size_t m_min = 2;
  std::size_t m_max = 2;
  std::int64_t translation_box = 1;
  std::size_t symmetry_word_length = 1;
  BuildCaps caps;
  std::size_t budget = 0;
  std::uint64_t seed = 0;
  SearchFilters filters;
  Rational random_fraction{Integer(1), Integer(2)};
  std::size_t survivors = 32;
  std::size_t generation_size = 64;

  [[nodiscard]] Rational det() const { return b * b + c * c - field.a * b * c; }
};

/// Empty when the config describes a usable family.
inline std::vector<std::string> validate_config(const SearchConfig& cfg) {
  std::vector<std::string> out;
  const Rational det = cfg.det();
  if (det <= Rational(1)) out.push_back("not expanding: det M = " + det.str() + " <= 1");
  if (cfg.m_min < 2) out.push_back("m_range: minimum must be at least 2");
  if (cfg.m_min > cfg.m_max) out.push_back("m_range: minimum exceeds maximum");
  if (Rational(static_cast<long>(cfg.m_max)) > det)
    out.push_back("m_range: requires max ≤ det M (det M = " + det.str() + ")");
  if (cfg.translation_box < 1) out.push_back("translation_box: L must be at least 1");
  if (cfg.generators.empty()) out.push_back("generators: at least one generator required");
  for (std::size_t i = 0; i < cfg.generators.size(); ++i)
    if (!is_rotation(cfg.field, cfg.generators[i].x, cfg.generators[i].y))
      out.push_back("generators[" + std::to_string(i) + "]: not a rotation");
  if (cfg.random_fraction < Rational(0) || cfg.random_fraction > Rational(1))
    out.push_back("random_fraction: must lie in [0, 1]");
  if (cfg.survivors < 1) out.push_back("survivors: must be at least 1");
  if (cfg.generation_size < 1) out.push_back("generation_size: must be at least 1");
  return out;
}

// ---------------------------------------------------------------- RNG

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Per-candidate generator. Bounded draws use rejection on raw 64-bit
/// outputs so sequences agree across standard libraries.
class SearchRng {
 public:
  explicit SearchRng(std::uint64_t seed) : engine_(seed) {}
  static SearchRng for_candidate(std::uint64_t seed, std::uint64_t index) {
    return SearchRng(splitmix64(seed ^ splitmix64(index)));
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return x % n;
  }

  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// True with probability p, decided exactly against a 64-bit draw.
  bool chance(const Rational& p) {
    if (p <= Rational(0)) return false;
    if (p >= Rational(1)) return true;
    const Integer scaled = floor(p * Rational(Integer("18446744073709551616")));
    return Integer(std::to_string(next())) < scaled;
  }

 private:
  std::mt19937_64 engine_;
};

// ---------------------------------------------------------------- family

/// Identity, all products of at most `word_length` generators, and their
/// negations; deduplicated, in breadth-first order.
inline std::vector<SymmetryDescriptor> symmetry_pool(const SearchConfig& cfg) {
  std::vector<SymmetryDescriptor> pool{SymmetryDescriptor::identity()};
  auto add = [&](const SymmetryDescriptor& s) {
    if (std::find(pool.begin(), pool.end(), s) == pool.end()) {
      pool.push_back(s);
      return true;
    }
    return false;
  };
  std::vector<SymmetryDescriptor> frontier{SymmetryDescriptor::identity()};
  for (std::size_t len = 1; len <= cfg.symmetry_word_length; ++len) {
    std::vector<SymmetryDescriptor> next;
    for (const auto& p : frontier)
      for (const auto& g : cfg.generators) {
        const SymmetryDescriptor q = multiply(cfg.field, p, g);
        if (add(q)) next.push_back(q);
      }
    frontier = std::move(next);
  }
  const std::size_t n = pool.size();
  for (std::size_t i = 0; i < n; ++i) add(multiply(cfg.field, SymmetryDescriptor::negation(), pool[i]));
  return pool;
}

inline bool map_less(const MapSpec& p, const MapSpec& q) {
  if (p.sym.reflected != q.sym.reflected) return !p.sym.reflected;
  if (p.sym.x != q.sym.x) return p.sym.x < q.sym.x;
  if (p.sym.y != q.sym.y) return p.sym.y < q.sym.y;
  if (p.t.x != q.t.x) return p.t.x < q.t.x;
  return p.t.y < q.t.y;
}

inline void sort_maps(IfsSpec& spec) { std::sort(spec.maps.begin(), spec.maps.end(), map_less); }

inline bool has_duplicate_maps(const IfsSpec& spec) {
  for (std::size_t i = 0; i < spec.maps.size(); ++i)
    for (std::size_t j = i + 1; j < spec.maps.size(); ++j)
      if (spec.maps[i] == spec.maps[j]) return true;
  return false;
}

class SearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform m, symmetries from the pool, translations uniform in the box;
/// maps are pairwise distinct and sorted.
inline IfsSpec random_spec(const SearchConfig& cfg, const std::vector<SymmetryDescriptor>& pool, SearchRng& rng) {
  const std::int64_t side = 2 * cfg.translation_box + 1;
  const double capacity = static_cast<double>(pool.size()) * static_cast<double>(side) * static_cast<double>(side);
  if (capacity < static_cast<double>(cfg.m_min)) throw SearchError("family exhausted");
  const auto m_hi = static_cast<std::int64_t>(std::min<double>(static_cast<double>(cfg.m_max), capacity));
  constexpr int kRetries = 1000;
  for (int attempt = 0; attempt < kRetries; ++attempt) {
    IfsSpec spec{cfg.field, cfg.b, cfg.c, {}};
    const auto m = static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(cfg.m_min), m_hi));
    while (spec.maps.size() < m) {
      MapSpec map;
      map.sym = pool[rng.below(pool.size())];
      map.t = {Rational(static_cast<long>(rng.between(-cfg.translation_box, cfg.translation_box))),
               Rational(static_cast<long>(rng.between(-cfg.translation_box, cfg.translation_box)))};
      if (std::find(spec.maps.begin(), spec.maps.end(), map) == spec.maps.end()) spec.maps.push_back(map);
    }
    sort_maps(spec);
    if (validate(spec).empty()) return spec;
  }
  throw SearchError("family exhausted");
}

inline IfsSpec random_spec(const SearchConfig& cfg, SearchRng& rng) { return random_spec(cfg, symmetry_pool(cfg), rng); }

enum class MutationKind { ReplaceSymmetry, ShiftTranslation, AddMap, RemoveMap };

/// One mutation chosen uniformly among the applicable kinds, then
/// uniformly among that kind's valid results. Maps keep their positions;
/// an added map goes last.
inline IfsSpec mutate(const IfsSpec& spec, SearchRng& rng, const SearchConfig& cfg,
                      const std::vector<SymmetryDescriptor>& pool) {
  const std::int64_t L = cfg.translation_box;
  auto in_box = [&](const Vec2Q& t) {
    return t.x >= Rational(static_cast<long>(-L)) && t.x <= Rational(static_cast<long>(L)) &&
           t.y >= Rational(static_cast<long>(-L)) && t.y <= Rational(static_cast<long>(L));
  };
  auto usable = [](const IfsSpec& s) { return !has_duplicate_maps(s) && validate(s).empty(); };

  std::vector<std::vector<IfsSpec>> options(4);
  for (std::size_t k = 0; k < spec.m(); ++k)
    for (const auto& sym : pool) {
      if (sym == spec.maps[k].sym) continue;
      IfsSpec s = spec;
      s.maps[k].sym = sym;
      if (usable(s)) options[0].push_back(std::move(s));
    }
  static const std::array<std::pair<long, long>, 4> units{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
  for (std::size_t k = 0; k < spec.m(); ++k)
    for (auto [dx, dy] : units) {
      IfsSpec s = spec;
      s.maps[k].t = s.maps[k].t + Vec2Q{Rational(dx), Rational(dy)};
      if (in_box(s.maps[k].t) && usable(s)) options[1].push_back(std::move(s));
    }
  if (spec.m() < cfg.m_max)
    for (const auto& sym : pool)
      for (std::int64_t x = -L; x <= L; ++x)
        for (std::int64_t y = -L; y <= L; ++y) {
          IfsSpec s = spec;
          s.maps.push_back({sym, {Rational(static_cast<long>(x)), Rational(static_cast<long>(y))}});
          if (usable(s)) options[2].push_back(std::move(s));
        }
  if (spec.m() > cfg.m_min)
    for (std::size_t k = 0; k < spec.m(); ++k) {
      IfsSpec s = spec;
      s.maps.erase(s.maps.begin() + static_cast<std::ptrdiff_t>(k));
      if (usable(s)) options[3].push_back(std::move(s));
    }

  std::vector<std::size_t> kinds;
  for (std::size_t i = 0; i < options.size(); ++i)
    if (!options[i].empty()) kinds.push_back(i);
  if (kinds.empty()) throw SearchError("stuck");
  const auto& chosen = options[kinds[rng.below(kinds.size())]];
  return chosen[rng.below(chosen.size())];
}

inline IfsSpec mutate(const IfsSpec& spec, SearchRng& rng, const SearchConfig& cfg) {
  return mutate(spec, rng, cfg, symmetry_pool(cfg));
}

/// The smallest family containing `spec`: its own symmetries as
/// generators, its translation range as box, all admissible map counts.
inline SearchConfig family_of(const IfsSpec& spec) {
  SearchConfig cfg;
  cfg.field = spec.field;
  cfg.b = spec.b;
  cfg.c = spec.c;
  std::int64_t box = 1;
  for (const MapSpec& m : spec.maps) {
    if (std::find(cfg.generators.begin(), cfg.generators.end(), m.sym) == cfg.generators.end())
      cfg.generators.push_back(m.sym);
    for (const Rational& v : {m.t.x, m.t.y}) {
      const Integer a = floor(v.abs());
      if (a.fits_slong_p()) box = std::max<std::int64_t>(box, a.get_si());
    }
  }
  cfg.translation_box = box;
  cfg.m_min = 2;
  const Integer det_floor = floor(spec.expansion_det());
  cfg.m_max = std::max<std::size_t>(std::max<std::size_t>(2, spec.m()),
                                    det_floor.fits_ulong_p() ? std::min<unsigned long>(det_floor.get_ui(), 64) : 64);
  return cfg;
}

// ---------------------------------------------------------------- ranking

inline bool satisfies(const ExampleRecord& r, const SearchFilters& f) {
  if (!r.is_graph() || !r.topology) return false;
  if (f.connected && r.topology->connected != *f.connected) return false;
  if (f.min_types && r.neighbor_count < *f.min_types) return false;
  if (f.max_types && r.neighbor_count > *f.max_types) return false;
  if (f.attractor_class && r.topology->classification != *f.attractor_class) return false;
  if (f.min_fli && r.fli < *f.min_fli) return false;
  if (f.max_fli && r.fli > *f.max_fli) return false;
  return true;
}

/// Filters satisfied first, then fewer neighbor types, then more
/// intersecting first-level pairs, then id.
inline std::vector<ExampleRecord> rank(std::vector<ExampleRecord> records, const SearchFilters& filters = {}) {
  std::stable_sort(records.begin(), records.end(), [&](const ExampleRecord& x, const ExampleRecord& y) {
    const bool sx = satisfies(x, filters), sy = satisfies(y, filters);
    if (sx != sy) return sx;
    if (x.neighbor_count != y.neighbor_count) return x.neighbor_count < y.neighbor_count;
    if (x.fli != y.fli) return x.fli > y.fli;
    return x.id < y.id;
  });
  return records;
}

// ---------------------------------------------------------------- loop

struct SearchProgress {
  std::atomic<std::size_t> tried{0};
  std::atomic<std::size_t> found{0};
  std::atomic<std::size_t> candidates{0};
  std::atomic<std::size_t> pruned_far{0};
};

struct SearchOptions {
  std::size_t workers = 1;
  const std::atomic<bool>* cancel = nullptr;
  SearchProgress* progress = nullptr;
};

struct SearchStats {
  std::size_t tried = 0;
  std::size_t analyzed = 0;  // distinct specs sent to the builder
  std::size_t found = 0;
  std::size_t candidates = 0;
  std::size_t pruned_far = 0;
  double seconds = 0.0;

  [[nodiscard]] double candidates_per_second() const { return seconds > 0.0 ? static_cast<double>(tried) / seconds : 0.0; }
  [[nodiscard]] double prune_ratio() const {
    const double total = static_cast<double>(pruned_far + candidates);
    return total > 0.0 ? static_cast<double>(pruned_far) / total : 0.0;
  }
};

struct SearchResult {
  std::vector<ExampleRecord> records;  // ranked, filters satisfied
  SearchStats stats;
  bool cancelled = false;
};

inline SearchResult run_search(const SearchConfig& cfg, const SearchOptions& opt = {}) {
  if (auto errs = validate_config(cfg); !errs.empty()) {
    std::string msg = "invalid search config";
    for (const auto& e : errs) msg += "; " + e;
    throw std::invalid_argument(msg);
  }
  const auto start = std::chrono::steady_clock::now();
  const auto pool = symmetry_pool(cfg);
  const std::size_t workers = std::max<std::size_t>(1, opt.workers);
  auto cancelled = [&] { return opt.cancel && opt.cancel->load(); };

  SearchResult out;
  std::unordered_set<std::string> seen;
  std::vector<ExampleRecord> population;  // Graph outcomes, ranked
  std::vector<ExampleRecord> parents;

  for (std::size_t base = 0; base < cfg.budget && !out.cancelled; base += cfg.generation_size) {
    const std::size_t count = std::min(cfg.generation_size, cfg.budget - base);

    // Specs for this generation are drawn up front from fixed parents.
    std::vector<std::optional<IfsSpec>> specs(count);
    for (std::size_t i = 0; i < count; ++i) {
      SearchRng rng = SearchRng::for_candidate(cfg.seed, base + i);
      try {
        if (parents.empty() || rng.chance(cfg.random_fraction)) {
          specs[i] = random_spec(cfg, pool, rng);
        } else {
          const ExampleRecord& parent = parents[rng.below(parents.size())];
          try {
            IfsSpec child = mutate(parent.spec, rng, cfg, pool);
            sort_maps(child);
            specs[i] = std::move(child);
          } catch (const SearchError&) {
            specs[i] = random_spec(cfg, pool, rng);
          }
        }
      } catch (const SearchError&) {
      }
    }

    std::vector<std::optional<ExampleRecord>> results(count);
    std::vector<char> done(count, 0);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count || cancelled()) return;
        if (specs[i] && !seen.count(spec_id(*specs[i]))) {
          ExampleRecord r = make_record(*specs[i], build(*specs[i], cfg.caps));
          if (opt.progress) {
            opt.progress->candidates += r.outcome.candidates;
            opt.progress->pruned_far += r.outcome.pruned_far;
          }
          results[i] = std::move(r);
        }
        done[i] = 1;
        if (opt.progress) opt.progress->tried += 1;
      }
    };
    // `seen` is only read during the parallel phase.
    if (workers == 1 || count == 1) {
      work();
    } else {
      std::vector<std::jthread> threads;
      for (std::size_t w = 0; w < std::min(workers, count); ++w) threads.emplace_back(work);
    }

    for (std::size_t i = 0; i < count; ++i) {
      if (!done[i]) {
        out.cancelled = true;
        continue;
      }
      ++out.stats.tried;
      if (!results[i]) continue;
      ExampleRecord& r = *results[i];
      if (!seen.insert(r.id).second) continue;
      ++out.stats.analyzed;
      out.stats.candidates += r.outcome.candidates;
      out.stats.pruned_far += r.outcome.pruned_far;
      if (!r.is_graph()) continue;
      if (satisfies(r, cfg.filters)) {
        ++out.stats.found;
        if (opt.progress) opt.progress->found += 1;
        out.records.push_back(r);
      }
      population.push_back(std::move(r));
    }
    if (cancelled()) out.cancelled = true;

    population = rank(std::move(population), cfg.filters);
    parents.assign(population.begin(),
                   population.begin() + static_cast<std::ptrdiff_t>(std::min(cfg.survivors, population.size())));
  }

  out.records = rank(std::move(out.records), cfg.filters);
  out.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

// ---------------------------------------------------------------- JSON

namespace json_detail {

inline void expect_keys(const Json& j, std::string_view where, std::initializer_list<std::string_view> required,
                        std::initializer_list<std::string_view> optional) {
  if (!j.is_object()) throw SchemaError(std::string(where) + ": expected an object");
  for (const auto& [k, _] : j.items()) {
    bool known = false;
    for (auto key : required) known = known || k == key;
    for (auto key : optional) known = known || k == key;
    if (!known) throw SchemaError(std::string(where) + ": unknown key \"" + k + "\"");
  }
  for (auto key : required)
    if (!j.contains(key)) throw SchemaError(std::string(where) + ": missing key \"" + std::string(key) + "\"");
}

inline std::optional<std::size_t> optional_count(const Json& j, const char* key, std::string_view where) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  if (!j[key].is_number_unsigned() && !(j[key].is_number_integer() && j[key].get<std::int64_t>() >= 0))
    throw SchemaError(std::string(where) + "." + key + ": expected a non-negative integer");
  return j[key].get<std::size_t>();
}

inline Json optional_json(const std::optional<std::size_t>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace json_detail

inline Json filters_to_json(const SearchFilters& f) {
  using json_detail::optional_json;
  Json j;
  j["connected"] = f.connected ? Json(*f.connected) : Json(nullptr);
  j["min_types"] = optional_json(f.min_types);
  j["max_types"] = optional_json(f.max_types);
  j["attractor_class"] = f.attractor_class ? Json(to_string(*f.attractor_class)) : Json(nullptr);
  j["min_fli"] = optional_json(f.min_fli);
  j["max_fli"] = optional_json(f.max_fli);
  return j;
}

inline SearchFilters filters_from_json(const Json& j) {
  using namespace json_detail;
  expect_keys(j, "filters", {}, {"connected", "min_types", "max_types", "attractor_class", "min_fli", "max_fli"});
  SearchFilters f;
  if (j.contains("connected") && !j["connected"].is_null()) {
    if (!j["connected"].is_boolean()) throw SchemaError("filters.connected: expected a boolean");
    f.connected = j["connected"].get<bool>();
  }
  f.min_types = optional_count(j, "min_types", "filters");
  f.max_types = optional_count(j, "max_types", "filters");
  f.min_fli = optional_count(j, "min_fli", "filters");
  f.max_fli = optional_count(j, "max_fli", "filters");
  if (j.contains("attractor_class") && !j["attractor_class"].is_null()) {
    if (!j["attractor_class"].is_string()) throw SchemaError("filters.attractor_class: expected a string");
    try {
      f.attractor_class = attractor_class_from_string(j["attractor_class"].get<std::string>());
    } catch (const std::exception& e) {
      throw SchemaError(std::string("filters.attractor_class: ") + e.what());
    }
  }
  return f;
}

/// Full config including defaults and the pinned generator name.
inline Json config_to_json(const SearchConfig& cfg) {
  Json j;
  j["field"] = Json{{"a", cfg.field.a.str()}};
  j["expansion"] = Json{{"b", cfg.b.str()}, {"c", cfg.c.str()}};
  Json gens = Json::array();
  for (const auto& g : cfg.generators) gens.push_back(symmetry_to_json(g));
  j["generators"] = std::move(gens);
  j["m_range"] = Json::array({cfg.m_min, cfg.m_max});
  j["translation_box"] = cfg.translation_box;
  j["symmetry_word_length"] = cfg.symmetry_word_length;
  j["caps"] = Json{{"max_types", cfg.caps.max_types}, {"max_candidates", cfg.caps.max_candidates}};
  j["budget"] = cfg.budget;
  j["seed"] = cfg.seed;
  j["filters"] = filters_to_json(cfg.filters);
  j["random_fraction"] = cfg.random_fraction.str();
  j["survivors"] = cfg.survivors;
  j["generation_size"] = cfg.generation_size;
  j["rng"] = kSearchRngName;
  return j;
}

inline SearchConfig config_from_json(const Json& j) {
  using namespace json_detail;
  expect_keys(j, "config",
              {"field", "expansion", "generators", "m_range", "translation_box", "budget", "seed"},
              {"symmetry_word_length", "caps", "filters", "random_fraction", "survivors", "generation_size", "rng"});
  expect_object(j["field"], "field", {"a"});
  expect_object(j["expansion"], "expansion", {"b", "c"});
  SearchConfig cfg;
  try {
    cfg.field = make_field(rational(j["field"]["a"], "field.a"));
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& e) {
    throw SchemaError(std::string("field.a: ") + e.what());
  }
  cfg.b = rational(j["expansion"]["b"], "expansion.b");
  cfg.c = rational(j["expansion"]["c"], "expansion.c");
  if (!j["generators"].is_array()) throw SchemaError("generators: expected an array");
  for (std::size_t i = 0; i < j["generators"].size(); ++i)
    cfg.generators.push_back(symmetry_from_json(j["generators"][i], "generators[" + std::to_string(i) + "]"));
  const Json& mr = j["m_range"];
  if (!mr.is_array() || mr.size() != 2) throw SchemaError("m_range: expected [min, max]");
  cfg.m_min = count(mr[0], "m_range");
  cfg.m_max = count(mr[1], "m_range");
  if (!j["translation_box"].is_number_integer()) throw SchemaError("translation_box: expected an integer");
  cfg.translation_box = j["translation_box"].get<std::int64_t>();
  if (cfg.translation_box > 1000) throw SchemaError("translation_box: at most 1000");
  if (auto v = optional_count(j, "symmetry_word_length", "config")) cfg.symmetry_word_length = *v;
  if (cfg.symmetry_word_length > 8) throw SchemaError("symmetry_word_length: at most 8");
  if (j.contains("caps")) {
    expect_keys(j["caps"], "caps", {}, {"max_types", "max_candidates"});
    if (auto v = optional_count(j["caps"], "max_types", "caps")) cfg.caps.max_types = *v;
    if (auto v = optional_count(j["caps"], "max_candidates", "caps")) cfg.caps.max_candidates = *v;
  }
  cfg.budget = count(j["budget"], "budget");
  if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() >= 0))
    throw SchemaError("seed: expected a non-negative 64-bit integer");
  cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("filters")) cfg.filters = filters_from_json(j["filters"]);
  if (j.contains("random_fraction")) cfg.random_fraction = rational(j["random_fraction"], "random_fraction");
  if (auto v = optional_count(j, "survivors", "config")) cfg.survivors = *v;
  if (auto v = optional_count(j, "generation_size", "config")) cfg.generation_size = *v;
  if (j.contains("rng") && j["rng"] != kSearchRngName)
    throw SchemaError(std::string("rng: this build implements \"") + kSearchRngName + "\"");
  if (auto errs = validate_config(cfg); !errs.empty()) throw SchemaError(errs.front());
  return cfg;
}

inline SearchConfig config_from_text(const std::string& text) {
  try {
    return config_from_json(Json::parse(text));
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
}

/// One compact record per line.
inline std::string results_jsonl(const std::vector<ExampleRecord>& records) {
  std::string out;
  for (const auto& r : records) out += export_record(r) + "\n";
  return out;
}

}  // namespace ifsgraph
