#include "support.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace ifsgraph;
using testing_support::q;

namespace {

SearchConfig fixture_family() {
  return config_from_text(testing_support::read_text(testing_support::data_path("configs/fixture_family.json")));
}

/// Q(i), M = 2, rotations by quarter turns, box 1, exactly two maps:
/// 4 symmetries x 9 translations = 36 maps, C(36, 2) = 630 specs.
SearchConfig tiny_family() {
  SearchConfig cfg;
  cfg.field = make_field(q(0));
  cfg.b = q(0);
  cfg.c = q(2);
  cfg.generators = {{q(1), q(0), false}};
  cfg.m_min = 2;
  cfg.m_max = 2;
  cfg.translation_box = 1;
  cfg.budget = 100;
  cfg.seed = 1;
  return cfg;
}

std::vector<std::string> ids(const std::vector<ExampleRecord>& records) {
  std::vector<std::string> out;
  for (const auto& rec : records) out.push_back(rec.id);
  return out;
}

std::vector<std::string> ids(const SearchResult& r) { return ids(r.records); }

}  // namespace

TEST(SearchRng, Splitmix64KnownValue) {
  // First output of the reference splitmix64 generator seeded with 0.
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
}

TEST(SearchRng, CandidateStreamIsMt19937OnMixedSeed) {
  for (std::uint64_t seed : {0ULL, 7ULL, 123456789ULL})
    for (std::uint64_t i : {0ULL, 1ULL, 99ULL}) {
      SearchRng rng = SearchRng::for_candidate(seed, i);
      std::mt19937_64 ref(splitmix64(seed ^ splitmix64(i)));
      for (int k = 0; k < 5; ++k) EXPECT_EQ(rng.next(), ref());
    }
}

TEST(SearchRng, BoundedDraws) {
  SearchRng rng(42);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) ++hist[rng.below(7)];
  for (int h : hist) EXPECT_NEAR(h, 10000, 500);
  for (int i = 0; i < 1000; ++i) {
    const auto v = rng.between(-3, 3);
    EXPECT_GE(v, -3);
    EXPECT_LE(v, 3);
  }
  EXPECT_FALSE(rng.chance(q(0)));
  EXPECT_TRUE(rng.chance(q(1)));
  int hits = 0;
  for (int i = 0; i < 30000; ++i) hits += rng.chance(q(1, 3));
  EXPECT_NEAR(hits, 10000, 400);
}

TEST(Search, SymmetryPool) {
  const SearchConfig cfg = tiny_family();
  const auto pool = symmetry_pool(cfg);
  EXPECT_EQ(pool.size(), 4u);  // 1, s, -1, -s
  SearchConfig longer = cfg;
  longer.symmetry_word_length = 3;
  EXPECT_EQ(symmetry_pool(longer).size(), 4u);  // s has order 4
  for (const auto& s : symmetry_pool(fixture_family())) EXPECT_TRUE(is_rotation(cfg.field, s.x, s.y));
}

TEST(Search, RandomSpecCoversTinyFamily) {
  const SearchConfig cfg = tiny_family();
  const auto pool = symmetry_pool(cfg);
  std::map<std::string, int> hist;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    SearchRng rng = SearchRng::for_candidate(99, i);
    const IfsSpec s = random_spec(cfg, pool, rng);
    ASSERT_TRUE(validate(s).empty());
    ASSERT_FALSE(has_duplicate_maps(s));
    ASSERT_TRUE(std::is_sorted(s.maps.begin(), s.maps.end(), map_less));
    ++hist[spec_id(s)];
  }
  EXPECT_EQ(hist.size(), 630u);
  int lo = 1 << 30, hi = 0;
  for (const auto& [_, n] : hist) {
    lo = std::min(lo, n);
    hi = std::max(hi, n);
  }
  EXPECT_GE(lo, 3);
  EXPECT_LE(hi, 40);
}

TEST(Search, RandomSpecExhaustedFamily) {
  SearchConfig cfg = tiny_family();
  cfg.generators = {{q(0), q(1), false}};  // pool {1, -1}
  cfg.c = q(5);
  cfg.m_min = cfg.m_max = 19;  // 2 * 9 = 18 < 19
  SearchRng rng(1);
  EXPECT_THROW(random_spec(cfg, rng), SearchError);
}

TEST(Search, MutateContract) {
  const SearchConfig cfg = fixture_family();
  const auto pool = symmetry_pool(cfg);
  SearchRng seed_rng(5);
  const IfsSpec parent = random_spec(cfg, pool, seed_rng);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    SearchRng rng = SearchRng::for_candidate(3, i);
    const IfsSpec child = mutate(parent, rng, cfg, pool);
    ASSERT_TRUE(validate(child).empty());
    ASSERT_FALSE(has_duplicate_maps(child));
    ASSERT_NE(spec_id(child), spec_id(parent));
    ASSERT_GE(child.m(), cfg.m_min);
    ASSERT_LE(child.m(), cfg.m_max);
    for (const auto& m : child.maps) {
      ASSERT_LE(m.t.x.abs(), Rational(cfg.translation_box));
      ASSERT_LE(m.t.y.abs(), Rational(cfg.translation_box));
      ASSERT_NE(std::find(pool.begin(), pool.end(), m.sym), pool.end());
    }
    // Same map count here (m_min = m_max): exactly one position changed.
    ASSERT_EQ(child.m(), parent.m());
    std::size_t changed = 0;
    for (std::size_t k = 0; k < parent.m(); ++k) changed += !(child.maps[k] == parent.maps[k]);
    ASSERT_EQ(changed, 1u);
  }
}

TEST(Search, MutateAddAndRemove) {
  SearchConfig cfg = tiny_family();
  cfg.c = q(3);  // det 9
  cfg.m_min = 2;
  cfg.m_max = 4;
  const auto pool = symmetry_pool(cfg);
  IfsSpec parent{cfg.field, cfg.b, cfg.c,
                 {{SymmetryDescriptor::identity(), {q(0), q(0)}}, {SymmetryDescriptor::identity(), {q(1), q(0)}},
                  {SymmetryDescriptor::identity(), {q(0), q(1)}}}};
  std::set<std::size_t> sizes;
  for (std::uint64_t i = 0; i < 300; ++i) {
    SearchRng rng = SearchRng::for_candidate(11, i);
    const IfsSpec child = mutate(parent, rng, cfg, pool);
    sizes.insert(child.m());
    if (child.m() == 4) {
      for (std::size_t k = 0; k < 3; ++k) ASSERT_EQ(child.maps[k], parent.maps[k]);  // appended
    }
  }
  EXPECT_EQ(sizes, (std::set<std::size_t>{2, 3, 4}));
}

TEST(Search, FamilyOfContainsSpec) {
  const IfsSpec spec = testing_support::fixture_spec();
  const SearchConfig cfg = family_of(spec);
  EXPECT_TRUE(validate_config(cfg).empty());
  EXPECT_EQ(cfg.translation_box, 1);
  EXPECT_EQ(cfg.m_max, 5u);
  const auto pool = symmetry_pool(cfg);
  for (const auto& m : spec.maps) EXPECT_NE(std::find(pool.begin(), pool.end(), m.sym), pool.end());
}

TEST(Search, HashesOfDistinctSpecsDiffer) {
  const SearchConfig cfg = fixture_family();
  const auto pool = symmetry_pool(cfg);
  std::map<std::string, std::string> by_id;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    SearchRng rng = SearchRng::for_candidate(17, i);
    const IfsSpec s = random_spec(cfg, pool, rng);
    const std::string text = canonical_spec_text(s);
    auto [it, inserted] = by_id.emplace(spec_id(s), text);
    if (!inserted) {
      ASSERT_EQ(it->second, text);  // equal ids only for equal specs
    }
  }
  EXPECT_GT(by_id.size(), 900u);
}

TEST(Search, BudgetZeroIsEmpty) {
  SearchConfig cfg = tiny_family();
  cfg.budget = 0;
  const SearchResult r = run_search(cfg);
  EXPECT_TRUE(r.records.empty());
  EXPECT_EQ(r.stats.tried, 0u);
  EXPECT_FALSE(r.cancelled);
}

TEST(Search, InvalidConfigThrows) {
  SearchConfig cfg = tiny_family();
  cfg.generators = {{q(2), q(-1), false}};
  EXPECT_THROW(run_search(cfg), std::invalid_argument);
  cfg = tiny_family();
  cfg.m_max = 5;  // det 4
  EXPECT_THROW(run_search(cfg), std::invalid_argument);
}

TEST(Search, DeterministicAcrossRunsAndWorkers) {
  SearchConfig cfg = fixture_family();
  cfg.budget = 300;
  const SearchResult a = run_search(cfg, {1, nullptr, nullptr});
  const SearchResult b = run_search(cfg, {1, nullptr, nullptr});
  const SearchResult c = run_search(cfg, {3, nullptr, nullptr});
  EXPECT_EQ(results_jsonl(a.records), results_jsonl(b.records));
  EXPECT_EQ(results_jsonl(a.records), results_jsonl(c.records));
  EXPECT_EQ(a.stats.tried, 300u);
  EXPECT_EQ(a.stats.analyzed, c.stats.analyzed);
  cfg.seed = 8;
  EXPECT_NE(ids(run_search(cfg)), ids(a));
}

TEST(Search, ResultsSatisfyFiltersAndAreRanked) {
  SearchConfig cfg = fixture_family();
  cfg.budget = 300;
  const SearchResult r = run_search(cfg);
  ASSERT_FALSE(r.records.empty());
  for (const auto& rec : r.records) {
    EXPECT_TRUE(satisfies(rec, cfg.filters));
    EXPECT_EQ(rec.id, spec_id(rec.spec));
  }
  EXPECT_EQ(ids(rank(r.records, cfg.filters)), ids(r));
  for (std::size_t i = 1; i < r.records.size(); ++i)
    EXPECT_LE(r.records[i - 1].neighbor_count, r.records[i].neighbor_count);
  const auto all = ids(r);
  const std::set<std::string> unique(all.begin(), all.end());
  EXPECT_EQ(unique.size(), r.records.size());
}

TEST(Search, FindsFixtureInItsFamily) {
  SearchConfig cfg = fixture_family();
  cfg.budget = 10000;
  IfsSpec want = testing_support::fixture_spec();
  sort_maps(want);
  const SearchResult r = run_search(cfg);
  bool found = false;
  for (const auto& rec : r.records) found = found || rec.spec.maps == want.maps;
  EXPECT_TRUE(found) << "tried " << r.stats.tried << ", found " << r.stats.found;
}

TEST(Search, CancelStopsEarly) {
  SearchConfig cfg = fixture_family();
  cfg.budget = 100000;
  std::atomic<bool> cancel{true};
  SearchProgress progress;
  const SearchResult r = run_search(cfg, {2, &cancel, &progress});
  EXPECT_TRUE(r.cancelled);
  EXPECT_EQ(r.stats.tried, 0u);
  EXPECT_EQ(progress.tried.load(), 0u);
}

TEST(Search, ConfigJsonRoundTrip) {
  const SearchConfig cfg = fixture_family();
  const Json j = config_to_json(cfg);
  EXPECT_EQ(j["rng"], kSearchRngName);
  EXPECT_EQ(config_to_json(config_from_json(j)).dump(), j.dump());
  Json bad = j;
  bad["temperature"] = 1;
  EXPECT_THROW(config_from_json(bad), SchemaError);
  Json wrong_rng = j;
  wrong_rng["rng"] = "pcg64";
  EXPECT_THROW(config_from_json(wrong_rng), SchemaError);
  Json bad_m = j;
  bad_m["m_range"] = Json::array({4, 9});
  EXPECT_THROW(config_from_json(bad_m), SchemaError);
  Json neg_seed = j;
  neg_seed["seed"] = -1;
  EXPECT_THROW(config_from_json(neg_seed), SchemaError);
}

TEST(Search, RankOrder) {
  auto rec = [](std::string id, std::size_t types, std::size_t fli, bool graph) {
    ExampleRecord r;
    r.id = std::move(id);
    r.outcome.kind = graph ? "Graph" : "Empty";
    r.neighbor_count = types;
    r.fli = fli;
    if (graph) {
      r.topology = TopologyReport{};
      r.topology->connected = true;
    }
    return r;
  };
  SearchFilters f;
  f.connected = true;
  const auto ranked = rank({rec("e", 0, 0, false), rec("d", 9, 1, true), rec("c", 5, 2, true), rec("b", 5, 3, true),
                            rec("a", 5, 3, true)},
                           f);
  std::vector<std::string> got;
  for (const auto& r : ranked) got.push_back(r.id);
  EXPECT_EQ(got, (std::vector<std::string>{"a", "b", "c", "d", "e"}));
}
