#pragma once

// Append-only example collection stored as JSON-lines. Every append
// rewrites the file through a temporary sibling and an atomic rename, so a
// reader never sees a partial line.

#include "ifsgraph/search.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace ifsgraph {

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

/// Record listing filters; all optional.
struct ExampleFilter {
  std::optional<std::string> kind;
  SearchFilters report;
};

enum class ExampleSort { Complexity, Id, Created };

struct ExamplePage {
  std::vector<ExampleRecord> items;
  std::optional<std::string> next_cursor;
  std::size_t total = 0;  // matches across all pages
};

class Collection {
 public:
  explicit Collection(std::filesystem::path path, std::string name = "default") : path_(std::move(path)) {
    std::lock_guard lock(mu_);
    load();
    const auto meta_path = meta_file();
    if (std::filesystem::exists(meta_path)) {
      std::ifstream in(meta_path);
      const Json meta = Json::parse(in);
      name_ = meta.at("name").get<std::string>();
      created_at_ = meta.at("created_at").get<std::string>();
    } else {
      name_ = std::move(name);
      created_at_ = utc_timestamp();
      Json meta;
      meta["name"] = name_;
      meta["created_at"] = created_at_;
      write_atomic(meta_path, meta.dump() + "\n");
    }
  }

  Collection(const Collection&) = delete;
  Collection& operator=(const Collection&) = delete;

  [[nodiscard]] const std::filesystem::path& path() const { return path_; }
  [[nodiscard]] std::string name() const { return name_; }
  [[nodiscard]] std::string created_at() const { return created_at_; }

  /// Persists `r` with a fresh created_at unless its id is already stored.
  /// Returns the stored record and whether it was inserted.
  std::pair<ExampleRecord, bool> append(ExampleRecord r) {
    std::lock_guard lock(mu_);
    if (auto it = by_id_.find(r.id); it != by_id_.end()) return {records_[it->second], false};
    r.created_at = utc_timestamp();
    const std::string line = export_record(r) + "\n";
    write_atomic(path_, text_ + line);
    text_ += line;
    by_id_.emplace(r.id, records_.size());
    records_.push_back(r);
    return {std::move(r), true};
  }

  [[nodiscard]] std::optional<ExampleRecord> get(const std::string& id) const {
    std::lock_guard lock(mu_);
    if (auto it = by_id_.find(id); it != by_id_.end()) return records_[it->second];
    return std::nullopt;
  }

  [[nodiscard]] bool contains(const std::string& id) const {
    std::lock_guard lock(mu_);
    return by_id_.count(id) != 0;
  }

  [[nodiscard]] std::size_t size() const {
    std::lock_guard lock(mu_);
    return records_.size();
  }

  [[nodiscard]] std::vector<ExampleRecord> all() const {
    std::lock_guard lock(mu_);
    return records_;
  }

  /// Keyset pagination: the page holds the first `limit` matches that sort
  /// strictly after the cursor record, so appends never shift a page.
  [[nodiscard]] ExamplePage page(ExampleSort sort, const ExampleFilter& filter, const std::optional<std::string>& cursor,
                                 std::size_t limit) const {
    std::vector<ExampleRecord> matches;
    std::optional<ExampleRecord> after;
    {
      std::lock_guard lock(mu_);
      for (const auto& r : records_)
        if (matches_filter(r, filter)) matches.push_back(r);
      if (cursor) {
        auto it = by_id_.find(*cursor);
        if (it == by_id_.end()) throw std::out_of_range("unknown cursor");
        after = records_[it->second];
      }
    }
    auto less = [&](const ExampleRecord& x, const ExampleRecord& y) { return sort_less(sort, x, y); };
    std::sort(matches.begin(), matches.end(), less);
    ExamplePage page;
    page.total = matches.size();
    auto first = matches.begin();
    if (after) first = std::upper_bound(matches.begin(), matches.end(), *after, less);
    for (auto it = first; it != matches.end() && page.items.size() < limit; ++it) page.items.push_back(*it);
    if (!page.items.empty() && first + static_cast<std::ptrdiff_t>(page.items.size()) != matches.end())
      page.next_cursor = page.items.back().id;
    return page;
  }

  static bool matches_filter(const ExampleRecord& r, const ExampleFilter& f) {
    if (f.kind && r.outcome.kind != *f.kind) return false;
    const SearchFilters& s = f.report;
    const bool any = s.connected || s.min_types || s.max_types || s.attractor_class || s.min_fli || s.max_fli;
    return !any || satisfies(r, s);
  }

  static bool sort_less(ExampleSort sort, const ExampleRecord& x, const ExampleRecord& y) {
    switch (sort) {
      case ExampleSort::Complexity:
        if (x.is_graph() != y.is_graph()) return x.is_graph();
        if (x.neighbor_count != y.neighbor_count) return x.neighbor_count < y.neighbor_count;
        if (x.fli != y.fli) return x.fli > y.fli;
        return x.id < y.id;
      case ExampleSort::Created:
        if (x.created_at != y.created_at) return x.created_at < y.created_at;
        return x.id < y.id;
      case ExampleSort::Id:
        break;
    }
    return x.id < y.id;
  }

 private:
  [[nodiscard]] std::filesystem::path meta_file() const {
    auto p = path_;
    p += ".meta.json";
    return p;
  }

  static void write_atomic(const std::filesystem::path& target, const std::string& content) {
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    auto tmp = target;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + tmp.string());
      out << content;
      out.flush();
      if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
  }

  void load() {
    if (!std::filesystem::exists(path_)) return;
    std::ifstream in(path_, std::ios::binary);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      ExampleRecord r;
      try {
        r = import_record(line);
      } catch (const std::exception& e) {
        throw std::runtime_error(path_.string() + ":" + std::to_string(lineno) + ": " + e.what());
      }
      if (by_id_.count(r.id)) throw std::runtime_error(path_.string() + ":" + std::to_string(lineno) + ": duplicate id");
      by_id_.emplace(r.id, records_.size());
      records_.push_back(std::move(r));
      text_ += line + "\n";
    }
  }

  std::filesystem::path path_;
  std::string name_;
  std::string created_at_;
  mutable std::mutex mu_;
  std::vector<ExampleRecord> records_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::string text_;
};

}  // namespace ifsgraph
