// Copyright 2026 The sectionrec Authors.
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

/* corpus.hpp

   Article corpus: loading, title normalization, filtering, splitting and
   summary statistics.
*/

#pragma once

#include "sectionrec/common.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sectionrec {

struct Article {
    ArticleId id = 0;
    std::string title;
    std::vector<std::string> tokens;
    /// Normalized section titles in document order.
    std::vector<std::string> sections;
    /// Direct category memberships, ascending and unique.
    std::vector<CategoryId> categories;
    bool is_stub = false;
    std::optional<std::string> quality;

    bool has_sections() const { return !sections.empty(); }
    /// Distinct section titles, sorted.
    std::vector<std::string> distinct_sections() const;
};

/// Parsed category file: node names plus child -> parent edges.
struct CategoryFile {
    std::map<CategoryId, std::string> names;
    std::vector<std::pair<CategoryId, CategoryId>> edges;
    std::size_t malformed_lines = 0;
};

struct LoadReport {
    std::size_t article_lines = 0;
    std::size_t malformed_article_lines = 0;
    std::size_t dropped_categories = 0;
    std::size_t dropped_sections = 0;
    std::size_t category_lines = 0;
    std::size_t malformed_category_lines = 0;
};

struct Corpus {
    std::vector<Article> articles;
    std::set<std::string> blacklist;
    std::string provenance;
    LoadReport report;

    /// Linear-time lookup table; rebuild after mutating `articles`.
    void reindex();
    const Article* find(ArticleId id) const;
    std::size_t size() const { return articles.size(); }

private:
    std::unordered_map<ArticleId, std::size_t> index_;
};

/// Non-owning view of a subset of a corpus.
using ArticleRefs = std::vector<const Article*>;

/// Articles of `corpus` whose ids appear in `ids`, in `ids` order; unknown
/// ids are skipped.
ArticleRefs select_articles(const Corpus& corpus, const std::vector<ArticleId>& ids);

/// Trims, collapses internal whitespace runs to one space, keeps case.
/// Throws on an empty result.
std::string normalize_title(std::string_view raw);

/// The 14 generic titles removed before training.
const std::vector<std::string>& default_blacklist();

std::set<std::string> load_blacklist(const std::filesystem::path& path);

CategoryFile load_category_file(const std::filesystem::path& path);
void write_category_file(const CategoryFile& file, const std::filesystem::path& path,
                         const std::string& header = {});

/// Loads the line-oriented articles file and validates category references
/// against `categories`.
Corpus load_corpus(const std::filesystem::path& articles_path,
                   const CategoryFile& categories);
Corpus load_corpus(const std::filesystem::path& articles_path,
                   const std::filesystem::path& categories_path);

/// Articles file without category validation (used for stage artifacts).
Corpus load_articles(const std::filesystem::path& articles_path);

void write_articles(const std::vector<Article>& articles,
                    const std::filesystem::path& path,
                    const std::string& header = {});
std::string article_to_json_line(const Article& article);

struct FilterOptions {
    bool drop_stubs = true;
    bool drop_unique = true;
};

/// Drops stubs, then blacklisted titles, then titles that occur in exactly
/// one article. Occurrences are counted as distinct (article, title) pairs.
Corpus filter_corpus(const Corpus& corpus,
                     const std::set<std::string>& blacklist,
                     FilterOptions options = {});

struct SplitRatios {
    double train = 0.80;
    double test = 0.15;
    double validation = 0.05;
};

struct SplitAssignment {
    std::vector<ArticleId> train;
    std::vector<ArticleId> test;
    std::vector<ArticleId> validation;
    std::uint64_t seed = 0;

    enum class Part { train, test, validation, none };
    Part part_of(ArticleId id) const;
};

SplitAssignment split_corpus(const Corpus& corpus, SplitRatios ratios,
                             std::uint64_t seed);

void write_split(const SplitAssignment& split, const std::filesystem::path& path,
                 const std::string& header = {});
SplitAssignment load_split(const std::filesystem::path& path);

struct CorpusStats {
    std::map<std::size_t, std::size_t> sections_per_article;
    double mean_sections = 0.0;
    double stub_fraction = 0.0;
    std::size_t unique_title_count = 0;
    std::size_t article_count = 0;
};

CorpusStats corpus_stats(const Corpus& corpus);

} // namespace sectionrec
