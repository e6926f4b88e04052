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

/* counts.hpp

   Count-based recommender. For each surviving category C, P(S|C) is the
   fraction of C's closure members (training articles with at least one
   section) that contain S.
*/

#pragma once

#include "sectionrec/catgraph.hpp"
#include "sectionrec/corpus.hpp"
#include "sectionrec/ranking.hpp"

#include <filesystem>
#include <map>
#include <vector>

namespace sectionrec {

struct CategoryScores {
    /// Training members m(C).
    std::size_t members = 0;
    /// Descending P(S|C), ties by ascending title.
    std::vector<ScoredSection> ranked;
};

struct ScoreTable {
    std::map<CategoryId, CategoryScores> categories;

    bool contains(CategoryId c) const { return categories.count(c) > 0; }
    const CategoryScores& at(CategoryId c) const;
    std::size_t size() const { return categories.size(); }
};

/// Categories without training members are omitted.
ScoreTable compute_scores(const ArticleRefs& train_articles, const CategoryGraph& pruned_graph);

Ranking recommend_for_category(const ScoreTable& table, CategoryId c, std::size_t k);

/// Which categories feed an article's merged ranking.
enum class MergeScope {
    direct,     ///< the article's own surviving categories
    ancestors,  ///< plus every surviving category above them
};

/// Categories that contribute to `article`'s ranking, ascending.
std::vector<CategoryId> contributing_categories(const ScoreTable& table,
                                                const Article& article,
                                                const CategoryGraph& pruned_graph,
                                                MergeScope scope = MergeScope::direct);

/// Unweighted sum of P(S|C) over the given categories. Categories missing
/// from the table contribute nothing; if none contribute the ranking is
/// empty and flagged.
Ranking recommend_for_categories(const ScoreTable& table,
                                 std::vector<CategoryId> categories,
                                 std::size_t k,
                                 const std::unordered_set<std::string>& exclude = {});

/// Direct-membership merge for an article.
Ranking recommend_for_article(const ScoreTable& table, const Article& article,
                              std::size_t k, bool exclude_existing);

/// (x, fraction of categories that can produce at least x sections) for
/// x = 1..x_max.
std::vector<std::pair<std::size_t, double>> coverage_curve(const ScoreTable& table,
                                                           std::size_t x_max);

void write_score_table(const ScoreTable& table, const std::filesystem::path& path,
                       const std::string& header = {});
ScoreTable load_score_table(const std::filesystem::path& path);

} // namespace sectionrec
