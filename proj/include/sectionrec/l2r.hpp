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

/* l2r.hpp

   Learned merging of per-category rankings.

   Each (category, section) candidate is described by
     - the category features: s^a g^b for a + b <= 4 (s = size / max size,
       g = gini), log(1 + s) and exp(g)            -> 17 values
     - the same 17 values multiplied by P(S|C)     -> 17 values
     - the reciprocal rank 1 / (1 + r)             -> 1 value
   A pointwise ridge regression over a greedily selected subset predicts
   whether the section belongs to the article; predictions are summed over
   the categories proposing a section.
*/

#pragma once

#include "sectionrec/counts.hpp"
#include "sectionrec/ranking.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace sectionrec {

struct CategoryMeta {
    CategoryId id = 0;
    /// Closure article count.
    std::size_t size = 1;
    double gini = 0.0;
};

using CategoryMetas = std::map<CategoryId, CategoryMeta>;

/// Metas for every surviving node.
CategoryMetas category_metas(const PrunedGraph& pruned);

/// Largest category size; the scale used to normalize sizes.
double max_category_size(const CategoryMetas& metas);

/// Names of the 17 category features in their fixed order.
const std::vector<std::string>& category_feature_names();

/// The 17 category features. Inputs are clamped to [0, 1] after scaling.
std::vector<double> featurize(const CategoryMeta& meta, double size_scale);

/// Names of all 35 candidate features; "p" is P(S|C) itself.
const std::vector<std::string>& candidate_feature_names();

struct MergeModel {
    std::vector<std::string> features;
    std::vector<double> coefficients;
    double size_scale = 1.0;
    double ridge = 1.0;
    std::uint64_t seed = 0;
    std::size_t k_opt = 10;
    /// Holdout precision@k_opt of the selected model and of "p" alone.
    double validation_score = 0.0;
    double baseline_score = 0.0;

    /// P(S|C) with unit weight: reproduces the unweighted sum.
    static MergeModel identity(double size_scale = 1.0);

    /// Multiplier the model applies to P(S|C) for a category.
    double category_weight(const CategoryMeta& meta) const;
};

/// Direction of the learned category weight over a grid of sizes and
/// purities: smaller and purer categories should not weigh less.
struct MonotonicityCheck {
    bool size_nonincreasing = true;
    bool gini_nondecreasing = true;
    bool holds() const { return size_nonincreasing && gini_nondecreasing; }
};

MonotonicityCheck check_monotonicity(const MergeModel& model, std::size_t grid = 21);

struct MergeTrainOptions {
    double ridge = 1.0;
    double holdout_fraction = 0.3;
    std::size_t max_features = 8;
    std::size_t min_articles = 50;
};

MergeModel train_merge_model(const ArticleRefs& validation_articles,
                             const ScoreTable& table,
                             const CategoryMetas& metas,
                             std::size_t k_opt, std::uint64_t seed,
                             const MergeTrainOptions& options = {});

struct CategoryRanking {
    CategoryId category = 0;
    std::vector<ScoredSection> ranked;
};

Ranking merge_rankings(const std::vector<CategoryRanking>& rankings,
                       const CategoryMetas& metas, const MergeModel& model,
                       std::size_t k,
                       const std::unordered_set<std::string>& exclude = {});

/// Gathers the article's contributing rankings from `table` and merges them.
Ranking merge_for_article(const ScoreTable& table, const std::vector<CategoryId>& categories,
                          const CategoryMetas& metas, const MergeModel& model,
                          std::size_t k,
                          const std::unordered_set<std::string>& exclude = {});

void write_merge_model(const MergeModel& model, const std::filesystem::path& path,
                       const std::string& header = {});
MergeModel load_merge_model(const std::filesystem::path& path);

} // namespace sectionrec
