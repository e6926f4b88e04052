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

/* eval.hpp

   Precision@k / recall@k against the sections an article already has,
   feasibility bounds, a random baseline and report output.

   Precision divides by k even when a ranking is shorter than k.
*/

#pragma once

#include "sectionrec/corpus.hpp"
#include "sectionrec/ranking.hpp"

#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <vector>

namespace sectionrec {

struct PrCurve {
    /// Index k-1 holds the value at k.
    std::vector<double> precision;
    std::vector<double> recall;
};

/// Exact-title matching of the top of `recommended` against `truth`.
PrCurve pr_at_k(const Ranking& recommended, const std::set<std::string>& truth, std::size_t k_max);

struct Bounds {
    std::vector<double> precision;  // min(1, n/k)
    std::vector<double> recall;     // min(1, k/n)
};

Bounds upper_bounds(std::size_t n_truth, std::size_t k_max);

/// An article to evaluate and the sections it should be matched against.
struct EvalCase {
    const Article* article = nullptr;
    std::set<std::string> truth;
};

/// Truth = the article's distinct sections.
std::vector<EvalCase> cases_from_articles(const ArticleRefs& articles);

using Recommender = std::function<Ranking(const EvalCase&, std::size_t k)>;

struct EvalReport {
    std::string method;
    std::size_t k_max = 0;
    std::vector<double> precision;
    std::vector<double> recall;
    std::vector<double> precision_bound;
    std::vector<double> recall_bound;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;
    std::string fingerprint;
    /// Per-article curves in evaluation order, for re-aggregation.
    std::vector<PrCurve> per_article;
};

/// Macro-averaged curves over the cases with non-empty truth.
EvalReport evaluate_method(const std::string& method, const Recommender& recommender,
                           const std::vector<EvalCase>& cases, std::size_t k_max);

/// Uniformly random ordering of `vocabulary`, seeded per article.
class RandomRecommender {
public:
    RandomRecommender(std::vector<std::string> vocabulary, std::uint64_t seed);
    Ranking operator()(const EvalCase& item, std::size_t k) const;
    std::size_t vocabulary_size() const { return vocabulary_.size(); }

private:
    std::vector<std::string> vocabulary_;
    std::uint64_t seed_;
};

/// Closed-form expected precision@k of the random recommender:
/// |truth ∩ vocabulary| / |vocabulary|, independent of k (k <= |vocabulary|).
double expected_random_precision(const std::set<std::string>& truth,
                                 const std::vector<std::string>& vocabulary);

/// Aligned text table.
std::string format_report_table(const std::vector<EvalReport>& reports);

/// `method\tk\tprecision\trecall\tp_bound\tr_bound` rows.
void write_report_rows(const std::vector<EvalReport>& reports, const std::filesystem::path& path,
                       const std::string& header = {});

/// method,k,precision,recall for precision-recall plots, after `#` header lines.
void write_report_csv(const std::vector<EvalReport>& reports, const std::filesystem::path& path,
                      const std::string& header = {});

struct AnnotationTask {
    ArticleId article = 0;
    std::vector<std::string> sections;  // in rank order, at most 10
};

/// `article_id\trank\tsection`, rank starting at 1.
void export_annotation_tasks(const std::vector<AnnotationTask>& tasks,
                             const std::filesystem::path& path, const std::string& header = {});
std::vector<AnnotationTask> load_annotation_tasks(const std::filesystem::path& path);

} // namespace sectionrec
