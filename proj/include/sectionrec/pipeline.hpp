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

/* pipeline.hpp

   Stages over a work directory. Each stage reads the artifacts of earlier
   stages and refuses to run, naming the stage to run first, when they are
   missing.

     synth        synth/{articles.jsonl, categories.tsv, types.tsv, ...}
     ingest       corpus.jsonl split.tsv stats.tsv
     prune-graph  graph.tsv removed_edges.tsv [sweep.tsv]
     train counts       counts.tsv
     train cf-article   cf_article.{meta,rows.tsv,cols.tsv} holdout.tsv cf_article_lambda.tsv
     train cf-category  cf_category.{meta,rows.tsv,cols.tsv} cf_category_scores.tsv
     train lda          lda_model.tsv lda_sections.tsv
     train l2r          l2r_model.tsv [l2r_cf_category_model.tsv]
     evaluate     report.tsv report.txt report.csv annotation_tasks.tsv
     coverage     coverage.tsv
*/

#pragma once

#include "sectionrec/config.hpp"
#include "sectionrec/eval.hpp"

#include <iosfwd>
#include <memory>
#include <optional>

namespace sectionrec {

class Pipeline {
public:
    /// Progress messages go to `log` when set.
    explicit Pipeline(RunConfig config, std::ostream* log = nullptr);
    ~Pipeline();

    const RunConfig& config() const { return config_; }
    std::filesystem::path artifact(const std::string& name) const;
    /// Comment header embedded in every artifact of `stage`.
    std::string header(const std::string& stage) const;

    SynthOutput run_synth();
    CorpusStats run_ingest();
    PrunedGraph run_prune_graph();
    /// `what` is one of counts, cf-article, cf-category, lda, l2r.
    void run_train(const std::string& what);
    void train_counts();
    void train_cf_article();
    void train_cf_category();
    void train_lda();
    MergeModel train_l2r();

    Ranking recommend_article(ArticleId id, const std::string& method, std::size_t k,
                              bool exclude_existing = true);
    Ranking recommend_category(CategoryId id, const std::string& method, std::size_t k);

    /// Empty `methods` evaluates every method whose artifacts exist.
    std::vector<EvalReport> evaluate(std::vector<std::string> methods, std::size_t k_max);
    std::vector<std::pair<std::size_t, double>> coverage(std::size_t x_max);

    /// Test-split cases used by evaluate; article-CF uses its holdout instead.
    std::vector<EvalCase> test_cases();

private:
    struct State;

    void require(const std::string& name, const std::string& stage) const;
    void note(const std::string& message) const;
    const Corpus& corpus();
    const SplitAssignment& split();
    const PrunedGraph& pruned();
    const ScoreTable& counts_table();
    const ScoreTable& cf_category_table();
    const CategoryMetas& metas();
    Recommender recommender(const std::string& method, std::vector<EvalCase>& cases);

    RunConfig config_;
    std::ostream* log_;
    std::unique_ptr<State> state_;
};

} // namespace sectionrec
