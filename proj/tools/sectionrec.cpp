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

// sectionrec: section recommendation pipeline.
//
// Exit codes: 0 success, 2 configuration error, 3 missing prerequisite,
// 4 runtime failure.

#include "sectionrec/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace sectionrec;

namespace {

int exit_code(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::config:
        return 2;
    case ErrorKind::missing_prerequisite:
        return 3;
    default:
        return 4;
    }
}

void print_ranking(const Ranking& r)
{
    if (r.flag)
        std::cerr << "note: " << *r.flag << '\n';
    for (std::size_t i = 0; i < r.items.size(); ++i)
        std::cout << i + 1 << '\t' << r.items[i].section << '\t' << format_double(r.items[i].score) << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Section recommendation from category statistics"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--seed", seed, "Override the configured seed");

    app.add_subcommand("synth", "Generate the synthetic corpus into the work dir");
    app.add_subcommand("ingest", "Load, filter, split and summarize the corpus");
    app.add_subcommand("prune-graph", "Break cycles and prune impure categories");

    auto* train = app.add_subcommand("train", "Train a recommender");
    std::string target;
    train->add_option("target", target, "counts, cf-article, cf-category, lda or l2r")
        ->required()
        ->check(CLI::IsMember({"counts", "cf-article", "cf-category", "lda", "l2r"}));

    auto* recommend = app.add_subcommand("recommend", "Rank sections for one article or category");
    std::optional<ArticleId> article_id;
    std::optional<CategoryId> category_id;
    std::string method = "counts";
    std::size_t k = 10;
    bool include_existing = false;
    auto* article_opt = recommend->add_option("--article-id", article_id, "Article to expand");
    auto* category_opt = recommend->add_option("--category-id", category_id, "Category to describe");
    article_opt->excludes(category_opt);
    recommend->add_option("--method", method, "Recommendation method")
        ->check(CLI::IsMember(known_methods()));
    recommend->add_option("--k", k, "Number of sections")->check(CLI::PositiveNumber);
    recommend->add_flag("--include-existing", include_existing,
                        "Keep sections the article already has");

    auto* evaluate = app.add_subcommand("evaluate", "Precision and recall on the test split");
    std::vector<std::string> methods;
    std::optional<std::size_t> kmax;
    evaluate->add_option("--methods", methods, "Methods to evaluate (default: all trained)")
        ->delimiter(',')
        ->check(CLI::IsMember(known_methods()));
    evaluate->add_option("--kmax", kmax, "Largest k")->check(CLI::PositiveNumber);

    auto* coverage = app.add_subcommand("coverage", "Fraction of categories with at least x sections");
    std::size_t xmax = 50;
    coverage->add_option("--xmax", xmax, "Largest x")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        RunConfig config = config_path.empty() ? default_run_config() : load_run_config(config_path);
        if (seed)
            config.seed = *seed;
        Pipeline pipeline(config, &std::cerr);

        if (app.got_subcommand("synth")) {
            pipeline.run_synth();
        } else if (app.got_subcommand("ingest")) {
            const CorpusStats s = pipeline.run_ingest();
            std::cout << "articles\t" << s.article_count << '\n'
                      << "mean_sections\t" << format_double(s.mean_sections) << '\n';
        } else if (app.got_subcommand("prune-graph")) {
            const PrunedGraph p = pipeline.run_prune_graph();
            std::cout << "kept\t" << p.nodes.size() << '\n' << "removed\t" << p.removed.size() << '\n';
        } else if (app.got_subcommand("train")) {
            pipeline.run_train(target);
        } else if (app.got_subcommand("recommend")) {
            if (!article_id && !category_id)
                throw Error(ErrorKind::config, "recommend needs --article-id or --category-id");
            print_ranking(article_id ? pipeline.recommend_article(*article_id, method, k, !include_existing)
                                     : pipeline.recommend_category(*category_id, method, k));
        } else if (app.got_subcommand("evaluate")) {
            const auto reports = pipeline.evaluate(methods, kmax.value_or(config.k_max));
            std::cout << format_report_table(reports);
        } else if (app.got_subcommand("coverage")) {
            for (const auto& [x, f] : pipeline.coverage(xmax))
                std::cout << x << '\t' << format_double(f) << '\n';
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
    return 0;
}
