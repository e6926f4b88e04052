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

#include "sectionrec/pipeline.hpp"

#include <algorithm>
#include <ostream>

namespace sectionrec {

namespace {

constexpr const char* kVersion = "sectionrec 0.1.0";

std::unordered_set<std::string> as_set(const std::vector<std::string>& v)
{
    return {v.begin(), v.end()};
}

} // namespace

struct Pipeline::State {
    std::optional<Corpus> corpus;
    std::optional<SplitAssignment> split;
    std::optional<PrunedGraph> pruned;
    std::optional<ScoreTable> counts;
    std::optional<ScoreTable> cf_category;
    std::optional<CategoryMetas> metas;
};

Pipeline::Pipeline(RunConfig config, std::ostream* log)
    : config_(std::move(config)), log_(log), state_(std::make_unique<State>())
{
    config_.validate();
}

Pipeline::~Pipeline() = default;

std::filesystem::path Pipeline::artifact(const std::string& name) const
{
    return config_.paths.work_dir / name;
}

std::string Pipeline::header(const std::string& stage) const
{
    return std::string(kVersion) + "\nstage " + stage + "\nconfig " + config_fingerprint(config_);
}

void Pipeline::note(const std::string& message) const
{
    if (log_)
        *log_ << message << '\n';
}

void Pipeline::require(const std::string& name, const std::string& stage) const
{
    if (!std::filesystem::exists(artifact(name)))
        throw Error(ErrorKind::missing_prerequisite,
                    "missing " + artifact(name).string() + "; run `" + stage + "` first");
}

/*****************************************************************************/
/* STAGES                                                                    */
/*****************************************************************************/

SynthOutput Pipeline::run_synth()
{
    SynthOutput out = generate_synthetic(config_.synth, config_.seed);
    write_synthetic(out, config_.synth_dir(), header("synth"));
    note("synth: " + std::to_string(out.articles.size()) + " articles, "
         + std::to_string(out.categories.names.size()) + " categories -> "
         + config_.synth_dir().string());
    return out;
}

CorpusStats Pipeline::run_ingest()
{
    const std::pair<std::filesystem::path, bool> inputs[] = {
        {config_.articles_path(), config_.paths.articles.empty()},
        {config_.categories_path(), config_.paths.categories.empty()},
    };
    for (const auto& [p, defaulted] : inputs)
        if (!std::filesystem::exists(p)) {
            if (defaulted)
                throw Error(ErrorKind::missing_prerequisite,
                            "missing " + p.string() + "; run `synth` first");
            throw Error(ErrorKind::config, "input file not found: " + p.string());
        }
    const Corpus raw = load_corpus(config_.articles_path(), config_.categories_path());
    std::set<std::string> blacklist;
    if (config_.paths.blacklist.empty()) {
        const auto& d = default_blacklist();
        blacklist.insert(d.begin(), d.end());
    } else {
        blacklist = load_blacklist(config_.paths.blacklist);
    }
    Corpus filtered = filter_corpus(raw, blacklist, {config_.drop_stubs, config_.drop_unique});
    const SplitAssignment split = split_corpus(filtered, config_.split, config_.seed);
    const std::string h = header("ingest");
    write_articles(filtered.articles, artifact("corpus.jsonl"), h);
    write_split(split, artifact("split.tsv"), h);

    const CorpusStats raw_stats = corpus_stats(raw);
    CorpusStats stats = corpus_stats(filtered);
    auto out = open_output(artifact("stats.tsv"));
    out << comment_block(h);
    out << "# articles " << stats.article_count << '\n';
    out << "# raw_articles " << raw_stats.article_count << '\n';
    out << "# mean_sections " << format_double(stats.mean_sections) << '\n';
    out << "# raw_stub_fraction " << format_double(raw_stats.stub_fraction) << '\n';
    out << "# raw_unique_titles " << raw_stats.unique_title_count << '\n';
    out << "# dropped_categories " << raw.report.dropped_categories << '\n';
    out << "# malformed_lines " << raw.report.malformed_article_lines << '\n';
    out << "# split " << split.train.size() << ' ' << split.test.size() << ' '
        << split.validation.size() << '\n';
    for (const auto& [count, freq] : stats.sections_per_article)
        out << count << '\t' << freq << '\n';
    note("ingest: " + std::to_string(raw_stats.article_count) + " articles read, "
         + std::to_string(stats.article_count) + " kept, mean sections "
         + format_double(stats.mean_sections));
    state_->corpus = std::move(filtered);
    state_->split = split;
    return stats;
}

PrunedGraph Pipeline::run_prune_graph()
{
    const Corpus& c = corpus();
    if (!std::filesystem::exists(config_.types_path()))
        throw Error(config_.paths.types.empty() ? ErrorKind::missing_prerequisite : ErrorKind::config,
                    "missing type map " + config_.types_path().string());
    const CategoryFile file = load_category_file(config_.categories_path());
    const TypeMap types = load_type_map(config_.types_path(), config_.type_universe_path());
    const CategoryGraph full = build_category_graph(file, c.articles, config_.root);
    const CategoryGraph rooted = restrict_to_root(full, config_.root);
    const CycleBreakResult broken = break_cycles(rooted);
    PrunedGraph pruned = prune(broken.dag, types, config_.threshold);

    const std::string h = header("prune-graph");
    write_pruned_graph(pruned, artifact("graph.tsv"), h);
    {
        auto out = open_output(artifact("removed_edges.tsv"));
        out << comment_block(h);
        for (const auto& [child, parent] : broken.removed_edges)
            out << child << '\t' << parent << '\n';
    }
    const auto annotations_path = config_.annotations_path();
    if (!config_.sweep_thresholds.empty() && std::filesystem::exists(annotations_path)) {
        const auto annotations = load_annotations(annotations_path);
        const auto rows = threshold_sweep(broken.dag, types, annotations, config_.sweep_thresholds);
        auto out = open_output(artifact("sweep.tsv"));
        out << comment_block(h);
        out << "# threshold\tprecision\trecall\tremoved_fraction\tprecision_defined\n";
        for (const auto& r : rows)
            out << format_double(r.threshold) << '\t' << format_double(r.precision) << '\t'
                << format_double(r.recall) << '\t' << format_double(r.removed_fraction) << '\t'
                << (r.precision_defined ? 1 : 0) << '\n';
    }
    note("prune-graph: " + std::to_string(rooted.node_count()) + " reachable categories, "
         + std::to_string(broken.removed_edges.size()) + " cycle edges removed, "
         + std::to_string(pruned.removed.size()) + " categories pruned");
    state_->pruned = pruned;
    state_->counts.reset();
    state_->metas.reset();
    return pruned;
}

void Pipeline::run_train(const std::string& what)
{
    if (what == "counts")
        train_counts();
    else if (what == "cf-article")
        train_cf_article();
    else if (what == "cf-category")
        train_cf_category();
    else if (what == "lda")
        train_lda();
    else if (what == "l2r")
        train_l2r();
    else
        throw Error(ErrorKind::config, "unknown training target " + what
                    + " (expected counts, cf-article, cf-category, lda or l2r)");
}

void Pipeline::train_counts()
{
    const ArticleRefs train = select_articles(corpus(), split().train);
    ScoreTable table = compute_scores(train, pruned().graph);
    write_score_table(table, artifact("counts.tsv"), header("train counts"));
    note("train counts: " + std::to_string(table.size()) + " categories scored");
    state_->counts = std::move(table);
}

void Pipeline::train_cf_article()
{
    const Corpus& c = corpus();
    AlsParams params = config_.cf_article.als;
    params.seed = derive_seed(config_.seed, "cf-article");
    const std::string h = header("train cf-article");
    if (!config_.cf_article.lambda_grid.empty()) {
        const LambdaSearch search = select_explicit_lambda(
            c, split(), config_.cf_article.holdout_fraction, config_.cf_article.min_sections, params,
            config_.cf_article.lambda_grid, config_.k_opt);
        params.lambda = search.best;
        auto out = open_output(artifact("cf_article_lambda.tsv"));
        out << comment_block(h);
        out << "# lambda\tvalidation precision@" << config_.k_opt << '\n';
        for (const auto& [lambda, score] : search.scores)
            out << format_double(lambda) << '\t' << format_double(score) << '\n';
        note("train cf-article: lambda " + format_double(search.best) + " selected on validation");
    }
    const ArticleMatrix m = build_article_matrix(c, split(), config_.cf_article.holdout_fraction,
                                                 config_.cf_article.min_sections, params.seed);
    const FactorModel model = als_explicit(m.matrix, params);
    write_factor_model(model, artifact("cf_article"), h);
    write_holdout(m.holdout, artifact("holdout.tsv"), h);
    note("train cf-article: " + std::to_string(m.matrix.rows()) + " x "
         + std::to_string(m.matrix.cols()) + ", final loss "
         + format_double(model.loss_trace.empty() ? 0.0 : model.loss_trace.back()));
}

void Pipeline::train_cf_category()
{
    const ScoreTable& counts = counts_table();
    AlsParams params = config_.cf_category.als;
    params.seed = derive_seed(config_.seed, "cf-category");
    const RatingsMatrix m = build_category_matrix(counts, config_.cf_category.top_n);
    const FactorModel model = als_implicit(m, params);
    ScoreTable table = score_table_from_model(model, config_.cf_category.depth, counts);
    const std::string h = header("train cf-category");
    write_factor_model(model, artifact("cf_category"), h);
    write_score_table(table, artifact("cf_category_scores.tsv"), h);
    note("train cf-category: " + std::to_string(m.rows()) + " x " + std::to_string(m.cols()));
    state_->cf_category = std::move(table);
}

void Pipeline::train_lda()
{
    const Corpus& c = corpus();
    std::vector<Document> docs;
    for (const Article* a : select_articles(c, split().train))
        docs.push_back(a->tokens);
    if (config_.lda.include_stubs && std::filesystem::exists(config_.articles_path())) {
        const Corpus raw = load_articles(config_.articles_path());
        for (const auto& a : raw.articles)
            if (a.is_stub)
                docs.push_back(a.tokens);
    }
    LdaParams params = config_.lda.params;
    params.seed = derive_seed(config_.seed, "lda");
    const TopicTraining training = train_topic_model(docs, params);
    const TopicSectionTable table = build_topic_section_table(training.model, select_articles(c, split().train));
    const std::string h = header("train lda");
    write_topic_model(training.model, artifact("lda_model.tsv"), h);
    write_topic_section_table(table, artifact("lda_sections.tsv"), h);
    note("train lda: " + std::to_string(docs.size()) + " documents, vocabulary "
         + std::to_string(training.model.vocabulary_size()));
}

MergeModel Pipeline::train_l2r()
{
    require("counts.tsv", "train counts");
    const ArticleRefs validation = select_articles(corpus(), split().validation);
    const std::uint64_t seed = derive_seed(config_.seed, "l2r");
    const MergeModel model = train_merge_model(validation, counts_table(), metas(), config_.k_opt,
                                               seed, config_.l2r);
    const std::string h = header("train l2r");
    write_merge_model(model, artifact("l2r_model.tsv"), h);
    const auto mono = check_monotonicity(model);
    note("train l2r: features " + std::to_string(model.features.size()) + ", holdout precision@"
         + std::to_string(model.k_opt) + " " + format_double(model.validation_score)
         + " (unweighted " + format_double(model.baseline_score) + ")");
    if (!mono.holds())
        note("train l2r: warning: learned category weight is not monotone (size non-increasing: "
             + std::string(mono.size_nonincreasing ? "yes" : "no") + ", gini non-decreasing: "
             + std::string(mono.gini_nondecreasing ? "yes" : "no") + ")");
    if (std::filesystem::exists(artifact("cf_category_scores.tsv"))) {
        const MergeModel cf = train_merge_model(validation, cf_category_table(), metas(),
                                                config_.k_opt, seed, config_.l2r);
        write_merge_model(cf, artifact("l2r_cf_category_model.tsv"), h);
    }
    return model;
}

/*****************************************************************************/
/* LAZY STATE                                                                */
/*****************************************************************************/

const Corpus& Pipeline::corpus()
{
    if (!state_->corpus) {
        require("corpus.jsonl", "ingest");
        state_->corpus = load_articles(artifact("corpus.jsonl"));
    }
    return *state_->corpus;
}

const SplitAssignment& Pipeline::split()
{
    if (!state_->split) {
        require("split.tsv", "ingest");
        state_->split = load_split(artifact("split.tsv"));
    }
    return *state_->split;
}

const PrunedGraph& Pipeline::pruned()
{
    if (!state_->pruned) {
        require("graph.tsv", "prune-graph");
        state_->pruned = load_pruned_graph(artifact("graph.tsv"), corpus().articles);
    }
    return *state_->pruned;
}

const ScoreTable& Pipeline::counts_table()
{
    if (!state_->counts) {
        require("counts.tsv", "train counts");
        state_->counts = load_score_table(artifact("counts.tsv"));
    }
    return *state_->counts;
}

const ScoreTable& Pipeline::cf_category_table()
{
    if (!state_->cf_category) {
        require("cf_category_scores.tsv", "train cf-category");
        state_->cf_category = load_score_table(artifact("cf_category_scores.tsv"));
    }
    return *state_->cf_category;
}

const CategoryMetas& Pipeline::metas()
{
    if (!state_->metas)
        state_->metas = category_metas(pruned());
    return *state_->metas;
}

/*****************************************************************************/
/* QUERIES                                                                   */
/*****************************************************************************/

Recommender Pipeline::recommender(const std::string& method, std::vector<EvalCase>& cases)
{
    const MergeScope scope = config_.merge_scope;
    if (method == "counts" || method == "cf-category") {
        const ScoreTable& table = method == "counts" ? counts_table() : cf_category_table();
        const CategoryGraph& graph = pruned().graph;
        return [&table, &graph, scope, method](const EvalCase& item, std::size_t k) {
            Ranking r = recommend_for_categories(table, contributing_categories(table, *item.article, graph, scope), k);
            r.method = method;
            return r;
        };
    }
    if (method == "counts-l2r" || method == "cf-category-l2r") {
        const bool cf = method == "cf-category-l2r";
        const ScoreTable& table = cf ? cf_category_table() : counts_table();
        const std::string model_file = cf ? "l2r_cf_category_model.tsv" : "l2r_model.tsv";
        require(model_file, "train l2r");
        auto model = std::make_shared<MergeModel>(load_merge_model(artifact(model_file)));
        const CategoryGraph& graph = pruned().graph;
        const CategoryMetas& m = metas();
        return [&table, &graph, &m, model, scope, method](const EvalCase& item, std::size_t k) {
            Ranking r = merge_for_article(table, contributing_categories(table, *item.article, graph, scope), m, *model, k);
            r.method = method;
            return r;
        };
    }
    if (method == "topic") {
        require("lda_model.tsv", "train lda");
        auto model = std::make_shared<TopicModel>(load_topic_model(artifact("lda_model.tsv")));
        auto table = std::make_shared<TopicSectionTable>(
            load_topic_section_table(artifact("lda_sections.tsv"), model->topics()));
        return [model, table](const EvalCase& item, std::size_t k) {
            return recommend_topic(*table, *model, *item.article, k, false);
        };
    }
    if (method == "cf-article") {
        require("cf_article.meta", "train cf-article");
        auto model = std::make_shared<FactorModel>(load_factor_model(artifact("cf_article")));
        auto holdout = std::make_shared<HoldoutMap>(load_holdout(artifact("holdout.tsv")));
        // Truth becomes the hidden sections; articles without a holdout are skipped.
        for (auto& item : cases) {
            auto it = holdout->held_out.find(item.article->id);
            item.truth = it == holdout->held_out.end()
                ? std::set<std::string>{}
                : std::set<std::string>(it->second.begin(), it->second.end());
        }
        return [model, holdout](const EvalCase& item, std::size_t k) {
            const auto it = holdout->visible.find(item.article->id);
            const auto exclude = it == holdout->visible.end() ? std::unordered_set<std::string>{} : as_set(it->second);
            return recommend_from_model(*model, item.article->id, k, exclude);
        };
    }
    if (method == "random") {
        std::set<std::string> vocab;
        for (const Article* a : select_articles(corpus(), split().train))
            for (const auto& s : a->sections)
                vocab.insert(s);
        auto rec = std::make_shared<RandomRecommender>(std::vector<std::string>(vocab.begin(), vocab.end()),
                                                       derive_seed(config_.seed, "random"));
        return [rec](const EvalCase& item, std::size_t k) { return (*rec)(item, k); };
    }
    throw Error(ErrorKind::config, "unknown method " + method);
}

std::vector<EvalCase> Pipeline::test_cases()
{
    return cases_from_articles(select_articles(corpus(), split().test));
}

Ranking Pipeline::recommend_article(ArticleId id, const std::string& method, std::size_t k,
                                    bool exclude_existing)
{
    const Article* article = corpus().find(id);
    if (!article)
        throw Error(ErrorKind::invalid_input, "unknown article id " + std::to_string(id));
    std::vector<EvalCase> cases{{article, {}}};
    const auto existing = article->distinct_sections();
    if (method == "counts") {
        const auto& table = counts_table();
        return recommend_for_categories(table, contributing_categories(table, *article, pruned().graph, config_.merge_scope),
                                        k, exclude_existing ? as_set(existing) : std::unordered_set<std::string>{});
    }
    if (method == "topic") {
        require("lda_model.tsv", "train lda");
        const TopicModel model = load_topic_model(artifact("lda_model.tsv"));
        const TopicSectionTable table = load_topic_section_table(artifact("lda_sections.tsv"), model.topics());
        return recommend_topic(table, model, *article, k, exclude_existing);
    }
    if (method == "cf-article") {
        require("cf_article.meta", "train cf-article");
        const FactorModel model = load_factor_model(artifact("cf_article"));
        if (model.row_index(id) < 0)
            throw Error(ErrorKind::invalid_input, "article " + std::to_string(id) + " has no row in the cf-article model");
        std::unordered_set<std::string> exclude;
        if (exclude_existing) {
            const HoldoutMap holdout = load_holdout(artifact("holdout.tsv"));
            const auto it = holdout.visible.find(id);
            exclude = it != holdout.visible.end() ? as_set(it->second) : as_set(existing);
        }
        return recommend_from_model(model, id, k, exclude);
    }
    Recommender rec = recommender(method, cases);
    Ranking r = rec(cases.front(), k + (exclude_existing ? existing.size() : 0));
    if (exclude_existing) {
        const auto skip = as_set(existing);
        std::erase_if(r.items, [&](const ScoredSection& s) { return skip.count(s.section) > 0; });
    }
    if (r.items.size() > k)
        r.items.resize(k);
    return r;
}

Ranking Pipeline::recommend_category(CategoryId id, const std::string& method, std::size_t k)
{
    if (method == "counts") {
        if (!counts_table().contains(id))
            throw Error(ErrorKind::invalid_input, "category " + std::to_string(id) + " has no scores (pruned or no training members)");
        return recommend_for_category(counts_table(), id, k);
    }
    if (method == "cf-category") {
        require("cf_category.meta", "train cf-category");
        const FactorModel model = load_factor_model(artifact("cf_category"));
        if (model.row_index(id) < 0)
            throw Error(ErrorKind::invalid_input, "category " + std::to_string(id) + " has no row in the cf-category model");
        return recommend_from_model(model, id, k);
    }
    throw Error(ErrorKind::config, "method " + method + " does not rank sections for a category (use counts or cf-category)");
}

std::vector<EvalReport> Pipeline::evaluate(std::vector<std::string> methods, std::size_t k_max)
{
    if (methods.empty())
        methods = config_.methods;
    if (methods.empty()) {
        const std::map<std::string, std::string> needs = {
            {"random", ""}, {"cf-article", "cf_article.meta"}, {"topic", "lda_model.tsv"},
            {"cf-category", "cf_category_scores.tsv"}, {"cf-category-l2r", "l2r_cf_category_model.tsv"},
            {"counts", "counts.tsv"}, {"counts-l2r", "l2r_model.tsv"},
        };
        for (const auto& m : known_methods()) {
            const auto& file = needs.at(m);
            if (file.empty() || std::filesystem::exists(artifact(file)))
                methods.push_back(m);
        }
    }
    std::vector<EvalReport> reports;
    const std::string fingerprint = config_fingerprint(config_);
    for (const auto& m : methods) {
        std::vector<EvalCase> cases = test_cases();
        const Recommender rec = recommender(m, cases);
        EvalReport r = evaluate_method(m, rec, cases, k_max);
        r.fingerprint = fingerprint;
        note("evaluate " + m + ": precision@" + std::to_string(std::min<std::size_t>(10, k_max)) + " "
             + format_double(r.precision[std::min<std::size_t>(10, k_max) - 1]));
        reports.push_back(std::move(r));
    }

    const std::string h = header("evaluate");
    write_report_rows(reports, artifact("report.tsv"), h);
    {
        auto out = open_output(artifact("report.txt"));
        out << comment_block(h) << format_report_table(reports);
    }
    write_report_csv(reports, artifact("report.csv"), h);

    // Annotation export from the strongest available count-based method.
    std::string best = methods.front();
    for (const char* preferred : {"counts", "counts-l2r"})
        if (std::find(methods.begin(), methods.end(), preferred) != methods.end())
            best = preferred;
    std::vector<EvalCase> cases = test_cases();
    const Recommender rec = recommender(best, cases);
    std::vector<AnnotationTask> tasks;
    for (const auto& item : cases) {
        if (item.truth.empty())
            continue;
        tasks.push_back({item.article->id, rec(item, 10).titles()});
    }
    export_annotation_tasks(tasks, artifact("annotation_tasks.tsv"), h);
    return reports;
}

std::vector<std::pair<std::size_t, double>> Pipeline::coverage(std::size_t x_max)
{
    const auto curve = coverage_curve(counts_table(), x_max);
    auto out = open_output(artifact("coverage.tsv"));
    out << comment_block(header("coverage"));
    for (const auto& [x, f] : curve)
        out << x << '\t' << format_double(f) << '\n';
    return curve;
}

} // namespace sectionrec
