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


#include "fixtures.hpp"

#include "sectionrec/l2r.hpp"
#include "sectionrec/synth.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace sectionrec;

namespace {

CategoryMetas metas_for(std::initializer_list<CategoryMeta> ms)
{
    CategoryMetas out;
    for (const auto& m : ms)
        out[m.id] = m;
    return out;
}

ScoreTable table_of(std::map<CategoryId, std::vector<ScoredSection>> rows)
{
    ScoreTable t;
    for (auto& [c, r] : rows) {
        std::sort(r.begin(), r.end(), ranks_before);
        t.categories[c].members = 10;
        t.categories[c].ranked = r;
    }
    return t;
}

/// Small synthetic setup shared by the trained-model tests.
struct SynthSetup {
    SynthOutput synth;
    Corpus corpus;
    SplitAssignment split;
    PrunedGraph pruned;
    ScoreTable counts;
    CategoryMetas metas;

    SynthSetup()
    {
        SynthConfig cfg;
        cfg.categories = 60;
        synth = generate_synthetic(cfg, 5);
        corpus = fixtures::corpus(synth.articles);
        split = split_corpus(corpus, {0.7, 0.15, 0.15}, 6);
        const CategoryGraph dag =
            break_cycles(restrict_to_root(build_category_graph(synth.categories, synth.articles, synth.root),
                                          synth.root))
                .dag;
        pruned = prune(dag, synth.types, 0.966);
        counts = compute_scores(select_articles(corpus, split.train), pruned.graph);
        metas = category_metas(pruned);
    }

    double precision(const MergeModel& model, const std::vector<ArticleId>& ids, std::size_t k) const
    {
        double total = 0.0;
        std::size_t n = 0;
        for (const Article* a : select_articles(corpus, ids)) {
            if (!a->has_sections())
                continue;
            const auto truth = a->distinct_sections();
            const Ranking r = merge_for_article(counts, a->categories, metas, model, k);
            std::size_t hits = 0;
            for (const auto& s : r.items)
                hits += std::binary_search(truth.begin(), truth.end(), s.section) ? 1 : 0;
            total += static_cast<double>(hits) / static_cast<double>(k);
            ++n;
        }
        return total / static_cast<double>(n);
    }
};

} // namespace

TEST_CASE("feature layout")
{
    CHECK(category_feature_names().size() == 17);
    CHECK(candidate_feature_names().size() == 35);
    CHECK(category_feature_names().front() == "1");
    CHECK(candidate_feature_names()[17] == "p");
    CHECK(candidate_feature_names().back() == "rr");

    CategoryMeta zero;
    zero.size = 0;
    zero.gini = 0.0;
    const auto f0 = featurize(zero, 100.0);
    REQUIRE(f0.size() == 17);
    CHECK(f0[0] == 1.0);
    for (std::size_t i = 1; i < 15; ++i)
        CHECK(f0[i] == 0.0);
    CHECK(f0[15] == 0.0);
    CHECK(f0[16] == 1.0);

    CategoryMeta unit;
    unit.size = 100;
    unit.gini = 1.0;
    const auto f1 = featurize(unit, 100.0);
    for (std::size_t i = 0; i < 15; ++i)
        CHECK(f1[i] == 1.0);
    CHECK(f1[15] == doctest::Approx(std::log(2.0)));
    CHECK(f1[16] == doctest::Approx(std::exp(1.0)));

    CategoryMeta huge;
    huge.size = 1000000;
    huge.gini = 0.5;
    for (double x : featurize(huge, 10.0))
        CHECK(std::isfinite(x));
}

TEST_CASE("identity model reproduces the unweighted sum")
{
    Rng rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        std::map<CategoryId, std::vector<ScoredSection>> rows;
        CategoryMetas metas;
        std::vector<CategoryId> cats;
        for (CategoryId c = 1; c <= 6; ++c) {
            std::vector<ScoredSection> r;
            for (int s = 0; s < 10; ++s)
                if (rng.bernoulli(0.4))
                    r.push_back({"S" + std::to_string(s), (1.0 + static_cast<double>(rng.index(20))) / 20.0});
            if (r.empty())
                continue;
            rows[c] = r;
            metas[c] = CategoryMeta{c, 1 + rng.index(50), rng.uniform()};
            if (rng.bernoulli(0.6))
                cats.push_back(c);
        }
        const ScoreTable t = table_of(rows);
        std::vector<CategoryId> shuffled = cats;
        rng.shuffle(shuffled);
        const Ranking merged = merge_for_article(t, shuffled, metas, MergeModel::identity(), 7);
        const Ranking sum = recommend_for_categories(t, cats, 7);
        CHECK(merged.items == sum.items);

        Article a = fixtures::article(1, {"S1", "S2"}, cats);
        CHECK(merge_for_article(t, cats, metas, MergeModel::identity(), 7, {"S1", "S2"}).items ==
              recommend_for_article(t, a, 7, true).items);
    }
}

TEST_CASE("merging is invariant to category order")
{
    const CategoryMetas metas = metas_for({{1, 5, 0.9}, {2, 50, 0.95}, {3, 10, 0.97}});
    MergeModel m;
    m.features = {"p", "p*s", "rr", "g"};
    m.coefficients = {0.8, -0.3, 0.1, 0.05};
    m.size_scale = 50;
    const std::vector<CategoryRanking> a = {
        {1, {{"A", 0.9}, {"B", 0.4}}}, {2, {{"B", 0.7}, {"C", 0.2}}}, {3, {{"A", 0.5}, {"D", 0.5}}}};
    std::vector<CategoryRanking> b = {a[2], a[0], a[1]};
    CHECK(merge_rankings(a, metas, m, 10).items == merge_rankings(b, metas, m, 10).items);
}

TEST_CASE("disjoint categories interleave by prediction")
{
    const CategoryMetas metas = metas_for({{1, 5, 0.9}, {2, 5, 0.9}});
    const std::vector<CategoryRanking> r = {{1, {{"A", 0.9}, {"C", 0.5}}}, {2, {{"B", 0.7}, {"D", 0.1}}}};
    CHECK(merge_rankings(r, metas, MergeModel::identity(), 10).titles() ==
          std::vector<std::string>{"A", "B", "C", "D"});
}

TEST_CASE("single category with a monotone model keeps its order")
{
    const CategoryMetas metas = metas_for({{1, 20, 0.98}});
    MergeModel m;
    m.features = {"p", "p*g", "rr", "s^2"};
    m.coefficients = {0.5, 0.3, 0.2, -1.0};
    m.size_scale = 40;
    const std::vector<ScoredSection> ranked = {{"A", 0.9}, {"B", 0.6}, {"C", 0.6}, {"D", 0.1}};
    CHECK(merge_rankings({{1, ranked}}, metas, m, 10).titles() ==
          std::vector<std::string>{"A", "B", "C", "D"});
}

TEST_CASE("empty input gives a flagged empty ranking")
{
    const Ranking r = merge_rankings({}, {}, MergeModel::identity(), 10);
    CHECK(r.empty());
    CHECK(r.flag.has_value());
    CHECK_THROWS_AS(merge_rankings({{9, {{"A", 1.0}}}}, {}, MergeModel::identity(), 10), Error);
}

TEST_CASE("category weight and monotonicity check")
{
    MergeModel m = MergeModel::identity(10.0);
    CHECK(m.category_weight({1, 5, 0.5}) == 1.0);
    CHECK(check_monotonicity(m).holds());
    m.features = {"p", "p*s", "p*g"};
    m.coefficients = {1.0, -0.5, 0.25};
    CHECK(m.category_weight({1, 10, 1.0}) == doctest::Approx(0.75));
    CHECK(check_monotonicity(m).holds());
    m.coefficients = {1.0, 0.5, 0.25};
    const auto check = check_monotonicity(m);
    CHECK_FALSE(check.size_nonincreasing);
    CHECK(check.gini_nondecreasing);
    CHECK_FALSE(check.holds());
}

TEST_CASE("training refuses small validation sets")
{
    ScoreTable t = table_of({{1, {{"A", 1.0}}}});
    const CategoryMetas metas = metas_for({{1, 3, 0.98}});
    std::vector<Article> arts;
    for (ArticleId a = 1; a <= 49; ++a)
        arts.push_back(fixtures::article(a, {"A"}, {1}));
    ArticleRefs refs;
    for (const auto& a : arts)
        refs.push_back(&a);
    CHECK_THROWS_AS(train_merge_model(refs, t, metas, 10, 1), Error);
}

TEST_CASE("all-positive validation data keeps the unweighted sum")
{
    const ScoreTable t = table_of({{1, {{"A", 0.9}, {"B", 0.5}}}, {2, {{"B", 0.8}, {"C", 0.3}}}});
    const CategoryMetas metas = metas_for({{1, 30, 0.97}, {2, 8, 0.99}});
    std::vector<Article> arts;
    for (ArticleId a = 1; a <= 80; ++a)
        arts.push_back(a % 2 ? fixtures::article(a, {"A", "B"}, {1}) : fixtures::article(a, {"B", "C"}, {2}));
    ArticleRefs refs;
    for (const auto& a : arts)
        refs.push_back(&a);
    const MergeModel m = train_merge_model(refs, t, metas, 2, 3);
    CHECK(m.features == std::vector<std::string>{"p"});
    CHECK(m.coefficients == std::vector<double>{1.0});
}

TEST_CASE("learned merge on a synthetic corpus")
{
    const SynthSetup s;
    const MergeModel m =
        train_merge_model(select_articles(s.corpus, s.split.validation), s.counts, s.metas, 10, 17);
    REQUIRE_FALSE(m.features.empty());
    CHECK(m.features.front() == "p");
    CHECK(m.validation_score >= m.baseline_score);
    for (double c : m.coefficients)
        CHECK(std::isfinite(c));

    const MergeModel again =
        train_merge_model(select_articles(s.corpus, s.split.validation), s.counts, s.metas, 10, 17);
    CHECK(again.features == m.features);
    CHECK(again.coefficients == m.coefficients);

    const double learned = s.precision(m, s.split.test, 10);
    const double unweighted = s.precision(MergeModel::identity(m.size_scale), s.split.test, 10);
    MESSAGE("precision@10 learned " << learned << " unweighted " << unweighted);
    CHECK(learned >= unweighted - 0.005);

    const auto mono = check_monotonicity(m);
    MESSAGE("size non-increasing " << mono.size_nonincreasing << ", gini non-decreasing "
                                   << mono.gini_nondecreasing);

    // Single-category merges keep the category order whenever the model
    // weighs P(S|C) positively and does not penalize better ranks.
    const auto& names = m.features;
    const auto rr = std::find(names.begin(), names.end(), "rr");
    const double rr_coef = rr == names.end() ? 0.0 : m.coefficients[static_cast<std::size_t>(rr - names.begin())];
    for (const auto& [c, scores] : s.counts.categories) {
        if (m.category_weight(s.metas.at(c)) <= 0.0 || rr_coef < 0.0)
            continue;
        const Ranking merged = merge_rankings({{c, scores.ranked}}, s.metas, m, scores.ranked.size());
        const std::vector<std::string> merged_titles = merged.titles();
        // Equal P(S|C) values may be reordered by rank only inside the tie.
        std::vector<double> p_of;
        for (const auto& t : merged_titles)
            for (const auto& sc : scores.ranked)
                if (sc.section == t)
                    p_of.push_back(sc.score);
        CHECK(std::is_sorted(p_of.rbegin(), p_of.rend()));
    }
}

TEST_CASE("merge models round-trip")
{
    fixtures::TempDir dir("l2r_roundtrip");
    MergeModel m;
    m.features = {"p", "p*s^2*g", "rr"};
    m.coefficients = {0.7, -1.0 / 3.0, 0.125};
    m.size_scale = 123;
    m.ridge = 0.5;
    m.seed = 0xffffffffffffff00ULL;
    m.k_opt = 7;
    m.validation_score = 0.3;
    m.baseline_score = 0.25;
    write_merge_model(m, dir / "model.tsv", "test");
    const MergeModel n = load_merge_model(dir / "model.tsv");
    CHECK(n.features == m.features);
    CHECK(n.coefficients == m.coefficients);
    CHECK(n.size_scale == m.size_scale);
    CHECK(n.ridge == m.ridge);
    CHECK(n.seed == m.seed);
    CHECK(n.k_opt == m.k_opt);
    CHECK(n.validation_score == m.validation_score);
    CHECK(n.baseline_score == m.baseline_score);
}
