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

#include "sectionrec/l2r.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace sectionrec {

namespace {

constexpr int kMaxDegree = 4;
constexpr std::size_t kCategoryFeatures = 17;
constexpr std::size_t kCandidateFeatures = 2 * kCategoryFeatures + 1;

std::string monomial_name(int a, int b)
{
    auto power = [](const char* var, int e) -> std::string {
        if (e == 0)
            return {};
        return e == 1 ? var : std::string(var) + "^" + std::to_string(e);
    };
    if (a == 0 && b == 0)
        return "1";
    const std::string s = power("s", a), g = power("g", b);
    if (s.empty())
        return g;
    if (g.empty())
        return s;
    return s + "*" + g;
}

double ipow(double x, int e)
{
    double out = 1.0;
    for (int i = 0; i < e; ++i)
        out *= x;
    return out;
}

/// Candidate feature values for one (category, rank, P) triple.
std::vector<double> candidate_features(const std::vector<double>& meta, double p, std::size_t rank)
{
    std::vector<double> x;
    x.reserve(kCandidateFeatures);
    x.insert(x.end(), meta.begin(), meta.end());
    for (double m : meta)
        x.push_back(p * m);
    x.push_back(1.0 / (1.0 + static_cast<double>(rank)));
    return x;
}

std::size_t feature_index(const std::string& name)
{
    const auto& names = candidate_feature_names();
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end())
        throw Error("unknown merge feature: " + name);
    return static_cast<std::size_t>(it - names.begin());
}

const CategoryMeta& meta_of(const CategoryMetas& metas, CategoryId c)
{
    auto it = metas.find(c);
    if (it == metas.end())
        throw Error("no category metadata for " + std::to_string(c));
    return it->second;
}

/// One labelled candidate.
struct Candidate {
    std::string section;
    std::vector<double> x;
    bool positive = false;
};

struct ArticleCandidates {
    std::vector<Candidate> candidates;  // grouped by category, ascending id
    std::size_t truth_size = 0;
};

ArticleCandidates collect(const Article& article, const ScoreTable& table,
                          const CategoryMetas& metas, double size_scale)
{
    ArticleCandidates out;
    const auto truth = article.distinct_sections();
    out.truth_size = truth.size();
    std::vector<CategoryId> cats;
    for (auto c : article.categories)
        if (table.contains(c))
            cats.push_back(c);
    for (auto c : cats) {
        const auto meta = featurize(meta_of(metas, c), size_scale);
        const auto& ranked = table.at(c).ranked;
        for (std::size_t r = 0; r < ranked.size(); ++r) {
            Candidate cand;
            cand.section = ranked[r].section;
            cand.x = candidate_features(meta, ranked[r].score, r);
            cand.positive = std::binary_search(truth.begin(), truth.end(), ranked[r].section);
            out.candidates.push_back(std::move(cand));
        }
    }
    return out;
}

double predict(const std::vector<double>& x, const std::vector<std::size_t>& idx,
               const std::vector<double>& coef)
{
    double y = 0.0;
    for (std::size_t i = 0; i < idx.size(); ++i)
        y += coef[i] * x[idx[i]];
    return y;
}

std::vector<double> fit_ridge(const std::vector<const ArticleCandidates*>& articles,
                              const std::vector<std::size_t>& idx, double ridge)
{
    const auto d = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd xtx = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd xty = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd row(d);
    for (const auto* a : articles)
        for (const auto& c : a->candidates) {
            for (Eigen::Index i = 0; i < d; ++i)
                row(i) = c.x[idx[i]];
            xtx.selfadjointView<Eigen::Lower>().rankUpdate(row);
            if (c.positive)
                xty += row;
        }
    xtx.triangularView<Eigen::StrictlyUpper>() = xtx.transpose();
    xtx.diagonal().array() += ridge;
    const Eigen::VectorXd w = xtx.ldlt().solve(xty);
    return std::vector<double>(w.data(), w.data() + w.size());
}

/// Mean precision@k of summed predictions over the articles.
double precision_at(const std::vector<const ArticleCandidates*>& articles,
                    const std::vector<std::size_t>& idx, const std::vector<double>& coef,
                    std::size_t k)
{
    if (articles.empty() || k == 0)
        return 0.0;
    double total = 0.0;
    for (const auto* a : articles) {
        std::unordered_map<std::string, double> scores;
        std::unordered_set<std::string> positives;
        for (const auto& c : a->candidates) {
            scores[c.section] += predict(c.x, idx, coef);
            if (c.positive)
                positives.insert(c.section);
        }
        const Ranking r = top_k("l2r", scores, k);
        std::size_t hits = 0;
        for (const auto& item : r.items)
            hits += positives.count(item.section);
        total += static_cast<double>(hits) / static_cast<double>(k);
    }
    return total / static_cast<double>(articles.size());
}

} // namespace

CategoryMetas category_metas(const PrunedGraph& pruned)
{
    CategoryMetas out;
    for (const auto& [c, node] : pruned.nodes)
        out[c] = CategoryMeta{c, std::max<std::size_t>(1, node.closure_size), node.purity};
    return out;
}

double max_category_size(const CategoryMetas& metas)
{
    std::size_t best = 1;
    for (const auto& [c, m] : metas)
        best = std::max(best, m.size);
    return static_cast<double>(best);
}

const std::vector<std::string>& category_feature_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (int d = 0; d <= kMaxDegree; ++d)
            for (int a = d; a >= 0; --a)
                out.push_back(monomial_name(a, d - a));
        out.push_back("log1p(s)");
        out.push_back("exp(g)");
        return out;
    }();
    return names;
}

std::vector<double> featurize(const CategoryMeta& meta, double size_scale)
{
    const double s = std::clamp(size_scale > 0 ? static_cast<double>(meta.size) / size_scale : 0.0, 0.0, 1.0);
    const double g = std::clamp(meta.gini, 0.0, 1.0);
    std::vector<double> out;
    out.reserve(kCategoryFeatures);
    for (int d = 0; d <= kMaxDegree; ++d)
        for (int a = d; a >= 0; --a)
            out.push_back(ipow(s, a) * ipow(g, d - a));
    out.push_back(std::log1p(s));
    out.push_back(std::exp(g));
    return out;
}

const std::vector<std::string>& candidate_feature_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out = category_feature_names();
        for (const auto& n : category_feature_names())
            out.push_back(n == "1" ? "p" : "p*" + n);
        out.push_back("rr");
        return out;
    }();
    return names;
}

MergeModel MergeModel::identity(double size_scale)
{
    MergeModel m;
    m.features = {"p"};
    m.coefficients = {1.0};
    m.size_scale = size_scale;
    m.ridge = 0.0;
    return m;
}

double MergeModel::category_weight(const CategoryMeta& meta) const
{
    const auto values = featurize(meta, size_scale);
    const auto& names = category_feature_names();
    double w = 0.0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        const auto& f = features[i];
        if (f == "p") {
            w += coefficients[i];
        } else if (f.rfind("p*", 0) == 0) {
            const auto it = std::find(names.begin(), names.end(), f.substr(2));
            w += coefficients[i] * values[static_cast<std::size_t>(it - names.begin())];
        }
    }
    return w;
}

MonotonicityCheck check_monotonicity(const MergeModel& model, std::size_t grid)
{
    MonotonicityCheck out;
    const std::size_t steps = std::max<std::size_t>(grid, 2);
    auto weight = [&](std::size_t si, std::size_t gi) {
        CategoryMeta meta;
        const double s = static_cast<double>(si) / static_cast<double>(steps - 1);
        meta.size = static_cast<std::size_t>(std::max(1.0, std::round(s * model.size_scale)));
        meta.gini = 0.999 * static_cast<double>(gi) / static_cast<double>(steps - 1);
        return model.category_weight(meta);
    };
    constexpr double slack = 1e-12;
    for (std::size_t si = 0; si < steps; ++si)
        for (std::size_t gi = 0; gi < steps; ++gi) {
            if (si + 1 < steps && weight(si + 1, gi) > weight(si, gi) + slack)
                out.size_nonincreasing = false;
            if (gi + 1 < steps && weight(si, gi + 1) < weight(si, gi) - slack)
                out.gini_nondecreasing = false;
        }
    return out;
}

MergeModel train_merge_model(const ArticleRefs& validation_articles,
                             const ScoreTable& table,
                             const CategoryMetas& metas,
                             std::size_t k_opt, std::uint64_t seed,
                             const MergeTrainOptions& options)
{
    if (validation_articles.size() < options.min_articles)
        throw Error("validation set too small for merge training: "
                    + std::to_string(validation_articles.size()) + " articles, need at least "
                    + std::to_string(options.min_articles));
    if (k_opt == 0)
        throw Error(ErrorKind::config, "k_opt must be positive");

    const double size_scale = max_category_size(metas);
    std::vector<ArticleCandidates> all;
    std::vector<ArticleId> ids;
    for (const Article* a : validation_articles) {
        if (!a->has_sections())
            continue;
        auto cands = collect(*a, table, metas, size_scale);
        if (cands.candidates.empty())
            continue;
        all.push_back(std::move(cands));
        ids.push_back(a->id);
    }

    // Seeded fit / holdout partition.
    std::vector<std::size_t> order(all.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    Rng rng(derive_seed(seed, "l2r-holdout"));
    rng.shuffle(order);
    const auto n_holdout = static_cast<std::size_t>(std::llround(options.holdout_fraction * static_cast<double>(all.size())));
    std::vector<const ArticleCandidates*> fit, holdout, everything;
    for (std::size_t i = 0; i < order.size(); ++i) {
        (i < n_holdout ? holdout : fit).push_back(&all[order[i]]);
        everything.push_back(&all[i]);
    }
    if (fit.empty() || holdout.empty())
        throw Error("validation set too small for merge training after filtering");

    auto score = [&](const std::vector<std::size_t>& idx) {
        return precision_at(holdout, idx, fit_ridge(fit, idx, options.ridge), k_opt);
    };

    std::vector<std::size_t> selected{feature_index("p")};
    double best = score(selected);
    const double baseline = best;
    while (selected.size() < options.max_features) {
        std::size_t best_feature = kCandidateFeatures;
        double best_score = best;
        for (std::size_t f = 0; f < kCandidateFeatures; ++f) {
            if (std::find(selected.begin(), selected.end(), f) != selected.end())
                continue;
            auto trial = selected;
            trial.push_back(f);
            const double s = score(trial);
            if (s > best_score + 1e-12) {
                best_score = s;
                best_feature = f;
            }
        }
        if (best_feature == kCandidateFeatures)
            break;
        selected.push_back(best_feature);
        best = best_score;
    }

    MergeModel model;
    for (auto f : selected)
        model.features.push_back(candidate_feature_names()[f]);
    // With "p" alone the fitted scale does not change the ranking; keep the
    // exact unweighted sum in that case.
    model.coefficients = selected.size() == 1 ? std::vector<double>{1.0}
                                              : fit_ridge(everything, selected, options.ridge);
    model.size_scale = size_scale;
    model.ridge = options.ridge;
    model.seed = seed;
    model.k_opt = k_opt;
    model.validation_score = best;
    model.baseline_score = baseline;
    return model;
}

Ranking merge_rankings(const std::vector<CategoryRanking>& rankings,
                       const CategoryMetas& metas, const MergeModel& model,
                       std::size_t k, const std::unordered_set<std::string>& exclude)
{
    std::vector<std::size_t> idx;
    for (const auto& f : model.features)
        idx.push_back(feature_index(f));

    // Ascending category order fixes the summation order.
    std::vector<const CategoryRanking*> sorted;
    for (const auto& r : rankings)
        sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(),
              [](const CategoryRanking* a, const CategoryRanking* b) { return a->category < b->category; });

    std::unordered_map<std::string, double> scores;
    for (const auto* r : sorted) {
        const auto meta = featurize(meta_of(metas, r->category), model.size_scale);
        for (std::size_t i = 0; i < r->ranked.size(); ++i) {
            const auto x = candidate_features(meta, r->ranked[i].score, i);
            scores[r->ranked[i].section] += predict(x, idx, model.coefficients);
        }
    }
    Ranking out = top_k("l2r", scores, k, exclude);
    if (rankings.empty())
        out.flag = "no category rankings to merge";
    return out;
}

Ranking merge_for_article(const ScoreTable& table, const std::vector<CategoryId>& categories,
                          const CategoryMetas& metas, const MergeModel& model,
                          std::size_t k, const std::unordered_set<std::string>& exclude)
{
    std::vector<CategoryRanking> rankings;
    std::vector<CategoryId> cats = categories;
    std::sort(cats.begin(), cats.end());
    cats.erase(std::unique(cats.begin(), cats.end()), cats.end());
    for (auto c : cats)
        if (table.contains(c))
            rankings.push_back({c, table.at(c).ranked});
    return merge_rankings(rankings, metas, model, k, exclude);
}

void write_merge_model(const MergeModel& model, const std::filesystem::path& path,
                       const std::string& header)
{
    auto out = open_output(path);
    out << comment_block(header);
    out << "# size_scale " << format_double(model.size_scale) << '\n';
    out << "# ridge " << format_double(model.ridge) << '\n';
    out << "# seed " << model.seed << '\n';
    out << "# k_opt " << model.k_opt << '\n';
    out << "# validation_score " << format_double(model.validation_score) << '\n';
    out << "# baseline_score " << format_double(model.baseline_score) << '\n';
    for (std::size_t i = 0; i < model.features.size(); ++i)
        out << model.features[i] << '\t' << format_double(model.coefficients[i]) << '\n';
}

MergeModel load_merge_model(const std::filesystem::path& path)
{
    auto in = open_input(path);
    MergeModel model;
    model.features.clear();
    model.coefficients.clear();
    std::string line;
    auto meta = [&](const char* key) -> std::optional<std::string> {
        const std::string prefix = std::string("# ") + key + " ";
        if (line.rfind(prefix, 0) != 0)
            return std::nullopt;
        return line.substr(prefix.size());
    };
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        if (line[0] == '#') {
            if (auto v = meta("size_scale")) model.size_scale = parse_double(*v);
            else if (auto v = meta("ridge")) model.ridge = parse_double(*v);
            else if (auto v = meta("seed")) model.seed = parse_uint(*v);
            else if (auto v = meta("k_opt")) model.k_opt = static_cast<std::size_t>(parse_int(*v));
            else if (auto v = meta("validation_score")) model.validation_score = parse_double(*v);
            else if (auto v = meta("baseline_score")) model.baseline_score = parse_double(*v);
            continue;
        }
        auto f = split(line, '\t');
        if (f.size() != 2)
            throw Error(path.string() + ": malformed merge-model line");
        feature_index(std::string(f[0]));
        model.features.emplace_back(f[0]);
        model.coefficients.push_back(parse_double(f[1]));
    }
    if (model.features.empty())
        throw Error(path.string() + ": merge model has no features");
    return model;
}

} // namespace sectionrec
