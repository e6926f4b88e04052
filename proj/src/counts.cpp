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

#include "sectionrec/counts.hpp"

#include <algorithm>
#include <unordered_map>

namespace sectionrec {

const CategoryScores& ScoreTable::at(CategoryId c) const
{
    auto it = categories.find(c);
    if (it == categories.end())
        throw Error("unknown category id " + std::to_string(c));
    return it->second;
}

ScoreTable compute_scores(const ArticleRefs& train_articles, const CategoryGraph& pruned_graph)
{
    std::unordered_map<ArticleId, std::vector<std::string>> sections;
    for (const Article* a : train_articles)
        if (a->has_sections())
            sections.emplace(a->id, a->distinct_sections());

    ScoreTable table;
    for (const auto& [c, closure] : all_closures(pruned_graph)) {
        std::unordered_map<std::string, std::size_t> counts;
        std::size_t members = 0;
        for (ArticleId a : closure) {
            auto it = sections.find(a);
            if (it == sections.end())
                continue;
            ++members;
            for (const auto& s : it->second)
                ++counts[s];
        }
        if (members == 0)
            continue;
        CategoryScores scores;
        scores.members = members;
        scores.ranked.reserve(counts.size());
        for (const auto& [s, n] : counts)
            scores.ranked.push_back({s, static_cast<double>(n) / static_cast<double>(members)});
        std::sort(scores.ranked.begin(), scores.ranked.end(), ranks_before);
        table.categories.emplace(c, std::move(scores));
    }
    return table;
}

Ranking recommend_for_category(const ScoreTable& table, CategoryId c, std::size_t k)
{
    const auto& ranked = table.at(c).ranked;
    Ranking out;
    out.method = "counts";
    out.items.assign(ranked.begin(), ranked.begin() + std::min(k, ranked.size()));
    return out;
}

std::vector<CategoryId> contributing_categories(const ScoreTable& table,
                                                const Article& article,
                                                const CategoryGraph& pruned_graph,
                                                MergeScope scope)
{
    std::set<CategoryId> out;
    for (auto c : article.categories)
        if (pruned_graph.contains(c))
            out.insert(c);
    if (scope == MergeScope::ancestors) {
        std::multimap<CategoryId, CategoryId> parents(pruned_graph.edges.begin(),
                                                      pruned_graph.edges.end());
        std::vector<CategoryId> stack(out.begin(), out.end());
        while (!stack.empty()) {
            const auto c = stack.back();
            stack.pop_back();
            auto [lo, hi] = parents.equal_range(c);
            for (auto it = lo; it != hi; ++it)
                if (out.insert(it->second).second)
                    stack.push_back(it->second);
        }
    }
    std::vector<CategoryId> result;
    for (auto c : out)
        if (table.contains(c))
            result.push_back(c);
    return result;
}

Ranking recommend_for_categories(const ScoreTable& table,
                                 std::vector<CategoryId> categories,
                                 std::size_t k,
                                 const std::unordered_set<std::string>& exclude)
{
    // Fixed summation order makes the result independent of input order.
    std::sort(categories.begin(), categories.end());
    categories.erase(std::unique(categories.begin(), categories.end()), categories.end());

    std::unordered_map<std::string, double> scores;
    std::size_t used = 0;
    for (auto c : categories) {
        auto it = table.categories.find(c);
        if (it == table.categories.end())
            continue;
        ++used;
        for (const auto& item : it->second.ranked)
            scores[item.section] += item.score;
    }
    Ranking out = top_k("counts", scores, k, exclude);
    if (used == 0)
        out.flag = "no surviving category with training members";
    return out;
}

Ranking recommend_for_article(const ScoreTable& table, const Article& article,
                              std::size_t k, bool exclude_existing)
{
    std::unordered_set<std::string> exclude;
    if (exclude_existing)
        exclude.insert(article.sections.begin(), article.sections.end());
    return recommend_for_categories(table, article.categories, k, exclude);
}

std::vector<std::pair<std::size_t, double>> coverage_curve(const ScoreTable& table,
                                                           std::size_t x_max)
{
    std::vector<std::pair<std::size_t, double>> out;
    const double n = static_cast<double>(table.size());
    for (std::size_t x = 1; x <= x_max; ++x) {
        std::size_t enough = 0;
        for (const auto& [c, scores] : table.categories)
            if (scores.ranked.size() >= x)
                ++enough;
        out.emplace_back(x, table.size() == 0 ? 0.0 : static_cast<double>(enough) / n);
    }
    return out;
}

void write_score_table(const ScoreTable& table, const std::filesystem::path& path,
                       const std::string& header)
{
    auto out = open_output(path);
    out << comment_block(header);
    for (const auto& [c, scores] : table.categories)
        out << "# members\t" << c << '\t' << scores.members << '\n';
    for (const auto& [c, scores] : table.categories)
        for (const auto& item : scores.ranked)
            out << c << '\t' << item.section << '\t' << format_double(item.score) << '\n';
}

ScoreTable load_score_table(const std::filesystem::path& path)
{
    auto in = open_input(path);
    ScoreTable table;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("# members\t", 0) == 0) {
            auto f = split(line, '\t');
            if (f.size() != 3)
                throw Error(path.string() + ": malformed members line");
            table.categories[parse_int(f[1])].members = static_cast<std::size_t>(parse_int(f[2]));
            continue;
        }
        if (line.empty() || line[0] == '#')
            continue;
        auto f = split(line, '\t');
        if (f.size() != 3)
            throw Error(path.string() + ": malformed score line: " + line);
        table.categories[parse_int(f[0])].ranked.push_back({std::string(f[1]), parse_double(f[2])});
    }
    for (auto& [c, scores] : table.categories)
        std::sort(scores.ranked.begin(), scores.ranked.end(), ranks_before);
    return table;
}

} // namespace sectionrec
