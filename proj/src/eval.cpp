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

#include "sectionrec/eval.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace sectionrec {

PrCurve pr_at_k(const Ranking& recommended, const std::set<std::string>& truth, std::size_t k_max)
{
    if (truth.empty())
        throw Error("pr_at_k: empty truth set");
    PrCurve out;
    out.precision.resize(k_max);
    out.recall.resize(k_max);
    std::size_t hits = 0;
    std::set<std::string> seen;
    for (std::size_t k = 1; k <= k_max; ++k) {
        if (k <= recommended.items.size()) {
            const auto& s = recommended.items[k - 1].section;
            if (truth.count(s) && seen.insert(s).second)
                ++hits;
        }
        out.precision[k - 1] = static_cast<double>(hits) / static_cast<double>(k);
        out.recall[k - 1] = static_cast<double>(hits) / static_cast<double>(truth.size());
    }
    return out;
}

Bounds upper_bounds(std::size_t n_truth, std::size_t k_max)
{
    if (n_truth == 0)
        throw Error("upper_bounds: n_truth must be at least 1");
    Bounds b;
    const auto n = static_cast<double>(n_truth);
    for (std::size_t k = 1; k <= k_max; ++k) {
        const auto kd = static_cast<double>(k);
        b.precision.push_back(std::min(1.0, n / kd));
        b.recall.push_back(std::min(1.0, kd / n));
    }
    return b;
}

std::vector<EvalCase> cases_from_articles(const ArticleRefs& articles)
{
    std::vector<EvalCase> out;
    out.reserve(articles.size());
    for (const Article* a : articles) {
        const auto sections = a->distinct_sections();
        out.push_back({a, std::set<std::string>(sections.begin(), sections.end())});
    }
    return out;
}

EvalReport evaluate_method(const std::string& method, const Recommender& recommender,
                           const std::vector<EvalCase>& cases, std::size_t k_max)
{
    if (k_max == 0)
        throw Error(ErrorKind::config, "k_max must be positive");
    EvalReport report;
    report.method = method;
    report.k_max = k_max;
    report.precision.assign(k_max, 0.0);
    report.recall.assign(k_max, 0.0);
    report.precision_bound.assign(k_max, 0.0);
    report.recall_bound.assign(k_max, 0.0);
    for (const auto& item : cases) {
        if (item.truth.empty()) {
            ++report.skipped;
            continue;
        }
        const Ranking r = recommender(item, k_max);
        auto curve = pr_at_k(r, item.truth, k_max);
        const auto bounds = upper_bounds(item.truth.size(), k_max);
        for (std::size_t i = 0; i < k_max; ++i) {
            report.precision[i] += curve.precision[i];
            report.recall[i] += curve.recall[i];
            report.precision_bound[i] += bounds.precision[i];
            report.recall_bound[i] += bounds.recall[i];
        }
        report.per_article.push_back(std::move(curve));
        ++report.evaluated;
    }
    if (report.evaluated == 0)
        throw Error("no evaluable articles for method " + method);
    const auto n = static_cast<double>(report.evaluated);
    for (std::size_t i = 0; i < k_max; ++i) {
        report.precision[i] /= n;
        report.recall[i] /= n;
        report.precision_bound[i] /= n;
        report.recall_bound[i] /= n;
    }
    return report;
}

RandomRecommender::RandomRecommender(std::vector<std::string> vocabulary, std::uint64_t seed)
    : vocabulary_(std::move(vocabulary)), seed_(seed)
{
    std::sort(vocabulary_.begin(), vocabulary_.end());
    vocabulary_.erase(std::unique(vocabulary_.begin(), vocabulary_.end()), vocabulary_.end());
}

Ranking RandomRecommender::operator()(const EvalCase& item, std::size_t k) const
{
    const std::uint64_t article = item.article ? static_cast<std::uint64_t>(item.article->id) : 0;
    Rng rng(derive_seed(seed_ ^ (article * 0x9E3779B97F4A7C15ULL), "random"));
    // Partial Fisher-Yates: only the first k positions are needed.
    std::vector<std::size_t> idx(vocabulary_.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = i;
    const std::size_t n = std::min(k, idx.size());
    Ranking out;
    out.method = "random";
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + rng.index(idx.size() - i);
        std::swap(idx[i], idx[j]);
        out.items.push_back({vocabulary_[idx[i]], 1.0 / static_cast<double>(i + 1)});
    }
    if (out.items.empty())
        out.flag = "empty vocabulary";
    return out;
}

double expected_random_precision(const std::set<std::string>& truth,
                                 const std::vector<std::string>& vocabulary)
{
    if (vocabulary.empty())
        return 0.0;
    std::set<std::string> vocab(vocabulary.begin(), vocabulary.end());
    std::size_t inside = 0;
    for (const auto& s : truth)
        inside += vocab.count(s);
    return static_cast<double>(inside) / static_cast<double>(vocab.size());
}

std::string format_report_table(const std::vector<EvalReport>& reports)
{
    std::ostringstream out;
    out << std::left << std::setw(16) << "method" << std::right << std::setw(5) << "k"
        << std::setw(11) << "precision" << std::setw(11) << "recall"
        << std::setw(11) << "p_bound" << std::setw(11) << "r_bound" << '\n';
    out << std::fixed << std::setprecision(4);
    for (const auto& r : reports) {
        for (std::size_t i = 0; i < r.k_max; ++i)
            out << std::left << std::setw(16) << r.method << std::right << std::setw(5) << i + 1
                << std::setw(11) << r.precision[i] << std::setw(11) << r.recall[i]
                << std::setw(11) << r.precision_bound[i] << std::setw(11) << r.recall_bound[i]
                << '\n';
        out << "# " << r.method << ": " << r.evaluated << " evaluated, " << r.skipped << " skipped\n";
    }
    return out.str();
}

void write_report_rows(const std::vector<EvalReport>& reports, const std::filesystem::path& path,
                       const std::string& header)
{
    auto out = open_output(path);
    out << comment_block(header);
    for (const auto& r : reports) {
        out << "# " << r.method << " evaluated " << r.evaluated << " skipped " << r.skipped << '\n';
        for (std::size_t i = 0; i < r.k_max; ++i)
            out << r.method << '\t' << i + 1 << '\t' << format_double(r.precision[i]) << '\t'
                << format_double(r.recall[i]) << '\t' << format_double(r.precision_bound[i])
                << '\t' << format_double(r.recall_bound[i]) << '\n';
    }
}

void write_report_csv(const std::vector<EvalReport>& reports, const std::filesystem::path& path,
                      const std::string& header)
{
    auto out = open_output(path);
    out << comment_block(header);
    out << "method,k,precision,recall\n";
    for (const auto& r : reports)
        for (std::size_t i = 0; i < r.k_max; ++i)
            out << r.method << ',' << i + 1 << ',' << format_double(r.precision[i]) << ','
                << format_double(r.recall[i]) << '\n';
}

void export_annotation_tasks(const std::vector<AnnotationTask>& tasks,
                             const std::filesystem::path& path, const std::string& header)
{
    for (const auto& t : tasks)
        if (t.sections.size() > 10)
            throw Error(ErrorKind::invalid_input, "annotation task for article "
                        + std::to_string(t.article) + " has more than 10 sections");
    auto out = open_output(path);
    out << comment_block(header);
    for (const auto& t : tasks)
        for (std::size_t i = 0; i < t.sections.size(); ++i)
            out << t.article << '\t' << i + 1 << '\t' << t.sections[i] << '\n';
    if (!out)
        throw Error("cannot write " + path.string());
}

std::vector<AnnotationTask> load_annotation_tasks(const std::filesystem::path& path)
{
    auto in = open_input(path);
    std::vector<AnnotationTask> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        const auto f = split(line, '\t');
        if (f.size() != 3)
            throw Error(path.string() + ": malformed annotation task line");
        const ArticleId id = parse_int(f[0]);
        const auto rank = static_cast<std::size_t>(parse_int(f[1]));
        if (out.empty() || out.back().article != id)
            out.push_back({id, {}});
        if (rank != out.back().sections.size() + 1)
            throw Error(path.string() + ": ranks out of order for article " + std::to_string(id));
        out.back().sections.emplace_back(f[2]);
    }
    return out;
}

} // namespace sectionrec
