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

#include "sectionrec/corpus.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sectionrec {

namespace {

using json = nlohmann::json;

bool is_space(char c)
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

void check_malformed_rate(std::size_t malformed, std::size_t lines,
                          const std::filesystem::path& path)
{
    // Tolerated up to 1% of lines.
    if (malformed * 100 > lines)
        throw Error(ErrorKind::invalid_input,
                    path.string() + ": " + std::to_string(malformed) + " of "
                        + std::to_string(lines) + " lines malformed (over 1%)");
}

/// Parses one JSON record; returns nullopt for malformed lines.
std::optional<Article> parse_article(const std::string& line, LoadReport& report)
{
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        return std::nullopt;
    try {
        Article a;
        a.id = j.at("id").get<ArticleId>();
        a.title = j.at("title").get<std::string>();
        a.tokens = j.at("tokens").get<std::vector<std::string>>();
        for (const auto& raw : j.at("sections")) {
            try {
                a.sections.push_back(normalize_title(raw.get<std::string>()));
            } catch (const Error&) {
                ++report.dropped_sections;
            }
        }
        a.categories = j.at("categories").get<std::vector<CategoryId>>();
        a.is_stub = j.at("is_stub").get<bool>();
        if (auto it = j.find("quality"); it != j.end() && !it->is_null())
            a.quality = it->get<std::string>();
        std::sort(a.categories.begin(), a.categories.end());
        a.categories.erase(std::unique(a.categories.begin(), a.categories.end()),
                           a.categories.end());
        return a;
    } catch (const json::exception&) {
        return std::nullopt;
    }
}

Corpus read_articles(const std::filesystem::path& path, const CategoryFile* categories)
{
    auto in = open_input(path);
    Corpus corpus;
    std::set<ArticleId> seen;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        ++corpus.report.article_lines;
        auto article = parse_article(line, corpus.report);
        if (!article) {
            ++corpus.report.malformed_article_lines;
            continue;
        }
        if (!seen.insert(article->id).second)
            throw Error(ErrorKind::invalid_input,
                        path.string() + ": duplicate article id " + std::to_string(article->id));
        if (categories) {
            const auto before = article->categories.size();
            std::erase_if(article->categories, [&](CategoryId c) {
                return categories->names.count(c) == 0;
            });
            corpus.report.dropped_categories += before - article->categories.size();
        }
        corpus.articles.push_back(std::move(*article));
    }
    check_malformed_rate(corpus.report.malformed_article_lines, corpus.report.article_lines, path);
    corpus.provenance = path.filename().string();
    corpus.reindex();
    return corpus;
}

} // namespace

std::vector<std::string> Article::distinct_sections() const
{
    std::vector<std::string> out = sections;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void Corpus::reindex()
{
    index_.clear();
    index_.reserve(articles.size());
    for (std::size_t i = 0; i < articles.size(); ++i)
        index_.emplace(articles[i].id, i);
}

const Article* Corpus::find(ArticleId id) const
{
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &articles[it->second];
}

ArticleRefs select_articles(const Corpus& corpus, const std::vector<ArticleId>& ids)
{
    ArticleRefs out;
    out.reserve(ids.size());
    for (auto id : ids)
        if (const Article* a = corpus.find(id))
            out.push_back(a);
    return out;
}

std::string normalize_title(std::string_view raw)
{
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char c : raw) {
        if (is_space(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out += ' ';
            pending_space = false;
        }
        out += c;
    }
    if (out.empty())
        throw Error(ErrorKind::invalid_input, "invalid section title: empty after normalization");
    return out;
}

const std::vector<std::string>& default_blacklist()
{
    static const std::vector<std::string> titles = {
        "References",          "External links",        "See also",
        "Notes",               "Further reading",       "Bibliography",
        "Sources",             "Footnotes",             "Notes and references",
        "References and notes", "External sources",     "Links",
        "References and sources", "External Links",
    };
    return titles;
}

std::set<std::string> load_blacklist(const std::filesystem::path& path)
{
    auto in = open_input(path);
    std::set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        try {
            out.insert(normalize_title(line));
        } catch (const Error&) {
        }
    }
    return out;
}

/*****************************************************************************/
/* CATEGORY FILE                                                             */
/*****************************************************************************/

// Layout: a "[categories]" block of `id<TAB>name` lines followed by an
// "[edges]" block of `child_id<TAB>parent_id` lines.

CategoryFile load_category_file(const std::filesystem::path& path)
{
    auto in = open_input(path);
    CategoryFile file;
    enum class Block { none, categories, edges } block = Block::none;
    std::size_t lines = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line == "[categories]") {
            block = Block::categories;
            continue;
        }
        if (line == "[edges]") {
            block = Block::edges;
            continue;
        }
        if (line.empty() || line[0] == '#')
            continue;
        ++lines;
        auto fields = split(line, '\t');
        try {
            if (fields.size() != 2 || block == Block::none)
                throw Error("bad field count");
            if (block == Block::categories) {
                file.names[parse_int(fields[0])] = std::string(fields[1]);
            } else {
                file.edges.emplace_back(parse_int(fields[0]), parse_int(fields[1]));
            }
        } catch (const Error&) {
            ++file.malformed_lines;
        }
    }
    check_malformed_rate(file.malformed_lines, lines, path);

    // Edges naming unknown categories are dropped with the malformed count.
    const auto before = file.edges.size();
    std::erase_if(file.edges, [&](const auto& e) {
        return file.names.count(e.first) == 0 || file.names.count(e.second) == 0;
    });
    file.malformed_lines += before - file.edges.size();
    std::sort(file.edges.begin(), file.edges.end());
    file.edges.erase(std::unique(file.edges.begin(), file.edges.end()), file.edges.end());
    return file;
}

void write_category_file(const CategoryFile& file, const std::filesystem::path& path,
                         const std::string& header)
{
    auto out = open_output(path);
    out << comment_block(header);
    out << "[categories]\n";
    for (const auto& [id, name] : file.names)
        out << id << '\t' << name << '\n';
    out << "[edges]\n";
    for (const auto& [child, parent] : file.edges)
        out << child << '\t' << parent << '\n';
}

/*****************************************************************************/
/* ARTICLES                                                                  */
/*****************************************************************************/

Corpus load_corpus(const std::filesystem::path& articles_path,
                   const CategoryFile& categories)
{
    Corpus corpus = read_articles(articles_path, &categories);
    corpus.report.malformed_category_lines = categories.malformed_lines;
    return corpus;
}

Corpus load_corpus(const std::filesystem::path& articles_path,
                   const std::filesystem::path& categories_path)
{
    return load_corpus(articles_path, load_category_file(categories_path));
}

Corpus load_articles(const std::filesystem::path& articles_path)
{
    return read_articles(articles_path, nullptr);
}

std::string article_to_json_line(const Article& a)
{
    json j;
    j["id"] = a.id;
    j["title"] = a.title;
    j["tokens"] = a.tokens;
    j["sections"] = a.sections;
    j["categories"] = a.categories;
    j["is_stub"] = a.is_stub;
    if (a.quality)
        j["quality"] = *a.quality;
    return j.dump();
}

void write_articles(const std::vector<Article>& articles,
                    const std::filesystem::path& path,
                    const std::string& header)
{
    auto out = open_output(path);
    out << comment_block(header);
    for (const auto& a : articles)
        out << article_to_json_line(a) << '\n';
}

/*****************************************************************************/
/* FILTER / SPLIT / STATS                                                    */
/*****************************************************************************/

Corpus filter_corpus(const Corpus& corpus,
                     const std::set<std::string>& blacklist,
                     FilterOptions options)
{
    Corpus out;
    out.blacklist = blacklist;
    out.provenance = corpus.provenance;
    out.report = corpus.report;

    for (const auto& a : corpus.articles) {
        if (options.drop_stubs && a.is_stub)
            continue;
        Article copy = a;
        std::erase_if(copy.sections, [&](const std::string& s) {
            return blacklist.count(s) > 0;
        });
        out.articles.push_back(std::move(copy));
    }

    if (options.drop_unique) {
        std::unordered_map<std::string, std::size_t> occurrences;
        for (const auto& a : out.articles)
            for (const auto& s : a.distinct_sections())
                ++occurrences[s];
        for (auto& a : out.articles) {
            std::erase_if(a.sections, [&](const std::string& s) {
                return occurrences[s] == 1;
            });
        }
    }
    out.reindex();
    return out;
}

SplitAssignment::Part SplitAssignment::part_of(ArticleId id) const
{
    if (std::binary_search(train.begin(), train.end(), id))
        return Part::train;
    if (std::binary_search(test.begin(), test.end(), id))
        return Part::test;
    if (std::binary_search(validation.begin(), validation.end(), id))
        return Part::validation;
    return Part::none;
}

SplitAssignment split_corpus(const Corpus& corpus, SplitRatios ratios, std::uint64_t seed)
{
    const double total = ratios.train + ratios.test + ratios.validation;
    if (ratios.train < 0 || ratios.test < 0 || ratios.validation < 0
        || std::abs(total - 1.0) > 1e-9)
        throw Error(ErrorKind::config, "split ratios must be non-negative and sum to 1");

    std::vector<ArticleId> ids;
    ids.reserve(corpus.articles.size());
    for (const auto& a : corpus.articles)
        ids.push_back(a.id);
    std::sort(ids.begin(), ids.end());
    Rng rng(derive_seed(seed, "split"));
    rng.shuffle(ids);

    const std::size_t n = ids.size();
    const auto n_train = static_cast<std::size_t>(std::floor(ratios.train * n + 0.5));
    const auto n_test = std::min(n - n_train,
                                 static_cast<std::size_t>(std::floor(ratios.test * n + 0.5)));

    SplitAssignment split;
    split.seed = seed;
    split.train.assign(ids.begin(), ids.begin() + n_train);
    split.test.assign(ids.begin() + n_train, ids.begin() + n_train + n_test);
    split.validation.assign(ids.begin() + n_train + n_test, ids.end());
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    std::sort(split.validation.begin(), split.validation.end());
    return split;
}

void write_split(const SplitAssignment& split, const std::filesystem::path& path,
                 const std::string& header)
{
    auto out = open_output(path);
    out << comment_block(header);
    out << "# seed " << split.seed << '\n';
    for (auto id : split.train)
        out << id << "\ttrain\n";
    for (auto id : split.test)
        out << id << "\ttest\n";
    for (auto id : split.validation)
        out << id << "\tvalidation\n";
}

SplitAssignment load_split(const std::filesystem::path& path)
{
    auto in = open_input(path);
    SplitAssignment split;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("# seed ", 0) == 0) {
            split.seed = parse_uint(line.substr(7));
            continue;
        }
        if (line.empty() || line[0] == '#')
            continue;
        auto fields = sectionrec::split(line, '\t');
        if (fields.size() != 2)
            throw Error(ErrorKind::invalid_input, path.string() + ": malformed split line");
        const ArticleId id = parse_int(fields[0]);
        if (fields[1] == "train")
            split.train.push_back(id);
        else if (fields[1] == "test")
            split.test.push_back(id);
        else if (fields[1] == "validation")
            split.validation.push_back(id);
        else
            throw Error(ErrorKind::invalid_input, path.string() + ": unknown split part");
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    std::sort(split.validation.begin(), split.validation.end());
    return split;
}

CorpusStats corpus_stats(const Corpus& corpus)
{
    CorpusStats stats;
    stats.article_count = corpus.articles.size();
    if (corpus.articles.empty())
        return stats;
    std::set<std::string> titles;
    std::size_t total = 0, stubs = 0;
    for (const auto& a : corpus.articles) {
        ++stats.sections_per_article[a.sections.size()];
        total += a.sections.size();
        stubs += a.is_stub ? 1 : 0;
        titles.insert(a.sections.begin(), a.sections.end());
    }
    const double n = static_cast<double>(corpus.articles.size());
    stats.mean_sections = static_cast<double>(total) / n;
    stats.stub_fraction = static_cast<double>(stubs) / n;
    stats.unique_title_count = titles.size();
    return stats;
}

} // namespace sectionrec
