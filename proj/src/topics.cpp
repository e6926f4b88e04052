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

#include "sectionrec/topics.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace sectionrec {

struct TopicModelAccess {
    static TopicModel& self(TopicModel& m) { return m; }
    static auto& topics(TopicModel& m) { return m.topics_; }
    static auto& alpha(TopicModel& m) { return m.alpha_; }
    static auto& beta(TopicModel& m) { return m.beta_; }
    static auto& infer_iterations(TopicModel& m) { return m.infer_iterations_; }
    static auto& seed(TopicModel& m) { return m.seed_; }
    static auto& vocab(TopicModel& m) { return m.vocab_; }
    static auto& word_index(TopicModel& m) { return m.word_index_; }
    static auto& topic_word(TopicModel& m) { return m.topic_word_; }
    static auto& topic_totals(TopicModel& m) { return m.topic_totals_; }
};

using Access = TopicModelAccess;

int TopicModel::word_id(const std::string& word) const
{
    auto it = word_index_.find(word);
    return it == word_index_.end() ? -1 : it->second;
}

double TopicModel::word_weight(int topic, int word) const
{
    const double v = static_cast<double>(vocab_.size());
    return (static_cast<double>(count(topic, word)) + beta_)
         / (static_cast<double>(topic_totals_[topic]) + v * beta_);
}

namespace {

/// Draws an index from unnormalized cumulative weights.
int sample_cumulative(const std::vector<double>& cumulative, Rng& rng)
{
    const double u = rng.uniform() * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                                     static_cast<std::ptrdiff_t>(cumulative.size()) - 1));
}

} // namespace

TopicTraining train_topic_model(const std::vector<Document>& documents, const LdaParams& params)
{
    if (params.topics < 1)
        throw Error(ErrorKind::config, "topic count must be at least 1");
    if (documents.empty())
        throw Error("topic model needs at least one document");
    if (params.beta <= 0.0)
        throw Error(ErrorKind::config, "beta must be positive");

    TopicTraining out;
    TopicModel& model = out.model;
    const int K = params.topics;
    Access::topics(model) = K;
    Access::alpha(model) = params.effective_alpha();
    Access::beta(model) = params.beta;
    Access::infer_iterations(model) = params.infer_iterations;
    Access::seed(model) = params.seed;

    // Vocabulary in sorted order so ids do not depend on document order.
    std::set<std::string> words;
    for (const auto& d : documents)
        for (const auto& w : d)
            if (!params.stop_words.count(w))
                words.insert(w);
    if (words.empty())
        throw Error("topic model vocabulary is empty");
    auto& vocab = Access::vocab(model);
    vocab.assign(words.begin(), words.end());
    auto& index = Access::word_index(model);
    for (std::size_t i = 0; i < vocab.size(); ++i)
        index.emplace(vocab[i], static_cast<int>(i));

    std::vector<std::vector<int>> doc_words(documents.size());
    for (std::size_t d = 0; d < documents.size(); ++d)
        for (const auto& w : documents[d])
            if (auto it = index.find(w); it != index.end())
                doc_words[d].push_back(it->second);

    const double alpha = model.alpha();
    const double beta = params.beta;
    const double vbeta = beta * static_cast<double>(vocab.size());
    auto& nkw = Access::topic_word(model);
    auto& nk = Access::topic_totals(model);
    nkw.assign(vocab.size() * K, 0);
    nk.assign(K, 0);
    std::vector<std::vector<std::int64_t>> ndk(documents.size(), std::vector<std::int64_t>(K, 0));
    std::vector<std::vector<int>> z(documents.size());

    Rng rng(derive_seed(params.seed, "lda-train"));
    for (std::size_t d = 0; d < doc_words.size(); ++d) {
        z[d].resize(doc_words[d].size());
        for (std::size_t i = 0; i < doc_words[d].size(); ++i) {
            const int k = static_cast<int>(rng.index(K));
            z[d][i] = k;
            ++ndk[d][k];
            ++nkw[doc_words[d][i] * K + k];
            ++nk[k];
        }
    }

    std::vector<double> cumulative(K);
    for (int iter = 0; iter < params.train_iterations; ++iter) {
        for (std::size_t d = 0; d < doc_words.size(); ++d) {
            for (std::size_t i = 0; i < doc_words[d].size(); ++i) {
                const int w = doc_words[d][i];
                int k = z[d][i];
                --ndk[d][k];
                --nkw[w * K + k];
                --nk[k];
                double acc = 0.0;
                for (int t = 0; t < K; ++t) {
                    acc += (static_cast<double>(ndk[d][t]) + alpha)
                         * (static_cast<double>(nkw[w * K + t]) + beta)
                         / (static_cast<double>(nk[t]) + vbeta);
                    cumulative[t] = acc;
                }
                k = sample_cumulative(cumulative, rng);
                z[d][i] = k;
                ++ndk[d][k];
                ++nkw[w * K + k];
                ++nk[k];
            }
        }
    }

    out.mixtures.resize(documents.size());
    for (std::size_t d = 0; d < documents.size(); ++d) {
        const double denom = static_cast<double>(doc_words[d].size()) + K * alpha;
        out.mixtures[d].resize(K);
        for (int k = 0; k < K; ++k)
            out.mixtures[d][k] = (static_cast<double>(ndk[d][k]) + alpha) / denom;
    }
    return out;
}

Mixture infer_mixture(const TopicModel& model, const Document& document)
{
    const int K = model.topics();
    Mixture out;
    std::vector<int> words;
    for (const auto& w : document)
        if (int id = model.word_id(w); id >= 0)
            words.push_back(id);
    if (words.empty()) {
        out.weights.assign(K, 1.0 / K);
        out.fallback = true;
        return out;
    }

    const double alpha = model.alpha();
    Rng rng(derive_seed(model.seed(), "lda-infer"));
    std::vector<int> z(words.size());
    std::vector<std::int64_t> ndk(K, 0);
    for (std::size_t i = 0; i < words.size(); ++i) {
        z[i] = static_cast<int>(rng.index(K));
        ++ndk[z[i]];
    }

    // Fixed phi for the held-out document.
    std::vector<double> phi(words.size() * K);
    for (std::size_t i = 0; i < words.size(); ++i)
        for (int k = 0; k < K; ++k)
            phi[i * K + k] = model.word_weight(k, words[i]);

    const int sweeps = std::max(1, model.infer_iterations());
    const int burn_in = sweeps / 2;
    std::vector<double> acc(K, 0.0), cumulative(K);
    int samples = 0;
    const double denom = static_cast<double>(words.size()) + K * alpha;
    for (int s = 0; s < sweeps; ++s) {
        for (std::size_t i = 0; i < words.size(); ++i) {
            --ndk[z[i]];
            double total = 0.0;
            for (int k = 0; k < K; ++k) {
                total += (static_cast<double>(ndk[k]) + alpha) * phi[i * K + k];
                cumulative[k] = total;
            }
            z[i] = sample_cumulative(cumulative, rng);
            ++ndk[z[i]];
        }
        if (s >= burn_in) {
            for (int k = 0; k < K; ++k)
                acc[k] += (static_cast<double>(ndk[k]) + alpha) / denom;
            ++samples;
        }
    }
    const double sum = std::accumulate(acc.begin(), acc.end(), 0.0);
    out.weights.resize(K);
    for (int k = 0; k < K; ++k)
        out.weights[k] = acc[k] / sum;
    return out;
}

void accumulate_sections(TopicSectionTable& table, const std::vector<double>& weights,
                         const std::vector<std::string>& sections)
{
    if (weights.size() != table.tables.size())
        throw Error(ErrorKind::runtime, "mixture and topic table disagree on topic count");
    for (const auto& s : sections)
        for (std::size_t k = 0; k < weights.size(); ++k)
            table.tables[k][s] += weights[k];
}

TopicSectionTable build_topic_section_table(const TopicModel& model,
                                            const ArticleRefs& train_articles)
{
    TopicSectionTable table;
    table.tables.resize(model.topics());
    for (const Article* a : train_articles) {
        if (!a->has_sections())
            continue;
        accumulate_sections(table, infer_mixture(model, a->tokens).weights, a->distinct_sections());
    }
    return table;
}

Ranking recommend_topic(const TopicSectionTable& table, const Mixture& mixture,
                        std::size_t k, const std::unordered_set<std::string>& exclude)
{
    if (mixture.weights.size() != table.tables.size())
        throw Error(ErrorKind::runtime, "mixture and topic table disagree on topic count");
    std::map<std::string, double> scores;
    for (std::size_t t = 0; t < table.tables.size(); ++t) {
        if (mixture.weights[t] == 0.0)
            continue;
        for (const auto& [s, w] : table.tables[t])
            scores[s] += mixture.weights[t] * w;
    }
    std::vector<ScoredSection> candidates;
    candidates.reserve(scores.size());
    for (const auto& [s, v] : scores)
        candidates.push_back({s, v});
    Ranking out = top_k("topics", std::move(candidates), k, exclude);
    if (mixture.fallback)
        out.flag = "no in-vocabulary tokens; uniform topic mixture";
    return out;
}

Ranking recommend_topic(const TopicSectionTable& table, const TopicModel& model,
                        const Article& article, std::size_t k, bool exclude_existing)
{
    std::unordered_set<std::string> exclude;
    if (exclude_existing)
        exclude.insert(article.sections.begin(), article.sections.end());
    return recommend_topic(table, infer_mixture(model, article.tokens), k, exclude);
}

/*****************************************************************************/
/* PERSISTENCE                                                               */
/*****************************************************************************/

void write_topic_model(const TopicModel& model, const std::filesystem::path& path,
                       const std::string& header)
{
    auto out = open_output(path);
    out << comment_block(header);
    out << "# topics " << model.topics() << '\n';
    out << "# alpha " << format_double(model.alpha()) << '\n';
    out << "# beta " << format_double(model.beta()) << '\n';
    out << "# infer_iterations " << model.infer_iterations() << '\n';
    out << "# seed " << model.seed() << '\n';
    for (std::size_t w = 0; w < model.vocabulary_size(); ++w) {
        out << model.vocabulary()[w];
        for (int k = 0; k < model.topics(); ++k)
            out << '\t' << model.count(k, static_cast<int>(w));
        out << '\n';
    }
}

TopicModel load_topic_model(const std::filesystem::path& path)
{
    auto in = open_input(path);
    TopicModel model;
    std::string line;
    auto meta = [&](const char* key, auto& field, auto parse) {
        const std::string prefix = std::string("# ") + key + " ";
        if (line.rfind(prefix, 0) != 0)
            return false;
        field = static_cast<std::decay_t<decltype(field)>>(parse(line.substr(prefix.size())));
        return true;
    };
    auto& K = Access::topics(model);
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        if (line[0] == '#') {
            meta("topics", K, parse_int) || meta("alpha", Access::alpha(model), parse_double)
                || meta("beta", Access::beta(model), parse_double)
                || meta("infer_iterations", Access::infer_iterations(model), parse_int)
                || meta("seed", Access::seed(model), parse_uint);
            continue;
        }
        if (K <= 0)
            throw Error(path.string() + ": topic count missing from header");
        auto f = split(line, '\t');
        if (f.size() != static_cast<std::size_t>(K) + 1)
            throw Error(path.string() + ": wrong topic-word row width");
        const int w = static_cast<int>(Access::vocab(model).size());
        Access::vocab(model).emplace_back(f[0]);
        Access::word_index(model).emplace(std::string(f[0]), w);
        for (int k = 0; k < K; ++k)
            Access::topic_word(model).push_back(parse_int(f[k + 1]));
    }
    Access::topic_totals(model).assign(K, 0);
    for (std::size_t w = 0; w < model.vocabulary_size(); ++w)
        for (int k = 0; k < K; ++k)
            Access::topic_totals(model)[k] += model.count(k, static_cast<int>(w));
    return model;
}

void write_topic_section_table(const TopicSectionTable& table,
                               const std::filesystem::path& path, const std::string& header)
{
    auto out = open_output(path);
    out << comment_block(header);
    for (std::size_t t = 0; t < table.tables.size(); ++t) {
        std::map<std::string, double> sorted(table.tables[t].begin(), table.tables[t].end());
        for (const auto& [s, w] : sorted)
            out << t << '\t' << s << '\t' << format_double(w) << '\n';
    }
}

TopicSectionTable load_topic_section_table(const std::filesystem::path& path, int topics)
{
    auto in = open_input(path);
    TopicSectionTable table;
    table.tables.resize(topics);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        auto f = split(line, '\t');
        if (f.size() != 3)
            throw Error(path.string() + ": malformed topic-section line");
        const auto t = parse_int(f[0]);
        if (t < 0 || t >= topics)
            throw Error(path.string() + ": topic id out of range");
        table.tables[t][std::string(f[1])] = parse_double(f[2]);
    }
    return table;
}

} // namespace sectionrec
