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

/* topics.hpp

   Topic-model recommender: collapsed Gibbs LDA over article tokens, one
   accumulated section table per topic, and mixture-weighted ranking.
*/

#pragma once

#include "sectionrec/corpus.hpp"
#include "sectionrec/ranking.hpp"

#include <filesystem>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace sectionrec {

struct LdaParams {
    int topics = 20;
    /// Document-topic prior; non-positive means 50 / topics.
    double alpha = 0.0;
    double beta = 0.01;
    int train_iterations = 500;
    int infer_iterations = 100;
    std::uint64_t seed = 0;
    std::set<std::string> stop_words;

    double effective_alpha() const { return alpha > 0.0 ? alpha : 50.0 / topics; }
};

class TopicModel {
public:
    int topics() const { return topics_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    std::size_t vocabulary_size() const { return vocab_.size(); }
    const std::vector<std::string>& vocabulary() const { return vocab_; }
    /// -1 for out-of-vocabulary words.
    int word_id(const std::string& word) const;

    /// Token count of `word` assigned to `topic` in the final training state.
    std::int64_t count(int topic, int word) const { return topic_word_[word * topics_ + topic]; }
    std::int64_t topic_total(int topic) const { return topic_totals_[topic]; }
    /// Smoothed p(word | topic).
    double word_weight(int topic, int word) const;

    int infer_iterations() const { return infer_iterations_; }
    std::uint64_t seed() const { return seed_; }

private:
    friend struct TopicModelAccess;

    int topics_ = 0;
    double alpha_ = 0.0;
    double beta_ = 0.0;
    int infer_iterations_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<std::string> vocab_;
    std::unordered_map<std::string, int> word_index_;
    std::vector<std::int64_t> topic_word_;  // [word * topics + topic]
    std::vector<std::int64_t> topic_totals_;
};

struct TopicTraining {
    TopicModel model;
    /// Per training document, (n_dk + alpha) / (N_d + K alpha) at the end.
    std::vector<std::vector<double>> mixtures;
};

using Document = std::vector<std::string>;

TopicTraining train_topic_model(const std::vector<Document>& documents, const LdaParams& params);

struct Mixture {
    std::vector<double> weights;
    /// Set when the document had no in-vocabulary token (weights uniform).
    bool fallback = false;
};

/// Seeded Gibbs inference with the topic-word counts held fixed; the result
/// averages the mixture over the second half of the sweeps.
Mixture infer_mixture(const TopicModel& model, const Document& document);

struct TopicSectionTable {
    /// One map per topic from section title to accumulated weight.
    std::vector<std::unordered_map<std::string, double>> tables;
};

/// Adds weights[i] to table i for every title in `sections` (distinct).
void accumulate_sections(TopicSectionTable& table, const std::vector<double>& weights,
                         const std::vector<std::string>& sections);

/// For every article and every distinct section in it, adds the article's
/// topic-i weight to table i.
TopicSectionTable build_topic_section_table(const TopicModel& model,
                                            const ArticleRefs& train_articles);

Ranking recommend_topic(const TopicSectionTable& table, const Mixture& mixture,
                        std::size_t k,
                        const std::unordered_set<std::string>& exclude = {});
Ranking recommend_topic(const TopicSectionTable& table, const TopicModel& model,
                        const Article& article, std::size_t k, bool exclude_existing);

void write_topic_model(const TopicModel& model, const std::filesystem::path& path,
                       const std::string& header = {});
TopicModel load_topic_model(const std::filesystem::path& path);

void write_topic_section_table(const TopicSectionTable& table,
                               const std::filesystem::path& path,
                               const std::string& header = {});
TopicSectionTable load_topic_section_table(const std::filesystem::path& path, int topics);

} // namespace sectionrec
