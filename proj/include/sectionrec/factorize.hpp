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

/* factorize.hpp

   Alternating least squares over sparse ratings:

     explicit  article x section, absent cells unobserved,
               loss = sum_obs (m - u.v)^2 + lambda (|U|^2 + |V|^2)
     implicit  category x section, every cell observed with preference
               p = [r > 0] and confidence c = 1 + alpha r
*/

#pragma once

#include "sectionrec/corpus.hpp"
#include "sectionrec/counts.hpp"
#include "sectionrec/ranking.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace sectionrec {

enum class FeedbackMode { explicit_feedback, implicit_feedback };

struct MatrixEntry {
    int col = 0;
    double value = 0.0;
};

/// Row-major sparse ratings with labelled rows and columns.
class RatingsMatrix {
public:
    RatingsMatrix() = default;
    RatingsMatrix(FeedbackMode mode, std::vector<std::string> col_labels);

    FeedbackMode mode() const { return mode_; }
    std::size_t rows() const { return row_labels_.size(); }
    std::size_t cols() const { return col_labels_.size(); }
    std::size_t nnz() const;

    /// Entries are sorted by column; duplicate columns are rejected.
    void add_row(std::int64_t label, std::vector<MatrixEntry> entries);

    const std::vector<std::int64_t>& row_labels() const { return row_labels_; }
    const std::vector<std::string>& col_labels() const { return col_labels_; }
    const std::vector<MatrixEntry>& row(std::size_t i) const { return rows_[i]; }
    /// -1 when absent.
    int row_index(std::int64_t label) const;
    int col_index(const std::string& label) const;

private:
    FeedbackMode mode_ = FeedbackMode::explicit_feedback;
    std::vector<std::int64_t> row_labels_;
    std::vector<std::string> col_labels_;
    std::vector<std::vector<MatrixEntry>> rows_;
    std::unordered_map<std::int64_t, int> row_index_;
    std::unordered_map<std::string, int> col_index_;
};

/// Test-row sections hidden from the matrix, plus the ones left visible.
struct HoldoutMap {
    std::map<ArticleId, std::vector<std::string>> held_out;
    std::map<ArticleId, std::vector<std::string>> visible;
};

struct ArticleMatrix {
    RatingsMatrix matrix;
    HoldoutMap holdout;
};

/// Rows for every non-test article with sections (all sections), plus test
/// articles with at least `min_sections` distinct sections, of which a
/// seeded `holdout_fraction` share is hidden (at least one hidden, at least
/// one kept).
ArticleMatrix build_article_matrix(const Corpus& corpus, const SplitAssignment& split,
                                   double holdout_fraction, std::size_t min_sections,
                                   std::uint64_t seed);

/// Top `top_n` sections of every category by P(S|C), rows scaled to sum 1.
RatingsMatrix build_category_matrix(const ScoreTable& table, std::size_t top_n = 100);

struct AlsParams {
    int rank = 32;
    double lambda = 0.1;
    double alpha = 40.0;
    int iterations = 15;
    std::uint64_t seed = 0;
};

struct FactorModel {
    FeedbackMode mode = FeedbackMode::explicit_feedback;
    AlsParams params;
    Eigen::MatrixXd row_factors;  // rows x rank
    Eigen::MatrixXd col_factors;  // cols x rank
    std::vector<std::int64_t> row_labels;
    std::vector<std::string> col_labels;
    /// Objective after each full iteration.
    std::vector<double> loss_trace;

    int row_index(std::int64_t label) const;
    Eigen::VectorXd predict_row(std::int64_t label) const;
};

FactorModel als_explicit(const RatingsMatrix& matrix, const AlsParams& params);
FactorModel als_implicit(const RatingsMatrix& matrix, const AlsParams& params);

struct LambdaSearch {
    double best = 0.0;
    /// (lambda, mean precision@k over validation holdouts), grid order.
    std::vector<std::pair<double, double>> scores;
};

/// Explicit-mode regularization chosen on the validation split: validation
/// rows get the test-row holdout treatment, test articles are left out, and
/// each lambda in `grid` is scored by precision@k on the hidden sections.
/// Ties keep the earlier grid value.
LambdaSearch select_explicit_lambda(const Corpus& corpus, const SplitAssignment& split,
                                    double holdout_fraction, std::size_t min_sections,
                                    const AlsParams& base, const std::vector<double>& grid,
                                    std::size_t k);

/// Scores u_row . V^T, exclusions dropped, top k.
Ranking recommend_from_model(const FactorModel& model, std::int64_t row_label,
                             std::size_t k,
                             const std::unordered_set<std::string>& exclusions = {});

/// Per-category top `depth` predictions packaged as a score table, so the
/// count-based merge and the learned merge apply unchanged. Member counts
/// are copied from `counts` when present.
ScoreTable score_table_from_model(const FactorModel& model, std::size_t depth,
                                  const ScoreTable& counts);

void write_factor_model(const FactorModel& model, const std::filesystem::path& prefix,
                        const std::string& header = {});
FactorModel load_factor_model(const std::filesystem::path& prefix);

void write_holdout(const HoldoutMap& holdout, const std::filesystem::path& path,
                   const std::string& header = {});
HoldoutMap load_holdout(const std::filesystem::path& path);

} // namespace sectionrec
