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

#include "sectionrec/factorize.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace sectionrec {

/*****************************************************************************/
/* RATINGS MATRIX                                                            */
/*****************************************************************************/

RatingsMatrix::RatingsMatrix(FeedbackMode mode, std::vector<std::string> col_labels)
    : mode_(mode), col_labels_(std::move(col_labels))
{
    for (std::size_t j = 0; j < col_labels_.size(); ++j)
        if (!col_index_.emplace(col_labels_[j], static_cast<int>(j)).second)
            throw Error("duplicate column label: " + col_labels_[j]);
}

std::size_t RatingsMatrix::nnz() const
{
    std::size_t n = 0;
    for (const auto& r : rows_)
        n += r.size();
    return n;
}

void RatingsMatrix::add_row(std::int64_t label, std::vector<MatrixEntry> entries)
{
    std::sort(entries.begin(), entries.end(),
              [](const MatrixEntry& a, const MatrixEntry& b) { return a.col < b.col; });
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].col < 0 || static_cast<std::size_t>(entries[i].col) >= cols())
            throw Error("column index out of range");
        if (i > 0 && entries[i].col == entries[i - 1].col)
            throw Error("duplicate column in row " + std::to_string(label));
    }
    if (!row_index_.emplace(label, static_cast<int>(rows_.size())).second)
        throw Error("duplicate row label " + std::to_string(label));
    row_labels_.push_back(label);
    rows_.push_back(std::move(entries));
}

int RatingsMatrix::row_index(std::int64_t label) const
{
    auto it = row_index_.find(label);
    return it == row_index_.end() ? -1 : it->second;
}

int RatingsMatrix::col_index(const std::string& label) const
{
    auto it = col_index_.find(label);
    return it == col_index_.end() ? -1 : it->second;
}

/*****************************************************************************/
/* BUILDERS                                                                  */
/*****************************************************************************/

ArticleMatrix build_article_matrix(const Corpus& corpus, const SplitAssignment& split,
                                   double holdout_fraction, std::size_t min_sections,
                                   std::uint64_t seed)
{
    if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0))
        throw Error(ErrorKind::config, "holdout fraction must lie in (0, 1)");
    if (min_sections < 2)
        throw Error(ErrorKind::config, "test rows need at least two sections");

    ArticleMatrix out;
    std::vector<std::pair<ArticleId, std::vector<std::string>>> rows;
    std::set<std::string> columns;
    for (const auto& a : corpus.articles) {
        auto sections = a.distinct_sections();
        if (sections.empty())
            continue;
        if (split.part_of(a.id) == SplitAssignment::Part::test) {
            if (sections.size() < min_sections)
                continue;
            Rng rng(derive_seed(seed, "holdout:" + std::to_string(a.id)));
            rng.shuffle(sections);
            const auto n = sections.size();
            auto hidden = static_cast<std::size_t>(std::llround(static_cast<double>(n) * holdout_fraction));
            hidden = std::clamp<std::size_t>(hidden, 1, n - 1);
            std::vector<std::string> held(sections.begin(), sections.begin() + hidden);
            std::vector<std::string> kept(sections.begin() + hidden, sections.end());
            std::sort(held.begin(), held.end());
            std::sort(kept.begin(), kept.end());
            out.holdout.held_out[a.id] = held;
            out.holdout.visible[a.id] = kept;
            sections = std::move(kept);
        }
        columns.insert(sections.begin(), sections.end());
        rows.emplace_back(a.id, std::move(sections));
    }
    std::sort(rows.begin(), rows.end());

    out.matrix = RatingsMatrix(FeedbackMode::explicit_feedback,
                               std::vector<std::string>(columns.begin(), columns.end()));
    for (auto& [id, sections] : rows) {
        std::vector<MatrixEntry> entries;
        for (const auto& s : sections)
            entries.push_back({out.matrix.col_index(s), 1.0});
        out.matrix.add_row(id, std::move(entries));
    }
    return out;
}

LambdaSearch select_explicit_lambda(const Corpus& corpus, const SplitAssignment& split,
                                    double holdout_fraction, std::size_t min_sections,
                                    const AlsParams& base, const std::vector<double>& grid,
                                    std::size_t k)
{
    if (grid.empty())
        throw Error(ErrorKind::config, "lambda grid is empty");
    if (k == 0)
        throw Error(ErrorKind::config, "k must be positive");
    Corpus visible;
    for (const auto& a : corpus.articles)
        if (split.part_of(a.id) != SplitAssignment::Part::test)
            visible.articles.push_back(a);
    visible.reindex();
    SplitAssignment selection;
    selection.train = split.train;
    selection.test = split.validation;
    selection.seed = split.seed;
    const ArticleMatrix m = build_article_matrix(visible, selection, holdout_fraction, min_sections,
                                                 derive_seed(base.seed, "lambda-search"));
    if (m.holdout.held_out.empty())
        throw Error("no validation rows for the lambda search");

    LambdaSearch out;
    double best_score = -1.0;
    for (double lambda : grid) {
        AlsParams params = base;
        params.lambda = lambda;
        const FactorModel model = als_explicit(m.matrix, params);
        double total = 0.0;
        for (const auto& [id, held] : m.holdout.held_out) {
            const auto& shown = m.holdout.visible.at(id);
            const Ranking r = recommend_from_model(model, id, k, {shown.begin(), shown.end()});
            std::size_t hits = 0;
            for (const auto& item : r.items)
                hits += std::binary_search(held.begin(), held.end(), item.section) ? 1 : 0;
            total += static_cast<double>(hits) / static_cast<double>(k);
        }
        const double score = total / static_cast<double>(m.holdout.held_out.size());
        out.scores.emplace_back(lambda, score);
        if (score > best_score) {
            best_score = score;
            out.best = lambda;
        }
    }
    return out;
}

RatingsMatrix build_category_matrix(const ScoreTable& table, std::size_t top_n)
{
    std::set<std::string> columns;
    for (const auto& [c, scores] : table.categories)
        for (std::size_t i = 0; i < std::min(top_n, scores.ranked.size()); ++i)
            columns.insert(scores.ranked[i].section);

    RatingsMatrix m(FeedbackMode::implicit_feedback,
                    std::vector<std::string>(columns.begin(), columns.end()));
    for (const auto& [c, scores] : table.categories) {
        const std::size_t keep = std::min(top_n, scores.ranked.size());
        double total = 0.0;
        for (std::size_t i = 0; i < keep; ++i)
            total += scores.ranked[i].score;
        if (keep == 0 || total <= 0.0)
            continue;
        std::vector<MatrixEntry> entries;
        for (std::size_t i = 0; i < keep; ++i)
            entries.push_back({m.col_index(scores.ranked[i].section), scores.ranked[i].score / total});
        m.add_row(c, std::move(entries));
    }
    return m;
}

/*****************************************************************************/
/* ALS                                                                       */
/*****************************************************************************/

namespace {

/// Column-major copy of the sparse entries.
std::vector<std::vector<MatrixEntry>> transpose(const RatingsMatrix& m)
{
    std::vector<std::vector<MatrixEntry>> cols(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (const auto& e : m.row(i))
            cols[e.col].push_back({static_cast<int>(i), e.value});
    return cols;
}

void check_params(const RatingsMatrix& m, const AlsParams& p)
{
    if (p.rank < 1)
        throw Error(ErrorKind::config, "factor rank must be at least 1");
    if (static_cast<std::size_t>(p.rank) > std::min(m.rows(), m.cols()))
        throw Error(ErrorKind::config, "factor rank " + std::to_string(p.rank)
                                           + " exceeds min(rows, cols) = "
                                           + std::to_string(std::min(m.rows(), m.cols())));
    if (p.lambda < 0.0 || p.alpha < 0.0 || p.iterations < 0)
        throw Error(ErrorKind::config, "ALS parameters must be non-negative");
}

Eigen::MatrixXd random_factors(std::size_t n, int rank, Rng& rng)
{
    const double scale = 1.0 / std::sqrt(static_cast<double>(rank));
    Eigen::MatrixXd f(static_cast<Eigen::Index>(n), rank);
    for (Eigen::Index i = 0; i < f.rows(); ++i)
        for (Eigen::Index j = 0; j < f.cols(); ++j)
            f(i, j) = rng.uniform() * scale;
    return f;
}

FactorModel init_model(const RatingsMatrix& m, const AlsParams& p, FeedbackMode mode)
{
    FactorModel model;
    model.mode = mode;
    model.params = p;
    model.row_labels = m.row_labels();
    model.col_labels = m.col_labels();
    Rng rng(derive_seed(p.seed, "als-init"));
    model.row_factors = random_factors(m.rows(), p.rank, rng);
    model.col_factors = random_factors(m.cols(), p.rank, rng);
    return model;
}

/// Solves each row of `target` against fixed `other`, observed cells only.
void explicit_half_step(const std::vector<std::vector<MatrixEntry>>& lines,
                        const Eigen::MatrixXd& other, double lambda, Eigen::MatrixXd& target)
{
    const Eigen::Index k = other.cols();
    for (std::size_t i = 0; i < lines.size(); ++i) {
        Eigen::MatrixXd a = lambda * Eigen::MatrixXd::Identity(k, k);
        Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
        for (const auto& e : lines[i]) {
            const auto v = other.row(e.col).transpose();
            a.selfadjointView<Eigen::Lower>().rankUpdate(v);
            b += e.value * v;
        }
        a.triangularView<Eigen::StrictlyUpper>() = a.transpose();
        target.row(static_cast<Eigen::Index>(i)) = a.ldlt().solve(b).transpose();
    }
}

double explicit_loss(const std::vector<std::vector<MatrixEntry>>& rows,
                     const Eigen::MatrixXd& u, const Eigen::MatrixXd& v, double lambda)
{
    double loss = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (const auto& e : rows[i]) {
            const double r = e.value - u.row(static_cast<Eigen::Index>(i)).dot(v.row(e.col));
            loss += r * r;
        }
    return loss + lambda * (u.squaredNorm() + v.squaredNorm());
}

/// Confidence-weighted solve over all cells; `gram` = other^T other.
void implicit_half_step(const std::vector<std::vector<MatrixEntry>>& lines,
                        const Eigen::MatrixXd& other, double lambda, double alpha,
                        Eigen::MatrixXd& target)
{
    const Eigen::Index k = other.cols();
    const Eigen::MatrixXd gram = other.transpose() * other;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        Eigen::MatrixXd a = gram;
        a.diagonal().array() += lambda;
        Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
        for (const auto& e : lines[i]) {
            if (e.value <= 0.0)
                continue;
            const double confidence = 1.0 + alpha * e.value;
            const auto v = other.row(e.col).transpose();
            a.noalias() += (confidence - 1.0) * v * v.transpose();
            b += confidence * v;
        }
        target.row(static_cast<Eigen::Index>(i)) = a.ldlt().solve(b).transpose();
    }
}

double implicit_loss(const std::vector<std::vector<MatrixEntry>>& rows,
                     const Eigen::MatrixXd& u, const Eigen::MatrixXd& v,
                     double lambda, double alpha)
{
    // sum_all yhat^2 = <U^T U, V^T V>_F
    const Eigen::MatrixXd uu = u.transpose() * u;
    const Eigen::MatrixXd vv = v.transpose() * v;
    double loss = (uu.array() * vv.array()).sum();
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (const auto& e : rows[i]) {
            if (e.value <= 0.0)
                continue;
            const double yhat = u.row(static_cast<Eigen::Index>(i)).dot(v.row(e.col));
            const double confidence = 1.0 + alpha * e.value;
            loss += confidence * (1.0 - yhat) * (1.0 - yhat) - yhat * yhat;
        }
    return loss + lambda * (u.squaredNorm() + v.squaredNorm());
}

void record_loss(FactorModel& model, double loss)
{
    if (!std::isfinite(loss))
        throw Error(ErrorKind::runtime,
                    "ALS loss became non-finite; increase lambda or check the input");
    model.loss_trace.push_back(loss);
}

std::vector<std::vector<MatrixEntry>> row_lines(const RatingsMatrix& m)
{
    std::vector<std::vector<MatrixEntry>> rows(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        rows[i] = m.row(i);
    return rows;
}

} // namespace

FactorModel als_explicit(const RatingsMatrix& matrix, const AlsParams& params)
{
    if (matrix.mode() != FeedbackMode::explicit_feedback)
        throw Error("als_explicit needs an explicit-feedback matrix");
    check_params(matrix, params);
    FactorModel model = init_model(matrix, params, FeedbackMode::explicit_feedback);
    const auto rows = row_lines(matrix);
    const auto cols = transpose(matrix);
    for (int it = 0; it < params.iterations; ++it) {
        explicit_half_step(rows, model.col_factors, params.lambda, model.row_factors);
        explicit_half_step(cols, model.row_factors, params.lambda, model.col_factors);
        record_loss(model, explicit_loss(rows, model.row_factors, model.col_factors, params.lambda));
    }
    return model;
}

FactorModel als_implicit(const RatingsMatrix& matrix, const AlsParams& params)
{
    if (matrix.mode() != FeedbackMode::implicit_feedback)
        throw Error("als_implicit needs an implicit-feedback matrix");
    check_params(matrix, params);
    FactorModel model = init_model(matrix, params, FeedbackMode::implicit_feedback);
    const auto rows = row_lines(matrix);
    const auto cols = transpose(matrix);
    for (int it = 0; it < params.iterations; ++it) {
        implicit_half_step(rows, model.col_factors, params.lambda, params.alpha, model.row_factors);
        implicit_half_step(cols, model.row_factors, params.lambda, params.alpha, model.col_factors);
        record_loss(model, implicit_loss(rows, model.row_factors, model.col_factors,
                                         params.lambda, params.alpha));
    }
    return model;
}

/*****************************************************************************/
/* PREDICTION                                                                */
/*****************************************************************************/

int FactorModel::row_index(std::int64_t label) const
{
    auto it = std::find(row_labels.begin(), row_labels.end(), label);
    return it == row_labels.end() ? -1 : static_cast<int>(it - row_labels.begin());
}

Eigen::VectorXd FactorModel::predict_row(std::int64_t label) const
{
    const int i = row_index(label);
    if (i < 0)
        throw Error("unknown model row " + std::to_string(label));
    return col_factors * row_factors.row(i).transpose();
}

Ranking recommend_from_model(const FactorModel& model, std::int64_t row_label,
                             std::size_t k, const std::unordered_set<std::string>& exclusions)
{
    const Eigen::VectorXd scores = model.predict_row(row_label);
    std::vector<ScoredSection> candidates;
    candidates.reserve(model.col_labels.size());
    for (std::size_t j = 0; j < model.col_labels.size(); ++j)
        candidates.push_back({model.col_labels[j], scores(static_cast<Eigen::Index>(j))});
    return top_k(model.mode == FeedbackMode::explicit_feedback ? "cf-article" : "cf-category",
                 std::move(candidates), k, exclusions);
}

ScoreTable score_table_from_model(const FactorModel& model, std::size_t depth,
                                  const ScoreTable& counts)
{
    ScoreTable out;
    for (auto label : model.row_labels) {
        CategoryScores scores;
        if (auto it = counts.categories.find(label); it != counts.categories.end())
            scores.members = it->second.members;
        scores.ranked = recommend_from_model(model, label, depth).items;
        out.categories.emplace(label, std::move(scores));
    }
    return out;
}

/*****************************************************************************/
/* PERSISTENCE                                                               */
/*****************************************************************************/

namespace {

std::filesystem::path with_suffix(const std::filesystem::path& prefix, const char* suffix)
{
    return prefix.string() + suffix;
}

} // namespace

void write_factor_model(const FactorModel& model, const std::filesystem::path& prefix,
                        const std::string& header)
{
    {
        auto out = open_output(with_suffix(prefix, ".meta"));
        out << comment_block(header);
        out << "mode\t" << (model.mode == FeedbackMode::explicit_feedback ? "explicit" : "implicit") << '\n';
        out << "rank\t" << model.params.rank << '\n';
        out << "lambda\t" << format_double(model.params.lambda) << '\n';
        out << "alpha\t" << format_double(model.params.alpha) << '\n';
        out << "iterations\t" << model.params.iterations << '\n';
        out << "seed\t" << model.params.seed << '\n';
        out << "loss_trace";
        for (double l : model.loss_trace)
            out << '\t' << format_double(l);
        out << '\n';
    }
    auto dump = [&](const char* suffix, const Eigen::MatrixXd& f, auto&& label_of) {
        auto out = open_output(with_suffix(prefix, suffix));
        out << comment_block(header);
        for (Eigen::Index i = 0; i < f.rows(); ++i) {
            out << label_of(i);
            for (Eigen::Index j = 0; j < f.cols(); ++j)
                out << '\t' << format_double(f(i, j));
            out << '\n';
        }
    };
    dump(".rows.tsv", model.row_factors, [&](Eigen::Index i) { return std::to_string(model.row_labels[i]); });
    dump(".cols.tsv", model.col_factors, [&](Eigen::Index i) { return model.col_labels[i]; });
}

FactorModel load_factor_model(const std::filesystem::path& prefix)
{
    FactorModel model;
    {
        auto in = open_input(with_suffix(prefix, ".meta"));
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#')
                continue;
            auto f = split(line, '\t');
            if (f[0] == "mode")
                model.mode = f.at(1) == "explicit" ? FeedbackMode::explicit_feedback
                                                   : FeedbackMode::implicit_feedback;
            else if (f[0] == "rank")
                model.params.rank = static_cast<int>(parse_int(f.at(1)));
            else if (f[0] == "lambda")
                model.params.lambda = parse_double(f.at(1));
            else if (f[0] == "alpha")
                model.params.alpha = parse_double(f.at(1));
            else if (f[0] == "iterations")
                model.params.iterations = static_cast<int>(parse_int(f.at(1)));
            else if (f[0] == "seed")
                model.params.seed = parse_uint(f.at(1));
            else if (f[0] == "loss_trace")
                for (std::size_t i = 1; i < f.size(); ++i)
                    model.loss_trace.push_back(parse_double(f[i]));
        }
    }
    auto slurp = [&](const char* suffix, auto&& on_label) {
        auto in = open_input(with_suffix(prefix, suffix));
        std::vector<std::vector<double>> values;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#')
                continue;
            auto f = split(line, '\t');
            if (f.size() != static_cast<std::size_t>(model.params.rank) + 1)
                throw Error(with_suffix(prefix, suffix).string() + ": wrong factor width");
            on_label(f[0]);
            std::vector<double> row;
            for (std::size_t j = 1; j < f.size(); ++j)
                row.push_back(parse_double(f[j]));
            values.push_back(std::move(row));
        }
        Eigen::MatrixXd m(static_cast<Eigen::Index>(values.size()), model.params.rank);
        for (std::size_t i = 0; i < values.size(); ++i)
            for (int j = 0; j < model.params.rank; ++j)
                m(static_cast<Eigen::Index>(i), j) = values[i][j];
        return m;
    };
    model.row_factors = slurp(".rows.tsv", [&](std::string_view s) { model.row_labels.push_back(parse_int(s)); });
    model.col_factors = slurp(".cols.tsv", [&](std::string_view s) { model.col_labels.emplace_back(s); });
    return model;
}

void write_holdout(const HoldoutMap& holdout, const std::filesystem::path& path,
                   const std::string& header)
{
    auto out = open_output(path);
    out << comment_block(header);
    for (const auto& [id, sections] : holdout.visible)
        for (const auto& s : sections)
            out << id << "\tvisible\t" << s << '\n';
    for (const auto& [id, sections] : holdout.held_out)
        for (const auto& s : sections)
            out << id << "\theld_out\t" << s << '\n';
}

HoldoutMap load_holdout(const std::filesystem::path& path)
{
    auto in = open_input(path);
    HoldoutMap out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        auto f = split(line, '\t');
        if (f.size() != 3)
            throw Error(path.string() + ": malformed holdout line");
        const ArticleId id = parse_int(f[0]);
        if (f[1] == "visible")
            out.visible[id].emplace_back(f[2]);
        else if (f[1] == "held_out")
            out.held_out[id].emplace_back(f[2]);
        else
            throw Error(path.string() + ": unknown holdout tag");
    }
    return out;
}

} // namespace sectionrec
