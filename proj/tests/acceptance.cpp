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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.
//
//   acceptance [work_dir]

#include "graph_fixtures.hpp"
#include "graph_oracles.hpp"

#include "sectionrec/counts.hpp"
#include "sectionrec/factorize.hpp"
#include "sectionrec/pipeline.hpp"
#include "sectionrec/topics.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

using namespace sectionrec;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            if (pass)
                detail << "failed: ";
            else
                detail << "; ";
            detail << what;
            pass = false;
        }
    }
};

class Timer {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double x)
{
    std::ostringstream s;
    s.precision(4);
    s << x;
    return s.str();
}

std::map<std::string, std::string> snapshot(const std::filesystem::path& dir)
{
    std::map<std::string, std::string> out;
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir))
        if (e.is_regular_file()) {
            std::ifstream in(e.path(), std::ios::binary);
            std::ostringstream s;
            s << in.rdbuf();
            out[std::filesystem::relative(e.path(), dir).string()] = s.str();
        }
    return out;
}

const EvalReport& report_of(const std::vector<EvalReport>& reports, const std::string& method)
{
    for (const auto& r : reports)
        if (r.method == method)
            return r;
    throw Error(ErrorKind::runtime, "no report for " + method);
}

/*****************************************************************************/
/* GRAPH CRITERIA                                                            */
/*****************************************************************************/

void gini_oracle(Outcome& o)
{
    Timer t;
    Rng rng(1001);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<std::int64_t> x(55);
        for (auto& v : x)
            v = rng.bernoulli(0.4) ? static_cast<std::int64_t>(rng.index(500)) : 0;
        x[rng.index(55)] += 1;
        worst = std::max(worst, std::abs(gini(TypeHistogram(x)) - oracle::pairwise_gini(x)));
    }
    std::vector<std::int64_t> point(55, 0);
    point[3] = 9;
    o.require(worst <= 1e-12, "max deviation " + fmt(worst));
    o.require(gini(TypeHistogram(std::vector<std::int64_t>(55, 4))) == 0.0, "uniform histogram");
    o.require(gini(TypeHistogram(point)) == 54.0 / 55.0, "point mass");
    o.require(t.seconds() < 5.0, "runtime " + fmt(t.seconds()) + " s");
    o.detail << (o.pass ? "" : "; ") << "max deviation " << worst << ", " << fmt(t.seconds()) << " s";
}

void pruning_golden(Outcome& o)
{
    Timer t;
    const fixtures::StanfordFixture f;
    const PrunedGraph p = prune(f.graph, f.types, 0.966);
    o.require(p.removed == std::set<CategoryId>{4}, "removed set is not {Stanford University}");
    o.require(p.kept(2) && p.kept(3), "a town category was removed");
    o.require(closure_members(p.graph, 1) == std::vector<ArticleId>{10, 11, 12}, "base closure is not the 3 towns");
    o.require(t.seconds() < 1.0, "runtime " + fmt(t.seconds()) + " s");
    o.detail << (o.pass ? "" : "; ") << "removed " << p.removed.size() << " of 4, " << fmt(t.seconds()) << " s";
}

CategoryGraph random_dag(Rng& rng, std::size_t n)
{
    std::vector<CategoryId> nodes;
    for (std::size_t i = 1; i <= n; ++i)
        nodes.push_back(static_cast<CategoryId>(i));
    std::vector<CategoryId> order = nodes;
    rng.shuffle(order);
    const double p = 3.0 / static_cast<double>(n);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.bernoulli(p))
                edges.emplace_back(order[j], order[i]);
    std::map<CategoryId, std::vector<ArticleId>> members;
    for (std::size_t a = 1; a <= 2 * n; ++a)
        members[nodes[rng.index(n)]].push_back(static_cast<ArticleId>(a));
    return fixtures::graph_from(nodes, edges, members);
}

void closure_oracle(Outcome& o)
{
    Rng rng(1003);
    std::size_t checked = 0, mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const CategoryGraph g = random_dag(rng, 1 + rng.index(200));
        for (const auto& [c, name] : g.names) {
            ++checked;
            mismatches += closure_members(g, c) == oracle::bfs_closure(g, c) ? 0 : 1;
        }
    }
    o.require(mismatches == 0, std::to_string(mismatches) + " mismatching closures");
    o.detail << (o.pass ? "" : "; ") << checked << " closures on 200 DAGs";
}

void cycle_breaking(Outcome& o)
{
    Rng rng(1004);
    std::size_t cyclic = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.index(80);
        std::vector<CategoryId> nodes;
        for (std::size_t i = 1; i <= n; ++i)
            nodes.push_back(static_cast<CategoryId>(i));
        std::vector<Edge> edges;
        const double p = 2.5 / static_cast<double>(n);
        for (auto a : nodes)
            for (auto b : nodes)
                if (rng.bernoulli(p))
                    edges.emplace_back(a, b);
        cyclic += oracle::kahn_acyclic(break_cycles(fixtures::graph_from(nodes, edges)).dag) ? 0 : 1;
    }
    o.require(cyclic == 0, std::to_string(cyclic) + " outputs still cyclic");

    // k vertex-disjoint cycles joined by edges that respect a hidden order of
    // the components: exactly k simple cycles, minimum feedback arc set k.
    std::size_t over = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = 1 + rng.index(3);
        std::vector<std::size_t> component;
        std::vector<Edge> edges;
        CategoryId next = 1;
        for (std::size_t c = 0; c < k; ++c) {
            const CategoryId first = next;
            const std::size_t len = 2 + rng.index(4);
            for (std::size_t i = 0; i < len; ++i, ++next) {
                component.push_back(c);
                edges.emplace_back(next, i + 1 == len ? first : next + 1);
            }
        }
        for (std::size_t i = 0, extra = rng.index(10); i < extra; ++i, ++next)
            component.push_back(k + i);
        std::vector<std::size_t> rank(k + 10);
        for (std::size_t i = 0; i < rank.size(); ++i)
            rank[i] = i;
        rng.shuffle(rank);
        std::vector<CategoryId> nodes;
        for (CategoryId v = 1; v < next; ++v)
            nodes.push_back(v);
        for (auto a : nodes)
            for (auto b : nodes) {
                const auto ca = component[static_cast<std::size_t>(a - 1)];
                const auto cb = component[static_cast<std::size_t>(b - 1)];
                if (ca != cb && rank[ca] < rank[cb] && rng.bernoulli(0.15))
                    edges.emplace_back(a, b);
            }
        const CycleBreakResult r = break_cycles(fixtures::graph_from(nodes, edges));
        over += r.removed_edges.size() <= k && oracle::kahn_acyclic(r.dag) ? 0 : 1;
    }
    o.require(over == 0, std::to_string(over) + " constructions exceeded the bound");
    o.detail << (o.pass ? "" : "; ") << "200 random digraphs acyclic, 200 constructions within bound";
}

void counts_oracle(Outcome& o)
{
    Rng rng(1005);
    const std::vector<std::string> pool = {"History", "Geography", "Economy", "Culture", "Sports", "Politics"};
    std::size_t mismatches = 0, categories = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng.index(10);
        CategoryFile f;
        for (std::size_t i = 1; i <= n; ++i) {
            f.names[static_cast<CategoryId>(i)] = "C" + std::to_string(i);
            for (std::size_t j = 1; j < i; ++j)
                if (rng.bernoulli(0.3))
                    f.edges.emplace_back(static_cast<CategoryId>(i), static_cast<CategoryId>(j));
        }
        std::vector<Article> arts;
        for (std::size_t a = 1, m = 1 + rng.index(25); a <= m; ++a) {
            Article art;
            art.id = static_cast<ArticleId>(a);
            for (std::size_t s = 0, ns = rng.index(5); s < ns; ++s)
                art.sections.push_back(pool[rng.index(pool.size())]);
            for (std::size_t c = 1; c <= n; ++c)
                if (rng.bernoulli(0.25))
                    art.categories.push_back(static_cast<CategoryId>(c));
            arts.push_back(art);
        }
        const CategoryGraph g = build_category_graph(f, arts, 1);
        ArticleRefs refs;
        for (const auto& a : arts)
            refs.push_back(&a);
        const ScoreTable t = compute_scores(refs, g);
        for (const auto& [c, name] : g.names) {
            ++categories;
            std::size_t m = 0;
            std::map<std::string, std::size_t> hits;
            for (auto id : oracle::bfs_closure(g, c)) {
                const Article& a = arts[static_cast<std::size_t>(id - 1)];
                if (a.sections.empty())
                    continue;
                ++m;
                for (const auto& s : std::set<std::string>(a.sections.begin(), a.sections.end()))
                    ++hits[s];
            }
            if (m == 0) {
                mismatches += t.contains(c) ? 1 : 0;
                continue;
            }
            std::vector<ScoredSection> expect;
            for (const auto& [s, h] : hits)
                expect.push_back({s, static_cast<double>(h) / static_cast<double>(m)});
            std::sort(expect.begin(), expect.end(), ranks_before);
            mismatches += t.contains(c) && t.at(c).ranked == expect && t.at(c).members == m ? 0 : 1;
        }
    }
    o.require(mismatches == 0, std::to_string(mismatches) + " categories differ");
    o.detail << (o.pass ? "" : "; ") << categories << " categories on 50 fixtures";
}

/*****************************************************************************/
/* MODEL CRITERIA                                                            */
/*****************************************************************************/

void als_checks(Outcome& o)
{
    Timer t;
    Rng rng(1008);
    auto random_matrix = [&](Eigen::Index r, Eigen::Index c, double lo, double hi) {
        Eigen::MatrixXd m(r, c);
        for (Eigen::Index i = 0; i < r; ++i)
            for (Eigen::Index j = 0; j < c; ++j)
                m(i, j) = lo + (hi - lo) * rng.uniform();
        return m;
    };
    auto col_labels = [](std::size_t n) {
        std::vector<std::string> out;
        for (std::size_t j = 0; j < n; ++j)
            out.push_back("s" + std::to_string(1000 + j));
        return out;
    };

    std::size_t increases = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t rows = 5 + rng.index(30), cols = 5 + rng.index(20);
        RatingsMatrix m(FeedbackMode::explicit_feedback, col_labels(cols));
        for (std::size_t i = 0; i < rows; ++i) {
            std::vector<MatrixEntry> row;
            for (std::size_t j = 0; j < cols; ++j)
                if (rng.bernoulli(0.3))
                    row.push_back({static_cast<int>(j), rng.bernoulli(0.5) ? 1.0 : 3.0 * rng.uniform()});
            m.add_row(static_cast<std::int64_t>(i), row);
        }
        AlsParams p;
        p.rank = 1 + static_cast<int>(rng.index(5));
        p.lambda = 0.01 + rng.uniform();
        p.iterations = 15;
        p.seed = static_cast<std::uint64_t>(trial);
        const FactorModel f = als_explicit(m, p);
        for (std::size_t i = 1; i < f.loss_trace.size(); ++i)
            increases += f.loss_trace[i] > f.loss_trace[i - 1] + 1e-9 ? 1 : 0;
    }
    o.require(increases == 0, std::to_string(increases) + " loss increases");

    const Eigen::MatrixXd target = random_matrix(40, 3, -1, 1) * random_matrix(30, 3, -1, 1).transpose();
    RatingsMatrix dense(FeedbackMode::explicit_feedback, col_labels(30));
    for (Eigen::Index i = 0; i < 40; ++i) {
        std::vector<MatrixEntry> row;
        for (Eigen::Index j = 0; j < 30; ++j)
            row.push_back({static_cast<int>(j), target(i, j)});
        dense.add_row(i, row);
    }
    AlsParams p3;
    p3.rank = 3;
    p3.lambda = 1e-6;
    p3.iterations = 30;
    p3.seed = 3;
    const FactorModel f3 = als_explicit(dense, p3);
    const double rmse = std::sqrt((f3.row_factors * f3.col_factors.transpose() - target).squaredNorm()
                                  / static_cast<double>(target.size()));
    o.require(rmse < 0.05, "rank-3 RMSE " + fmt(rmse));

    const int per_group = 20, sections = 10;
    RatingsMatrix blocks(FeedbackMode::implicit_feedback, col_labels(2 * sections));
    std::map<std::int64_t, std::vector<int>> hidden;
    for (int c = 0; c < 2 * per_group; ++c) {
        const int group = c / per_group;
        std::vector<int> own;
        for (int j = 0; j < sections; ++j)
            own.push_back(group * sections + j);
        rng.shuffle(own);
        std::vector<MatrixEntry> row;
        for (int j = 0; j < 7; ++j)
            row.push_back({own[static_cast<std::size_t>(j)], 1.0 / 7.0});
        std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.col < b.col; });
        hidden[c] = {own.begin() + 7, own.end()};
        blocks.add_row(c, row);
    }
    AlsParams p2;
    p2.rank = 2;
    p2.seed = 2;
    const FactorModel fb = als_implicit(blocks, p2);
    std::size_t wins = 0, cells = 0;
    for (const auto& [c, held] : hidden) {
        const Eigen::VectorXd s = fb.predict_row(c);
        const int other = c < per_group ? 1 : 0;
        for (int h : held)
            for (int j = 0; j < sections; ++j) {
                ++cells;
                wins += s(h) > s(other * sections + j) ? 1 : 0;
            }
    }
    const double share = static_cast<double>(wins) / static_cast<double>(cells);
    o.require(share >= 0.95, "block cells " + fmt(share));
    o.require(t.seconds() < 30.0, "runtime " + fmt(t.seconds()) + " s");
    o.detail << (o.pass ? "" : "; ") << "RMSE " << fmt(rmse) << ", block cells " << fmt(share) << ", "
             << fmt(t.seconds()) << " s";
}

void lda_mass(Outcome& o)
{
    Timer t;
    Rng rng(1009);
    std::vector<Article> arts;
    std::vector<Document> docs;
    for (ArticleId a = 1; a <= 2000; ++a) {
        const std::size_t theme = rng.index(10);
        Article art;
        art.id = a;
        for (int i = 0; i < 50; ++i)
            art.tokens.push_back(rng.bernoulli(0.7) ? "t" + std::to_string(theme) + "w" + std::to_string(rng.index(30))
                                                    : "common" + std::to_string(rng.index(100)));
        for (std::size_t s = 0, n = rng.index(6); s < n; ++s)
            art.sections.push_back("S" + std::to_string(theme * 3 + rng.index(12)));
        docs.push_back(art.tokens);
        arts.push_back(std::move(art));
    }
    LdaParams params;
    params.topics = 20;
    params.train_iterations = 200;
    params.infer_iterations = 50;
    params.seed = 9;
    const TopicTraining tr = train_topic_model(docs, params);
    ArticleRefs refs;
    std::map<std::string, double> occurrences;
    for (const auto& a : arts) {
        refs.push_back(&a);
        for (const auto& s : a.distinct_sections())
            occurrences[s] += 1.0;
    }
    const TopicSectionTable table = build_topic_section_table(tr.model, refs);
    double worst = 0.0;
    for (const auto& [s, n] : occurrences) {
        double mass = 0.0;
        for (const auto& per_topic : table.tables)
            if (auto it = per_topic.find(s); it != per_topic.end())
                mass += it->second;
        worst = std::max(worst, std::abs(mass - n));
    }
    o.require(worst <= 1e-6, "mass deviation " + fmt(worst));
    o.require(t.seconds() < 120.0, "runtime " + fmt(t.seconds()) + " s");
    o.detail << (o.pass ? "" : "; ") << "max deviation " << worst << " over " << occurrences.size()
             << " sections, " << fmt(t.seconds()) << " s";
}

/*****************************************************************************/
/* PIPELINE CRITERIA                                                         */
/*****************************************************************************/

RunConfig standard_config(const std::filesystem::path& work)
{
    RunConfig c = parse_run_config("{}");
    c.paths.work_dir = work;
    return c;
}

struct PipelineRun {
    std::vector<EvalReport> reports;
    double counts_seconds = 0.0;
    double total_seconds = 0.0;
};

PipelineRun run_everything(const RunConfig& config)
{
    PipelineRun out;
    Timer t;
    Pipeline p(config);
    p.run_synth();
    p.run_ingest();
    p.run_prune_graph();
    p.run_train("counts");
    p.evaluate({"random", "counts"}, config.k_max);
    out.counts_seconds = t.seconds();
    for (const char* what : {"cf-article", "cf-category", "lda", "l2r"})
        p.run_train(what);
    out.reports = p.evaluate({}, config.k_max);
    p.coverage(20);
    out.total_seconds = t.seconds();
    return out;
}

void synthetic_end_to_end(Outcome& o, const PipelineRun& run, const std::filesystem::path& work)
{
    const double counts = report_of(run.reports, "counts").precision[9];
    const double random = report_of(run.reports, "random").precision[9];
    o.require(counts >= 10.0 * random, "counts p@10 " + fmt(counts) + " < 10 x random " + fmt(random));

    RunConfig zero = standard_config(work);
    zero.synth.noise = 0.0;
    Pipeline p(zero);
    p.run_synth();
    p.run_ingest();
    p.run_prune_graph();
    p.run_train("counts");
    const double p1 = p.evaluate({"counts"}, 10).front().precision[0];
    o.require(p1 == 1.0, "zero-noise counts p@1 " + fmt(p1));
    o.require(run.counts_seconds < 60.0, "runtime " + fmt(run.counts_seconds) + " s");
    o.detail << (o.pass ? "" : "; ") << "counts p@10 " << fmt(counts) << " vs random " << fmt(random)
             << " (" << fmt(counts / random) << "x), zero-noise p@1 " << p1 << ", "
             << fmt(run.counts_seconds) << " s";
}

void method_ordering(Outcome& o, const PipelineRun& run)
{
    auto p10 = [&](const char* m) { return report_of(run.reports, m).precision[9]; };
    auto r10 = [&](const char* m) { return report_of(run.reports, m).recall[9]; };
    const double l2r = p10("counts-l2r"), counts = p10("counts"), topic = p10("topic"),
                 cf = p10("cf-article"), random = p10("random");
    o.require(l2r >= counts, "counts-l2r < counts");
    o.require(counts >= topic, "counts < topic");
    o.require(topic > cf, "topic <= cf-article");
    o.require(cf >= random, "cf-article < random");
    o.require(l2r >= counts - 0.005 && r10("counts-l2r") >= r10("counts") - 0.005,
              "counts-l2r more than 0.5 points below counts");
    o.require(p10("cf-category-l2r") >= p10("cf-category") - 0.005 &&
                  r10("cf-category-l2r") >= r10("cf-category") - 0.005,
              "cf-category-l2r more than 0.5 points below cf-category");
    o.detail << (o.pass ? "" : "; ") << "p@10 counts-l2r " << fmt(l2r) << " >= counts " << fmt(counts)
             << " >= topic " << fmt(topic) << " > cf-article " << fmt(cf) << " >= random " << fmt(random);
}

void metric_bounds(Outcome& o, const PipelineRun& run, const std::filesystem::path& work)
{
    std::size_t violations = 0;
    for (const auto& r : run.reports)
        for (std::size_t k = 0; k < r.k_max; ++k) {
            violations += r.precision[k] <= r.precision_bound[k] + 1e-12 ? 0 : 1;
            violations += r.recall[k] <= r.recall_bound[k] + 1e-12 ? 0 : 1;
            for (const auto& c : r.per_article) {
                violations += c.precision[k] <= 1.0 && c.recall[k] <= 1.0 ? 0 : 1;
            }
        }
    o.require(violations == 0, std::to_string(violations) + " bound violations");

    const Corpus corpus = load_articles(work / "corpus.jsonl");
    std::set<std::string> vocab_set;
    std::vector<EvalCase> cases;
    for (const auto& a : corpus.articles) {
        vocab_set.insert(a.sections.begin(), a.sections.end());
        if (a.has_sections() && cases.size() < 2000) {
            const auto d = a.distinct_sections();
            cases.push_back({&a, {d.begin(), d.end()}});
        }
    }
    const std::vector<std::string> vocab(vocab_set.begin(), vocab_set.end());
    const RandomRecommender random(vocab, 77);
    const std::size_t k = 10;
    const EvalReport r = evaluate_method(
        "random", [&](const EvalCase& c, std::size_t kk) { return random(c, kk); }, cases, k);
    const double V = static_cast<double>(vocab.size()), kd = static_cast<double>(k);
    double expect = 0.0, variance = 0.0;
    for (const auto& c : cases) {
        const double p = expected_random_precision(c.truth, vocab);
        expect += p;
        variance += p * (1.0 - p) * (V - kd) / (V - 1.0) / kd;
    }
    const double n = static_cast<double>(cases.size());
    expect /= n;
    const double se = std::sqrt(variance) / n;
    const double z = std::abs(r.precision[k - 1] - expect) / se;
    o.require(cases.size() == 2000, "only " + std::to_string(cases.size()) + " articles");
    o.require(z <= 3.0, "random baseline " + fmt(z) + " standard errors off");
    o.detail << (o.pass ? "" : "; ") << run.reports.size() << " reports within bounds; random p@10 "
             << fmt(r.precision[k - 1]) << " vs expected " << fmt(expect) << " (" << fmt(z) << " SE)";
}

void determinism(Outcome& o, const RunConfig& config, const std::map<std::string, std::string>& first)
{
    std::filesystem::remove_all(config.paths.work_dir);
    run_everything(config);
    const auto second = snapshot(config.paths.work_dir);
    std::size_t differing = 0;
    std::string example;
    for (const auto& [name, text] : first) {
        auto it = second.find(name);
        if (it == second.end() || it->second != text) {
            ++differing;
            example = name;
        }
    }
    differing += second.size() > first.size() ? second.size() - first.size() : 0;
    o.require(differing == 0, std::to_string(differing) + " artifacts differ (e.g. " + example + ")");
    o.detail << (o.pass ? "" : "; ") << first.size() << " artifacts byte-identical across reruns";
}

} // namespace

int main(int argc, char** argv)
{
    const std::filesystem::path work = argc > 1 ? argv[1] : "acceptance_work";
    std::filesystem::remove_all(work);

    int failures = 0;
    auto report = [&](int n, const std::string& title, const std::function<void(Outcome&)>& check) {
        Outcome o;
        try {
            check(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " error: " << e.what();
        }
        failures += o.pass ? 0 : 1;
        std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << "  " << title << "  ["
                  << o.detail.str() << "]" << std::endl;
    };

    report(1, "gini matches the pairwise oracle", gini_oracle);
    report(2, "pruning golden test", pruning_golden);
    report(3, "closure matches the BFS oracle", closure_oracle);
    report(4, "cycle breaking is acyclic and within the cycle bound", cycle_breaking);
    report(5, "P(S|C) matches exhaustive counting", counts_oracle);

    const RunConfig standard = standard_config(work / "standard");
    PipelineRun run;
    std::map<std::string, std::string> artifacts;
    std::string setup_error;
    try {
        run = run_everything(standard);
        artifacts = snapshot(standard.paths.work_dir);
    } catch (const std::exception& e) {
        setup_error = e.what();
    }
    auto with_run = [&](auto&& f) {
        return [&, f](Outcome& o) {
            if (!setup_error.empty())
                throw Error(ErrorKind::runtime, "standard pipeline failed: " + setup_error);
            f(o);
        };
    };

    report(6, "synthetic end-to-end", with_run([&](Outcome& o) { synthetic_end_to_end(o, run, work / "zero_noise"); }));
    report(7, "method ordering", with_run([&](Outcome& o) { method_ordering(o, run); }));
    report(8, "ALS loss, recovery and block structure", als_checks);
    report(9, "topic-section mass conservation", lda_mass);
    report(10, "metric bounds and random baseline",
           with_run([&](Outcome& o) { metric_bounds(o, run, standard.paths.work_dir); }));
    report(11, "determinism", with_run([&](Outcome& o) { determinism(o, standard, artifacts); }));

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
