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

#include "sectionrec/catgraph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <queue>

namespace sectionrec {

namespace {

/// Dense-index view of a CategoryGraph. Index order equals id order.
struct Adjacency {
    std::vector<CategoryId> ids;
    std::unordered_map<CategoryId, int> index;
    std::vector<std::vector<int>> parents;
    std::vector<std::vector<int>> children;

    explicit Adjacency(const CategoryGraph& g)
    {
        ids.reserve(g.names.size());
        for (const auto& [id, name] : g.names) {
            index.emplace(id, static_cast<int>(ids.size()));
            ids.push_back(id);
        }
        parents.resize(ids.size());
        children.resize(ids.size());
        for (const auto& [child, parent] : g.edges) {
            const int c = index.at(child), p = index.at(parent);
            parents[c].push_back(p);
            children[p].push_back(c);
        }
    }

    int at(CategoryId c) const
    {
        auto it = index.find(c);
        if (it == index.end())
            throw Error("unknown category id " + std::to_string(c));
        return it->second;
    }

    std::size_t size() const { return ids.size(); }
};

/// Subgraph induced by `keep`; memberships restricted accordingly.
CategoryGraph induced(const CategoryGraph& g, const std::set<CategoryId>& keep)
{
    CategoryGraph out;
    out.root = g.root;
    for (const auto& [id, name] : g.names)
        if (keep.count(id))
            out.names.emplace(id, name);
    for (const auto& e : g.edges)
        if (keep.count(e.first) && keep.count(e.second))
            out.edges.push_back(e);
    for (const auto& [c, m] : g.members)
        if (keep.count(c))
            out.members.emplace(c, m);
    return out;
}

std::vector<ArticleId> merge_sorted(const std::vector<ArticleId>& a,
                                    const std::vector<ArticleId>& b)
{
    std::vector<ArticleId> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

} // namespace

CategoryGraph build_category_graph(const CategoryFile& file,
                                   const std::vector<Article>& articles,
                                   CategoryId root)
{
    CategoryGraph g;
    g.names = file.names;
    g.root = root;
    for (const auto& e : file.edges)
        if (g.contains(e.first) && g.contains(e.second))
            g.edges.push_back(e);
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    for (const auto& a : articles)
        for (auto c : a.categories)
            if (g.contains(c))
                g.members[c].push_back(a.id);
    for (auto& [c, m] : g.members) {
        std::sort(m.begin(), m.end());
        m.erase(std::unique(m.begin(), m.end()), m.end());
    }
    return g;
}

/*****************************************************************************/
/* TYPES                                                                     */
/*****************************************************************************/

TypeId TypeMap::type_of(ArticleId a) const
{
    auto it = types.find(a);
    return it == types.end() ? -1 : it->second;
}

TypeMap load_type_map(const std::filesystem::path& map_path,
                      const std::filesystem::path& universe_path)
{
    TypeMap map;
    {
        auto in = open_input(universe_path);
        std::map<TypeId, std::string> names;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#')
                continue;
            auto f = split(line, '\t');
            if (f.size() != 2)
                throw Error(universe_path.string() + ": malformed type line");
            names[static_cast<TypeId>(parse_int(f[0]))] = std::string(f[1]);
        }
        TypeId expected = 0;
        for (const auto& [id, name] : names) {
            if (id != expected++)
                throw Error(universe_path.string() + ": type ids must be 0..n-1");
            map.type_names.push_back(name);
        }
    }
    auto in = open_input(map_path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        auto f = split(line, '\t');
        if (f.size() != 2)
            throw Error(map_path.string() + ": malformed type map line");
        const auto type = static_cast<TypeId>(parse_int(f[1]));
        if (type < 0 || static_cast<std::size_t>(type) >= map.universe_size())
            throw Error(map_path.string() + ": type id outside universe: " + std::string(f[1]));
        map.types[parse_int(f[0])] = type;
    }
    return map;
}

void write_type_map(const TypeMap& map, const std::filesystem::path& map_path,
                    const std::filesystem::path& universe_path, const std::string& header)
{
    {
        auto out = open_output(universe_path);
        out << comment_block(header);
        for (std::size_t i = 0; i < map.type_names.size(); ++i)
            out << i << '\t' << map.type_names[i] << '\n';
    }
    std::vector<std::pair<ArticleId, TypeId>> rows(map.types.begin(), map.types.end());
    std::sort(rows.begin(), rows.end());
    auto out = open_output(map_path);
    out << comment_block(header);
    for (const auto& [a, t] : rows)
        out << a << '\t' << t << '\n';
}

TypeHistogram::TypeHistogram(std::vector<std::int64_t> counts)
    : counts_(std::move(counts))
{
    for (auto c : counts_)
        if (c < 0)
            throw Error("negative histogram count");
}

std::int64_t TypeHistogram::total() const
{
    return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

void TypeHistogram::add(TypeId type, std::int64_t n)
{
    counts_.at(static_cast<std::size_t>(type)) += n;
}

TypeHistogram& TypeHistogram::operator+=(const TypeHistogram& other)
{
    if (other.size() != size())
        throw Error(ErrorKind::runtime, "histogram universe mismatch");
    for (std::size_t i = 0; i < counts_.size(); ++i)
        counts_[i] += other.counts_[i];
    return *this;
}

double gini(const TypeHistogram& hist)
{
    const auto total = hist.total();
    if (total == 0)
        throw Error("undefined purity: all-zero type histogram");
    std::vector<std::int64_t> x = hist.counts();
    std::sort(x.begin(), x.end());
    // sum_i sum_j |x_i - x_j| = 2 * sum_i (2i - n - 1) x_(i), i 1-based.
    const auto n = static_cast<std::int64_t>(x.size());
    std::int64_t weighted = 0;
    for (std::int64_t i = 1; i <= n; ++i)
        weighted += (2 * i - n - 1) * x[i - 1];
    return static_cast<double>(weighted) / (static_cast<double>(n) * static_cast<double>(total));
}

/*****************************************************************************/
/* GRAPH OPERATIONS                                                          */
/*****************************************************************************/

CategoryGraph restrict_to_root(const CategoryGraph& graph, CategoryId root)
{
    const Adjacency adj(graph);
    const int r = adj.at(root);
    std::vector<char> seen(adj.size(), 0);
    std::deque<int> queue{r};
    seen[r] = 1;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int c : adj.children[v])
            if (!seen[c]) {
                seen[c] = 1;
                queue.push_back(c);
            }
    }
    std::set<CategoryId> keep;
    for (std::size_t i = 0; i < adj.size(); ++i)
        if (seen[i])
            keep.insert(adj.ids[i]);
    CategoryGraph out = induced(graph, keep);
    out.root = root;
    return out;
}

CycleBreakResult break_cycles(const CategoryGraph& graph)
{
    CycleBreakResult result;
    CategoryGraph g = graph;
    std::erase_if(g.edges, [&](const Edge& e) {
        if (e.first == e.second) {
            result.removed_edges.push_back(e);
            return true;
        }
        return false;
    });

    const Adjacency adj(g);
    const int n = static_cast<int>(adj.size());
    std::vector<int> outdeg(n), indeg(n);
    for (int v = 0; v < n; ++v) {
        outdeg[v] = static_cast<int>(adj.parents[v].size());
        indeg[v] = static_cast<int>(adj.children[v].size());
    }

    // Each live vertex sits in exactly one bucket.
    enum Bucket : char { sink, source, middle, gone };
    std::vector<Bucket> bucket(n, gone);
    std::set<int> sinks, sources;
    std::set<std::pair<int, int>> by_delta;  // (-(out - in), index)

    auto file = [&](int v) {
        if (outdeg[v] == 0) {
            bucket[v] = sink;
            sinks.insert(v);
        } else if (indeg[v] == 0) {
            bucket[v] = source;
            sources.insert(v);
        } else {
            bucket[v] = middle;
            by_delta.insert({indeg[v] - outdeg[v], v});
        }
    };
    auto unfile = [&](int v) {
        switch (bucket[v]) {
        case sink: sinks.erase(v); break;
        case source: sources.erase(v); break;
        case middle: by_delta.erase({indeg[v] - outdeg[v], v}); break;
        case gone: break;
        }
        bucket[v] = gone;
    };
    for (int v = 0; v < n; ++v)
        file(v);

    std::vector<char> live(n, 1);
    auto take = [&](int v) {
        unfile(v);
        live[v] = 0;
        for (int p : adj.parents[v])
            if (live[p]) {
                unfile(p);
                --indeg[p];
                file(p);
            }
        for (int c : adj.children[v])
            if (live[c]) {
                unfile(c);
                --outdeg[c];
                file(c);
            }
    };

    std::vector<int> left, right;
    int remaining = n;
    while (remaining > 0) {
        while (!sinks.empty()) {
            const int v = *sinks.begin();
            take(v);
            right.push_back(v);
            --remaining;
        }
        while (!sources.empty()) {
            const int v = *sources.begin();
            take(v);
            left.push_back(v);
            --remaining;
        }
        if (remaining > 0 && !by_delta.empty()) {
            const int v = by_delta.begin()->second;
            take(v);
            left.push_back(v);
            --remaining;
        }
    }

    std::vector<int> position(n);
    int pos = 0;
    for (int v : left)
        position[v] = pos++;
    for (auto it = right.rbegin(); it != right.rend(); ++it)
        position[*it] = pos++;

    std::vector<std::vector<int>> up(n);
    std::vector<std::pair<int, int>> back;
    for (const auto& e : g.edges) {
        const int c = adj.index.at(e.first), p = adj.index.at(e.second);
        if (position[c] > position[p])
            back.emplace_back(c, p);
        else
            up[c].push_back(p);
    }

    // Put back every edge that no longer closes a cycle, so each edge left
    // out has a cycle of its own in the final graph.
    std::vector<int> mark(n, -1), stack;
    for (std::size_t i = 0; i < back.size(); ++i) {
        const auto [c, p] = back[i];
        bool closes = false;
        stack.assign(1, p);
        mark[p] = static_cast<int>(i);
        while (!stack.empty() && !closes) {
            const int v = stack.back();
            stack.pop_back();
            for (int w : up[v]) {
                if (w == c) {
                    closes = true;
                    break;
                }
                if (mark[w] != static_cast<int>(i)) {
                    mark[w] = static_cast<int>(i);
                    stack.push_back(w);
                }
            }
        }
        if (closes)
            result.removed_edges.emplace_back(adj.ids[c], adj.ids[p]);
        else
            up[c].push_back(p);
    }
    std::sort(result.removed_edges.begin(), result.removed_edges.end());

    std::set<Edge> removed(result.removed_edges.begin(), result.removed_edges.end());
    std::erase_if(g.edges, [&](const Edge& e) { return removed.count(e) > 0; });
    result.dag = std::move(g);
    return result;
}

bool is_acyclic(const CategoryGraph& graph)
{
    const Adjacency adj(graph);
    std::vector<int> pending(adj.size());
    std::vector<int> ready;
    for (std::size_t v = 0; v < adj.size(); ++v) {
        pending[v] = static_cast<int>(adj.children[v].size());
        if (pending[v] == 0)
            ready.push_back(static_cast<int>(v));
    }
    std::size_t done = 0;
    while (!ready.empty()) {
        const int v = ready.back();
        ready.pop_back();
        ++done;
        for (int p : adj.parents[v])
            if (--pending[p] == 0)
                ready.push_back(p);
    }
    return done == adj.size();
}

std::vector<CategoryId> bottom_up_order(const CategoryGraph& dag)
{
    const Adjacency adj(dag);
    std::vector<int> pending(adj.size());
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (std::size_t v = 0; v < adj.size(); ++v) {
        pending[v] = static_cast<int>(adj.children[v].size());
        if (pending[v] == 0)
            ready.push(static_cast<int>(v));
    }
    std::vector<CategoryId> order;
    order.reserve(adj.size());
    while (!ready.empty()) {
        const int v = ready.top();
        ready.pop();
        order.push_back(adj.ids[v]);
        for (int p : adj.parents[v])
            if (--pending[p] == 0)
                ready.push(p);
    }
    if (order.size() != adj.size())
        throw Error(ErrorKind::runtime, "category graph has a cycle; run break_cycles first");
    return order;
}

std::vector<ArticleId> closure_members(const CategoryGraph& dag, CategoryId c)
{
    const Adjacency adj(dag);
    const int start = adj.at(c);
    std::vector<char> seen(adj.size(), 0);
    std::vector<int> stack{start};
    seen[start] = 1;
    std::vector<ArticleId> out;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (auto it = dag.members.find(adj.ids[v]); it != dag.members.end())
            out.insert(out.end(), it->second.begin(), it->second.end());
        for (int ch : adj.children[v])
            if (!seen[ch]) {
                seen[ch] = 1;
                stack.push_back(ch);
            }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::map<CategoryId, std::vector<ArticleId>> all_closures(const CategoryGraph& dag)
{
    const Adjacency adj(dag);
    std::map<CategoryId, std::vector<ArticleId>> out;
    for (CategoryId c : bottom_up_order(dag)) {
        std::vector<ArticleId> acc;
        if (auto it = dag.members.find(c); it != dag.members.end())
            acc = it->second;
        for (int ch : adj.children[adj.at(c)])
            acc = merge_sorted(acc, out.at(adj.ids[ch]));
        out.emplace(c, std::move(acc));
    }
    return out;
}

/*****************************************************************************/
/* PRUNING                                                                   */
/*****************************************************************************/

double PrunedGraph::removed_fraction() const
{
    const std::size_t total = nodes.size() + removed.size();
    return total == 0 ? 0.0 : static_cast<double>(removed.size()) / static_cast<double>(total);
}

PrunedGraph prune(const CategoryGraph& dag, const TypeMap& types, double threshold)
{
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw Error(ErrorKind::config, "pruning threshold must lie in [0, 1]");

    const Adjacency adj(dag);
    const std::size_t universe = types.universe_size();
    PrunedGraph out;
    out.threshold = threshold;

    // Returned histogram per node; empty for removed nodes.
    std::vector<TypeHistogram> returned(adj.size());
    std::vector<char> keep(adj.size(), 0);
    for (CategoryId c : bottom_up_order(dag)) {
        const int v = adj.at(c);
        ++out.evaluations;
        TypeHistogram hist(universe);
        if (auto it = dag.members.find(c); it != dag.members.end())
            for (ArticleId a : it->second)
                if (auto t = types.type_of(a); t >= 0)
                    hist.add(t);
        for (int ch : adj.children[v])
            if (keep[ch])
                hist += returned[ch];

        const double purity = hist.empty_mass() ? 0.0 : gini(hist);
        out.evaluated_purity[c] = purity;
        if (!hist.empty_mass() && purity > threshold) {
            keep[v] = 1;
            out.nodes[c].purity = purity;
            out.nodes[c].histogram = hist;
            returned[v] = std::move(hist);
        } else {
            out.removed.insert(c);
        }
    }

    std::set<CategoryId> kept;
    for (const auto& [c, node] : out.nodes)
        kept.insert(c);
    out.graph = induced(dag, kept);
    for (const auto& [c, closure] : all_closures(out.graph))
        out.nodes[c].closure_size = closure.size();
    return out;
}

void write_pruned_graph(const PrunedGraph& pruned, const std::filesystem::path& path,
                        const std::string& header)
{
    auto out = open_output(path);
    out << comment_block(header);
    out << "# threshold " << format_double(pruned.threshold) << '\n';
    out << "# root " << pruned.graph.root << '\n';
    out << "[nodes]\n";
    for (const auto& [c, node] : pruned.nodes)
        out << c << '\t' << format_double(node.purity) << '\t' << node.closure_size << '\n';
    out << "[removed]\n";
    for (auto c : pruned.removed)
        out << c << '\t' << format_double(pruned.evaluated_purity.at(c)) << '\n';
    out << "[edges]\n";
    for (const auto& [child, parent] : pruned.graph.edges)
        out << child << '\t' << parent << '\n';
}

PrunedGraph load_pruned_graph(const std::filesystem::path& path,
                              const std::vector<Article>& articles)
{
    auto in = open_input(path);
    PrunedGraph out;
    enum class Block { none, nodes, removed, edges } block = Block::none;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("# threshold ", 0) == 0) {
            out.threshold = parse_double(line.substr(12));
            continue;
        }
        if (line.rfind("# root ", 0) == 0) {
            out.graph.root = parse_int(line.substr(7));
            continue;
        }
        if (line == "[nodes]") { block = Block::nodes; continue; }
        if (line == "[removed]") { block = Block::removed; continue; }
        if (line == "[edges]") { block = Block::edges; continue; }
        if (line.empty() || line[0] == '#')
            continue;
        auto f = split(line, '\t');
        if (block == Block::nodes && f.size() == 3) {
            const CategoryId c = parse_int(f[0]);
            out.graph.names[c] = std::to_string(c);
            out.nodes[c].purity = parse_double(f[1]);
            out.nodes[c].closure_size = static_cast<std::size_t>(parse_int(f[2]));
            out.evaluated_purity[c] = out.nodes[c].purity;
        } else if (block == Block::removed && f.size() == 2) {
            const CategoryId c = parse_int(f[0]);
            out.removed.insert(c);
            out.evaluated_purity[c] = parse_double(f[1]);
        } else if (block == Block::edges && f.size() == 2) {
            out.graph.edges.emplace_back(parse_int(f[0]), parse_int(f[1]));
        } else {
            throw Error(path.string() + ": malformed pruned-graph line: " + line);
        }
    }
    std::sort(out.graph.edges.begin(), out.graph.edges.end());
    for (const auto& a : articles)
        for (auto c : a.categories)
            if (out.graph.contains(c))
                out.graph.members[c].push_back(a.id);
    for (auto& [c, m] : out.graph.members) {
        std::sort(m.begin(), m.end());
        m.erase(std::unique(m.begin(), m.end()), m.end());
    }
    return out;
}

/*****************************************************************************/
/* THRESHOLD SWEEP                                                           */
/*****************************************************************************/

std::vector<Annotation> load_annotations(const std::filesystem::path& path)
{
    auto in = open_input(path);
    std::vector<Annotation> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        auto f = split(line, '\t');
        if (f.size() != 3 || (f[2] != "0" && f[2] != "1"))
            throw Error(path.string() + ": malformed annotation line: " + line);
        out.push_back({parse_int(f[0]), parse_int(f[1]), f[2] == "1"});
    }
    return out;
}

void write_annotations(const std::vector<Annotation>& annotations,
                       const std::filesystem::path& path, const std::string& header)
{
    auto out = open_output(path);
    out << comment_block(header);
    for (const auto& a : annotations)
        out << a.article << '\t' << a.category << '\t' << (a.label ? 1 : 0) << '\n';
}

std::vector<SweepRow> threshold_sweep(const CategoryGraph& dag, const TypeMap& types,
                                      const std::vector<Annotation>& annotations,
                                      const std::vector<double>& thresholds)
{
    if (annotations.empty())
        throw Error("threshold sweep needs a non-empty annotation set");

    std::vector<SweepRow> rows;
    for (double t : thresholds) {
        const PrunedGraph pruned = prune(dag, types, t);
        std::map<CategoryId, std::vector<ArticleId>> closures;
        std::size_t tp = 0, fp = 0, fn = 0;
        for (const auto& ann : annotations) {
            bool predicted = false;
            if (pruned.kept(ann.category)) {
                auto it = closures.find(ann.category);
                if (it == closures.end())
                    it = closures.emplace(ann.category,
                                          closure_members(pruned.graph, ann.category)).first;
                predicted = std::binary_search(it->second.begin(), it->second.end(), ann.article);
            }
            if (predicted && ann.label) ++tp;
            else if (predicted) ++fp;
            else if (ann.label) ++fn;
        }
        SweepRow row;
        row.threshold = t;
        row.removed_fraction = pruned.removed_fraction();
        row.precision_defined = tp + fp > 0;
        row.precision = row.precision_defined ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
        row.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
        rows.push_back(row);
    }
    return rows;
}

} // namespace sectionrec
