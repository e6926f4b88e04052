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

/* catgraph.hpp

   Category network: restriction to a root's subtree, feedback-arc-set cycle
   breaking, transitive closure, type-histogram purity and bottom-up pruning
   of impure categories.

   Edges always point child -> parent. The "subtree" of a category c is the
   set of categories from which c is reachable along those edges.
*/

#pragma once

#include "sectionrec/common.hpp"
#include "sectionrec/corpus.hpp"

#include <filesystem>
#include <map>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sectionrec {

using Edge = std::pair<CategoryId, CategoryId>;  // (child, parent)

struct CategoryGraph {
    std::map<CategoryId, std::string> names;
    /// Sorted, unique child -> parent edges between known nodes.
    std::vector<Edge> edges;
    /// Direct article members per category, sorted ascending.
    std::map<CategoryId, std::vector<ArticleId>> members;
    CategoryId root = 0;

    bool contains(CategoryId c) const { return names.count(c) > 0; }
    std::size_t node_count() const { return names.size(); }
};

/// Graph over the category file with memberships taken from the articles'
/// direct categories. Memberships naming unknown categories are ignored.
CategoryGraph build_category_graph(const CategoryFile& file,
                                   const std::vector<Article>& articles,
                                   CategoryId root);

/*****************************************************************************/
/* TYPES                                                                     */
/*****************************************************************************/

/// Article -> top-level entity type over a fixed universe.
struct TypeMap {
    std::vector<std::string> type_names;  // index = type id
    std::unordered_map<ArticleId, TypeId> types;

    std::size_t universe_size() const { return type_names.size(); }
    /// -1 when the article has no known type.
    TypeId type_of(ArticleId a) const;
};

TypeMap load_type_map(const std::filesystem::path& map_path,
                      const std::filesystem::path& universe_path);
void write_type_map(const TypeMap& map, const std::filesystem::path& map_path,
                    const std::filesystem::path& universe_path,
                    const std::string& header = {});

/// Per-category counts over the type universe.
class TypeHistogram {
public:
    TypeHistogram() = default;
    explicit TypeHistogram(std::size_t universe) : counts_(universe, 0) {}
    explicit TypeHistogram(std::vector<std::int64_t> counts);

    std::size_t size() const { return counts_.size(); }
    std::int64_t total() const;
    bool empty_mass() const { return total() == 0; }
    std::int64_t operator[](std::size_t i) const { return counts_[i]; }
    const std::vector<std::int64_t>& counts() const { return counts_; }

    void add(TypeId type, std::int64_t n = 1);
    TypeHistogram& operator+=(const TypeHistogram& other);

private:
    std::vector<std::int64_t> counts_;
};

/// Gini coefficient over every bin of the universe, zero bins included:
/// sum_i sum_j |x_i - x_j| / (2 n sum_i x_i). Throws on an all-zero histogram.
double gini(const TypeHistogram& hist);

/*****************************************************************************/
/* GRAPH OPERATIONS                                                          */
/*****************************************************************************/

/// Keeps the nodes from which `root` is reachable.
CategoryGraph restrict_to_root(const CategoryGraph& graph, CategoryId root);

struct CycleBreakResult {
    CategoryGraph dag;
    std::vector<Edge> removed_edges;
};

/// Greedy vertex-ordering feedback arc set: peel sinks to the right end,
/// sources to the left end, otherwise move the vertex with the largest
/// outdegree - indegree to the left. Edges pointing right-to-left in the
/// final order are removed. Ties go to the smallest category id.
CycleBreakResult break_cycles(const CategoryGraph& graph);

bool is_acyclic(const CategoryGraph& graph);

/// Articles directly in `c` or in any category below it. Sorted.
std::vector<ArticleId> closure_members(const CategoryGraph& dag, CategoryId c);

/// Closure of every node, built bottom-up. Requires an acyclic graph.
std::map<CategoryId, std::vector<ArticleId>> all_closures(const CategoryGraph& dag);

/// Children-before-parents order, ties by ascending id.
std::vector<CategoryId> bottom_up_order(const CategoryGraph& dag);

/*****************************************************************************/
/* PRUNING                                                                   */
/*****************************************************************************/

struct PrunedNode {
    /// Gini of the aggregated histogram; 0 when the histogram is empty.
    double purity = 0.0;
    TypeHistogram histogram;
    std::size_t closure_size = 0;
};

struct PrunedGraph {
    /// Surviving nodes, edges among them, and their direct memberships.
    CategoryGraph graph;
    /// Per surviving node.
    std::map<CategoryId, PrunedNode> nodes;
    /// Purity of every evaluated node, including removed ones.
    std::map<CategoryId, double> evaluated_purity;
    std::set<CategoryId> removed;
    double threshold = 0.0;
    std::size_t evaluations = 0;

    bool kept(CategoryId c) const { return nodes.count(c) > 0; }
    double removed_fraction() const;
};

/// Bottom-up pruning. A node's histogram is the types of its direct members
/// plus the histograms returned by its children; a node with gini above the
/// threshold is kept and returns its histogram to every parent, otherwise it
/// is removed with all incident edges and returns nothing. Nodes with an
/// all-zero histogram count as impure.
PrunedGraph prune(const CategoryGraph& dag, const TypeMap& types, double threshold);

void write_pruned_graph(const PrunedGraph& pruned, const std::filesystem::path& path,
                        const std::string& header = {});

/// Reloads nodes, purity, closure sizes and edges; memberships are rebuilt
/// from the articles' direct categories. Histograms are not persisted.
PrunedGraph load_pruned_graph(const std::filesystem::path& path,
                              const std::vector<Article>& articles);

/*****************************************************************************/
/* THRESHOLD SWEEP                                                           */
/*****************************************************************************/

/// "Is `article` a `category`?" judgement.
struct Annotation {
    ArticleId article = 0;
    CategoryId category = 0;
    bool label = false;
};

std::vector<Annotation> load_annotations(const std::filesystem::path& path);
void write_annotations(const std::vector<Annotation>& annotations,
                       const std::filesystem::path& path,
                       const std::string& header = {});

struct SweepRow {
    double threshold = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double removed_fraction = 0.0;
    /// False when nothing was predicted positive; precision is then 0.
    bool precision_defined = true;
};

/// For each threshold, an annotated path is predicted present when the
/// article is still in the category's closure after pruning.
std::vector<SweepRow> threshold_sweep(const CategoryGraph& dag, const TypeMap& types,
                                      const std::vector<Annotation>& annotations,
                                      const std::vector<double>& thresholds);

} // namespace sectionrec
