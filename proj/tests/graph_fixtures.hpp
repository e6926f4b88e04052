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

// Small category graphs shared by the unit and acceptance tests.

#pragma once

#include "sectionrec/catgraph.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace fixtures {

using namespace sectionrec;

inline TypeMap universe_types(std::size_t universe = 55)
{
    TypeMap t;
    for (std::size_t i = 0; i < universe; ++i)
        t.type_names.push_back("type" + std::to_string(i));
    return t;
}

inline CategoryGraph graph_from(const std::vector<CategoryId>& nodes, std::vector<Edge> edges,
                                std::map<CategoryId, std::vector<ArticleId>> members = {})
{
    CategoryGraph g;
    for (auto c : nodes)
        g.names[c] = "C" + std::to_string(c);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    g.edges = std::move(edges);
    g.members = std::move(members);
    return g;
}

// Towns fixture. 1 Populated places; 2 University towns in the
// United States; 3 Unincorporated communities; 4 Stanford University.
// Articles: 10 Stanford CA, 11 Fruitdale CA, 12 Loyola CA (towns);
// 20 Leland Stanford (person), 21 Knight chairs list (list),
// 22 Stanford Entrepreneurship Corner (organization).
struct StanfordFixture {
    CategoryGraph graph;
    TypeMap types = universe_types();
    StanfordFixture()
    {
        graph = graph_from({1, 2, 3, 4}, {{2, 1}, {3, 1}, {4, 2}},
                           {{2, {10}}, {3, {10, 11, 12}}, {4, {10, 20, 21, 22}}});
        graph.names = {{1, "Populated places"}, {2, "University towns in the United States"},
                       {3, "Unincorporated communities"}, {4, "Stanford University"}};
        graph.root = 1;
        for (ArticleId a : {10, 11, 12})
            types.types[a] = 0;
        types.types[20] = 1;
        types.types[21] = 3;
        types.types[22] = 2;
    }
};

} // namespace fixtures
