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

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace sectionrec {

struct ScoredSection {
    std::string section;
    double score = 0.0;

    bool operator==(const ScoredSection&) const = default;
};

/// Descending score, then ascending title.
inline bool ranks_before(const ScoredSection& a, const ScoredSection& b)
{
    if (a.score != b.score)
        return a.score > b.score;
    return a.section < b.section;
}

/// Ordered recommendation list tagged with the method that produced it.
struct Ranking {
    std::string method;
    std::vector<ScoredSection> items;
    /// Set when the list is empty or degenerate for an explainable reason.
    std::optional<std::string> flag;

    std::size_t size() const { return items.size(); }
    bool empty() const { return items.empty(); }
    std::vector<std::string> titles() const;
};

/// Sorts accumulated scores into a ranking, drops `exclude`, keeps the top k.
Ranking top_k(std::string method,
              const std::unordered_map<std::string, double>& scores,
              std::size_t k,
              const std::unordered_set<std::string>& exclude = {});

/// Same as above for an unsorted candidate list without duplicates.
Ranking top_k(std::string method,
              std::vector<ScoredSection> candidates,
              std::size_t k,
              const std::unordered_set<std::string>& exclude = {});

} // namespace sectionrec
