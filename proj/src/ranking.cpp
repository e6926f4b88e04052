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

#include "sectionrec/ranking.hpp"

#include <algorithm>

namespace sectionrec {

std::vector<std::string> Ranking::titles() const
{
    std::vector<std::string> out;
    out.reserve(items.size());
    for (const auto& item : items)
        out.push_back(item.section);
    return out;
}

Ranking top_k(std::string method,
              const std::unordered_map<std::string, double>& scores,
              std::size_t k,
              const std::unordered_set<std::string>& exclude)
{
    std::vector<ScoredSection> candidates;
    candidates.reserve(scores.size());
    for (const auto& [section, score] : scores)
        candidates.push_back({section, score});
    return top_k(std::move(method), std::move(candidates), k, exclude);
}

Ranking top_k(std::string method,
              std::vector<ScoredSection> candidates,
              std::size_t k,
              const std::unordered_set<std::string>& exclude)
{
    if (!exclude.empty()) {
        std::erase_if(candidates, [&](const ScoredSection& s) {
            return exclude.count(s.section) > 0;
        });
    }
    const std::size_t keep = std::min(k, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + keep,
                      candidates.end(), ranks_before);
    candidates.resize(keep);

    Ranking out;
    out.method = std::move(method);
    out.items = std::move(candidates);
    return out;
}

} // namespace sectionrec
