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

/* synth.hpp

   Synthetic corpus with planted structure.

   Layout of the category network (ids in this order):
     1                      root
     groups                 one per used type, child of the root
     aliases                optional, in a 2-cycle with their group
     pure leaves            one type each, child of their type's group
     tag categories         members drawn from >= 3 types, child of a group
     maintenance            not reachable from the root

   Every article has exactly one home leaf. Each leaf plants
   `planted_sections` titles with probabilities falling linearly from
   `top_probability` (first) through `second_probability` down to
   `last_probability`; section j is given to exactly round(p_j * n) of the
   leaf's n articles. Each planted occurrence is replaced by a title from the
   noise pool with probability `noise`.
*/

#pragma once

#include "sectionrec/catgraph.hpp"
#include "sectionrec/corpus.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace sectionrec {

struct SynthConfig {
    std::size_t categories = 200;        // leaves plus tags
    std::size_t articles_per_category = 30;
    double tag_fraction = 0.20;
    std::size_t tag_members = 30;
    std::size_t tag_types = 3;
    std::size_t types_used = 10;
    std::size_t type_universe = 55;
    std::size_t section_pool_per_type = 24;
    std::size_t planted_sections = 8;
    double top_probability = 1.0;
    double second_probability = 0.6;
    double last_probability = 0.2;
    double noise = 0.10;
    std::size_t noise_pool = 200;
    /// Fraction of articles that are also direct members of their group.
    double group_member_fraction = 0.5;
    double stub_fraction = 0.02;
    double unique_section_rate = 0.05;
    double boilerplate_rate = 0.3;  // per blacklisted title
    double maintenance_fraction = 0.05;
    std::size_t alias_cycles = 2;
    std::size_t tokens_per_article = 60;
    std::size_t type_vocabulary = 30;
    std::size_t category_vocabulary = 10;
    std::size_t common_vocabulary = 50;
    double type_token_share = 0.4;
    double category_token_share = 0.4;

    /// Expected number of planted sections per article.
    double planted_mean() const;
    void validate() const;
};

struct PlantedCategory {
    CategoryId id = 0;
    TypeId type = 0;
    CategoryId group = 0;
    /// (title, planted probability), highest first.
    std::vector<std::pair<std::string, double>> sections;
    std::vector<ArticleId> articles;
};

struct TagCategory {
    CategoryId id = 0;
    CategoryId group = 0;
    std::vector<TypeId> types;
    std::vector<ArticleId> members;
};

struct SynthOutput {
    SynthConfig config;
    std::uint64_t seed = 0;
    std::vector<Article> articles;
    CategoryFile categories;
    TypeMap types;
    std::vector<Annotation> annotations;
    CategoryId root = 1;
    std::map<CategoryId, TypeId> group_types;
    std::vector<PlantedCategory> planted;
    std::vector<TagCategory> tags;
    std::vector<std::string> noise_titles;
};

SynthOutput generate_synthetic(const SynthConfig& config, std::uint64_t seed);

/// Writes articles.jsonl, categories.tsv, types.tsv, type_universe.tsv,
/// annotations.tsv and truth.json into `dir`.
void write_synthetic(const SynthOutput& out, const std::filesystem::path& dir,
                     const std::string& header = {});

} // namespace sectionrec
