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

/* config.hpp

   Run configuration. Files are JSON objects whose keys mirror the structs
   below; missing keys keep their defaults and unknown keys are rejected.
   Relative paths resolve against the config file's directory.
*/

#pragma once

#include "sectionrec/counts.hpp"
#include "sectionrec/factorize.hpp"
#include "sectionrec/l2r.hpp"
#include "sectionrec/synth.hpp"
#include "sectionrec/topics.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace sectionrec {

struct PathConfig {
    /// Empty input paths default to the synth output under the work dir.
    std::filesystem::path articles;
    std::filesystem::path categories;
    std::filesystem::path types;
    std::filesystem::path type_universe;
    std::filesystem::path annotations;
    /// Empty means the built-in list.
    std::filesystem::path blacklist;
    std::filesystem::path work_dir = "work";
};

struct CfArticleConfig {
    AlsParams als{32, 0.1, 40.0, 15, 0};
    double holdout_fraction = 0.5;
    std::size_t min_sections = 2;
    /// Candidate lambdas scored on the validation split; empty keeps als.lambda.
    std::vector<double> lambda_grid{0.1, 1.0, 10.0};
};

struct CfCategoryConfig {
    AlsParams als{32, 0.1, 40.0, 15, 0};
    std::size_t top_n = 100;
    /// Predictions kept per category when packaged as a score table.
    std::size_t depth = 100;
};

struct LdaConfig {
    LdaParams params;
    bool include_stubs = true;
};

struct RunConfig {
    PathConfig paths;
    std::uint64_t seed = 42;
    CategoryId root = 1;
    bool drop_stubs = true;
    bool drop_unique = true;
    SplitRatios split;
    double threshold = 0.966;
    std::vector<double> sweep_thresholds;
    MergeScope merge_scope = MergeScope::direct;
    CfArticleConfig cf_article;
    CfCategoryConfig cf_category;
    LdaConfig lda;
    MergeTrainOptions l2r;
    std::size_t k_opt = 10;
    std::size_t k_max = 20;
    std::vector<std::string> methods;
    SynthConfig synth;

    /// Fills defaulted paths and checks ranges.
    void validate() const;
    std::filesystem::path articles_path() const;
    std::filesystem::path categories_path() const;
    std::filesystem::path types_path() const;
    std::filesystem::path type_universe_path() const;
    std::filesystem::path annotations_path() const;
    std::filesystem::path synth_dir() const;
};

RunConfig default_run_config();
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir = {});

/// Sorted-key JSON of every setting.
std::string canonical_json(const RunConfig& config);
std::string config_fingerprint(const RunConfig& config);

/// Every evaluable method name, in report order.
const std::vector<std::string>& known_methods();

} // namespace sectionrec
