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

#include "sectionrec/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sectionrec {

namespace {

using json = nlohmann::json;

json als_to_json(const AlsParams& p)
{
    return {{"rank", p.rank}, {"lambda", p.lambda}, {"alpha", p.alpha}, {"iterations", p.iterations}};
}

AlsParams als_from_json(const json& j)
{
    AlsParams p;
    p.rank = j.at("rank").get<int>();
    p.lambda = j.at("lambda").get<double>();
    p.alpha = j.at("alpha").get<double>();
    p.iterations = j.at("iterations").get<int>();
    return p;
}

json synth_to_json(const SynthConfig& s)
{
    return {
        {"categories", s.categories},
        {"articles_per_category", s.articles_per_category},
        {"tag_fraction", s.tag_fraction},
        {"tag_members", s.tag_members},
        {"tag_types", s.tag_types},
        {"types_used", s.types_used},
        {"type_universe", s.type_universe},
        {"section_pool_per_type", s.section_pool_per_type},
        {"planted_sections", s.planted_sections},
        {"top_probability", s.top_probability},
        {"second_probability", s.second_probability},
        {"last_probability", s.last_probability},
        {"noise", s.noise},
        {"noise_pool", s.noise_pool},
        {"group_member_fraction", s.group_member_fraction},
        {"stub_fraction", s.stub_fraction},
        {"unique_section_rate", s.unique_section_rate},
        {"boilerplate_rate", s.boilerplate_rate},
        {"maintenance_fraction", s.maintenance_fraction},
        {"alias_cycles", s.alias_cycles},
        {"tokens_per_article", s.tokens_per_article},
        {"type_vocabulary", s.type_vocabulary},
        {"category_vocabulary", s.category_vocabulary},
        {"common_vocabulary", s.common_vocabulary},
        {"type_token_share", s.type_token_share},
        {"category_token_share", s.category_token_share},
    };
}

SynthConfig synth_from_json(const json& j)
{
    SynthConfig s;
    j.at("categories").get_to(s.categories);
    j.at("articles_per_category").get_to(s.articles_per_category);
    j.at("tag_fraction").get_to(s.tag_fraction);
    j.at("tag_members").get_to(s.tag_members);
    j.at("tag_types").get_to(s.tag_types);
    j.at("types_used").get_to(s.types_used);
    j.at("type_universe").get_to(s.type_universe);
    j.at("section_pool_per_type").get_to(s.section_pool_per_type);
    j.at("planted_sections").get_to(s.planted_sections);
    j.at("top_probability").get_to(s.top_probability);
    j.at("second_probability").get_to(s.second_probability);
    j.at("last_probability").get_to(s.last_probability);
    j.at("noise").get_to(s.noise);
    j.at("noise_pool").get_to(s.noise_pool);
    j.at("group_member_fraction").get_to(s.group_member_fraction);
    j.at("stub_fraction").get_to(s.stub_fraction);
    j.at("unique_section_rate").get_to(s.unique_section_rate);
    j.at("boilerplate_rate").get_to(s.boilerplate_rate);
    j.at("maintenance_fraction").get_to(s.maintenance_fraction);
    j.at("alias_cycles").get_to(s.alias_cycles);
    j.at("tokens_per_article").get_to(s.tokens_per_article);
    j.at("type_vocabulary").get_to(s.type_vocabulary);
    j.at("category_vocabulary").get_to(s.category_vocabulary);
    j.at("common_vocabulary").get_to(s.common_vocabulary);
    j.at("type_token_share").get_to(s.type_token_share);
    j.at("category_token_share").get_to(s.category_token_share);
    return s;
}

json to_json(const RunConfig& c)
{
    return {
        {"paths", {
            {"articles", c.paths.articles.generic_string()},
            {"categories", c.paths.categories.generic_string()},
            {"types", c.paths.types.generic_string()},
            {"type_universe", c.paths.type_universe.generic_string()},
            {"annotations", c.paths.annotations.generic_string()},
            {"blacklist", c.paths.blacklist.generic_string()},
            {"work_dir", c.paths.work_dir.generic_string()},
        }},
        {"seed", c.seed},
        {"root", c.root},
        {"filter", {{"drop_stubs", c.drop_stubs}, {"drop_unique", c.drop_unique}}},
        {"split", {{"train", c.split.train}, {"test", c.split.test}, {"validation", c.split.validation}}},
        {"prune", {{"threshold", c.threshold}, {"sweep_thresholds", c.sweep_thresholds}}},
        {"counts", {{"merge_scope", c.merge_scope == MergeScope::direct ? "direct" : "ancestors"}}},
        {"cf_article", {
            {"als", als_to_json(c.cf_article.als)},
            {"holdout_fraction", c.cf_article.holdout_fraction},
            {"min_sections", c.cf_article.min_sections},
            {"lambda_grid", c.cf_article.lambda_grid},
        }},
        {"cf_category", {
            {"als", als_to_json(c.cf_category.als)},
            {"top_n", c.cf_category.top_n},
            {"depth", c.cf_category.depth},
        }},
        {"lda", {
            {"topics", c.lda.params.topics},
            {"alpha", c.lda.params.alpha},
            {"beta", c.lda.params.beta},
            {"train_iterations", c.lda.params.train_iterations},
            {"infer_iterations", c.lda.params.infer_iterations},
            {"stop_words", c.lda.params.stop_words},
            {"include_stubs", c.lda.include_stubs},
        }},
        {"l2r", {
            {"k_opt", c.k_opt},
            {"ridge", c.l2r.ridge},
            {"holdout_fraction", c.l2r.holdout_fraction},
            {"max_features", c.l2r.max_features},
            {"min_articles", c.l2r.min_articles},
        }},
        {"eval", {{"k_max", c.k_max}, {"methods", c.methods}}},
        {"synth", synth_to_json(c.synth)},
    };
}

RunConfig from_json(const json& j)
{
    RunConfig c;
    const auto& p = j.at("paths");
    c.paths.articles = p.at("articles").get<std::string>();
    c.paths.categories = p.at("categories").get<std::string>();
    c.paths.types = p.at("types").get<std::string>();
    c.paths.type_universe = p.at("type_universe").get<std::string>();
    c.paths.annotations = p.at("annotations").get<std::string>();
    c.paths.blacklist = p.at("blacklist").get<std::string>();
    c.paths.work_dir = p.at("work_dir").get<std::string>();
    j.at("seed").get_to(c.seed);
    j.at("root").get_to(c.root);
    j.at("filter").at("drop_stubs").get_to(c.drop_stubs);
    j.at("filter").at("drop_unique").get_to(c.drop_unique);
    j.at("split").at("train").get_to(c.split.train);
    j.at("split").at("test").get_to(c.split.test);
    j.at("split").at("validation").get_to(c.split.validation);
    j.at("prune").at("threshold").get_to(c.threshold);
    j.at("prune").at("sweep_thresholds").get_to(c.sweep_thresholds);
    const auto scope = j.at("counts").at("merge_scope").get<std::string>();
    if (scope == "direct")
        c.merge_scope = MergeScope::direct;
    else if (scope == "ancestors")
        c.merge_scope = MergeScope::ancestors;
    else
        throw Error(ErrorKind::config, "counts.merge_scope must be \"direct\" or \"ancestors\"");
    c.cf_article.als = als_from_json(j.at("cf_article").at("als"));
    j.at("cf_article").at("holdout_fraction").get_to(c.cf_article.holdout_fraction);
    j.at("cf_article").at("min_sections").get_to(c.cf_article.min_sections);
    j.at("cf_article").at("lambda_grid").get_to(c.cf_article.lambda_grid);
    c.cf_category.als = als_from_json(j.at("cf_category").at("als"));
    j.at("cf_category").at("top_n").get_to(c.cf_category.top_n);
    j.at("cf_category").at("depth").get_to(c.cf_category.depth);
    const auto& l = j.at("lda");
    l.at("topics").get_to(c.lda.params.topics);
    l.at("alpha").get_to(c.lda.params.alpha);
    l.at("beta").get_to(c.lda.params.beta);
    l.at("train_iterations").get_to(c.lda.params.train_iterations);
    l.at("infer_iterations").get_to(c.lda.params.infer_iterations);
    l.at("stop_words").get_to(c.lda.params.stop_words);
    l.at("include_stubs").get_to(c.lda.include_stubs);
    const auto& r = j.at("l2r");
    r.at("k_opt").get_to(c.k_opt);
    r.at("ridge").get_to(c.l2r.ridge);
    r.at("holdout_fraction").get_to(c.l2r.holdout_fraction);
    r.at("max_features").get_to(c.l2r.max_features);
    r.at("min_articles").get_to(c.l2r.min_articles);
    j.at("eval").at("k_max").get_to(c.k_max);
    j.at("eval").at("methods").get_to(c.methods);
    c.synth = synth_from_json(j.at("synth"));
    return c;
}

/// Overlays `patch` onto `base`, rejecting keys `base` does not have.
void overlay(json& base, const json& patch, const std::string& where)
{
    if (!patch.is_object())
        throw Error(ErrorKind::config, "config: " + (where.empty() ? std::string("top level") : where)
                    + " must be an object");
    for (const auto& [key, value] : patch.items()) {
        const std::string path = where.empty() ? key : where + "." + key;
        if (!base.contains(key))
            throw Error(ErrorKind::config, "config: unknown key " + path);
        if (base[key].is_object())
            overlay(base[key], value, path);
        else
            base[key] = value;
    }
}

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base)
{
    if (p.empty() || p.is_absolute() || base.empty())
        return p;
    return base / p;
}

} // namespace

RunConfig default_run_config()
{
    return RunConfig{};
}

RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir)
{
    json patch;
    try {
        patch = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::config, std::string("config: not valid JSON: ") + e.what());
    }
    json merged = to_json(default_run_config());
    overlay(merged, patch, "");
    RunConfig c;
    try {
        c = from_json(merged);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::config, std::string("config: ") + e.what());
    }
    auto& paths = c.paths;
    for (auto* p : {&paths.articles, &paths.categories, &paths.types, &paths.type_universe,
                    &paths.annotations, &paths.blacklist, &paths.work_dir})
        *p = resolve(*p, base_dir);
    c.validate();
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::config, "cannot read config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_run_config(text.str(), path.parent_path());
}

void RunConfig::validate() const
{
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::config, "config: " + msg); };
    auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (paths.work_dir.empty())
        fail("paths.work_dir must be set");
    if (std::abs(split.train + split.test + split.validation - 1.0) > 1e-9)
        fail("split ratios must sum to 1");
    if (!in_unit(threshold))
        fail("prune.threshold must lie in [0, 1]");
    for (double t : sweep_thresholds)
        if (!in_unit(t))
            fail("prune.sweep_thresholds must lie in [0, 1]");
    for (const auto* als : {&cf_article.als, &cf_category.als}) {
        if (als->rank < 1)
            fail("als.rank must be at least 1");
        if (als->lambda < 0.0 || als->alpha < 0.0)
            fail("als.lambda and als.alpha must be non-negative");
        if (als->iterations < 1)
            fail("als.iterations must be at least 1");
    }
    if (!(cf_article.holdout_fraction > 0.0 && cf_article.holdout_fraction < 1.0))
        fail("cf_article.holdout_fraction must lie in (0, 1)");
    for (double l : cf_article.lambda_grid)
        if (!(l >= 0.0))
            fail("cf_article.lambda_grid values must be non-negative");
    if (cf_article.min_sections < 2)
        fail("cf_article.min_sections must be at least 2");
    if (cf_category.top_n == 0 || cf_category.depth == 0)
        fail("cf_category.top_n and depth must be positive");
    if (lda.params.topics < 1)
        fail("lda.topics must be at least 1");
    if (lda.params.beta <= 0.0)
        fail("lda.beta must be positive");
    if (lda.params.train_iterations < 1 || lda.params.infer_iterations < 1)
        fail("lda iterations must be at least 1");
    if (k_opt == 0 || k_max == 0)
        fail("l2r.k_opt and eval.k_max must be positive");
    if (l2r.ridge < 0.0 || !(l2r.holdout_fraction > 0.0 && l2r.holdout_fraction < 1.0))
        fail("l2r.ridge must be non-negative and l2r.holdout_fraction in (0, 1)");
    if (l2r.max_features == 0)
        fail("l2r.max_features must be positive");
    const auto& known = known_methods();
    for (const auto& m : methods)
        if (std::find(known.begin(), known.end(), m) == known.end())
            fail("unknown method " + m);
    synth.validate();
}

std::filesystem::path RunConfig::synth_dir() const { return paths.work_dir / "synth"; }

std::filesystem::path RunConfig::articles_path() const
{
    return paths.articles.empty() ? synth_dir() / "articles.jsonl" : paths.articles;
}

std::filesystem::path RunConfig::categories_path() const
{
    return paths.categories.empty() ? synth_dir() / "categories.tsv" : paths.categories;
}

std::filesystem::path RunConfig::types_path() const
{
    return paths.types.empty() ? synth_dir() / "types.tsv" : paths.types;
}

std::filesystem::path RunConfig::type_universe_path() const
{
    return paths.type_universe.empty() ? synth_dir() / "type_universe.tsv" : paths.type_universe;
}

std::filesystem::path RunConfig::annotations_path() const
{
    return paths.annotations.empty() ? synth_dir() / "annotations.tsv" : paths.annotations;
}

std::string canonical_json(const RunConfig& config)
{
    return to_json(config).dump();
}

std::string config_fingerprint(const RunConfig& config)
{
    return fnv1a_hex(canonical_json(config));
}

const std::vector<std::string>& known_methods()
{
    static const std::vector<std::string> methods = {
        "random", "cf-article", "topic", "cf-category", "cf-category-l2r", "counts", "counts-l2r",
    };
    return methods;
}

} // namespace sectionrec
