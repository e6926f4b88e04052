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

#include "sectionrec/synth.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace sectionrec {

namespace {

const std::vector<std::string>& facet_titles()
{
    static const std::vector<std::string> titles = {
        "History", "Geography", "Demographics", "Economy", "Education", "Culture",
        "Transportation", "Climate", "Government", "Notable people", "Sports", "Media",
        "Early life", "Career", "Personal life", "Legacy", "Awards", "Filmography",
        "Discography", "Works", "Reception", "Plot", "Cast", "Production",
        "Release", "Soundtrack", "Gameplay", "Development", "Description", "Distribution",
        "Habitat", "Behaviour", "Taxonomy", "Conservation", "Architecture", "Facilities",
        "Campus", "Organization", "Academics", "Research", "Student life", "Athletics",
        "Route description", "Services", "Operations", "Fleet", "Design", "Specifications",
        "Variants", "Service history", "Background", "Aftermath", "Casualties", "Prelude",
        "Battle", "Etymology", "Course", "Tributaries", "Ecology", "Parks and recreation",
        "Infrastructure", "Religion", "Politics", "Track listing",
    };
    return titles;
}

const std::vector<std::string>& noise_adjectives()
{
    static const std::vector<std::string> words = {
        "Local", "Recent", "Later", "Early", "Modern", "Regional", "Further", "Other",
        "Popular", "Public", "Selected", "Historical", "Cultural", "Natural", "Major",
        "Minor", "Notable", "Former", "Current", "Annual",
    };
    return words;
}

const std::vector<std::string>& noise_nouns()
{
    static const std::vector<std::string> words = {
        "events", "works", "issues", "developments", "traditions", "disputes", "projects",
        "controversies", "activities", "achievements", "changes", "records", "influences",
        "legends", "festivals", "landmarks", "incidents", "honours", "appearances", "topics",
    };
    return words;
}

std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t k)
{
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i)
        idx[i] = i;
    for (std::size_t i = 0; i < k; ++i)
        std::swap(idx[i], idx[i + rng.index(n - i)]);
    idx.resize(k);
    return idx;
}

std::string type_name(std::size_t t)
{
    std::string digits = std::to_string(t);
    if (digits.size() < 2)
        digits.insert(0, 2 - digits.size(), '0');
    return "type_" + digits;
}

} // namespace

double SynthConfig::planted_mean() const
{
    if (planted_sections == 0)
        return 0.0;
    double sum = top_probability;
    const std::size_t rest = planted_sections - 1;
    for (std::size_t j = 0; j < rest; ++j) {
        const double t = rest > 1 ? static_cast<double>(j) / static_cast<double>(rest - 1) : 0.0;
        sum += second_probability + t * (last_probability - second_probability);
    }
    return sum;
}

void SynthConfig::validate() const
{
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::config, "synth: " + msg); };
    auto unit = [&](double x, const char* name) {
        if (!(x >= 0.0 && x <= 1.0))
            fail(std::string(name) + " must lie in [0, 1]");
    };
    if (categories == 0)
        fail("categories must be positive");
    if (articles_per_category == 0)
        fail("articles_per_category must be positive");
    unit(tag_fraction, "tag_fraction");
    if (tag_fraction >= 1.0)
        fail("tag_fraction must be below 1");
    if (types_used == 0 || types_used > type_universe)
        fail("types_used must lie in [1, type_universe]");
    const auto n_tags = static_cast<std::size_t>(std::llround(tag_fraction * static_cast<double>(categories)));
    if (categories - n_tags < types_used)
        fail("need at least one pure category per used type");
    if (n_tags > 0 && (tag_types < 2 || tag_types > types_used))
        fail("tag_types must lie in [2, types_used]");
    if (n_tags > 0 && tag_members < tag_types)
        fail("tag_members must be at least tag_types");
    if (planted_sections == 0 || planted_sections > section_pool_per_type)
        fail("planted_sections must lie in [1, section_pool_per_type]");
    unit(top_probability, "top_probability");
    unit(second_probability, "second_probability");
    unit(last_probability, "last_probability");
    unit(noise, "noise");
    if (noise > 0.0 && noise_pool == 0)
        fail("noise_pool must be positive when noise > 0");
    if (noise_pool > noise_adjectives().size() * noise_nouns().size())
        fail("noise_pool too large");
    unit(group_member_fraction, "group_member_fraction");
    unit(stub_fraction, "stub_fraction");
    unit(unique_section_rate, "unique_section_rate");
    unit(boilerplate_rate, "boilerplate_rate");
    unit(maintenance_fraction, "maintenance_fraction");
    unit(type_token_share, "type_token_share");
    unit(category_token_share, "category_token_share");
    if (type_token_share + category_token_share > 1.0)
        fail("token shares exceed 1");
    if (tokens_per_article == 0 || type_vocabulary == 0 || category_vocabulary == 0
        || common_vocabulary == 0)
        fail("token settings must be positive");
}

SynthOutput generate_synthetic(const SynthConfig& config, std::uint64_t seed)
{
    config.validate();
    SynthOutput out;
    out.config = config;
    out.seed = seed;

    const std::size_t n_tags = static_cast<std::size_t>(std::llround(config.tag_fraction * static_cast<double>(config.categories)));
    const std::size_t n_leaves = config.categories - n_tags;
    const std::size_t n_types = config.types_used;

    Rng structure(derive_seed(seed, "synth-structure"));
    Rng articles_rng(derive_seed(seed, "synth-articles"));
    Rng tokens_rng(derive_seed(seed, "synth-tokens"));
    Rng tags_rng(derive_seed(seed, "synth-tags"));

    // Types: a random subset of the universe is used.
    for (std::size_t t = 0; t < config.type_universe; ++t)
        out.types.type_names.push_back(type_name(t));
    std::vector<TypeId> used_types;
    for (auto i : sample_without_replacement(structure, config.type_universe, n_types))
        used_types.push_back(static_cast<TypeId>(i));

    // Category ids.
    auto& names = out.categories.names;
    auto& edges = out.categories.edges;
    CategoryId next_id = 1;
    out.root = next_id++;
    names[out.root] = "Root";
    std::vector<CategoryId> groups;
    for (std::size_t g = 0; g < n_types; ++g) {
        const CategoryId id = next_id++;
        groups.push_back(id);
        out.group_types[id] = used_types[g];
        names[id] = "Group " + out.types.type_names[static_cast<std::size_t>(used_types[g])];
        edges.emplace_back(id, out.root);
    }
    for (std::size_t a = 0; a < config.alias_cycles; ++a) {
        const CategoryId id = next_id++;
        const CategoryId g = groups[a % groups.size()];
        names[id] = "Alias of " + names[g];
        edges.emplace_back(id, g);
        edges.emplace_back(g, id);
    }

    // Section pools per type.
    std::vector<std::string> facets = facet_titles();
    for (std::size_t i = facets.size(); i < config.section_pool_per_type; ++i)
        facets.push_back("Facet " + std::to_string(i));
    std::vector<std::vector<std::string>> pools(n_types);
    for (std::size_t g = 0; g < n_types; ++g)
        for (auto i : sample_without_replacement(structure, facets.size(), config.section_pool_per_type))
            pools[g].push_back(facets[i]);

    for (auto i : sample_without_replacement(structure, noise_adjectives().size() * noise_nouns().size(), config.noise_pool))
        out.noise_titles.push_back(noise_adjectives()[i / noise_nouns().size()] + " "
                                   + noise_nouns()[i % noise_nouns().size()]);
    std::sort(out.noise_titles.begin(), out.noise_titles.end());

    // Planted probabilities, highest first.
    std::vector<double> probs;
    probs.push_back(config.top_probability);
    const std::size_t rest = config.planted_sections - 1;
    for (std::size_t j = 0; j < rest; ++j) {
        const double t = rest > 1 ? static_cast<double>(j) / static_cast<double>(rest - 1) : 0.0;
        probs.push_back(config.second_probability + t * (config.last_probability - config.second_probability));
    }

    // Pure leaves and their articles.
    std::vector<CategoryId> leaf_ids;
    for (std::size_t i = 0; i < n_leaves; ++i)
        leaf_ids.push_back(next_id++);
    std::vector<CategoryId> tag_ids;
    for (std::size_t i = 0; i < n_tags; ++i)
        tag_ids.push_back(next_id++);
    CategoryId maintenance_id = 0;
    if (config.maintenance_fraction > 0.0) {
        maintenance_id = next_id++;
        names[maintenance_id] = "Articles needing cleanup";
    }

    const auto& blacklist = default_blacklist();
    const std::vector<std::string> boilerplate(blacklist.begin(), blacklist.begin() + std::min<std::size_t>(3, blacklist.size()));
    const std::size_t n = config.articles_per_category;
    ArticleId next_article = 1;
    std::vector<std::vector<ArticleId>> articles_by_type(n_types);

    for (std::size_t i = 0; i < n_leaves; ++i) {
        const std::size_t g = i % n_types;
        PlantedCategory leaf;
        leaf.id = leaf_ids[i];
        leaf.type = used_types[g];
        leaf.group = groups[g];
        names[leaf.id] = "Leaf " + std::to_string(i) + " (" + out.types.type_names[static_cast<std::size_t>(leaf.type)] + ")";
        edges.emplace_back(leaf.id, leaf.group);
        for (auto p : sample_without_replacement(structure, pools[g].size(), config.planted_sections))
            leaf.sections.emplace_back(pools[g][p], probs[leaf.sections.size()]);

        // Stratified allocation: exactly round(p * n) holders per section.
        std::vector<std::vector<bool>> holds(n, std::vector<bool>(leaf.sections.size(), false));
        for (std::size_t j = 0; j < leaf.sections.size(); ++j) {
            const auto count = static_cast<std::size_t>(std::llround(leaf.sections[j].second * static_cast<double>(n)));
            for (auto a : sample_without_replacement(articles_rng, n, std::min(count, n)))
                holds[a][j] = true;
        }

        for (std::size_t a = 0; a < n; ++a) {
            Article art;
            art.id = next_article++;
            art.title = "Article " + std::to_string(art.id);
            for (std::size_t j = 0; j < leaf.sections.size(); ++j) {
                if (!holds[a][j])
                    continue;
                if (config.noise > 0.0 && articles_rng.bernoulli(config.noise))
                    art.sections.push_back(out.noise_titles[articles_rng.index(out.noise_titles.size())]);
                else
                    art.sections.push_back(leaf.sections[j].first);
            }
            if (config.unique_section_rate > 0.0 && articles_rng.bernoulli(config.unique_section_rate))
                art.sections.push_back("Remarks on " + art.title);
            for (const auto& b : boilerplate)
                if (config.boilerplate_rate > 0.0 && articles_rng.bernoulli(config.boilerplate_rate))
                    art.sections.push_back(b);
            art.is_stub = config.stub_fraction > 0.0 && articles_rng.bernoulli(config.stub_fraction);
            art.categories.push_back(leaf.id);
            if (config.group_member_fraction > 0.0 && articles_rng.bernoulli(config.group_member_fraction))
                art.categories.push_back(leaf.group);
            if (maintenance_id != 0 && articles_rng.bernoulli(config.maintenance_fraction))
                art.categories.push_back(maintenance_id);

            const double type_cut = config.type_token_share;
            const double cat_cut = config.type_token_share + config.category_token_share;
            const std::string type_prefix = "t" + std::to_string(leaf.type) + "w";
            const std::string cat_prefix = "c" + std::to_string(leaf.id) + "w";
            for (std::size_t t = 0; t < config.tokens_per_article; ++t) {
                const double u = tokens_rng.uniform();
                if (u < type_cut)
                    art.tokens.push_back(type_prefix + std::to_string(tokens_rng.index(config.type_vocabulary)));
                else if (u < cat_cut)
                    art.tokens.push_back(cat_prefix + std::to_string(tokens_rng.index(config.category_vocabulary)));
                else
                    art.tokens.push_back("common" + std::to_string(tokens_rng.index(config.common_vocabulary)));
            }

            out.types.types[art.id] = leaf.type;
            leaf.articles.push_back(art.id);
            articles_by_type[g].push_back(art.id);
            out.articles.push_back(std::move(art));
        }
        out.planted.push_back(std::move(leaf));
    }

    // Tag categories: balanced members from several types, attached to a group.
    std::set<std::tuple<ArticleId, CategoryId, bool>> annotations;
    for (std::size_t i = 0; i < n_tags; ++i) {
        TagCategory tag;
        tag.id = tag_ids[i];
        const auto picked = sample_without_replacement(tags_rng, n_types, config.tag_types);
        tag.group = groups[tags_rng.index(groups.size())];
        names[tag.id] = "Tag " + std::to_string(i);
        edges.emplace_back(tag.id, tag.group);
        for (std::size_t p = 0; p < picked.size(); ++p) {
            const std::size_t g = picked[p];
            tag.types.push_back(used_types[g]);
            std::size_t want = config.tag_members / picked.size() + (p < config.tag_members % picked.size() ? 1 : 0);
            want = std::min(want, articles_by_type[g].size());
            for (auto a : sample_without_replacement(tags_rng, articles_by_type[g].size(), want))
                tag.members.push_back(articles_by_type[g][a]);
        }
        std::sort(tag.members.begin(), tag.members.end());
        const TypeId group_type = out.group_types.at(tag.group);
        for (auto a : tag.members) {
            auto& cats = out.articles[static_cast<std::size_t>(a - 1)].categories;
            cats.push_back(tag.id);
            annotations.emplace(a, tag.id, false);
            annotations.emplace(a, tag.group, out.types.types.at(a) == group_type);
        }
        out.tags.push_back(std::move(tag));
    }

    for (const auto& leaf : out.planted)
        for (auto a : leaf.articles) {
            annotations.emplace(a, leaf.id, true);
            annotations.emplace(a, leaf.group, true);
        }
    for (const auto& [a, c, label] : annotations)
        out.annotations.push_back({a, c, label});

    for (auto& art : out.articles) {
        std::sort(art.categories.begin(), art.categories.end());
        art.categories.erase(std::unique(art.categories.begin(), art.categories.end()), art.categories.end());
    }
    std::sort(edges.begin(), edges.end());
    return out;
}

void write_synthetic(const SynthOutput& out, const std::filesystem::path& dir,
                     const std::string& header)
{
    write_articles(out.articles, dir / "articles.jsonl", header);
    write_category_file(out.categories, dir / "categories.tsv", header);
    write_type_map(out.types, dir / "types.tsv", dir / "type_universe.tsv", header);
    write_annotations(out.annotations, dir / "annotations.tsv", header);

    nlohmann::json truth;
    truth["header"] = header;
    truth["seed"] = out.seed;
    truth["root"] = out.root;
    truth["planted_mean"] = out.config.planted_mean();
    auto& planted = truth["planted"];
    planted = nlohmann::json::array();
    for (const auto& leaf : out.planted) {
        nlohmann::json sections = nlohmann::json::array();
        for (const auto& [title, p] : leaf.sections)
            sections.push_back({{"section", title}, {"probability", p}});
        planted.push_back({{"id", leaf.id}, {"type", leaf.type}, {"group", leaf.group},
                           {"sections", sections}, {"articles", leaf.articles}});
    }
    auto& tags = truth["tags"];
    tags = nlohmann::json::array();
    for (const auto& tag : out.tags)
        tags.push_back({{"id", tag.id}, {"group", tag.group}, {"types", tag.types},
                        {"members", tag.members}});
    auto& groups = truth["groups"];
    groups = nlohmann::json::object();
    for (const auto& [g, t] : out.group_types)
        groups[std::to_string(g)] = t;
    truth["noise_titles"] = out.noise_titles;
    auto f = open_output(dir / "truth.json");
    f << truth.dump(1) << '\n';
}

} // namespace sectionrec
