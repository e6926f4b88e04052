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


#include "fixtures.hpp"

#include "sectionrec/corpus.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>

using namespace sectionrec;
using fixtures::article;

namespace {

const char* kCategories = "[categories]\n1\tRoot\n2\tTowns\n[edges]\n2\t1\n";

std::string record(int id, const std::string& cats, const std::string& sections = "[\"History\"]")
{
    return "{\"id\":" + std::to_string(id) + ",\"title\":\"T" + std::to_string(id)
        + "\",\"tokens\":[\"a\",\"b\"],\"sections\":" + sections + ",\"categories\":" + cats
        + ",\"is_stub\":false}\n";
}

} // namespace

TEST_CASE("load_corpus parses a three-article file")
{
    fixtures::TempDir dir("corpus_load");
    fixtures::write_file(dir / "cats.tsv", kCategories);
    fixtures::write_file(dir / "a.jsonl", record(1, "[2]") + record(2, "[1,2]") + record(3, "[]"));
    const Corpus c = load_corpus(dir / "a.jsonl", dir / "cats.tsv");
    REQUIRE(c.size() == 3);
    CHECK(c.articles[0].id == 1);
    CHECK(c.articles[1].id == 2);
    CHECK(c.articles[2].id == 3);
    CHECK(c.articles[1].categories == std::vector<CategoryId>{1, 2});
    CHECK(c.find(2)->title == "T2");
    CHECK(c.find(99) == nullptr);
}

TEST_CASE("unknown category is dropped and counted")
{
    fixtures::TempDir dir("corpus_unknown");
    fixtures::write_file(dir / "cats.tsv", kCategories);
    fixtures::write_file(dir / "a.jsonl", record(1, "[2,77]"));
    const Corpus c = load_corpus(dir / "a.jsonl", dir / "cats.tsv");
    REQUIRE(c.size() == 1);
    CHECK(c.articles[0].categories == std::vector<CategoryId>{2});
    CHECK(c.report.dropped_categories == 1);
}

TEST_CASE("duplicate article id is an error naming the id")
{
    fixtures::TempDir dir("corpus_dup");
    fixtures::write_file(dir / "cats.tsv", kCategories);
    fixtures::write_file(dir / "a.jsonl", record(7, "[2]") + record(7, "[2]"));
    try {
        load_corpus(dir / "a.jsonl", dir / "cats.tsv");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find('7') != std::string::npos);
    }
}

TEST_CASE("malformed lines are fatal only above one percent")
{
    fixtures::TempDir dir("corpus_malformed");
    fixtures::write_file(dir / "cats.tsv", kCategories);
    std::string ok;
    for (int i = 1; i <= 200; ++i)
        ok += record(i, "[2]");
    fixtures::write_file(dir / "a.jsonl", ok + "not json\n");
    const Corpus c = load_corpus(dir / "a.jsonl", dir / "cats.tsv");
    CHECK(c.size() == 200);
    CHECK(c.report.malformed_article_lines == 1);

    fixtures::write_file(dir / "b.jsonl", record(1, "[2]") + "not json\n" + record(2, "[2]"));
    CHECK_THROWS_AS(load_corpus(dir / "b.jsonl", dir / "cats.tsv"), Error);
    CHECK_THROWS_AS(load_corpus(dir / "missing.jsonl", dir / "cats.tsv"), Error);
}

TEST_CASE("normalize_title trims and collapses, preserving case")
{
    CHECK(normalize_title("  History ") == "History");
    CHECK(normalize_title("Early   life") == "Early life");
    CHECK(normalize_title("history") == "history");
    CHECK(normalize_title("history") != normalize_title("History"));
    CHECK(normalize_title("a\t\tb") == "a b");
    CHECK_THROWS_AS(normalize_title("   "), Error);
}

TEST_CASE("default blacklist has the fourteen boilerplate titles")
{
    const auto& b = default_blacklist();
    CHECK(b.size() == 14);
    CHECK(std::find(b.begin(), b.end(), "References") != b.end());
}

TEST_CASE("filter_corpus removes blacklisted, unique and stub content")
{
    const Corpus c = fixtures::corpus({
        article(1, {"History", "References", "Monuments, images and cost"}),
        article(2, {"History", "References", "Geography"}),
        article(3, {"Geography"}, {}, true),
        article(4, {"Geography", "References"}),
    });
    const Corpus f = filter_corpus(c, {"References"});
    REQUIRE(f.size() == 3);
    for (const auto& a : f.articles) {
        CHECK_FALSE(a.is_stub);
        CHECK(std::find(a.sections.begin(), a.sections.end(), "References") == a.sections.end());
        CHECK(std::find(a.sections.begin(), a.sections.end(), "Monuments, images and cost") == a.sections.end());
    }
    CHECK(f.find(1)->sections == std::vector<std::string>{"History"});
    CHECK(f.find(2)->sections == std::vector<std::string>{"History", "Geography"});
    CHECK(f.find(4)->sections == std::vector<std::string>{"Geography"});
}

TEST_CASE("filter_corpus with nothing to do is the identity")
{
    const Corpus c = fixtures::corpus({
        article(1, {"History", "Solo"}),
        article(2, {"History"}, {}, true),
    });
    const Corpus f = filter_corpus(c, {}, {false, false});
    REQUIRE(f.size() == 2);
    CHECK(f.articles[0].sections == c.articles[0].sections);
    CHECK(f.articles[1].sections == c.articles[1].sections);
}

TEST_CASE("unique titles are counted per article, not per occurrence")
{
    const Corpus c = fixtures::corpus({
        article(1, {"Twice here", "Twice here", "Shared"}),
        article(2, {"Shared"}),
    });
    const Corpus f = filter_corpus(c, {});
    CHECK(f.find(1)->sections == std::vector<std::string>{"Shared"});
}

TEST_CASE("zero-section articles survive filtering")
{
    const Corpus c = fixtures::corpus({article(1, {"Only once"}), article(2, {})});
    const Corpus f = filter_corpus(c, {});
    REQUIRE(f.size() == 2);
    CHECK(f.find(1)->sections.empty());
    CHECK_FALSE(f.find(1)->has_sections());
}

TEST_CASE("filtering is idempotent and keeps titles normalized")
{
    Rng rng(5);
    const std::vector<std::string> titles = {"History", "References", "A", "B", "C", "D", "E", "See also"};
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Article> arts;
        for (int i = 1; i <= 40; ++i) {
            std::vector<std::string> s;
            for (std::size_t j = 0; j < rng.index(5); ++j)
                s.push_back(titles[rng.index(titles.size())]);
            if (rng.bernoulli(0.2))
                s.push_back("U" + std::to_string(i));
            arts.push_back(article(i, s, {}, rng.bernoulli(0.1)));
        }
        const Corpus c = fixtures::corpus(arts);
        const std::set<std::string> bl = {"References", "See also"};
        const Corpus once = filter_corpus(c, bl);
        const Corpus twice = filter_corpus(once, bl);
        REQUIRE(once.size() == twice.size());
        std::map<std::string, std::size_t> holders;
        for (std::size_t i = 0; i < once.size(); ++i) {
            CHECK(once.articles[i].sections == twice.articles[i].sections);
            for (const auto& t : once.articles[i].distinct_sections()) {
                CHECK(normalize_title(t) == t);
                CHECK(bl.count(t) == 0);
                ++holders[t];
            }
        }
        for (const auto& [t, n] : holders)
            CHECK(n >= 2);
    }
}

TEST_CASE("split sizes follow the ratios")
{
    std::vector<Article> arts;
    for (int i = 1; i <= 100; ++i)
        arts.push_back(article(i, {"X"}));
    const Corpus c = fixtures::corpus(arts);
    const SplitAssignment s = split_corpus(c, {}, 42);
    CHECK(s.train.size() == 80);
    CHECK(s.test.size() == 15);
    CHECK(s.validation.size() == 5);

    std::set<ArticleId> all;
    for (const auto* part : {&s.train, &s.test, &s.validation})
        for (auto id : *part)
            CHECK(all.insert(id).second);
    CHECK(all.size() == 100);

    const SplitAssignment again = split_corpus(c, {}, 42);
    CHECK(again.train == s.train);
    CHECK(again.test == s.test);
    CHECK(again.validation == s.validation);
    CHECK(split_corpus(c, {}, 43).train != s.train);

    CHECK(s.part_of(s.test.front()) == SplitAssignment::Part::test);
    CHECK(s.part_of(1000) == SplitAssignment::Part::none);
}

TEST_CASE("split ratios must sum to one")
{
    const Corpus c = fixtures::corpus({article(1, {"X"})});
    try {
        split_corpus(c, {0.5, 0.5, 0.1}, 1);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::config);
    }
}

TEST_CASE("split proportions stay within one article for odd sizes")
{
    for (int n : {1, 7, 33, 101, 257}) {
        std::vector<Article> arts;
        for (int i = 1; i <= n; ++i)
            arts.push_back(article(i, {}));
        const SplitAssignment s = split_corpus(fixtures::corpus(arts), {}, 9);
        CHECK(s.train.size() + s.test.size() + s.validation.size() == static_cast<std::size_t>(n));
        CHECK(std::abs(static_cast<double>(s.train.size()) - 0.80 * n) <= 1.0);
        CHECK(std::abs(static_cast<double>(s.test.size()) - 0.15 * n) <= 1.0);
        CHECK(std::abs(static_cast<double>(s.validation.size()) - 0.05 * n) <= 1.0);
    }
}

TEST_CASE("corpus_stats histogram")
{
    const Corpus c = fixtures::corpus({
        article(1, {}), article(2, {"A"}), article(3, {"B"}), article(4, {"A", "B"}),
    });
    const CorpusStats s = corpus_stats(c);
    CHECK(s.sections_per_article == std::map<std::size_t, std::size_t>{{0, 1}, {1, 2}, {2, 1}});
    CHECK(s.mean_sections == doctest::Approx(1.0));
    CHECK(s.article_count == 4);
    std::size_t mass = 0;
    for (const auto& [k, v] : s.sections_per_article)
        mass += v;
    CHECK(mass == 4);

    const CorpusStats empty = corpus_stats(Corpus{});
    CHECK(empty.article_count == 0);
    CHECK(empty.mean_sections == 0.0);
    CHECK(empty.stub_fraction == 0.0);
    CHECK(empty.unique_title_count == 0);
    CHECK(empty.sections_per_article.empty());
}

TEST_CASE("articles, splits and category files round-trip")
{
    fixtures::TempDir dir("corpus_roundtrip");
    Article a = article(5, {"Early life", "Career"}, {2, 3});
    a.tokens = {"x", "y"};
    a.quality = "B";
    Article b = article(6, {}, {}, true);
    write_articles({a, b}, dir / "a.jsonl", "hello");
    const Corpus c = load_articles(dir / "a.jsonl");
    REQUIRE(c.size() == 2);
    CHECK(c.articles[0].sections == a.sections);
    CHECK(c.articles[0].tokens == a.tokens);
    CHECK(c.articles[0].categories == a.categories);
    CHECK(c.articles[0].quality == a.quality);
    CHECK(c.articles[1].is_stub);
    CHECK_FALSE(c.articles[1].quality.has_value());

    SplitAssignment s;
    s.train = {1, 2};
    s.test = {3};
    s.validation = {4};
    s.seed = 99;
    write_split(s, dir / "split.tsv");
    const SplitAssignment t = load_split(dir / "split.tsv");
    CHECK(t.train == s.train);
    CHECK(t.test == s.test);
    CHECK(t.validation == s.validation);
    CHECK(t.seed == 99);

    CategoryFile f;
    f.names = {{1, "Root"}, {2, "Child one"}};
    f.edges = {{2, 1}};
    write_category_file(f, dir / "cats.tsv");
    const CategoryFile g = load_category_file(dir / "cats.tsv");
    CHECK(g.names == f.names);
    CHECK(g.edges == f.edges);
}

TEST_CASE("blacklist file is one title per line")
{
    fixtures::TempDir dir("corpus_blacklist");
    fixtures::write_file(dir / "bl.txt", "References\n  See   also \n\n");
    const auto bl = load_blacklist(dir / "bl.txt");
    CHECK(bl == std::set<std::string>{"References", "See also"});
}
