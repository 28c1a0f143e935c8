#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "opinionfit/aggregate.hpp"
#include "opinionfit/errors.hpp"
#include "test_util.hpp"

using namespace opinionfit;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("aggregate");

TEST_CASE("post_sentiment") {
    CHECK(post_sentiment({{0.7, 5}}) == doctest::Approx(0.7).epsilon(1e-12));
    // hand check: (0.2*1 + 0.8*3) / 4 = 0.65
    CHECK(post_sentiment({{0.2, 1}, {0.8, 3}}) == doctest::Approx(0.65).epsilon(1e-12));
    CHECK(post_sentiment({{0.3, 0}, {0.9, 0}}) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK_THROWS_AS(post_sentiment({}), EmptyCommentSet);
    CHECK_THROWS_AS(post_sentiment({{1.2, 3}}), OutOfRangeValue);
}

TEST_CASE("blog_sentiment") {
    CHECK(blog_sentiment({{0.5, 100}}) == doctest::Approx(0.5).epsilon(1e-12));
    // hand check: (0.4*100 + 0.8*300) / 400 = 0.7
    CHECK(blog_sentiment({{0.4, 100}, {0.8, 300}}) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(blog_sentiment({{0.1, 0}, {0.5, 0}, {0.9, 0}}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(blog_sentiment({}), EmptyPostSet);
}

namespace {

std::vector<EngagementRecord> two_period_records() {
    // blog x: period 1 has one post with the documented comment pair,
    // period 2 a single-comment post.
    return {
        {"x", 1, "post1", 0.2, 1, 10},
        {"x", 1, "post1", 0.8, 3, 10},
        {"x", 2, "post2", 0.4, 2, 5},
    };
}

}  // namespace

TEST_CASE("build_panel composes the two aggregation stages") {
    const auto panel = build_panel(two_period_records(), 1, 2);
    CHECK(panel.values(0, 0) == doctest::Approx(0.65).epsilon(1e-12));
    CHECK(panel.values(0, 1) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(panel.blog_ids[0] == "x");
}

TEST_CASE("build_panel reports the missing cell") {
    std::vector<EngagementRecord> records = {
        {"blogA", 1, "p", 0.5, 1, 1},
        {"blogA", 2, "p", 0.5, 1, 1},
        {"blogB", 1, "p", 0.5, 1, 1},
    };
    try {
        build_panel(records, 2, 2);
        CHECK(false);
    } catch (const MissingCell& e) {
        CHECK(e.blog_id == "blogB");
        CHECK(e.period == 2);
    }
}

TEST_CASE("build_panel is invariant under record permutation") {
    testutil::Rng rng(31);
    std::vector<EngagementRecord> records;
    for (int b = 0; b < 3; ++b)
        for (int t = 1; t <= 4; ++t)
            for (int post = 0; post < 2; ++post)
                for (int c = 0; c < 3; ++c)
                    records.push_back({"blog" + std::to_string(b), t,
                                       "post" + std::to_string(post), rng.u01(),
                                       static_cast<long>(rng.next() % 50),
                                       static_cast<long>(100 + post)});
    const auto base = build_panel(records, 3, 4);
    for (int rep = 0; rep < 5; ++rep) {
        for (std::size_t i = records.size(); i > 1; --i)
            std::swap(records[i - 1], records[rng.next() % i]);
        const auto shuffled = build_panel(records, 3, 4);
        CHECK(shuffled.values == base.values);  // bitwise
    }
}

TEST_CASE("aggregation stays inside the convex hull of the scores") {
    testutil::Rng rng(77);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<std::pair<double, long>> items;
        double lo = 1.0, hi = 0.0;
        const int n = 1 + static_cast<int>(rng.next() % 6);
        for (int i = 0; i < n; ++i) {
            const double score = rng.u01();
            items.emplace_back(score, static_cast<long>(rng.next() % 20));
            lo = std::min(lo, score);
            hi = std::max(hi, score);
        }
        const double v = post_sentiment(items);
        CHECK(v >= lo - 1e-12);
        CHECK(v <= hi + 1e-12);
    }
}

TEST_CASE("scaling all like counts by a common factor changes nothing") {
    testutil::Rng rng(78);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<std::pair<double, long>> items, scaled;
        const int n = 1 + static_cast<int>(rng.next() % 5);
        const long factor = 2 + static_cast<long>(rng.next() % 9);
        for (int i = 0; i < n; ++i) {
            const double score = rng.u01();
            const long likes = static_cast<long>(rng.next() % 30);
            items.emplace_back(score, likes);
            scaled.emplace_back(score, likes * factor);
        }
        CHECK(post_sentiment(scaled) ==
              doctest::Approx(post_sentiment(items)).epsilon(1e-12));
    }
}

TEST_CASE("conflicting post like counts are rejected") {
    std::vector<EngagementRecord> records = {
        {"x", 1, "post1", 0.2, 1, 10},
        {"x", 1, "post1", 0.8, 3, 11},
        {"x", 2, "post2", 0.4, 2, 5},
    };
    CHECK_THROWS_AS(build_panel(records, 1, 2), InconsistentPostLikes);
}

TEST_CASE("records CSV reader") {
    const auto tmp = fs::temp_directory_path() / "opinionfit_records.csv";
    {
        std::FILE* f = std::fopen(tmp.string().c_str(), "w");
        std::fprintf(f, "blog_id,period,post_id,comment_score,comment_likes,post_likes\n");
        std::fprintf(f, "x,1,post1,0.2,1,10\n");
        std::fprintf(f, "x,1,post1,0.8,3,10\n");
        std::fprintf(f, "x,2,post2,0.4,2,5\n");
        std::fclose(f);
    }
    const auto records = read_records_csv(tmp.string());
    CHECK(records.size() == 3);
    CHECK(records[1].comment_likes == 3);
    const auto panel = build_panel(records, 1, 2);
    CHECK(panel.values(0, 0) == doctest::Approx(0.65).epsilon(1e-12));

    {
        std::FILE* f = std::fopen(tmp.string().c_str(), "a");
        std::fprintf(f, "x,2,post2,1.4,2,5\n");
        std::fclose(f);
    }
    try {
        read_records_csv(tmp.string());
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.line == 5);
    }
    fs::remove(tmp);
}

TEST_SUITE_END();
