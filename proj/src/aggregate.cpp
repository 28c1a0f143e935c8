#include "opinionfit/aggregate.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>

#include "opinionfit/errors.hpp"
#include "opinionfit/format.hpp"

namespace opinionfit {

namespace {

double weighted_mean(const std::vector<std::pair<double, long>>& items) {
    double wsum = 0.0, vsum = 0.0;
    for (const auto& [score, likes] : items) {
        if (!(score >= 0.0 && score <= 1.0))
            throw OutOfRangeValue("sentiment score " + format_sig6(score) + " outside [0,1]");
        if (likes < 0) throw OutOfRangeValue("negative like count");
        wsum += static_cast<double>(likes);
        vsum += static_cast<double>(likes) * score;
    }
    if (wsum == 0.0) {
        // Nobody liked anything: fall back to the plain mean.
        double s = 0.0;
        for (const auto& it : items) s += it.first;
        return s / static_cast<double>(items.size());
    }
    return vsum / wsum;
}

}  // namespace

double post_sentiment(const std::vector<std::pair<double, long>>& comments) {
    if (comments.empty()) throw EmptyCommentSet("post has no top-level comments");
    return weighted_mean(comments);
}

double blog_sentiment(const std::vector<std::pair<double, long>>& posts) {
    if (posts.empty()) throw EmptyPostSet("cell has no posts");
    return weighted_mean(posts);
}

SentimentPanel build_panel(const std::vector<EngagementRecord>& records, int n_blogs,
                           int n_periods) {
    struct Post {
        long post_likes = -1;
        std::vector<std::pair<double, long>> comments;
    };
    // Ordered maps make the aggregation independent of record order.
    std::map<std::string, std::vector<std::map<std::string, Post>>> cells;

    for (const auto& r : records) {
        if (r.period < 1 || r.period > n_periods)
            throw OutOfRangeValue("record period " + std::to_string(r.period) +
                                  " outside [1," + std::to_string(n_periods) + "]");
        auto& periods = cells[r.blog_id];
        if (periods.empty()) periods.resize(n_periods);
        Post& post = periods[r.period - 1][r.post_id];
        if (post.post_likes < 0)
            post.post_likes = r.post_likes;
        else if (post.post_likes != r.post_likes)
            throw InconsistentPostLikes("post '" + r.post_id + "' (blog '" + r.blog_id +
                                        "', period " + std::to_string(r.period) +
                                        ") has conflicting like counts");
        post.comments.emplace_back(r.comment_score, r.comment_likes);
    }

    if (static_cast<int>(cells.size()) != n_blogs)
        throw DimensionMismatch("records cover " + std::to_string(cells.size()) +
                                " blogs, expected " + std::to_string(n_blogs));

    std::vector<std::string> blog_ids;
    blog_ids.reserve(cells.size());
    for (const auto& [id, _] : cells) blog_ids.push_back(id);

    Mat values(n_blogs, n_periods);
    for (int b = 0; b < n_blogs; ++b) {
        const auto& periods = cells[blog_ids[b]];
        for (int t = 0; t < n_periods; ++t) {
            if (periods[t].empty()) throw MissingCell(blog_ids[b], t + 1);
            std::vector<std::pair<double, long>> posts;
            posts.reserve(periods[t].size());
            for (const auto& [post_id, post] : periods[t]) {
                auto comments = post.comments;
                std::sort(comments.begin(), comments.end());
                posts.emplace_back(post_sentiment(comments), post.post_likes);
            }
            values(b, t) = blog_sentiment(posts);
        }
    }

    std::vector<std::string> period_labels(n_periods);
    for (int t = 0; t < n_periods; ++t) period_labels[t] = "p" + std::to_string(t + 1);
    return validate_panel(std::move(values), std::move(blog_ids), std::move(period_labels));
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

double to_double(const std::string& s, long line) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw ParseError("bad number '" + s + "'", line);
    return v;
}

long to_long(const std::string& s, long line) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0') throw ParseError("bad integer '" + s + "'", line);
    return v;
}

}  // namespace

std::vector<EngagementRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open records file '" + path + "'");
    std::string line;
    long lineno = 0;
    if (!std::getline(in, line)) throw ParseError("empty records file", 1);
    ++lineno;
    if (split_line(line) !=
        std::vector<std::string>{"blog_id", "period", "post_id", "comment_score",
                                 "comment_likes", "post_likes"})
        throw ParseError("unexpected records header", lineno);

    std::vector<EngagementRecord> records;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto f = split_line(line);
        if (f.size() != 6) throw ParseError("expected 6 fields", lineno);
        EngagementRecord r;
        r.blog_id = f[0];
        r.period = static_cast<int>(to_long(f[1], lineno));
        r.post_id = f[2];
        r.comment_score = to_double(f[3], lineno);
        r.comment_likes = to_long(f[4], lineno);
        r.post_likes = to_long(f[5], lineno);
        if (r.period < 1) throw ParseError("period must be >= 1", lineno);
        if (!(r.comment_score >= 0.0 && r.comment_score <= 1.0))
            throw ParseError("comment_score outside [0,1]", lineno);
        if (r.comment_likes < 0 || r.post_likes < 0)
            throw ParseError("like counts must be >= 0", lineno);
        records.push_back(std::move(r));
    }
    if (records.empty()) throw ParseError("records file has no data rows", lineno);
    return records;
}

}  // namespace opinionfit
