#pragma once

#include <string>
#include <utility>
#include <vector>

#include "opinionfit/panel.hpp"

namespace opinionfit {

// One scored top-level comment together with its post's like count.
struct EngagementRecord {
    std::string blog_id;
    int period = 0;  // 1-based
    std::string post_id;
    double comment_score = 0.0;  // in [0,1]
    long comment_likes = 0;
    long post_likes = 0;
};

// Like-weighted mean of comment scores; unweighted mean when no comment
// received any likes.
double post_sentiment(const std::vector<std::pair<double, long>>& comments);

// Like-weighted mean of post scores, same zero-likes fallback.
double blog_sentiment(const std::vector<std::pair<double, long>>& posts);

// Two-stage aggregation of records into a B x T panel. Every (blog, period)
// cell needs at least one record. Result is independent of record order.
SentimentPanel build_panel(const std::vector<EngagementRecord>& records, int n_blogs,
                           int n_periods);

// Records CSV: header `blog_id,period,post_id,comment_score,comment_likes,post_likes`.
std::vector<EngagementRecord> read_records_csv(const std::string& path);

}  // namespace opinionfit
