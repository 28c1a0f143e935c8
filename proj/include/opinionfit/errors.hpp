#pragma once

#include <stdexcept>
#include <string>

namespace opinionfit {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// panel
struct OutOfRangeValue : Error { using Error::Error; };
struct DuplicateId : Error { using Error::Error; };
struct TooFewPeriods : Error { using Error::Error; };
struct InvalidParamSet : Error { using Error::Error; };
struct InvalidModelSpec : Error { using Error::Error; };

// aggregate
struct EmptyCommentSet : Error { using Error::Error; };
struct EmptyPostSet : Error { using Error::Error; };
struct InconsistentPostLikes : Error { using Error::Error; };
struct MissingCell : Error {
    MissingCell(const std::string& blog, int period_)
        : Error("missing cell: blog '" + blog + "', period " + std::to_string(period_)),
          blog_id(blog), period(period_) {}
    std::string blog_id;
    int period;
};

// models
struct DimensionMismatch : Error { using Error::Error; };
struct InsufficientHistory : Error { using Error::Error; };
struct HorizonBeyondSupport : Error { using Error::Error; };

// estimate
struct InvalidSplit : Error { using Error::Error; };
struct InactiveParameter : Error { using Error::Error; };
struct OnBoundary : Error { using Error::Error; };

// diagnose
struct DegenerateRange : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };

// file I/O
struct ParseError : Error {
    ParseError(const std::string& msg, long line_)
        : Error(msg + " (line " + std::to_string(line_) + ")"), line(line_) {}
    long line;
};

}  // namespace opinionfit
