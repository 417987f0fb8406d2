#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace linkrec {

// Opaque user identifier. Distinct type from ItemId so the two id
// namespaces can never be mixed up at compile time.
struct UserId {
    std::int64_t v = -1;
    friend constexpr bool operator==(UserId a, UserId b) { return a.v == b.v; }
    friend constexpr bool operator<(UserId a, UserId b) { return a.v < b.v; }
};

struct ItemId {
    std::int64_t v = -1;
    friend constexpr bool operator==(ItemId a, ItemId b) { return a.v == b.v; }
    friend constexpr bool operator<(ItemId a, ItemId b) { return a.v < b.v; }
};

// One (user, item, rating, timestamp) event from a rating log.
struct Interaction {
    UserId user;
    ItemId item;
    double rating = 0.0;         // > 0, dataset scale (e.g. 1..5)
    std::int64_t timestamp = 0;  // epoch seconds, >= 0
};

struct ScoredPair {
    UserId user;
    ItemId item;
    std::string measure;
    double score = 0.0;
    bool defined = true;
};

struct UnknownNodeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DuplicateEdgeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a score has no defined value for a pair (e.g. the pair is
// in disjoint components and a co-occurrence probability does not exist).
struct UndefinedScoreError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace linkrec

template <>
struct std::hash<linkrec::UserId> {
    std::size_t operator()(linkrec::UserId u) const noexcept {
        return std::hash<std::int64_t>{}(u.v);
    }
};

template <>
struct std::hash<linkrec::ItemId> {
    std::size_t operator()(linkrec::ItemId i) const noexcept {
        return std::hash<std::int64_t>{}(~i.v);
    }
};
