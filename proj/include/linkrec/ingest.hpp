#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "linkrec/types.hpp"

namespace linkrec {

enum class RatingFormat { ml100k, ml10m };

RatingFormat parse_format(const std::string& name);  // "ml100k" | "ml10m"
std::string format_name(RatingFormat f);

// Deduplicated rating log plus summary counts.
struct Dataset {
    std::vector<Interaction> interactions;
    std::int64_t num_users = 0;
    std::int64_t num_items = 0;
    std::int64_t min_timestamp = 0;
    std::int64_t max_timestamp = 0;
    double min_rating = 0.0;
    double max_rating = 0.0;
};

enum class SplitMode { holdout, kfold };

struct SplitSpec {
    SplitMode mode = SplitMode::holdout;
    double train_fraction = 0.8;  // holdout, in (0,1)
    int folds = 5;                // kfold, >= 2
    std::uint64_t seed = 0;       // kfold shuffling
};

// Parses ml100k (`user\titem\trating\ttimestamp`) or ml10m
// (`User::Item::Rating::Timestamp`) lines. Duplicate (user,item) pairs keep
// the event with the latest timestamp. Malformed lines raise ParseError with
// the 1-based line number.
Dataset parse_ratings(std::istream& in, RatingFormat format);
Dataset parse_ratings(const std::string& text, RatingFormat format);

// Reads a ratings file; `.gz` paths are transparently decompressed.
Dataset load_ratings(const std::string& path, RatingFormat format);

// Inverse of parse_ratings, bit-exact for the given format.
void write_ratings(std::ostream& out, const Dataset& d, RatingFormat format);

Dataset make_dataset(std::vector<Interaction> interactions);

// Temporal per-user holdout: each user's interactions are sorted by
// timestamp and the earliest ceil(f*n) go to train, the rest to test.
// Users with a single interaction go entirely to train.
std::pair<Dataset, Dataset> split_holdout(const Dataset& d, const SplitSpec& spec);

// Seeded per-user random partition into `folds` disjoint subsets; fold i's
// test set is subset i. Users with fewer interactions than folds appear in
// every fold's train set and never in test.
std::vector<std::pair<Dataset, Dataset>> split_kfold(const Dataset& d,
                                                     const SplitSpec& spec);

}  // namespace linkrec
