#include "linkrec/ingest.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "linkrec/rng.hpp"

namespace linkrec {

RatingFormat parse_format(const std::string& name) {
    if (name == "ml100k") return RatingFormat::ml100k;
    if (name == "ml10m") return RatingFormat::ml10m;
    throw std::invalid_argument("unknown rating format: " + name);
}

std::string format_name(RatingFormat f) {
    return f == RatingFormat::ml100k ? "ml100k" : "ml10m";
}

namespace {

[[noreturn]] void fail_line(std::size_t lineno, const std::string& why) {
    throw ParseError("line " + std::to_string(lineno) + ": " + why);
}

std::int64_t parse_int(std::string_view s, std::size_t lineno, const char* what) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        fail_line(lineno, std::string("non-numeric ") + what + " field '" +
                              std::string(s) + "'");
    return v;
}

double parse_real(std::string_view s, std::size_t lineno, const char* what) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        fail_line(lineno, std::string("non-numeric ") + what + " field '" +
                              std::string(s) + "'");
    return v;
}

// Splits `line` into exactly 4 fields on `sep` (single char or "::").
bool split_fields(std::string_view line, std::string_view sep,
                  std::string_view out[4]) {
    std::size_t start = 0;
    for (int f = 0; f < 4; ++f) {
        if (f == 3) {
            out[3] = line.substr(start);
            return true;
        }
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) return false;
        out[f] = line.substr(start, pos - start);
        start = pos + sep.size();
    }
    return false;
}

}  // namespace

Dataset make_dataset(std::vector<Interaction> interactions) {
    Dataset d;
    d.interactions = std::move(interactions);
    std::sort(d.interactions.begin(), d.interactions.end(),
              [](const Interaction& a, const Interaction& b) {
                  if (!(a.user == b.user)) return a.user < b.user;
                  return a.item < b.item;
              });
    std::unordered_map<std::int64_t, char> seen_users, seen_items;
    bool first = true;
    for (const auto& it : d.interactions) {
        seen_users.emplace(it.user.v, 0);
        seen_items.emplace(it.item.v, 0);
        if (first) {
            d.min_timestamp = d.max_timestamp = it.timestamp;
            d.min_rating = d.max_rating = it.rating;
            first = false;
        } else {
            d.min_timestamp = std::min(d.min_timestamp, it.timestamp);
            d.max_timestamp = std::max(d.max_timestamp, it.timestamp);
            d.min_rating = std::min(d.min_rating, it.rating);
            d.max_rating = std::max(d.max_rating, it.rating);
        }
    }
    d.num_users = static_cast<std::int64_t>(seen_users.size());
    d.num_items = static_cast<std::int64_t>(seen_items.size());
    return d;
}

Dataset parse_ratings(std::istream& in, RatingFormat format) {
    const std::string_view sep = format == RatingFormat::ml100k ? "\t" : "::";
    std::unordered_map<std::int64_t,
                       std::unordered_map<std::int64_t, Interaction>>
        latest;
    std::string line;
    std::size_t lineno = 0;
    std::size_t count = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::string_view fields[4];
        if (!split_fields(line, sep, fields))
            fail_line(lineno, "expected 4 '" + std::string(sep) +
                                  "'-separated fields");
        Interaction it;
        it.user = UserId{parse_int(fields[0], lineno, "user")};
        it.item = ItemId{parse_int(fields[1], lineno, "item")};
        it.rating = parse_real(fields[2], lineno, "rating");
        it.timestamp = parse_int(fields[3], lineno, "timestamp");
        if (it.rating <= 0) fail_line(lineno, "rating must be > 0");
        if (it.timestamp < 0) fail_line(lineno, "timestamp must be >= 0");
        auto& slot = latest[it.user.v][it.item.v];
        // Duplicates keep the latest event; ties keep the later line.
        if (slot.rating <= 0 || it.timestamp >= slot.timestamp) slot = it;
        ++count;
    }
    std::vector<Interaction> out;
    out.reserve(count);
    for (auto& [u, items] : latest)
        for (auto& [i, it] : items) out.push_back(it);
    return make_dataset(std::move(out));
}

Dataset parse_ratings(const std::string& text, RatingFormat format) {
    std::istringstream in(text);
    return parse_ratings(in, format);
}

Dataset load_ratings(const std::string& path, RatingFormat format) {
    if (path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0) {
        gzFile f = gzopen(path.c_str(), "rb");
        if (!f) throw std::runtime_error("cannot open " + path);
        std::string text;
        char buf[1 << 16];
        int n;
        while ((n = gzread(f, buf, sizeof buf)) > 0) text.append(buf, n);
        const bool bad = n < 0;
        gzclose(f);
        if (bad) throw std::runtime_error("gzip read error in " + path);
        return parse_ratings(text, format);
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_ratings(in, format);
}

void write_ratings(std::ostream& out, const Dataset& d, RatingFormat format) {
    const char* sep = format == RatingFormat::ml100k ? "\t" : "::";
    for (const auto& it : d.interactions) {
        out << it.user.v << sep << it.item.v << sep;
        if (it.rating == std::floor(it.rating) &&
            std::abs(it.rating) < 1e15) {
            out << static_cast<std::int64_t>(it.rating);
        } else {
            out << it.rating;
        }
        out << sep << it.timestamp << '\n';
    }
}

namespace {

// Interactions of one user in canonical (user,item) order.
std::vector<std::pair<std::int64_t, std::vector<Interaction>>> by_user(
    const Dataset& d) {
    std::vector<std::pair<std::int64_t, std::vector<Interaction>>> out;
    for (const auto& it : d.interactions) {
        if (out.empty() || out.back().first != it.user.v)
            out.push_back({it.user.v, {}});
        out.back().second.push_back(it);
    }
    return out;
}

}  // namespace

std::pair<Dataset, Dataset> split_holdout(const Dataset& d, const SplitSpec& spec) {
    if (spec.mode != SplitMode::holdout)
        throw std::invalid_argument("split_holdout requires holdout mode");
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
        throw std::invalid_argument("train_fraction must be in (0,1)");
    std::vector<Interaction> train, test;
    for (auto& [uid, rows] : by_user(d)) {
        auto sorted = rows;
        std::stable_sort(sorted.begin(), sorted.end(),
                         [](const Interaction& a, const Interaction& b) {
                             if (a.timestamp != b.timestamp)
                                 return a.timestamp < b.timestamp;
                             return a.item < b.item;
                         });
        const std::size_t n = sorted.size();
        std::size_t k = n == 1 ? 1
                               : static_cast<std::size_t>(std::ceil(
                                     spec.train_fraction * static_cast<double>(n)));
        k = std::min(k, n);
        for (std::size_t j = 0; j < n; ++j)
            (j < k ? train : test).push_back(sorted[j]);
    }
    return {make_dataset(std::move(train)), make_dataset(std::move(test))};
}

std::vector<std::pair<Dataset, Dataset>> split_kfold(const Dataset& d,
                                                     const SplitSpec& spec) {
    if (spec.mode != SplitMode::kfold)
        throw std::invalid_argument("split_kfold requires kfold mode");
    if (spec.folds < 2) throw std::invalid_argument("folds must be >= 2");
    const int folds = spec.folds;
    std::vector<std::vector<Interaction>> train(folds), test(folds);
    for (auto& [uid, rows] : by_user(d)) {
        const std::size_t n = rows.size();
        if (n < static_cast<std::size_t>(folds)) {
            for (int f = 0; f < folds; ++f)
                train[f].insert(train[f].end(), rows.begin(), rows.end());
            continue;
        }
        // Per-user shuffle seeded from (seed, user id) so the assignment is
        // independent of dataset ordering.
        Rng rng(spec.seed ^ (0x51ed2701u + static_cast<std::uint64_t>(uid) *
                                               0x9e3779b97f4a7c15ULL));
        std::vector<std::size_t> order(n);
        for (std::size_t j = 0; j < n; ++j) order[j] = j;
        for (std::size_t j = n; j > 1; --j)
            std::swap(order[j - 1], order[rng.next_below(j)]);
        for (std::size_t pos = 0; pos < n; ++pos) {
            const int fold = static_cast<int>(pos % folds);
            for (int f = 0; f < folds; ++f)
                (f == fold ? test[f] : train[f]).push_back(rows[order[pos]]);
        }
    }
    std::vector<std::pair<Dataset, Dataset>> out;
    out.reserve(folds);
    for (int f = 0; f < folds; ++f)
        out.push_back({make_dataset(std::move(train[f])),
                       make_dataset(std::move(test[f]))});
    return out;
}

}  // namespace linkrec
