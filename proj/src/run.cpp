#include "linkrec/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "linkrec/graph.hpp"

namespace linkrec {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ParseError("config key '" + key + "': bad number '" + v + "'");
    }
}

std::int64_t to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const std::int64_t x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ParseError("config key '" + key + "': bad integer '" + v + "'");
    }
}

// Significant-digit formatting: fixed-point would truncate measures whose
// scores live many orders of magnitude below 1 (e.g. Katz with a small
// damping constant) and collapse distinct scores into ties.
std::string fmt_score(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

// Full-precision rendering for config serialization so the hash reflects
// the exact values in use.
std::string fmtg(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

RunConfig parse_run_config(std::istream& in) {
    RunConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ParseError("config line " + std::to_string(lineno) +
                             ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));
        if (key == "data") {
            cfg.ratings_path = val;
        } else if (key == "format") {
            cfg.format = parse_format(val);
        } else if (key == "out_dir") {
            cfg.out_dir = val;
        } else if (key == "measures") {
            cfg.measures.clear();
            if (val != "all") {
                std::istringstream ss(val);
                std::string tok;
                while (std::getline(ss, tok, ',')) {
                    tok = trim(tok);
                    if (tok.empty()) continue;
                    if (!is_known_measure(tok))
                        throw ParseError("config line " +
                                         std::to_string(lineno) +
                                         ": unknown measure '" + tok + "'");
                    cfg.measures.push_back(tok);
                }
            }
        } else if (key == "candidate.seed") {
            cfg.candidate_seed =
                static_cast<std::uint64_t>(to_int(key, val));
        } else if (key == "candidate.ratio") {
            cfg.negatives_ratio = static_cast<int>(to_int(key, val));
        } else if (key == "rank_halflife") {
            cfg.rank_halflife = to_double(key, val);
        } else if (key == "threads") {
            cfg.batch.threads = static_cast<int>(to_int(key, val));
        } else if (key == "split.mode") {
            if (val == "holdout") cfg.split.mode = SplitMode::holdout;
            else if (val == "kfold") cfg.split.mode = SplitMode::kfold;
            else
                throw ParseError("config line " + std::to_string(lineno) +
                                 ": split.mode must be holdout or kfold");
        } else if (key == "split.train_fraction") {
            cfg.split.train_fraction = to_double(key, val);
        } else if (key == "split.folds") {
            cfg.split.folds = static_cast<int>(to_int(key, val));
        } else if (key == "split.seed") {
            cfg.split.seed = static_cast<std::uint64_t>(to_int(key, val));
        } else if (key == "katz.beta") {
            cfg.batch.scorer.katz_beta = to_double(key, val);
        } else if (key == "katz.max_len") {
            cfg.batch.scorer.katz_max_len = static_cast<int>(to_int(key, val));
        } else if (key == "rpr.damping") {
            cfg.batch.scorer.pr_damping = to_double(key, val);
        } else if (key == "propflow.max_len") {
            cfg.batch.scorer.propflow_max_len =
                static_cast<int>(to_int(key, val));
        } else if (key == "temporal.beta") {
            cfg.batch.temporal.beta = to_double(key, val);
        } else if (key == "temporal.alpha") {
            cfg.batch.temporal.alpha = to_double(key, val);
        } else if (key == "temporal.max_len") {
            cfg.batch.temporal.max_len = static_cast<int>(to_int(key, val));
        } else if (key == "temporal.time_score_max_len") {
            cfg.batch.temporal.time_score_max_len =
                static_cast<int>(to_int(key, val));
        } else if (key == "temporal.time_unit") {
            cfg.batch.temporal.time_unit = to_double(key, val);
        } else if (key == "temporal.now") {
            cfg.batch.temporal.now = to_int(key, val);
        } else if (key == "cop.bcns_max_len") {
            cfg.batch.cop.bcns_max_len = static_cast<int>(to_int(key, val));
        } else if (key == "cop.bcns_max_size") {
            cfg.batch.cop.bcns_max_size = static_cast<int>(to_int(key, val));
        } else if (key == "cop.clique_var_cap") {
            cfg.batch.cop.clique_var_cap = static_cast<int>(to_int(key, val));
        } else if (key == "cop.cluster_size_cap") {
            cfg.batch.cop.cluster_size_cap =
                static_cast<int>(to_int(key, val));
        } else if (key == "cop.smoothing") {
            cfg.batch.cop.smoothing = to_double(key, val);
        } else if (key == "cf.neighborhood_size") {
            cfg.batch.cf.neighborhood_size =
                static_cast<int>(to_int(key, val));
        } else if (key == "cf.min_overlap") {
            cfg.batch.cf.min_overlap = static_cast<int>(to_int(key, val));
        } else {
            throw ParseError("config line " + std::to_string(lineno) +
                             ": unknown key '" + key + "'");
        }
    }
    // The probabilistic scorers reuse the shared temporal settings.
    cfg.batch.cop.temporal = cfg.batch.temporal;
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    return parse_run_config(in);
}

std::string serialize_run_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "data = " << cfg.ratings_path << '\n';
    out << "format = " << format_name(cfg.format) << '\n';
    out << "out_dir = " << cfg.out_dir << '\n';
    out << "measures = ";
    const auto ms = cfg.effective_measures();
    for (std::size_t k = 0; k < ms.size(); ++k)
        out << (k ? "," : "") << ms[k];
    out << '\n';
    out << "candidate.seed = " << cfg.candidate_seed << '\n';
    out << "candidate.ratio = " << cfg.negatives_ratio << '\n';
    out << "rank_halflife = " << fmtg(cfg.rank_halflife) << '\n';
    out << "split.mode = "
        << (cfg.split.mode == SplitMode::holdout ? "holdout" : "kfold") << '\n';
    out << "split.train_fraction = " << fmtg(cfg.split.train_fraction) << '\n';
    out << "split.folds = " << cfg.split.folds << '\n';
    out << "split.seed = " << cfg.split.seed << '\n';
    out << "katz.beta = " << fmtg(cfg.batch.scorer.katz_beta) << '\n';
    out << "katz.max_len = " << cfg.batch.scorer.katz_max_len << '\n';
    out << "rpr.damping = " << fmtg(cfg.batch.scorer.pr_damping) << '\n';
    out << "propflow.max_len = " << cfg.batch.scorer.propflow_max_len << '\n';
    out << "temporal.beta = " << fmtg(cfg.batch.temporal.beta) << '\n';
    out << "temporal.alpha = " << fmtg(cfg.batch.temporal.alpha) << '\n';
    out << "temporal.max_len = " << cfg.batch.temporal.max_len << '\n';
    out << "temporal.time_score_max_len = "
        << cfg.batch.temporal.time_score_max_len << '\n';
    out << "temporal.time_unit = " << fmtg(cfg.batch.temporal.time_unit)
        << '\n';
    out << "temporal.now = " << cfg.batch.temporal.now << '\n';
    out << "cop.bcns_max_len = " << cfg.batch.cop.bcns_max_len << '\n';
    out << "cop.bcns_max_size = " << cfg.batch.cop.bcns_max_size << '\n';
    out << "cop.clique_var_cap = " << cfg.batch.cop.clique_var_cap << '\n';
    out << "cop.cluster_size_cap = " << cfg.batch.cop.cluster_size_cap << '\n';
    out << "cop.smoothing = " << fmtg(cfg.batch.cop.smoothing) << '\n';
    out << "cf.neighborhood_size = " << cfg.batch.cf.neighborhood_size << '\n';
    out << "cf.min_overlap = " << cfg.batch.cf.min_overlap << '\n';
    return out.str();
}

std::string config_hash(const RunConfig& cfg) {
    // FNV-1a, 64-bit.
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : serialize_run_config(cfg)) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

void write_scores_csv(std::ostream& out, const std::vector<ScoredRow>& rows,
                      const std::string& hash) {
    out << "# config=" << hash << '\n';
    out << "user,item,label,score,defined\n";
    for (const auto& r : rows)
        out << r.user << ',' << r.item << ',' << r.label << ','
            << fmt_score(r.score) << ',' << (r.defined ? 1 : 0) << '\n';
}

std::vector<ScoredRow> read_scores_csv(std::istream& in) {
    std::vector<ScoredRow> rows;
    std::string line;
    std::size_t lineno = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (trim(line) != "user,item,label,score,defined")
                throw ParseError("scores CSV line " + std::to_string(lineno) +
                                 ": unexpected header");
            saw_header = true;
            continue;
        }
        std::istringstream ss(line);
        std::string tok;
        std::vector<std::string> parts;
        while (std::getline(ss, tok, ',')) parts.push_back(tok);
        if (parts.size() != 5)
            throw ParseError("scores CSV line " + std::to_string(lineno) +
                             ": expected 5 fields");
        ScoredRow r;
        r.user = to_int("user", parts[0]);
        r.item = to_int("item", parts[1]);
        r.label = static_cast<int>(to_int("label", parts[2]));
        r.score = to_double("score", parts[3]);
        r.defined = to_int("defined", parts[4]) != 0;
        rows.push_back(r);
    }
    if (!saw_header) throw ParseError("scores CSV: missing header");
    return rows;
}

RunResult aggregate(const std::string& hash, std::vector<FoldResult> folds) {
    RunResult res;
    res.hash = hash;
    res.folds = std::move(folds);
    std::map<std::string, std::vector<const MetricReport*>> by_measure;
    for (const auto& f : res.folds)
        for (const auto& [m, rep] : f.reports) by_measure[m].push_back(&rep);
    for (const auto& [m, reps] : by_measure) {
        MetricReport mean;
        mean.measure = m;
        for (const auto* r : reps) {
            mean.auroc += r->auroc;
            mean.aupr += r->aupr;
            mean.rankscore += r->rankscore;
            mean.n_pairs += r->n_pairs;
            mean.n_undefined += r->n_undefined;
        }
        const double n = static_cast<double>(reps.size());
        mean.auroc /= n;
        mean.aupr /= n;
        mean.rankscore /= n;
        double var = 0.0;
        for (const auto* r : reps)
            var += (r->auroc - mean.auroc) * (r->auroc - mean.auroc);
        res.auroc_std[m] = std::sqrt(var / n);
        res.mean[m] = mean;
    }
    return res;
}

RunResult run_pipeline(const RunConfig& cfg) {
    const std::string hash = config_hash(cfg);
    const Dataset full = load_ratings(cfg.ratings_path, cfg.format);
    std::vector<std::pair<Dataset, Dataset>> splits;
    if (cfg.split.mode == SplitMode::holdout)
        splits.push_back(split_holdout(full, cfg.split));
    else
        splits = split_kfold(full, cfg.split);

    std::filesystem::create_directories(cfg.out_dir);
    const auto measures = cfg.effective_measures();
    std::vector<FoldResult> folds;
    for (std::size_t k = 0; k < splits.size(); ++k) {
        const auto& [train, test] = splits[k];
        const auto cs = generate_candidates(train, test,
                                            cfg.candidate_seed + k,
                                            cfg.negatives_ratio);
        const auto g = BipartiteGraph::build(train.interactions);
        auto scored = score_measures(g, cs, measures, cfg.batch);
        FoldResult fr;
        fr.fold = static_cast<int>(k);
        for (const auto& m : measures) {
            const auto& rows = scored.at(m);
            const std::string path = cfg.out_dir + "/fold" +
                                     std::to_string(k) + "_" + m + ".csv";
            std::ofstream out(path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + path);
            write_scores_csv(out, rows, hash);
            fr.reports[m] = evaluate_rows(m, rows, cfg.rank_halflife);
        }
        folds.push_back(std::move(fr));
    }
    RunResult res = aggregate(hash, std::move(folds));
    {
        std::ofstream out(cfg.out_dir + "/report.json", std::ios::binary);
        out << report_json(cfg, res);
    }
    {
        std::ofstream out(cfg.out_dir + "/report.txt", std::ios::binary);
        out << report_table(res);
    }
    return res;
}

RunResult evaluate_scores_dir(const std::string& dir, double halflife) {
    const std::regex name_re(R"(fold(\d+)_([a-z]+)\.csv)");
    std::vector<std::filesystem::path> files;
    if (!std::filesystem::is_directory(dir))
        throw std::runtime_error("not a directory: " + dir);
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::string hash;
    std::map<int, FoldResult> by_fold;
    for (const auto& path : files) {
        std::smatch m;
        const std::string name = path.filename().string();
        if (!std::regex_match(name, m, name_re)) continue;
        const int fold = std::stoi(m[1]);
        const std::string measure = m[2];
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot read " + path.string());
        std::string first;
        std::getline(in, first);
        if (first.rfind("# config=", 0) == 0 && hash.empty())
            hash = first.substr(9);
        in.seekg(0);
        const auto rows = read_scores_csv(in);
        by_fold[fold].fold = fold;
        by_fold[fold].reports[measure] = evaluate_rows(measure, rows, halflife);
    }
    if (by_fold.empty())
        throw std::runtime_error("no fold<k>_<measure>.csv files in " + dir);
    std::vector<FoldResult> folds;
    for (auto& [fold, fr] : by_fold) folds.push_back(std::move(fr));
    return aggregate(hash, std::move(folds));
}

std::string report_table(const RunResult& result) {
    std::vector<const MetricReport*> order;
    for (const auto& [m, rep] : result.mean) order.push_back(&rep);
    std::sort(order.begin(), order.end(),
              [](const MetricReport* a, const MetricReport* b) {
                  if (a->auroc != b->auroc) return a->auroc > b->auroc;
                  return a->measure < b->measure;
              });
    std::ostringstream out;
    out << "# config=" << result.hash << '\n';
    char line[160];
    std::snprintf(line, sizeof(line), "%-8s %8s %8s %8s %10s %10s %8s\n",
                  "measure", "auroc", "std", "aupr", "rankscore", "pairs",
                  "undef");
    out << line;
    for (const auto* rep : order) {
        std::snprintf(line, sizeof(line),
                      "%-8s %8.4f %8.4f %8.4f %10.4f %10zu %8zu\n",
                      rep->measure.c_str(), rep->auroc,
                      result.auroc_std.at(rep->measure), rep->aupr,
                      rep->rankscore, rep->n_pairs, rep->n_undefined);
        out << line;
    }
    return out.str();
}

std::string report_json(const RunConfig& cfg, const RunResult& result) {
    nlohmann::json j;
    j["config_hash"] = result.hash;
    j["config"] = serialize_run_config(cfg);
    auto rep_to_json = [](const MetricReport& r) {
        nlohmann::json o;
        o["measure"] = r.measure;
        o["auroc"] = r.auroc;
        o["aupr"] = r.aupr;
        o["rankscore"] = r.rankscore;
        o["n_pairs"] = r.n_pairs;
        o["n_undefined"] = r.n_undefined;
        return o;
    };
    for (const auto& f : result.folds) {
        nlohmann::json fj;
        fj["fold"] = f.fold;
        for (const auto& [m, rep] : f.reports) fj["reports"][m] = rep_to_json(rep);
        j["folds"].push_back(fj);
    }
    for (const auto& [m, rep] : result.mean) {
        j["mean"][m] = rep_to_json(rep);
        j["mean"][m]["auroc_std"] = result.auroc_std.at(m);
    }
    return j.dump(2) + "\n";
}

std::vector<ScoredPair> recommend_top_k(const BipartiteGraph& g, UserId user,
                                        int k, const std::string& measure,
                                        const BatchConfig& cfg) {
    if (k < 0) throw std::invalid_argument("k must be >= 0");
    if (!is_known_measure(measure))
        throw std::invalid_argument("unknown measure: " + measure);
    const int un = g.user_node(user);
    std::vector<char> rated(g.num_nodes(), 0);
    for (const auto& e : g.neighbors(un)) rated[e.nbr] = 1;
    CandidateSet cs;
    for (int in = g.num_users(); in < g.num_nodes(); ++in)
        if (!rated[in]) cs.pairs.push_back({user, g.item_id(in), false});
    cs.num_negatives = cs.pairs.size();
    auto rows = score_candidates(g, cs, measure, cfg);
    std::vector<std::size_t> order(rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (rows[a].defined != rows[b].defined) return rows[a].defined;
        if (rows[a].score != rows[b].score) return rows[a].score > rows[b].score;
        return rows[a].item < rows[b].item;
    });
    std::vector<ScoredPair> out;
    for (std::size_t i = 0; i < order.size() && i < static_cast<std::size_t>(k);
         ++i) {
        const auto& r = rows[order[i]];
        out.push_back({UserId{r.user}, ItemId{r.item}, measure, r.score,
                       r.defined});
    }
    return out;
}

}  // namespace linkrec
