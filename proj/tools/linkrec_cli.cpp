#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "linkrec/run.hpp"

namespace {

// Relative dataset paths are also tried under $LINKREC_DATA_DIR.
std::string resolve_data_path(const std::string& path) {
    namespace fs = std::filesystem;
    if (path.empty() || fs::exists(path) || fs::path(path).is_absolute())
        return path;
    if (const char* dir = std::getenv("LINKREC_DATA_DIR")) {
        const fs::path joined = fs::path(dir) / path;
        if (fs::exists(joined)) return joined.string();
    }
    return path;
}

linkrec::RunConfig build_config(const std::string& config_path,
                                const std::vector<std::string>& overrides) {
    std::string text;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in)
            throw linkrec::ParseError("cannot open config file: " +
                                      config_path);
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    for (const auto& line : overrides) text += "\n" + line;
    std::istringstream in(text);
    auto cfg = linkrec::parse_run_config(in);
    cfg.ratings_path = resolve_data_path(cfg.ratings_path);
    return cfg;
}

int cmd_ingest(const std::string& data, const std::string& format) {
    const auto d = linkrec::load_ratings(resolve_data_path(data),
                                         linkrec::parse_format(format));
    if (d.interactions.empty())
        std::cerr << "warning: dataset is empty\n";
    nlohmann::json j;
    j["users"] = d.num_users;
    j["items"] = d.num_items;
    j["ratings"] = d.interactions.size();
    j["min_timestamp"] = d.min_timestamp;
    j["max_timestamp"] = d.max_timestamp;
    j["min_rating"] = d.min_rating;
    j["max_rating"] = d.max_rating;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_split(const std::string& data, const std::string& format_name,
              const linkrec::SplitSpec& spec, const std::string& out_dir) {
    const auto format = linkrec::parse_format(format_name);
    const auto d = linkrec::load_ratings(resolve_data_path(data), format);
    std::vector<std::pair<linkrec::Dataset, linkrec::Dataset>> splits;
    if (spec.mode == linkrec::SplitMode::holdout)
        splits.push_back(linkrec::split_holdout(d, spec));
    else
        splits = linkrec::split_kfold(d, spec);
    std::filesystem::create_directories(out_dir);
    for (std::size_t k = 0; k < splits.size(); ++k) {
        for (const auto& [part, ds] :
             {std::pair<const char*, const linkrec::Dataset*>{
                  "train", &splits[k].first},
              {"test", &splits[k].second}}) {
            const std::string path = out_dir + "/fold" + std::to_string(k) +
                                     "_" + part + ".dat";
            std::ofstream out(path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + path);
            linkrec::write_ratings(out, *ds, format);
            std::cout << path << ": " << ds->interactions.size()
                      << " ratings\n";
        }
    }
    return 0;
}

int cmd_score(const linkrec::RunConfig& cfg) {
    const auto result = linkrec::run_pipeline(cfg);
    std::cout << linkrec::report_table(result);
    return 0;
}

int cmd_evaluate(const std::string& scores_dir, double halflife) {
    const auto result = linkrec::evaluate_scores_dir(scores_dir, halflife);
    std::cout << linkrec::report_table(result);
    return 0;
}

int cmd_recommend(const linkrec::RunConfig& cfg, std::int64_t user, int k,
                  const std::string& measure) {
    const auto d = linkrec::load_ratings(cfg.ratings_path, cfg.format);
    const auto g = linkrec::BipartiteGraph::build(d.interactions);
    const auto top = linkrec::recommend_top_k(g, linkrec::UserId{user}, k,
                                              measure, cfg.batch);
    for (const auto& sp : top)
        std::cout << sp.item.v << "\t"
                  << (sp.defined ? std::to_string(sp.score) : "undefined")
                  << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Temporal bipartite link prediction for recommendation"};
    app.require_subcommand(1);

    std::string data, format = "ml100k", config_path, out_dir = ".";
    std::string scores_dir, measure = "cn";
    std::vector<std::string> overrides;
    double halflife = 5.0;
    std::int64_t user = 0;
    int top_k = 10;
    linkrec::SplitSpec spec;
    std::string split_mode = "holdout";

    auto* ingest = app.add_subcommand("ingest", "Parse a ratings file and print summary counts");
    ingest->add_option("--data", data, "ratings file")->required();
    ingest->add_option("--format", format, "ml100k | ml10m");

    auto* split = app.add_subcommand("split", "Write train/test split files");
    split->add_option("--data", data, "ratings file")->required();
    split->add_option("--format", format, "ml100k | ml10m");
    split->add_option("--mode", split_mode, "holdout | kfold");
    split->add_option("--train-fraction", spec.train_fraction, "holdout fraction");
    split->add_option("--folds", spec.folds, "kfold fold count");
    split->add_option("--seed", spec.seed, "kfold shuffle seed");
    split->add_option("--out-dir", out_dir, "output directory");

    auto* score = app.add_subcommand("score", "Run the scoring pipeline and write CSVs + reports");
    score->add_option("--config", config_path, "flat key = value config file");
    score->add_option("--set", overrides, "config override, e.g. --set \"measures = cn,pa\"");

    auto* evaluate = app.add_subcommand("evaluate", "Evaluate previously written score CSVs");
    evaluate->add_option("--scores-dir", scores_dir, "directory with fold<k>_<measure>.csv")->required();
    evaluate->add_option("--halflife", halflife, "rank-score half-life");

    auto* recommend = app.add_subcommand("recommend", "Top-k unseen items for one user");
    recommend->add_option("--config", config_path, "flat key = value config file");
    recommend->add_option("--set", overrides, "config override");
    recommend->add_option("--user", user, "user id")->required();
    recommend->add_option("--k", top_k, "list length");
    recommend->add_option("--measure", measure, "scoring measure");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (ingest->parsed()) return cmd_ingest(data, format);
        if (split->parsed()) {
            if (split_mode == "holdout")
                spec.mode = linkrec::SplitMode::holdout;
            else if (split_mode == "kfold")
                spec.mode = linkrec::SplitMode::kfold;
            else
                throw std::invalid_argument("mode must be holdout or kfold");
            return cmd_split(data, format, spec, out_dir);
        }
        if (score->parsed()) return cmd_score(build_config(config_path, overrides));
        if (evaluate->parsed()) return cmd_evaluate(scores_dir, halflife);
        if (recommend->parsed())
            return cmd_recommend(build_config(config_path, overrides), user,
                                 top_k, measure);
    } catch (const linkrec::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
