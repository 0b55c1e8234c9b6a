// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <iostream>
#include <set>

#include "cli_common.hpp"
#include "commands.hpp"
#include "ibio/chem/scaffold.hpp"
#include "ibio/common/error.hpp"
#include "ibio/data/loaders.hpp"
#include "ibio/data/split.hpp"

namespace ibio::cli {

namespace fs = std::filesystem;

namespace {

data::SplitRatios parse_ratios(const std::string& text) {
  data::SplitRatios r;
  double vals[3];
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t comma = text.find(',', pos);
    const std::string piece = comma == std::string::npos
                                  ? text.substr(pos)
                                  : text.substr(pos, comma - pos);
    vals[i] = std::stod(piece);
    pos = comma == std::string::npos ? text.size() : comma + 1;
  }
  r.train = vals[0];
  r.val = vals[1];
  r.test = vals[2];
  return r;
}

std::set<std::string> scaffold_keys(const data::Dataset& ds) {
  std::set<std::string> keys;
  for (const auto& s : ds.samples) keys.insert(chem::scaffold_key(s.graph));
  return keys;
}

}  // namespace

int cmd_split(const SplitArgs& args) {
  try {
    data::TaskSpec spec;  // kind irrelevant for splitting
    data::Dataset ds =
        data::load_labeled_csv(args.input, spec, args.smiles_column);
    const data::SplitRatios ratios = parse_ratios(args.ratios);

    data::SplitResult split;
    if (args.method == "scaffold") {
      split = data::scaffold_split(ds, ratios, args.seed);
    } else if (args.method == "random") {
      split = data::random_split(ds, ratios, args.seed);
    } else {
      std::cerr << "unknown split method '" << args.method << "'\n";
      return kExitUsage;
    }

    fs::create_directories(args.out_dir);
    data::save_labeled_csv(split.train, args.out_dir + "/train.csv");
    data::save_labeled_csv(split.val, args.out_dir + "/val.csv");
    data::save_labeled_csv(split.test, args.out_dir + "/test.csv");

    // Disjointness audit goes into the report.
    const auto ktrain = scaffold_keys(split.train);
    const auto kval = scaffold_keys(split.val);
    const auto ktest = scaffold_keys(split.test);
    int overlap = 0;
    for (const auto& k : kval) overlap += ktrain.count(k) ? 1 : 0;
    for (const auto& k : ktest) overlap += ktrain.count(k) ? 1 : 0;
    for (const auto& k : ktest) overlap += kval.count(k) ? 1 : 0;

    nlohmann::json report;
    report["input"] = args.input;
    report["input_hash"] = fnv1a_file(args.input);
    report["method"] = args.method;
    report["seed"] = args.seed;
    report["rows"] = {{"train", split.train.size()},
                      {"val", split.val.size()},
                      {"test", split.test.size()}};
    report["skipped_rows"] = ds.skipped_rows;
    report["scaffold_counts"] = {{"train", ktrain.size()},
                                 {"val", kval.size()},
                                 {"test", ktest.size()}};
    report["scaffold_overlap"] = overlap;
    report["disjoint"] = overlap == 0;
    write_text_file(args.out_dir + "/split_report.json", report.dump(2) + "\n");

    std::cout << "split " << ds.size() << " rows -> " << split.train.size()
              << "/" << split.val.size() << "/" << split.test.size()
              << " (scaffold overlap " << overlap << ")\n";
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "split failed: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace ibio::cli
