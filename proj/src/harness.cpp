// Copyright 2026 The alig Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "alig/harness.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "alig/errors.hpp"
#include "alig/problems.hpp"
#include "alig/trace.hpp"
#include "numfmt.hpp"

namespace alig {
namespace {

namespace fs = std::filesystem;
using internal::format_double;

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << text;
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& config) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [key, entry] : resolved_entries(config)) {
    out[key] = entry.value;
  }
  return out;
}

class CountingSink final : public TraceSink {
 public:
  explicit CountingSink(TraceSink& inner) : inner_(inner) {}
  void record(const TraceRow& row) override {
    inner_.record(row);
    ++count;
  }
  void flush() override { inner_.flush(); }

  std::int64_t count = 0;

 private:
  TraceSink& inner_;
};

// Keeps only the columns compare_rules needs.
class SampleStreamSink final : public TraceSink {
 public:
  void record(const TraceRow& row) override {
    samples.push_back(row.sample);
    gammas.push_back(row.step.gamma);
  }
  std::vector<std::size_t> samples;
  std::vector<double> gammas;
};

// Calls fn(i) for i in [0, count) on up to `parallelism` threads.
template <class Fn>
void parallel_for(std::size_t count, std::size_t parallelism, Fn&& fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min(parallelism, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      fn(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t k = 0; k < workers; ++k) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        fn(i);
      }
    });
  }
  for (auto& thread : threads) {
    thread.join();
  }
}

void execute_cell(SweepCell& cell, const KeyValues& entries, TraceSink* extra_sink) {
  try {
    const ExperimentConfig config = build_config(entries);
    cell.out_dir = config.out_dir;
    cell.summary = run(config, extra_sink);
    cell.ok = true;
  } catch (const std::exception& e) {
    cell.ok = false;
    cell.error = e.what();
  }
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) {
    return field;
  }
  std::string out = "\"";
  for (const char c : field) {
    out += c == '"' ? std::string("\"\"") : std::string(1, c == '\n' ? ' ' : c);
  }
  return out + "\"";
}

std::string optional_number(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string();
}

// Sort key: lower is better. Failed cells and missing metrics go last.
std::optional<double> metric_key(const SweepCell& cell, SweepMetric metric) {
  if (!cell.ok || !cell.summary) {
    return std::nullopt;
  }
  const RunSummary& s = *cell.summary;
  switch (metric) {
    case SweepMetric::FinalFullLoss:
      return s.final_full_loss;
    case SweepMetric::BestFullLoss:
      return s.best_full_loss;
    case SweepMetric::FinalAccuracy:
      return s.final_accuracy ? std::optional<double>(-*s.final_accuracy) : std::nullopt;
    case SweepMetric::InterpolationResidual:
      return s.interpolation_residual_final;
  }
  return std::nullopt;
}

void sort_cells(std::vector<SweepCell>& cells, SweepMetric metric) {
  std::stable_sort(cells.begin(), cells.end(), [metric](const SweepCell& a, const SweepCell& b) {
    const auto ka = metric_key(a, metric);
    const auto kb = metric_key(b, metric);
    if (ka.has_value() != kb.has_value()) {
      return ka.has_value();
    }
    if (ka && *ka != *kb) {
      return *ka < *kb;
    }
    return a.index < b.index;
  });
}

void write_tables(const fs::path& dir, const std::string& label_column,
                  const std::vector<std::string>& parameter_columns,
                  const std::vector<SweepCell>& cells) {
  std::vector<std::string> header = {label_column};
  header.insert(header.end(), parameter_columns.begin(), parameter_columns.end());
  for (const char* column : {"status", "final_full_loss", "best_full_loss", "final_accuracy",
                             "interpolation_residual", "steps", "error"}) {
    header.emplace_back(column);
  }

  std::vector<std::vector<std::string>> rows;
  for (const auto& cell : cells) {
    std::vector<std::string> row = {cell.label};
    for (const auto& [key, value] : cell.assignment) {
      row.push_back(value);
    }
    row.emplace_back(cell.ok ? "ok" : "failed");
    if (cell.summary) {
      const RunSummary& s = *cell.summary;
      row.push_back(format_double(s.final_full_loss));
      row.push_back(format_double(s.best_full_loss));
      row.push_back(optional_number(s.final_accuracy));
      row.push_back(format_double(s.interpolation_residual_final));
      row.push_back(std::to_string(s.steps_taken));
    } else {
      row.insert(row.end(), 5, std::string());
    }
    row.push_back(cell.error);
    rows.push_back(std::move(row));
  }

  std::string csv;
  for (std::size_t j = 0; j < header.size(); ++j) {
    csv += (j ? "," : "") + header[j];
  }
  csv += '\n';
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      csv += (j ? "," : "") + csv_escape(row[j]);
    }
    csv += '\n';
  }
  write_text_file(dir / "table.csv", csv);
  write_text_file(dir / "table.txt", render_table(header, rows));
}

std::string lookup(const KeyValues& entries, const std::string& key, const std::string& fallback) {
  for (const auto& [existing, entry] : entries) {
    if (existing == key) {
      return entry.value;
    }
  }
  return fallback;
}

bool valid_rule_name(const std::string& name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

}  // namespace

nlohmann::ordered_json summary_to_json(const RunSummary& summary, const ExperimentConfig& config) {
  nlohmann::ordered_json out;
  out["status"] = "ok";
  out["steps_taken"] = summary.steps_taken;
  out["final_full_loss"] = summary.final_full_loss;
  out["best_full_loss"] = summary.best_full_loss;
  out["final_accuracy"] =
      summary.final_accuracy ? nlohmann::ordered_json(*summary.final_accuracy) : nullptr;
  out["interpolation_residual_final"] = summary.interpolation_residual_final;
  out["wall_time_seconds"] = summary.wall_time_seconds;
  out["config"] = config_to_json(config);
  return out;
}

RunSummary run(const ExperimentConfig& config, TraceSink* extra_sink) {
  fs::create_directories(config.out_dir);
  const auto objective = make_objective(config.problem);
  OptimizerState state = init(objective->initial_point(config.seed), config.region);

  CsvTraceSink csv(config.out_dir / "trace.csv");
  NullTraceSink none;
  TeeTraceSink tee(csv, extra_sink ? *extra_sink : none);
  CountingSink sink(tee);
  try {
    const RunSummary summary =
        run_epochs(state, *objective, config.optimizer(), config.run_options(), sink);
    write_text_file(config.out_dir / "summary.json", summary_to_json(summary, config).dump(2) + "\n");
    return summary;
  } catch (const std::exception& e) {
    sink.flush();
    nlohmann::ordered_json out;
    out["status"] = "aborted";
    out["error"] = e.what();
    if (const auto* abort = dynamic_cast<const RunAborted*>(&e)) {
      out["iteration"] = abort->iteration();
    }
    out["steps_taken"] = sink.count;
    out["config"] = config_to_json(config);
    write_text_file(config.out_dir / "summary.json", out.dump(2) + "\n");
    throw;
  }
}

Grid parse_grid(std::string_view text) {
  Grid grid;
  for (const auto& [key, entry] : parse_key_values(text)) {
    if (!is_config_key(key)) {
      throw ConfigError(key, entry.line, "unknown key; did you mean '" + suggest_key(key) + "'?");
    }
    if (key == "run.out_dir") {
      throw ConfigError(key, entry.line, "cannot be swept; cells get their own directories");
    }
    std::vector<std::string> values;
    std::stringstream list(entry.value);
    std::string item;
    while (std::getline(list, item, ',')) {
      const auto first = item.find_first_not_of(" \t");
      const auto last = item.find_last_not_of(" \t");
      if (first == std::string::npos) {
        throw ConfigError(key, entry.line, "empty value in list");
      }
      values.push_back(item.substr(first, last - first + 1));
    }
    grid.emplace_back(key, std::move(values));
  }
  return grid;
}

std::optional<SweepMetric> parse_sweep_metric(std::string_view name) {
  if (name == "final_full_loss") return SweepMetric::FinalFullLoss;
  if (name == "best_full_loss") return SweepMetric::BestFullLoss;
  if (name == "final_accuracy") return SweepMetric::FinalAccuracy;
  if (name == "interpolation_residual") return SweepMetric::InterpolationResidual;
  return std::nullopt;
}

std::vector<SweepCell> sweep(const KeyValues& base, const Grid& grid, const SweepOptions& options) {
  const ExperimentConfig base_config = build_config(base);
  std::vector<std::string> columns;
  for (const auto& [key, values] : grid) {
    if (!is_config_key(key) || key == "run.out_dir") {
      throw ConfigError(key, 0, "not a sweepable config key");
    }
    if (values.empty()) {
      throw ConfigError(key, 0, "empty value list");
    }
    columns.push_back(key);
  }
  const fs::path root = base_config.out_dir;
  fs::create_directories(root);

  std::size_t count = 1;
  for (const auto& [key, values] : grid) {
    count *= values.size();
  }

  std::vector<SweepCell> cells(count);
  std::vector<KeyValues> cell_entries(count, base);
  for (std::size_t i = 0; i < count; ++i) {
    SweepCell& cell = cells[i];
    cell.index = i;
    char label[32];
    std::snprintf(label, sizeof(label), "cell_%03zu", i);
    cell.label = label;
    // Mixed-radix decode with the first grid key varying slowest.
    std::size_t rest = i;
    std::vector<std::size_t> digits(grid.size());
    for (std::size_t k = grid.size(); k-- > 0;) {
      digits[k] = rest % grid[k].second.size();
      rest /= grid[k].second.size();
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const std::string& value = grid[k].second[digits[k]];
      cell.assignment.emplace_back(grid[k].first, value);
      set_entry(cell_entries[i], grid[k].first, value);
    }
    cell.out_dir = root / cell.label;
    set_entry(cell_entries[i], "run.out_dir", cell.out_dir.string());
  }

  parallel_for(count, options.parallelism,
               [&](std::size_t i) { execute_cell(cells[i], cell_entries[i], nullptr); });

  sort_cells(cells, options.sort_by);
  write_tables(root, "cell", columns, cells);
  return cells;
}

std::vector<NamedRule> parse_rules(std::string_view text) {
  std::vector<NamedRule> rules;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string body = line.substr(0, line.find('#'));
    const auto first = body.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      continue;
    }
    body = body.substr(first, body.find_last_not_of(" \t\r") - first + 1);
    if (body.front() == '[') {
      if (body.back() != ']') {
        throw ConfigError(body, line_number, "malformed section header");
      }
      NamedRule rule;
      rule.name = body.substr(1, body.size() - 2);
      if (!valid_rule_name(rule.name)) {
        throw ConfigError(body, line_number, "rule names may use letters, digits, '_' and '-'");
      }
      for (const auto& existing : rules) {
        if (existing.name == rule.name) {
          throw ConfigError(body, line_number, "duplicate rule name");
        }
      }
      rules.push_back(std::move(rule));
      continue;
    }
    KeyValues parsed;
    try {
      parsed = parse_key_values(body);
    } catch (const ConfigError& e) {
      throw ConfigError(e.field(), line_number, "expected 'key = value' or '[name]'");
    }
    auto& [key, entry] = parsed.front();
    entry.line = line_number;
    if (rules.empty()) {
      throw ConfigError(key, line_number, "entry outside a [name] section");
    }
    if (key.rfind("rule.", 0) != 0) {
      throw ConfigError(key, line_number, "only rule.* keys belong in a rules file");
    }
    for (const auto& [existing, previous] : rules.back().entries) {
      if (existing == key) {
        throw ConfigError(key, line_number, "duplicate key in section");
      }
    }
    rules.back().entries.emplace_back(key, entry);
  }
  return rules;
}

Comparison compare_rules(const KeyValues& base, const std::vector<NamedRule>& rules,
                         std::size_t parallelism) {
  if (rules.size() < 2) {
    throw ConfigError("rules", 0, "a comparison needs at least two rules");
  }
  const fs::path root = lookup(base, "run.out_dir", "out");
  fs::create_directories(root);

  KeyValues shared;
  for (const auto& [key, entry] : base) {
    if (key.rfind("rule.", 0) != 0) {
      shared.emplace_back(key, entry);
    }
  }

  Comparison comparison;
  comparison.outcomes.resize(rules.size());
  std::vector<SampleStreamSink> streams(rules.size());
  parallel_for(rules.size(), parallelism, [&](std::size_t i) {
    RuleOutcome& outcome = comparison.outcomes[i];
    outcome.cell.index = i;
    outcome.cell.label = rules[i].name;
    KeyValues entries = shared;
    for (const auto& [key, entry] : rules[i].entries) {
      entries.emplace_back(key, entry);
    }
    outcome.cell.out_dir = root / rules[i].name;
    set_entry(entries, "run.out_dir", outcome.cell.out_dir.string());
    execute_cell(outcome.cell, entries, &streams[i]);
    outcome.samples = std::move(streams[i].samples);
    outcome.gammas = std::move(streams[i].gammas);
  });

  std::size_t longest = 0;
  for (const auto& outcome : comparison.outcomes) {
    longest = std::max(longest, outcome.samples.size());
  }
  std::vector<std::size_t> reference(longest);
  std::vector<bool> seen(longest, false);
  for (const auto& outcome : comparison.outcomes) {
    for (std::size_t t = 0; t < outcome.samples.size(); ++t) {
      if (seen[t] && reference[t] != outcome.samples[t]) {
        comparison.paired = false;
      }
      reference[t] = outcome.samples[t];
      seen[t] = true;
    }
  }

  std::string joint = "t,sample";
  for (const auto& rule : rules) {
    joint += ",gamma_" + rule.name;
  }
  joint += '\n';
  for (std::size_t t = 0; t < longest; ++t) {
    joint += std::to_string(t) + ',' + std::to_string(reference[t]);
    for (const auto& outcome : comparison.outcomes) {
      joint += ',';
      if (t < outcome.gammas.size()) {
        joint += format_double(outcome.gammas[t]);
      }
    }
    joint += '\n';
  }
  write_text_file(root / "step_sizes.csv", joint);

  std::vector<SweepCell> cells;
  for (const auto& outcome : comparison.outcomes) {
    cells.push_back(outcome.cell);
  }
  write_tables(root, "rule", {}, cells);
  return comparison;
}

std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths(header.size(), 0);
  for (std::size_t j = 0; j < header.size(); ++j) {
    widths[j] = header[j].size();
  }
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size() && j < widths.size(); ++j) {
      widths[j] = std::max(widths[j], row[j].size());
    }
  }
  const auto render_row = [&widths](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t j = 0; j < widths.size(); ++j) {
      const std::string& cell = j < cells.size() ? cells[j] : std::string();
      line += (j ? "  " : "") + cell + std::string(widths[j] - cell.size(), ' ');
    }
    while (!line.empty() && line.back() == ' ') {
      line.pop_back();
    }
    return line + "\n";
  };
  std::string out = render_row(header);
  std::size_t total = 0;
  for (const auto w : widths) {
    total += w;
  }
  out += std::string(total + 2 * (widths.size() - 1), '-') + "\n";
  for (const auto& row : rows) {
    out += render_row(row);
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace alig
