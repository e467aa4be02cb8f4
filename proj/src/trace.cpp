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

#include "alig/trace.hpp"

#include <stdexcept>

#include "numfmt.hpp"

namespace alig {

using internal::format_double;

std::string format_trace_row(const TraceRow& row) {
  std::string line = std::to_string(row.step.t);
  line += ',' + std::to_string(row.epoch);
  line += ',' + format_double(row.step.gamma);
  line += ',' + format_double(row.step.sample_loss);
  line += ',' + format_double(row.step.grad_norm_sq);
  line += ',' + format_double(row.step.param_norm_sq);
  line += ',' + (row.full_loss ? format_double(*row.full_loss) : std::string());
  line += ',' + (row.accuracy ? format_double(*row.accuracy) : std::string());
  return line;
}

CsvTraceSink::CsvTraceSink(const std::filesystem::path& path) : out_(path) {
  if (!out_) {
    throw std::runtime_error("cannot open trace file " + path.string());
  }
  out_ << kTraceHeader << '\n';
}

void CsvTraceSink::record(const TraceRow& row) { out_ << format_trace_row(row) << '\n'; }

void CsvTraceSink::flush() { out_.flush(); }

}  // namespace alig
