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

#ifndef ALIG_TRACE_HPP
#define ALIG_TRACE_HPP

#include <filesystem>
#include <fstream>
#include <string>

#include "alig/optimizer.hpp"

namespace alig {

// Column order of trace.csv. full_loss and accuracy are blank except on
// evaluated rows (accuracy stays blank for models that do not classify).
inline constexpr const char* kTraceHeader =
    "t,epoch,gamma,sample_loss,grad_norm_sq,param_norm_sq,full_loss,accuracy";

std::string format_trace_row(const TraceRow& row);

// Streams rows to a CSV file as they arrive.
class CsvTraceSink final : public TraceSink {
 public:
  explicit CsvTraceSink(const std::filesystem::path& path);

  void record(const TraceRow& row) override;
  void flush() override;

 private:
  std::ofstream out_;
};

// Forwards every row to two sinks.
class TeeTraceSink final : public TraceSink {
 public:
  TeeTraceSink(TraceSink& first, TraceSink& second) : first_(first), second_(second) {}

  void record(const TraceRow& row) override {
    first_.record(row);
    second_.record(row);
  }
  void flush() override {
    first_.flush();
    second_.flush();
  }

 private:
  TraceSink& first_;
  TraceSink& second_;
};

}  // namespace alig

#endif  // ALIG_TRACE_HPP
