// Copyright 2026 The qvpsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qvp {

/// One checked inequality: pass holds exactly when the stated comparison of
/// lhs and rhs holds at the tolerance.
struct VerificationReport {
    std::string check_id;
    std::string instance;
    bool pass = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double tolerance = 0.0;
    std::optional<std::uint64_t> seed;
    long runtime_ms = 0;
};

/// Canonical order: (check_id, instance).
void sort_reports(std::vector<VerificationReport>& reports);

bool all_pass(const std::vector<VerificationReport>& reports);

/// One JSON object per line, canonical order assumed. runtime_ms is omitted
/// unless include_timing is set, so identical inputs and seeds produce
/// byte-identical files.
std::string reports_to_jsonl(const std::vector<VerificationReport>& reports,
                             bool include_timing = false);

std::string report_to_json(const VerificationReport& report, bool include_timing = false);

} // namespace qvp
