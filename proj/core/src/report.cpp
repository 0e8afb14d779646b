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

#include "qvp/report.hpp"

#include <algorithm>

#include <json.hpp>

namespace qvp {

void sort_reports(std::vector<VerificationReport>& reports) {
    std::stable_sort(reports.begin(), reports.end(),
                     [](const VerificationReport& a, const VerificationReport& b) {
                         if (a.check_id != b.check_id) {
                             return a.check_id < b.check_id;
                         }
                         return a.instance < b.instance;
                     });
}

bool all_pass(const std::vector<VerificationReport>& reports) {
    return std::all_of(reports.begin(), reports.end(),
                       [](const VerificationReport& r) { return r.pass; });
}

std::string report_to_json(const VerificationReport& report, bool include_timing) {
    nlohmann::json j;
    j["check_id"] = report.check_id;
    j["instance"] = report.instance;
    j["pass"] = report.pass;
    j["lhs"] = report.lhs;
    j["rhs"] = report.rhs;
    j["tolerance"] = report.tolerance;
    if (report.seed) {
        j["seed"] = *report.seed;
    }
    if (include_timing) {
        j["runtime_ms"] = report.runtime_ms;
    }
    return j.dump();
}

std::string reports_to_jsonl(const std::vector<VerificationReport>& reports,
                             bool include_timing) {
    std::string out;
    for (const auto& r : reports) {
        out += report_to_json(r, include_timing);
        out += '\n';
    }
    return out;
}

} // namespace qvp
