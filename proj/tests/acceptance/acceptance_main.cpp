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
//
// Acceptance suite: runs every criterion at full size and prints one
// pass/fail line per criterion. Exit code 0 iff everything passed.

#include <cstdio>
#include <cstdlib>
#include <string>

#include <qvp/verify.hpp>

int main(int argc, char** argv) {
    qvp::CheckOptions options;
    options.seed = 20260808;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--quick") {
            options.quick = true;
        } else if (arg == "--seed" && i + 1 < argc) {
            options.seed = std::strtoull(argv[++i], nullptr, 10);
        }
    }

    bool ok = true;
    int index = 0;
    for (const qvp::CheckEntry& entry : qvp::all_checks()) {
        ++index;
        qvp::ReportList reports;
        std::string error;
        try {
            reports = entry.run(options);
        } catch (const std::exception& e) {
            error = e.what();
        }

        long passed = 0;
        double worst_margin = std::numeric_limits<double>::infinity();
        long runtime = 0;
        for (const auto& r : reports) {
            passed += r.pass ? 1 : 0;
            runtime = std::max(runtime, r.runtime_ms);
            worst_margin = std::min(worst_margin, r.tolerance - std::abs(r.lhs - r.rhs));
        }
        const bool criterion_ok = error.empty() && !reports.empty() &&
                                  passed == static_cast<long>(reports.size());
        ok = ok && criterion_ok;

        if (!error.empty()) {
            std::printf("[FAIL] %2d. %-22s error: %s\n", index, entry.id.c_str(), error.c_str());
        } else {
            std::printf("[%s] %2d. %-22s %ld/%zu items, %ld ms (%s)\n",
                        criterion_ok ? "PASS" : "FAIL", index, entry.id.c_str(), passed,
                        reports.size(), runtime, entry.summary.c_str());
            if (!criterion_ok) {
                for (const auto& r : reports) {
                    if (!r.pass) {
                        std::printf("       failed: %s/%s lhs=%.12g rhs=%.12g tol=%.3g\n",
                                    r.check_id.c_str(), r.instance.c_str(), r.lhs, r.rhs,
                                    r.tolerance);
                    }
                }
            }
        }
        std::fflush(stdout);
    }

    std::printf("%s\n", ok ? "ACCEPTANCE: all criteria passed"
                           : "ACCEPTANCE: at least one criterion failed");
    return ok ? 0 : 1;
}
