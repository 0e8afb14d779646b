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

#include <functional>

#include "qvp/fixtures.hpp"
#include "qvp/report.hpp"

namespace qvp {

struct CheckOptions {
    std::uint64_t seed = 20260808;
    bool quick = false; // reduced counts for interactive runs
};

using ReportList = std::vector<VerificationReport>;

// Suite checks, one per acceptance criterion. Counts and tolerances are
// pinned to the documented contract when quick is false.
ReportList check_no_interference(const CheckOptions& opt);   // eigenbasis linearity
ReportList check_iid_law(const CheckOptions& opt);           // z_i product law + engines
ReportList check_pg_identity(const CheckOptions& opt);       // P_g identity and beta spot
ReportList check_pg_monotone(const CheckOptions& opt);       // strict increase
ReportList check_emap_synthesis(const CheckOptions& opt);    // interpolation certificates
ReportList check_nondestructive(const CheckOptions& opt);    // fidelity + boost
ReportList check_conversions(const CheckOptions& opt);       // closed-form maps
ReportList check_subspace_equalities(const CheckOptions& opt);
ReportList check_overlap_bound(const CheckOptions& opt);     // 7/27 + Q^P separation
ReportList check_qco(const CheckOptions& opt);               // complement verifier
ReportList check_classical_agreement(const CheckOptions& opt);

// Per-instance entry points used by the CLI.
ReportList check_no_interference_on(const VerificationProcedure& q, const std::string& instance,
                                    std::uint64_t seed, int trials);
ReportList check_iid_on(const VerificationProcedure& q, const std::string& instance);
ReportList check_qco_on(const RobustPairFixture& fx, const std::string& instance);
ReportList check_robustness_on(const RobustPairFixture& fx, const std::string& instance,
                               long budget, std::uint64_t seed);

struct CheckEntry {
    std::string id;
    std::string summary;
    std::function<ReportList(const CheckOptions&)> run;
};

/// All suite checks in acceptance-criterion order.
const std::vector<CheckEntry>& all_checks();

} // namespace qvp
