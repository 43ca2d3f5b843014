/*
 * Copyright 2026 The fairwelfare Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FAIRWELFARE_REPORT_H_
#define FAIRWELFARE_REPORT_H_

// JSON and CSV renderings of solver and experiment reports.
//
// Field order is fixed. Floating-point values are rounded to 12 significant
// digits; infinities and NaN become the strings "inf", "-inf" and "nan".
// CSV output is "key,value" with nested keys joined by '.', except for sweeps,
// which are one row per sampled population.

#include <string>
#include <string_view>

#include "fairwelfare/experiments.h"

namespace fairwelfare {

enum class ReportFormat { kJson, kCsv };

// "json" or "csv"; throws UsageError otherwise.
ReportFormat ParseReportFormat(std::string_view name);

inline constexpr int kReportSignificantDigits = 12;

// `value` rounded to kReportSignificantDigits significant digits.
double RoundSignificant(double value);

std::string SerializeReport(const DesignerSummary& report, ReportFormat format);
std::string SerializeReport(const Example1Report& report, ReportFormat format);
std::string SerializeReport(const DivergenceReport& report, ReportFormat format);
std::string SerializeReport(const ComparisonReport& report, ReportFormat format);
std::string SerializeReport(const AuditReport& report, ReportFormat format);
std::string SerializeReport(const SweepReport& report, ReportFormat format);

// Inverses of the JSON renderings. The result equals the original report with
// every real rounded by RoundSignificant. Throw ConfigurationError on
// malformed input.
Example1Report ParseExample1Report(std::string_view json);
SweepReport ParseSweepReport(std::string_view json);

}  // namespace fairwelfare

#endif  // FAIRWELFARE_REPORT_H_
