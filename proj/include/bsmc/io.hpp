/*
 * Copyright 2026 The bsmc developers
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef BSMC_IO_HPP
#define BSMC_IO_HPP

#include <string>
#include <vector>

#include "bsmc/integrator.hpp"
#include "bsmc/sampler.hpp"
#include "bsmc/workbench.hpp"

namespace bsmc {

/// Shortest round-trip decimal rendering of a double ("%.17g" trimmed),
/// used everywhere so that identical runs write identical bytes.
std::string format_double(double v);

std::string distribution_csv(const OutputDistribution& dist);
std::string distribution_json(const OutputDistribution& dist);

std::string unitary_csv(const ComplexMatrix& u);
std::string unitary_json(const EncodedUnitary& encoded);

std::string energy_csv(const EnergyEstimate& est);
std::string energy_json(const EnergyEstimate& est);

std::string sweep_csv(const SweepResult& sweep);
std::string sweep_json(const SweepResult& sweep);

std::string budget_csv(const std::vector<BudgetRow>& rows);
std::string budget_json(const std::vector<BudgetRow>& rows);

std::string samples_csv(const std::vector<OccupationPattern>& samples);
std::string samples_json(const std::vector<OccupationPattern>& samples);

std::string compare_json(const CompareReport& report);
std::string residuals_csv(const CompareReport& report);

std::string calibration_json(const CalibrationReport& report);

/// Writes text to path, creating parent directories as needed.
void write_file(const std::string& path, const std::string& text);

} // namespace bsmc

#endif // BSMC_IO_HPP
