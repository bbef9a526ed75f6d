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

#ifndef BSMC_PATTERN_HPP
#define BSMC_PATTERN_HPP

#include <string>
#include <vector>

namespace bsmc {

/// Photon counts per mode.
struct OccupationPattern {
    std::vector<int> counts;

    OccupationPattern() = default;
    explicit OccupationPattern(std::vector<int> c);

    int modes() const { return static_cast<int>(counts.size()); }
    int total() const;
    bool collision_free() const;

    /// Indices of occupied modes, ascending, repeated per occupancy.
    std::vector<int> occupied_modes() const;

    /// One digit per mode, e.g. "111000000000".
    std::string to_string() const;
    static OccupationPattern from_string(const std::string& s);

    bool operator==(const OccupationPattern& other) const { return counts == other.counts; }
};

/// All patterns of n photons over m modes in canonical order: descending
/// lexicographic on the count vector, so occupations of lower-numbered
/// modes come first ("111000000000" precedes "110100000000"). There are
/// C(m, n) collision-free patterns and C(m+n-1, n) in total.
std::vector<OccupationPattern> enumerate_patterns(int modes, int photons, bool collision_free);

double factorial(int n);

/// Product of count! over all modes.
double occupancy_factorial(const OccupationPattern& p);

} // namespace bsmc

#endif // BSMC_PATTERN_HPP
