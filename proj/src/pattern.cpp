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

#include "bsmc/pattern.hpp"

#include <stdexcept>

#include "bsmc/errors.hpp"

namespace bsmc {

OccupationPattern::OccupationPattern(std::vector<int> c) : counts(std::move(c)) {
    for (int v : counts)
        if (v < 0) throw std::invalid_argument("OccupationPattern: negative count");
}

int OccupationPattern::total() const {
    int t = 0;
    for (int v : counts) t += v;
    return t;
}

bool OccupationPattern::collision_free() const {
    for (int v : counts)
        if (v > 1) return false;
    return true;
}

std::vector<int> OccupationPattern::occupied_modes() const {
    std::vector<int> modes;
    modes.reserve(static_cast<std::size_t>(total()));
    for (int j = 0; j < static_cast<int>(counts.size()); ++j)
        for (int k = 0; k < counts[static_cast<std::size_t>(j)]; ++k) modes.push_back(j);
    return modes;
}

std::string OccupationPattern::to_string() const {
    std::string s;
    s.reserve(counts.size());
    for (int v : counts) {
        if (v > 9) throw std::invalid_argument("OccupationPattern: count above single digit");
        s.push_back(static_cast<char>('0' + v));
    }
    return s;
}

OccupationPattern OccupationPattern::from_string(const std::string& s) {
    std::vector<int> counts;
    counts.reserve(s.size());
    for (char c : s) {
        if (c < '0' || c > '9')
            throw data_error("pattern string has non-digit character: '" + s + "'");
        counts.push_back(c - '0');
    }
    if (counts.empty()) throw data_error("pattern string is empty");
    return OccupationPattern(std::move(counts));
}

namespace {

void enumerate_rec(int mode, int remaining, bool collision_free, std::vector<int>& current,
                   std::vector<OccupationPattern>& out) {
    const int m = static_cast<int>(current.size());
    if (mode == m - 1) {
        if (!collision_free || remaining <= 1) {
            current[static_cast<std::size_t>(mode)] = remaining;
            out.emplace_back(current);
        }
        return;
    }
    const int cap = collision_free ? std::min(remaining, 1) : remaining;
    for (int c = cap; c >= 0; --c) {
        if (collision_free && remaining - c > m - 1 - mode) continue; // not enough room left
        current[static_cast<std::size_t>(mode)] = c;
        enumerate_rec(mode + 1, remaining - c, collision_free, current, out);
    }
    current[static_cast<std::size_t>(mode)] = 0;
}

} // namespace

std::vector<OccupationPattern> enumerate_patterns(int modes, int photons, bool collision_free) {
    if (modes < 1) throw std::invalid_argument("enumerate_patterns: modes must be >= 1");
    if (photons < 0) throw std::invalid_argument("enumerate_patterns: photons must be >= 0");
    if (collision_free && photons > modes)
        throw std::invalid_argument("enumerate_patterns: more photons than modes");
    std::vector<OccupationPattern> out;
    std::vector<int> current(static_cast<std::size_t>(modes), 0);
    enumerate_rec(0, photons, collision_free, current, out);
    return out;
}

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= static_cast<double>(k);
    return f;
}

double occupancy_factorial(const OccupationPattern& p) {
    double f = 1.0;
    for (int v : p.counts) f *= factorial(v);
    return f;
}

} // namespace bsmc
