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

#ifndef BSMC_ERRORS_HPP
#define BSMC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bsmc {

/// Invalid configuration or argument contract violation (CLI exit code 1).
class config_error : public std::invalid_argument {
  public:
    explicit config_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed or inconsistent input data such as count files (CLI exit code 2).
class data_error : public std::runtime_error {
  public:
    explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerically degenerate instance, e.g. zero accepted probability mass
/// (CLI exit code 3).
class degenerate_error : public std::runtime_error {
  public:
    explicit degenerate_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace bsmc

#endif // BSMC_ERRORS_HPP
