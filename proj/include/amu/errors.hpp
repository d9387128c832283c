// Copyright 2026 The amu-spectra Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Error types and the central tolerance record shared by every module.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace amu {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments, bad configuration or malformed input (CLI exit 2).
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// File contents could not be decoded (CLI exit 2).
class ParseError : public ConfigError {
  public:
    ParseError(const std::string &msg, std::size_t byte_offset)
        : ConfigError(msg + " (at byte " + std::to_string(byte_offset) + ")"),
          offset_(byte_offset) {}
    [[nodiscard]] std::size_t byte_offset() const noexcept { return offset_; }

  private:
    std::size_t offset_;
};

/// A configured size limit would be exceeded (CLI exit 3).
class ResourceCapError : public Error {
  public:
    using Error::Error;
};

/// A numerical routine failed to converge or violated a checked identity
/// (CLI exit 4).
class NumericalError : public Error {
  public:
    using Error::Error;
};

/// Every tolerance used by the library. Defaults are the library-wide values;
/// functions take the record by value where a caller may want to tighten it.
struct Tolerances {
    double hermitian_asymmetry = 1e-12; ///< max |A - A^*| entry at construction
    double eig_residual = 1e-10;        ///< scaled by dim * ||A||
    double unitarity = 1e-10;           ///< scaled by dim
    double unit_norm = 1e-12;           ///< |‖v‖ - 1| for a vector state
    double imag_expectation = 1e-10;    ///< |Im <Tv, v>|, scaled by max(1, ||T||)
    double variance_paths = 1e-10;      ///< agreement of the two variance formulas
    double norm_bound = 1e-9;           ///< slack on ||T_j|| <= M
    double independence = 1e-8;         ///< smallest admissible Gram eigenvalue
    double scan_slack = 1e-9;           ///< accept when ||Theta|| >= 1 - eta - slack
    double orthogonality = 1e-6;        ///< superposition inputs count as orthogonal
    double hull = 1e-6;                 ///< target may sit this far outside the hull
    double psd = 1e-9;                  ///< Q(lambda) min eigenvalue floor
    std::size_t grid_cap = 2'000'000;   ///< max grid points per scan
};

inline constexpr Tolerances default_tolerances{};

} // namespace amu
