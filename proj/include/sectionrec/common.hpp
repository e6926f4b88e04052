// Copyright 2026 The sectionrec Authors.
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
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sectionrec {

using ArticleId = std::int64_t;
using CategoryId = std::int64_t;
using TypeId = std::int32_t;

/// Broad failure classes; the CLI maps them onto exit codes.
enum class ErrorKind {
    invalid_input,
    config,
    missing_prerequisite,
    runtime,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    explicit Error(const std::string& what)
        : Error(ErrorKind::invalid_input, what) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/*****************************************************************************/
/* RNG                                                                       */
/*****************************************************************************/

/// Seeded generator whose derived draws are identical on every platform.
/// The standard distributions are implementation-defined, so only the raw
/// mt19937_64 stream is used.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    std::size_t index(std::size_t n);

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via Box-Muller.
    double normal();

    template <typename T>
    void shuffle(std::vector<T>& v)
    {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[index(i)]);
    }

private:
    std::mt19937_64 engine_;
};

/// Mixes a base seed with a stream tag so that sub-stages draw independent
/// streams from one configured seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag);

/*****************************************************************************/
/* TEXT HELPERS                                                              */
/*****************************************************************************/

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double x);

double parse_double(std::string_view s);
std::int64_t parse_int(std::string_view s);
std::uint64_t parse_uint(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char delim);

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view data);

std::ifstream open_input(const std::filesystem::path& path);
/// Creates parent directories; binary mode so output bytes match on every host.
std::ofstream open_output(const std::filesystem::path& path);

/// Renders each line of `header` as a `# ` comment line. Artifact readers
/// skip lines starting with '#'.
std::string comment_block(const std::string& header);

} // namespace sectionrec
