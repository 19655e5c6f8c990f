/*
 * Copyright (C) 2026 The ctxmonkey Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>

#include "ctxmonkey/files.h"

namespace ctxmonkey::testing {

inline std::filesystem::path Fixture(const std::string& name) {
    return std::filesystem::path(CTXMONKEY_FIXTURES) / name;
}

inline std::string ReadFixture(const std::string& name) {
    return ReadTextFile(Fixture(name));
}

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
  public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("ctxmonkey-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

  private:
    std::filesystem::path path_;
};

// Generator source for property tests; independent of the library's own PRNG.
class Gen {
  public:
    explicit Gen(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t Int(std::uint64_t lo, std::uint64_t hi) {
        return std::uniform_int_distribution<std::uint64_t>(lo, hi)(engine_);
    }
    bool Bool() { return Int(0, 1) == 1; }
    template <typename Container>
    const auto& Pick(const Container& c) {
        return c[Int(0, c.size() - 1)];
    }
    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
};

}  // namespace ctxmonkey::testing
