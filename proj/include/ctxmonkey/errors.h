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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ctxmonkey {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Malformed input text. |line| and |column| are 1-based; 0 means "not applicable".
class ParseError : public Error {
  public:
    ParseError(std::string reason, std::size_t line = 0, std::size_t column = 0);

    const std::string& reason() const { return reason_; }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

  private:
    std::string reason_;
    std::size_t line_;
    std::size_t column_;
};

// Well-formed input that violates a domain invariant.
class InvariantError : public Error {
  public:
    using Error::Error;
};

class InvalidConfig : public Error {
  public:
    using Error::Error;
};

class ConfigError : public Error {
  public:
    ConfigError(std::string key, const std::string& what);
    const std::string& key() const { return key_; }

  private:
    std::string key_;
};

// Anything that went wrong talking to the device. Subclasses narrow the stage.
class DeviceError : public Error {
  public:
    using Error::Error;
};

class ConnectionLost : public DeviceError {
  public:
    using DeviceError::DeviceError;
};

class AuthRequired : public DeviceError {
  public:
    using DeviceError::DeviceError;
};

class InjectionError : public DeviceError {
  public:
    using DeviceError::DeviceError;
};

class InstallError : public DeviceError {
  public:
    using DeviceError::DeviceError;
};

class LaunchError : public DeviceError {
  public:
    using DeviceError::DeviceError;
};

class DumpError : public DeviceError {
  public:
    using DeviceError::DeviceError;
};

}  // namespace ctxmonkey
