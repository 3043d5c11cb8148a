/*
Copyright 2026 The SRIRForge Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef SRIRFORGE_ERROR_HPP_
#define SRIRFORGE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace srirforge {

// Every failure raised by the library derives from Error. The CLI maps the
// concrete type onto its exit code, so new error kinds must pick a base that
// carries the right code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input/config problems (exit code 2).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NoIntersection : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class ParseError : public InvalidArgument {
 public:
  ParseError(const std::string& what, long line = -1)
      : InvalidArgument(line >= 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

class LoadError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class IntegrityError : public LoadError {
 public:
  using LoadError::LoadError;
};

class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Not enough data to produce a result (exit code 3).
class InsufficientData : public Error {
 public:
  using Error::Error;
};

class InsufficientDecay : public InsufficientData {
 public:
  using InsufficientData::InsufficientData;
};

class UndefinedMetrics : public InsufficientData {
 public:
  using InsufficientData::InsufficientData;
};

// Physically impossible configuration (exit code 4).
class InfeasibleRoom : public Error {
 public:
  using Error::Error;
};

// Mixture scheduling could not satisfy its constraints (exit code 5).
class SchedulingFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace srirforge

#endif  // SRIRFORGE_ERROR_HPP_
