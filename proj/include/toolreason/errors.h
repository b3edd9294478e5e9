/*
 * Copyright 2026 The toolreason Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace toolreason {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// advantage
class GroupTooSmall : public Error {
 public:
  using Error::Error;
};
class NotADistribution : public Error {
 public:
  using Error::Error;
};
class InvalidLogprob : public Error {
 public:
  using Error::Error;
};
class MissingTokenData : public Error {
 public:
  using Error::Error;
};

// pipeline
class OracleUnavailable : public Error {
 public:
  using Error::Error;
};
class DecompositionParseError : public Error {
 public:
  using Error::Error;
};
class TemplateError : public Error {
 public:
  using Error::Error;
};

// Malformed input records or configuration.
class InputError : public Error {
 public:
  using Error::Error;
};

// Files that cannot be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace toolreason
