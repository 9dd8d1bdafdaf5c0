// Copyright 2026 The bosonic Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace bosonic {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const { return 1; }
};

/// A precondition on an argument was not met.
class ContractViolation : public Error {
  public:
    using Error::Error;
    int exit_code() const override { return 3; }
};

/// Argument outside the domain where an operation is defined.
class DomainError : public ContractViolation {
  public:
    using ContractViolation::ContractViolation;
};

class NumericalError : public Error {
  public:
    using Error::Error;
};

/// A measured inequality of a certificate failed.
class CertificateFailure : public Error {
  public:
    using Error::Error;
    int exit_code() const override { return 2; }
};

class ConfigurationError : public Error {
  public:
    using Error::Error;
    int exit_code() const override { return 3; }
};

class ResourceLimit : public Error {
  public:
    using Error::Error;
    int exit_code() const override { return 4; }
};

/// Recursive compilation stopped improving.
class ConvergenceFailure : public CertificateFailure {
  public:
    using CertificateFailure::CertificateFailure;
};

namespace detail {

template <class E>
[[noreturn]] inline void fail(const std::string &msg) {
    throw E(msg);
}

} // namespace detail

} // namespace bosonic
