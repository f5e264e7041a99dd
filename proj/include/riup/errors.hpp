// SPDX-FileCopyrightText: 2026 The riup Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace riup {

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input bytes do not follow the expected layout.
class MalformedInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter or input violates an operation's contract.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Caller-side contract violation (mismatched sizes and similar).
class PreconditionError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

}  // namespace riup
