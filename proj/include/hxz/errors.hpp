// Copyright 2026 The hxz Authors
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

#ifndef HXZ_ERRORS_HPP
#define HXZ_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hxz {

enum class ErrorKind {
    domain,
    parse,
    invalid_triple,
    excluded_triple,
    odd_extra,
    length_mismatch,
    width_cap_exceeded,
    inactive_handle,
    duplicate_handle,
    zero_probability_branch,
    dimension_mismatch,
    overlapping_supports,
    index_out_of_range,
    unroutable_gate,
    missing_dependency,
    nonempty_ledger,
    plan_mismatch,
    invalid_coloring,
    incomplete_outcomes,
    channel_closed,
    protocol_violation,
    internal,
};

inline const char *error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::domain: return "domain-error";
        case ErrorKind::parse: return "parse-error";
        case ErrorKind::invalid_triple: return "invalid-triple";
        case ErrorKind::excluded_triple: return "excluded-triple";
        case ErrorKind::odd_extra: return "odd-extra";
        case ErrorKind::length_mismatch: return "length-mismatch";
        case ErrorKind::width_cap_exceeded: return "width-cap-exceeded";
        case ErrorKind::inactive_handle: return "inactive-handle";
        case ErrorKind::duplicate_handle: return "duplicate-handle";
        case ErrorKind::zero_probability_branch: return "zero-probability-forced-branch";
        case ErrorKind::dimension_mismatch: return "dimension-mismatch";
        case ErrorKind::overlapping_supports: return "overlapping-supports";
        case ErrorKind::index_out_of_range: return "index-out-of-range";
        case ErrorKind::unroutable_gate: return "unroutable-gate";
        case ErrorKind::missing_dependency: return "missing-dependency";
        case ErrorKind::nonempty_ledger: return "nonempty-ledger";
        case ErrorKind::plan_mismatch: return "plan-mismatch";
        case ErrorKind::invalid_coloring: return "invalid-coloring";
        case ErrorKind::incomplete_outcomes: return "incomplete-outcomes";
        case ErrorKind::channel_closed: return "channel-closed";
        case ErrorKind::protocol_violation: return "protocol-violation";
        case ErrorKind::internal: return "internal-error";
    }
    return "error";
}

class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {
    }
    ErrorKind kind() const noexcept {
        return kind_;
    }

   private:
    ErrorKind kind_;
};

/// Parse failure with a 1-based line and 1-based column.
class ParseError : public Error {
   public:
    ParseError(std::size_t line, std::size_t column, const std::string &what)
        : Error(ErrorKind::parse, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {
    }
    std::size_t line() const noexcept {
        return line_;
    }
    std::size_t column() const noexcept {
        return column_;
    }

   private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace hxz

#endif
