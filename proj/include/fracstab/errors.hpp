/*
* Copyright (C) 2026 fracstab contributors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracstab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (Gamma at x <= 0,
/// Psi below zero, division by a vanishing g, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Domain error tied to one sample of a signal.
class SampleDomainError : public DomainError {
public:
    SampleDomainError(std::size_t node, const std::string& what)
        : DomainError(what + " (node " + std::to_string(node) + ")"), node_(node) {}
    std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

class GridError : public Error {
public:
    using Error::Error;
};

/// Caller broke a structural precondition (dimension mismatch, bad anchor).
class ContractError : public Error {
public:
    using Error::Error;
};

/// A solver produced a non-finite state.
class DivergenceError : public Error {
public:
    DivergenceError(std::size_t node, const std::string& what)
        : Error(what + " (node " + std::to_string(node) + ")"), node_(node) {}
    std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

/// Iterative solver (Newton) failed to converge.
class SolverError : public Error {
public:
    using Error::Error;
};

class NoEndemicEquilibrium : public Error {
public:
    using Error::Error;
};

/// Malformed parameter record or configuration document.
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace fracstab
