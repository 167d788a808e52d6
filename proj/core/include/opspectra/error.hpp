/*
   Copyright 2026 The opspectra Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef OPSPECTRA_ERROR_HPP
#define OPSPECTRA_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace opspectra {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A mathematical refusal: the question is well posed but cannot be decided
/// (or is rejected) with the available symbolic machinery.
class Refusal : public Error {
public:
    using Error::Error;
};

class BadParameter : public Error {
public:
    using Error::Error;
};

class DivisionByZero : public Error {
public:
    using Error::Error;
};

class DegenerateAffine : public Error {
public:
    DegenerateAffine() : Error("affine_compose: leading factor a must be non-zero") {}
};

class NotOrthogonal : public Error {
public:
    using Error::Error;
};

class DegenerateEigenvalue : public Error {
public:
    explicit DegenerateEigenvalue(std::size_t n)
        : Error("eigenvalue d_" + std::to_string(n) + " vanishes"), index(n) {}
    std::size_t index;
};

class IncompatibleEigenvalue : public Error {
public:
    IncompatibleEigenvalue(std::size_t n, const std::string& detail)
        : Error("incompatible eigenvalue at n=" + std::to_string(n) + ": " + detail), index(n) {}
    std::size_t index;
};

class IdentityOperator : public Error {
public:
    IdentityOperator() : Error("shift (a,b) = (1,0) is the identity operator") {}
};

class NoPerturbation : public Error {
public:
    NoPerturbation() : Error("perturbed sequence equals the original up to the horizon") {}
};

class DomainError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class ClassificationRefused : public Refusal {
public:
    using Refusal::Refusal;
};

/// Thinness cannot be decided: a multiplier sequence has undecidable
/// square-summability.
class ThinUndecidable : public Refusal {
public:
    using Refusal::Refusal;
};

/// Parse failure in a textual spec; `column` is 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t col)
        : Error("column " + std::to_string(col) + ": " + message), column(col) {}
    std::size_t column;
};

}  // namespace opspectra

#endif  // OPSPECTRA_ERROR_HPP
