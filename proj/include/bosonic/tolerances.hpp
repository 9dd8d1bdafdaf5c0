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

namespace bosonic {

/// Construction and verification tolerances.
/// Set once at startup, before any concurrent use.
struct Tolerances {
    double hermitian = 1e-12; ///< max-norm of A - A^dagger, relative to max(1, |A|_max)
    double unitary = 1e-10;   ///< max-norm of U^dagger U - I
    double block = 1e-12;     ///< cross-block residual of synthesized polynomials
    double state_norm = 1e-12;
};

inline Tolerances &tolerances() {
    static Tolerances t;
    return t;
}

} // namespace bosonic
