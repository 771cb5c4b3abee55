/*
 Copyright 2026 The risklq Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#pragma once

#include "risklq/linalg.hpp"

namespace risklq {

/// Per-step gain matrices of the coupled recursion.
///
///   Upsilon = B'Z B + R                K     = Upsilon^{-1} B'Z A
///   M       = B'(Z+S) B + R            Nmat  = B'(Z+S) A
///   Kbar    = M^{-1} Nmat - K
///   Lambda  = B_local' Theta B_local + R_local
///   L       = B_local' Theta A         local_gain = Lambda^{-1} L
///
/// with Z, S, Theta taken one step ahead.
struct GainSet {
  Matrix Upsilon;
  Matrix K;
  Matrix Kbar;
  Matrix M;
  Matrix Nmat;
  Matrix Lambda;
  Matrix L;
  Matrix local_gain;
};

}  // namespace risklq
