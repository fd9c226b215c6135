// SPDX-License-Identifier: Apache-2.0
//
// mimofb: limited-feedback scheduling for the MIMO broadcast channel
// Copyright (C) 2026 The mimofb authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MIMOFB_ERRORS_HPP
#define MIMOFB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mimofb {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MIMOFB_DEFINE_ERROR(Name)          \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  }

MIMOFB_DEFINE_ERROR(InvalidDimensions);
MIMOFB_DEFINE_ERROR(DomainError);
MIMOFB_DEFINE_ERROR(EmptyInput);
MIMOFB_DEFINE_ERROR(InvalidInput);
MIMOFB_DEFINE_ERROR(SingularityError);
MIMOFB_DEFINE_ERROR(InfeasibleTarget);
MIMOFB_DEFINE_ERROR(InvalidConfiguration);
MIMOFB_DEFINE_ERROR(RegimeError);
MIMOFB_DEFINE_ERROR(ConfigError);
MIMOFB_DEFINE_ERROR(IoError);

#undef MIMOFB_DEFINE_ERROR

}  // namespace mimofb

#endif
