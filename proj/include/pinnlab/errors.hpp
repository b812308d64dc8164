// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace pinnlab {

/// Base class for all recoverable pinnlab failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define PINNLAB_DEFINE_ERROR(Name)                                  \
    class Name : public Error {                                     \
    public:                                                         \
        explicit Name(const std::string& what) : Error(what) {}     \
    }

PINNLAB_DEFINE_ERROR(DivisionByZero);
PINNLAB_DEFINE_ERROR(DimensionOutOfRange);
PINNLAB_DEFINE_ERROR(ShapeMismatch);
PINNLAB_DEFINE_ERROR(EmptyGroup);
PINNLAB_DEFINE_ERROR(NonFiniteGradient);
PINNLAB_DEFINE_ERROR(GroupCountMismatch);
PINNLAB_DEFINE_ERROR(DegenerateGradient);
PINNLAB_DEFINE_ERROR(ZeroMomentum);
PINNLAB_DEFINE_ERROR(RejectionBudgetExceeded);
PINNLAB_DEFINE_ERROR(NonConvergence);
PINNLAB_DEFINE_ERROR(QuadratureUnderflow);
PINNLAB_DEFINE_ERROR(CoincidentPoints);
PINNLAB_DEFINE_ERROR(NonFiniteLoss);
PINNLAB_DEFINE_ERROR(ZeroReference);
PINNLAB_DEFINE_ERROR(ConfigError);

#undef PINNLAB_DEFINE_ERROR

}  // namespace pinnlab
