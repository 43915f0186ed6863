#pragma once

#include <doctest.h>

#include "qeraser/error.hpp"
#include "qeraser/state.hpp"

namespace testing_support {

inline const qeraser::Amplitude I{0.0, 1.0};

/// Kind of the qeraser::Error thrown by `fn`; fails the test if none is.
template <class Fn>
qeraser::ErrorKind kind_of(Fn&& fn) {
    try {
        fn();
    } catch (const qeraser::Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return qeraser::ErrorKind::UnknownScenario;
}

}  // namespace testing_support
