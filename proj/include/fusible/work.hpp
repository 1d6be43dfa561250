#pragma once

#include <string>

#include "fusible/errors.hpp"

namespace fusible {

// Counts abstract work units against a limit.  The recursive algorithms in
// this library are total but can be astronomically expensive; exceeding the
// limit raises ResourceError instead of hanging.
struct WorkMeter {
    unsigned long long limit;
    unsigned long long spent = 0;
    std::string what;

    explicit WorkMeter(unsigned long long limit_, std::string what_ = "work budget")
        : limit(limit_), what(std::move(what_)) {}

    void charge(unsigned long long n = 1) {
        spent += n;
        if (spent > limit)
            throw ResourceError(what + " exceeded (" + std::to_string(limit) + " units)", spent);
    }
};

} // namespace fusible
