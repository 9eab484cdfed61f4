#pragma once

#include <string>
#include <vector>

// Per-symbol complex operation counts of each detector's adaptation loop,
// as closed forms in the antenna count M and operating rank D. The
// eigendecomposition-based detector has no per-symbol closed form; it is
// reported as its order class.

namespace jiomber {

enum class Algorithm {
    FullRankLms,
    FullRankMber,
    MwfLms,
    Eig,
    JioLms,
    MwfMber,
    JioMber,
};

struct OpCount {
    bool exact = true;    // false: `order` holds the class, mul/add unset
    long long mul = 0;
    long long add = 0;
    std::string order;    // e.g. "O(M^3)" when !exact
};

OpCount count_ops(Algorithm alg, long long m, long long d);

const char* algorithm_name(Algorithm alg);

const std::vector<Algorithm>& all_algorithms();

}  // namespace jiomber
