#include "jiomber/complexity.hpp"

#include <stdexcept>

namespace jiomber {

OpCount count_ops(Algorithm alg, long long m, long long d) {
    if (m < 1 || d < 1 || d > m) throw std::invalid_argument("count_ops: need 1 <= D <= M");
    OpCount c;
    switch (alg) {
        case Algorithm::FullRankLms:
            c.mul = 2 * m + 1;
            c.add = 2 * m;
            break;
        case Algorithm::FullRankMber:
            c.mul = 4 * m + 1;
            c.add = 4 * m - 1;
            break;
        case Algorithm::MwfLms:
            c.mul = d * m * m - m * m + 2 * d * m + 4 * d + 1;
            c.add = d * m * m - m * m + 3 * d - 2;
            break;
        case Algorithm::Eig:
            c.exact = false;
            c.order = "O(M^3)";
            break;
        case Algorithm::JioLms:
            c.mul = 3 * d * m + m + 3 * d + 6;
            c.add = 2 * d * m + m + 4 * d - 2;
            break;
        case Algorithm::MwfMber:
            c.mul = (d + 1) * m * m + (3 * d + 1) * m + 3 * d + m + 10;
            c.add = (d - 1) * m * m + (2 * d - 1) * m + 2 * d + m + 1;
            break;
        case Algorithm::JioMber:
            c.mul = 6 * m * d + 5 * d + m + 11;
            c.add = 5 * m * d + d - m - 1;
            break;
    }
    return c;
}

const char* algorithm_name(Algorithm alg) {
    switch (alg) {
        case Algorithm::FullRankLms: return "full-rank-lms";
        case Algorithm::FullRankMber: return "full-rank-mber";
        case Algorithm::MwfLms: return "mwf-lms";
        case Algorithm::Eig: return "eig";
        case Algorithm::JioLms: return "jio-lms";
        case Algorithm::MwfMber: return "mwf-mber";
        case Algorithm::JioMber: return "jio-mber";
    }
    return "?";
}

const std::vector<Algorithm>& all_algorithms() {
    static const std::vector<Algorithm> all = {
        Algorithm::FullRankLms, Algorithm::FullRankMber, Algorithm::MwfLms,
        Algorithm::Eig,         Algorithm::JioLms,       Algorithm::MwfMber,
        Algorithm::JioMber,
    };
    return all;
}

}  // namespace jiomber
