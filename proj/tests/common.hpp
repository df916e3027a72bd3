#pragma once

#include <vector>

#include "latsum/lattice.hpp"

namespace testfx {

using namespace latsum;

inline Functional fn(std::vector<long> d, Q c = Q(0), std::string name = "") {
    ZVec v;
    for (long x : d) v.push_back(Z(x));
    return {v, GaussQ(c), name};
}

// {(1,0),alpha}, {(0,1),beta}, {(1,1),gamma}
inline Arrangement three_lines(Q a, Q b, Q c) {
    return Arrangement(2, {fn({1, 0}, a, "f1"), fn({0, 1}, b, "f2"), fn({1, 1}, c, "f3")});
}

// {(-1,alpha), (1,0), (1,alpha)} on Z
inline Arrangement a1_family(Q a) {
    return Arrangement(1, {fn({-1}, a, "f-1"), fn({1}, 0, "f0"), fn({1}, a, "f1")});
}

// nine functionals: for each of (1,0), (0,1), (1,1) the triple -d + alpha, d, d + alpha
inline Arrangement a2_family(Q a) {
    std::vector<Functional> fs;
    std::vector<std::vector<long>> dirs{{1, 0}, {0, 1}, {1, 1}};
    for (int i = 0; i < 3; ++i) {
        auto d = dirs[i];
        std::string j = std::to_string(i + 1);
        fs.push_back(fn({-d[0], -d[1]}, a, "f" + j + "1"));
        fs.push_back(fn(d, 0, "f" + j + "2"));
        fs.push_back(fn(d, a, "f" + j + "3"));
    }
    return Arrangement(2, fs);
}

inline Arrangement a2_roots() { return three_lines(0, 0, 0); }

}  // namespace testfx
