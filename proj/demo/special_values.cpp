// Prints a few special values: the rank-one family at weight (2,2,2), the
// root-system sum at the origin, and a twisted value of the three-line
// arrangement with its numerical embedding and a truncated sum beside it.

#include <cstdio>

#include "latsum/genfun.hpp"
#include "latsum/oracle.hpp"

using namespace latsum;

namespace {

Functional fn(std::vector<long> d, Q c, std::string name) {
    ZVec v;
    for (long x : d) v.push_back(Z(x));
    return {v, GaussQ(c), std::move(name)};
}

void show(const char* label, const Arrangement& a, const QVec& y, const Weights& k) {
    auto fd = exact_field_for(a, y);
    auto S = lattice_sum_value(fd, a, y, k);
    Complex z = truncated_sum(a, k, y, 2000);
    std::printf("%s\n  S = %s\n    ~ %s\n  Z(2000) = %s\n", label, S.str().c_str(), S.embed(128).str(25).c_str(),
                z.str(25).c_str());
}

}  // namespace

int main() {
    for (int al = 1; al <= 3; ++al) {
        Arrangement a(1, {fn({-1}, al, "f-1"), fn({1}, 0, "f0"), fn({1}, al, "f1")});
        show(("sum over m of 1/((" + std::to_string(al) + "-m)^2 m^2 (m+" + std::to_string(al) + ")^2)").c_str(), a,
             {Q(0)}, {2, 2, 2});
    }
    Arrangement roots(2, {fn({1, 0}, 0, "m"), fn({0, 1}, 0, "n"), fn({1, 1}, 0, "m+n")});
    show("sum over m, n of 1/(m^2 n^2 (m+n)^2)", roots, {Q(0), Q(0)}, {2, 2, 2});
    Arrangement three(2, {fn({1, 0}, Q(1, 2), "f1"), fn({0, 1}, Q(1, 3), "f2"), fn({1, 1}, Q(1, 5), "f3")});
    show("sum of e^{2 pi i (m/7 + n/11)} / ((m+1/2)^2 (n+1/3) (m+n+1/5))", three, {Q(1, 7), Q(1, 11)}, {2, 1, 1});
}
