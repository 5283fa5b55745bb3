#include "doctest.h"

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "scsip/basis.hpp"

using namespace scsip;

TEST_CASE("dimension")
{
    CHECK(poly_dim(0) == 1);
    CHECK(poly_dim(2) == 6);
    CHECK(poly_dim(3) == 10);
    CHECK(poly_dim(4) == 15);
    for (int k = 2; k <= 8; ++k)
        CHECK(poly_dim(k) - poly_dim(k - 2) == 2 * k + 1);
}

TEST_CASE("ordering is i1 outer, i2 inner")
{
    for (int k = 0; k <= 6; ++k) {
        const MonomialBasis basis(k, {0, 0});
        REQUIRE(basis.size() == poly_dim(k));
        std::set<std::array<int, 2>> seen;
        int i = 0;
        for (int i1 = 0; i1 <= k; ++i1)
            for (int i2 = 0; i2 <= k - i1; ++i2, ++i) {
                CHECK(basis.exponents(i) == std::array<int, 2>{i1, i2});
                CHECK(basis.index_of(i1, i2) == i);
                seen.insert(basis.exponents(i));
            }
        CHECK(seen.size() == static_cast<std::size_t>(basis.size()));
    }
}

TEST_CASE("values, gradients and Hessians at a point")
{
    const MonomialBasis basis(2, {0, 0});
    std::vector<double> v(6);
    basis.values({2, 3}, v);
    CHECK(v == std::vector<double>{1, 3, 9, 2, 6, 4});

    std::vector<Point> g(6);
    basis.gradients({2, 3}, g);
    CHECK(g[basis.index_of(1, 1)] == Point{3, 2});

    std::vector<SymTensor> h(6);
    for (Point x : {Point{0, 0}, Point{-1.5, 0.25}}) {
        basis.hessians(x, h);
        const SymTensor hxx = h[basis.index_of(2, 0)];
        CHECK(hxx.xx == 2.0);
        CHECK(hxx.xy == 0.0);
        CHECK(hxx.yy == 0.0);
    }

    const MonomialBasis shifted(2, {1, 1});
    shifted.values({2, 3}, v);
    CHECK(v == std::vector<double>{1, 2, 4, 1, 2, 1});
}

TEST_CASE("derivatives match central differences")
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double step = 1e-5;
    for (int k = 2; k <= 4; ++k)
        for (int trial = 0; trial < 20; ++trial) {
            const MonomialBasis basis(k, {u(rng), u(rng)});
            const Point x{u(rng), u(rng)};
            const int n = basis.size();
            std::vector<double> vp(n), vm(n), wp(n), wm(n);
            std::vector<Point> g(n), gp(n), gm(n), hp(n), hm(n);
            std::vector<SymTensor> h(n);
            basis.gradients(x, g);
            basis.hessians(x, h);
            basis.values(x + Point{step, 0}, vp);
            basis.values(x - Point{step, 0}, vm);
            basis.values(x + Point{0, step}, wp);
            basis.values(x - Point{0, step}, wm);
            basis.gradients(x + Point{step, 0}, gp);
            basis.gradients(x - Point{step, 0}, gm);
            basis.gradients(x + Point{0, step}, hp);
            basis.gradients(x - Point{0, step}, hm);
            for (int i = 0; i < n; ++i) {
                const double dx = (vp[i] - vm[i]) / (2 * step);
                const double dy = (wp[i] - wm[i]) / (2 * step);
                const double scale = 1.0 + norm(g[i]);
                CHECK(std::abs(dx - g[i].x) <= 1e-6 * scale);
                CHECK(std::abs(dy - g[i].y) <= 1e-6 * scale);
                const double hxx = (gp[i].x - gm[i].x) / (2 * step);
                const double hxy = (hp[i].x - hm[i].x) / (2 * step);
                const double hyx = (gp[i].y - gm[i].y) / (2 * step);
                const double hyy = (hp[i].y - hm[i].y) / (2 * step);
                const double hs = 1.0 + std::abs(h[i].xx) + std::abs(h[i].xy) + std::abs(h[i].yy);
                CHECK(std::abs(hxx - h[i].xx) <= 1e-6 * hs);
                CHECK(std::abs(hxy - h[i].xy) <= 1e-6 * hs);
                CHECK(std::abs(hyx - h[i].xy) <= 1e-6 * hs);
                CHECK(std::abs(hyy - h[i].yy) <= 1e-6 * hs);
            }
        }
}
