#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "subdiff/fem.hpp"

using namespace subdiff;

TEST_CASE("mass matrix entries", "[fem]") {
    const Mesh1d mesh(4); // h = 0.25
    const TriDiag m = assemble_mass(mesh);
    REQUIRE(m.size() == 3);
    for (double d : m.diag) CHECK(d == Catch::Approx(1.0 / 6.0).epsilon(1e-15));
    for (double s : m.sub) CHECK(s == Catch::Approx(1.0 / 24.0).epsilon(1e-15));
    CHECK(m.symmetric());

    const Mesh1d tiny(2);
    const TriDiag m2 = assemble_mass(tiny);
    REQUIRE(m2.size() == 1);
    CHECK(m2.diag[0] == Catch::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("mass row sums realize the partition of unity", "[fem]") {
    const Mesh1d mesh(16);
    const TriDiag m = assemble_mass(mesh);
    // row sum = (phi_i, 1) = h away from the boundary-adjacent rows
    for (std::size_t i = 1; i + 1 < m.size(); ++i)
        CHECK(m.sub[i - 1] + m.diag[i] + m.sup[i] == Catch::Approx(mesh.h).epsilon(1e-14));
}

TEST_CASE("stiffness for constant coefficient", "[fem]") {
    const Mesh1d mesh(8);
    const TriDiag s = assemble_stiffness(mesh, Coefficient::constant(1.0), 0.0);
    for (double d : s.diag) CHECK(d == Catch::Approx(2.0 / mesh.h).epsilon(1e-14));
    for (double o : s.sub) CHECK(o == Catch::Approx(-1.0 / mesh.h).epsilon(1e-14));
    CHECK(s.symmetric());
}

TEST_CASE("spatially constant coefficient scales the stiffness", "[fem]") {
    const Mesh1d mesh(4);
    const Coefficient a([](double, double t) { return 2.0 + std::cos(t); }, 3.0);
    const TriDiag s = assemble_stiffness(mesh, a, 0.0);
    const TriDiag s1 = assemble_stiffness(mesh, Coefficient::constant(1.0), 0.0);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s.diag[i] == Catch::Approx(3.0 * s1.diag[i]).epsilon(1e-14));
    for (std::size_t i = 0; i + 1 < s.size(); ++i) CHECK(s.sub[i] == Catch::Approx(3.0 * s1.sub[i]).epsilon(1e-14));
}

TEST_CASE("affine coefficient is integrated exactly", "[fem]") {
    // M=2: one interior node; S_11 = int_0^1 (x+1) (1/h)^2 dx restricted to
    // the two elements, which equals (1/h^2) int_0^1 (x+1) dx = 4 * 1.5 = 6.
    const Mesh1d mesh(2);
    const Coefficient a([](double x, double) { return x + 1.0; }, 2.0);
    const TriDiag s = assemble_stiffness(mesh, a, 0.0);
    REQUIRE(s.size() == 1);
    CHECK(s.diag[0] == Catch::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("ellipticity violations are reported at quadrature points", "[fem]") {
    const Mesh1d mesh(4);
    const Coefficient bad([](double x, double) { return x < 0.5 ? 1.0 : 10.0; }, 3.0);
    CHECK_THROWS_AS(assemble_stiffness(mesh, bad, 0.0), std::domain_error);
}

TEST_CASE("ellipticity inheritance on random vectors", "[fem]") {
    const Mesh1d mesh(32);
    const Coefficient a([](double x, double t) { return 2.0 + std::cos(t) + 0.3 * std::sin(5.0 * x); }, 4.0);
    const TriDiag s = assemble_stiffness(mesh, a, 0.4);
    const TriDiag s1 = assemble_stiffness(mesh, Coefficient::constant(1.0), 0.0);
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<double> v(mesh.dofs());
        for (auto& x : v) x = dist(rng);
        const auto sv = tridiag_matvec(s, v);
        const auto s1v = tridiag_matvec(s1, v);
        double q = 0, q1 = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            q += v[i] * sv[i];
            q1 += v[i] * s1v[i];
        }
        CHECK(q >= (1.0 / a.lambda) * q1 * (1 - 1e-12));
    }
}

TEST_CASE("projection of zero and of a hat function", "[fem]") {
    const Mesh1d mesh(8);
    const auto z = l2_project(mesh, [](double) { return 0.0; });
    for (double v : z) CHECK(v == 0.0);

    // g = phi_3: the projection must return the unit coefficient vector
    const double h = mesh.h;
    const auto hat = [h](double x) {
        const double c = 3.0 * h;
        const double d = std::abs(x - c);
        return d < h ? 1.0 - d / h : 0.0;
    };
    const auto e = l2_project(mesh, hat);
    for (std::size_t i = 0; i < e.size(); ++i) CHECK(e[i] == Catch::Approx(i == 2 ? 1.0 : 0.0).margin(1e-12));
}

TEST_CASE("singular power-law load matches the antiderivative oracle", "[fem]") {
    const Mesh1d mesh(4);
    const double h = mesh.h, p = -0.25;
    const auto rhs = power_load(mesh, p);
    // first entry: int_0^h x^p (x/h) dx + int_h^{2h} x^p (2h-x)/h dx
    const double first = (oracles::int_power(p + 1.0, 0, h)) / h +
                         (2.0 * oracles::int_power(p, h, 2 * h) - oracles::int_power(p + 1.0, h, 2 * h) / h);
    CHECK(rhs[0] == Catch::Approx(first).epsilon(1e-13));
    // the spec case: int_0^h x^{-1/4} (x/h) dx = (4/7) h^{3/4}
    CHECK(oracles::int_power(p + 1.0, 0, h) / h == Catch::Approx((4.0 / 7.0) * std::pow(h, 0.75)).epsilon(1e-14));

    // projection has to reproduce the load through the mass matrix
    const auto v = l2_project_power(mesh, p);
    const auto back = tridiag_matvec(assemble_mass(mesh), v);
    for (std::size_t i = 0; i < back.size(); ++i) CHECK(back[i] == Catch::Approx(rhs[i]).epsilon(1e-12));
}

TEST_CASE("load vector of simple sources", "[fem]") {
    const Mesh1d mesh(8);
    const auto ones = load_vector(mesh, [](double, double) { return 1.0; }, 0.0);
    for (double v : ones) CHECK(v == Catch::Approx(mesh.h).epsilon(1e-14));

    // indicator of (0, 1/2) with the node at x = 1/2 present: that node's
    // entry only sees half of its support
    const auto ind = load_vector(mesh, [](double x, double) { return x < 0.5 ? 1.0 : 0.0; }, 0.0);
    CHECK(ind[3] == Catch::Approx(mesh.h / 2.0).epsilon(1e-14)); // node x=0.5 is dof 3
    CHECK(ind[1] == Catch::Approx(mesh.h).epsilon(1e-14));
    CHECK(ind[5] == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("cubic source is integrated exactly at fixed time", "[fem]") {
    const Mesh1d mesh(5);
    const double t = 4.0, h = mesh.h;
    const auto b = load_vector(mesh, [](double x, double tt) { return std::sqrt(tt) * x * (1.0 - x); }, t);
    // oracle: exact integral of x(1-x) against each hat via polynomial antiderivatives
    const auto ip = [](double x, int k) { return std::pow(x, k + 1) / (k + 1); };
    for (std::size_t i = 0; i < mesh.dofs(); ++i) {
        const double xl = mesh.node(i), xc = mesh.node(i + 1), xr = mesh.node(i + 2);
        auto seg = [&](double a, double bb, double c0, double c1) {
            // int_a^b (c0 + c1 x)(x - x^2) dx
            return c0 * (ip(bb, 1) - ip(a, 1)) + (c1 - c0) * (ip(bb, 2) - ip(a, 2)) - c1 * (ip(bb, 3) - ip(a, 3));
        };
        const double exact = seg(xl, xc, -xl / h, 1.0 / h) + seg(xc, xr, xr / h, -1.0 / h);
        CHECK(b[i] == Catch::Approx(2.0 * exact).epsilon(1e-13)); // sqrt(4) = 2
    }
}

TEST_CASE("thomas solve basics", "[fem]") {
    TriDiag eye(4);
    eye.diag = {2.0, 3.0, 4.0, 5.0};
    const std::vector<double> rhs = {2.0, 3.0, 4.0, 5.0};
    const auto x = solve_tridiag(eye, rhs);
    for (double v : x) CHECK(v == Catch::Approx(1.0).epsilon(1e-15));

    const Mesh1d mesh(10);
    const TriDiag m = assemble_mass(mesh);
    const std::vector<double> ones(m.size(), 1.0);
    const auto sol = solve_tridiag(m, tridiag_matvec(m, ones));
    for (double v : sol) CHECK(v == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("thomas solve matches dense elimination on random SPD systems", "[fem]") {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> dist(0.1, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 5;
        TriDiag a(n);
        for (std::size_t i = 0; i < n; ++i) a.diag[i] = 2.5 + dist(rng);
        for (std::size_t i = 0; i + 1 < n; ++i) a.sub[i] = a.sup[i] = -dist(rng);
        std::vector<double> rhs(n);
        for (auto& v : rhs) v = dist(rng) - 0.5;
        std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            d[i][i] = a.diag[i];
            if (i) d[i][i - 1] = a.sub[i - 1];
            if (i + 1 < n) d[i][i + 1] = a.sup[i];
        }
        const auto x1 = solve_tridiag(a, rhs);
        const auto x2 = oracles::dense_solve(d, rhs);
        for (std::size_t i = 0; i < n; ++i) CHECK(x1[i] == Catch::Approx(x2[i]).margin(1e-12));
    }
}

TEST_CASE("thomas solve reports singular pivots", "[fem]") {
    TriDiag a(2);
    a.diag = {1.0, 0.0};
    a.sub = {0.0};
    a.sup = {0.0};
    CHECK_THROWS_AS(solve_tridiag(a, {1.0, 1.0}), NumericalError);

    TriDiag neg(1);
    neg.diag = {-1.0};
    CHECK_THROWS_AS(solve_tridiag(neg, {1.0}), NumericalError);
}

TEST_CASE("discrete L2 norm", "[fem]") {
    const Mesh1d mesh(1000);
    const TriDiag m = assemble_mass(mesh);

    const std::vector<double> zero(mesh.dofs(), 0.0);
    CHECK(l2_norm(m, zero) == 0.0);

    std::vector<double> s(mesh.dofs());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::sin(M_PI * mesh.node(i + 1));
    CHECK(l2_norm(m, s) == Catch::Approx(std::sqrt(0.5)).margin(1e-5));

    std::vector<double> e(mesh.dofs(), 0.0);
    e[500] = 1.0;
    CHECK(l2_norm(m, e) == Catch::Approx(std::sqrt(2.0 * mesh.h / 3.0)).epsilon(1e-13));
}
