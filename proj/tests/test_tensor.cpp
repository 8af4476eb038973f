#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hofnet/adam.hpp"
#include "hofnet/tape.hpp"
#include "support/fd_check.hpp"

using namespace hofnet;

TEST_CASE("relu forward") {
    Tape t;
    int x = t.leaf(Array::vec({-1.0, 0.0, 2.0}));
    int y = t.relu(x);
    CHECK(t.value(y).data == std::vector<double>{0.0, 0.0, 2.0});
}

TEST_CASE("matmul identity maps a vector to itself") {
    Tape t;
    int eye = t.constant(Array::matrix(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1}));
    int x = t.leaf(Array::vec({0.3, -2.5, 7.0}));
    int y = t.matmul(eye, x);
    CHECK(t.value(y).data == t.value(x).data);
}

TEST_CASE("sq_norm of [3,4] is 25") {
    Tape t;
    int x = t.leaf(Array::vec({3.0, 4.0}));
    CHECK(t.value(t.sq_norm(x)).data[0] == doctest::Approx(25.0));
}

TEST_CASE("matmul shape mismatch throws") {
    Tape t;
    int a = t.leaf(Array::matrix(2, 3, {1, 2, 3, 4, 5, 6}));
    int b = t.leaf(Array::matrix(2, 2, {1, 0, 0, 1}));
    CHECK_THROWS_AS(t.matmul(a, b), ShapeError);
}

TEST_CASE("non-finite input is rejected") {
    Tape t;
    CHECK_THROWS_AS(t.leaf(Array::vec({1.0, std::nan("")})), NonFiniteError);
    int big = t.leaf(Array::vec({1e308, 1e308}));
    int doubled = t.add(big, big); // overflows to inf
    CHECK_THROWS_AS(t.relu(doubled), NonFiniteError);
}

TEST_CASE("backward of sq_norm is 2x") {
    Tape t;
    int x = t.leaf(Array::vec({1.0, 2.0}));
    int loss = t.sq_norm(x);
    auto grads = t.backward(loss);
    CHECK(grads.at(x).data == std::vector<double>{2.0, 4.0});
}

TEST_CASE("backward of reduce_mean(relu(x)) uses relu'(0) = 0") {
    Tape t;
    int x = t.leaf(Array::vec({-1.0, 3.0}));
    int loss = t.reduce_mean(t.relu(x));
    auto grads = t.backward(loss);
    CHECK(grads.at(x).data == std::vector<double>{0.0, 0.5});

    Tape t2;
    int x2 = t2.leaf(Array::vec({0.0, 3.0}));
    auto g2 = t2.backward(t2.reduce_mean(t2.relu(x2)));
    CHECK(g2.at(x2).data[0] == 0.0);
}

TEST_CASE("non-scalar loss is rejected") {
    Tape t;
    int x = t.leaf(Array::vec({1.0, 2.0}));
    CHECK_THROWS_AS(t.backward(t.relu(x)), ShapeError);
}

TEST_CASE("leaves not reachable from the loss get exactly zero") {
    Tape t;
    int x = t.leaf(Array::vec({1.0, 2.0}));
    int unused = t.leaf(Array::matrix(2, 2, {1, 2, 3, 4}));
    auto grads = t.backward(t.sq_norm(x));
    CHECK(grads.at(unused).data == std::vector<double>{0.0, 0.0, 0.0, 0.0});
}

TEST_CASE("linearity of backward") {
    // d(a*f + b*g) == a*df + b*dg
    auto make = [](double a, double b, GradMap& grads, int& leaf) {
        Tape t;
        leaf = t.leaf(Array::vec({0.4, -0.7, 1.3}));
        int f = t.sq_norm(leaf);
        int g = t.reduce_mean(t.tanh(leaf));
        int loss = t.add(t.scale(f, a), t.scale(g, b));
        grads = t.backward(loss);
        return t.value(loss).data[0];
    };
    GradMap gf, gg, gmix;
    int leaf = -1;
    make(1.0, 0.0, gf, leaf);
    make(0.0, 1.0, gg, leaf);
    make(2.5, -1.5, gmix, leaf);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(gmix.at(leaf).data[i] ==
              doctest::Approx(2.5 * gf.at(leaf).data[i] - 1.5 * gg.at(leaf).data[i])
                  .epsilon(1e-12));
}

TEST_CASE("identical tapes give bit-identical outputs and gradients") {
    auto run = [] {
        Tape t;
        int x = t.leaf(Array::matrix(3, 3, {0.1, -0.2, 0.3, 0.4, 0.5, -0.6, 0.7, 0.8, 0.9}));
        int y = t.leaf(Array::vec({0.2, 0.4, -0.8}));
        int loss = t.sq_norm(t.tanh(t.matmul(x, y)));
        auto g = t.backward(loss);
        return std::make_pair(t.value(loss).data[0], g.at(x).data);
    };
    auto [l1, g1] = run();
    auto [l2, g2] = run();
    CHECK(l1 == l2);
    CHECK(g1 == g2);
}

TEST_CASE("random 3-layer mlp gradient matches finite differences") {
    // dense leaf-built mlp, checked coordinate by coordinate
    Rng rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        fdcheck::Graph g;
        auto mat = [&](std::size_t r, std::size_t c) {
            Array a = Array::zeros({r, c});
            for (double& v : a.data) v = rng.uniform(-0.9, 0.9);
            return a;
        };
        g.leaves.push_back(mat(4, 3));            // W1
        g.leaves.push_back(mat(4, 4));            // W2
        g.leaves.push_back(mat(2, 4));            // W3
        g.leaves.push_back(fdcheck::random_array(rng, 3)); // ignored filler shape
        g.leaves[3] = mat(3, 1);                  // x
        using hofnet::Op;
        g.ops = {
            {Op::Matmul, 0, 3},  // node 4 = W1 x        [4x1]
            {Op::Relu, 4, -1},   // node 5
            {Op::Matmul, 1, 5},  // node 6 = W2 h1       [4x1]
            {Op::Tanh, 6, -1},   // node 7
            {Op::Matmul, 2, 7},  // node 8 = W3 h2       [2x1]
            {Op::SqNorm, 8, -1}, // node 9
        };
        g.loss = 9;
        auto res = fdcheck::check_gradients(g, 1e-4);
        REQUIRE(res.has_value());
        CHECK(res->ok);
        CHECK(res->checked > 0);
    }
}

TEST_CASE("gradient property suite over random op graphs") {
    Rng rng(99);
    int done = 0;
    int attempts = 0;
    while (done < 60 && attempts < 400) {
        ++attempts;
        Rng graph_rng = rng.split(static_cast<std::uint64_t>(attempts));
        fdcheck::Graph g = fdcheck::random_graph(graph_rng);
        auto res = fdcheck::check_gradients(g, 1e-4);
        if (!res) continue; // ill-conditioned sample
        INFO("attempt ", attempts, " worst rel err ", res->worst_rel_err);
        CHECK(res->ok);
        if (res->checked > 0) ++done;
    }
    CHECK(done == 60);
}

TEST_CASE("adam: zero gradient leaves params unchanged") {
    AdamState st = AdamState::init(3, 0.1);
    Array p = Array::vec({1.0, -2.0, 3.0});
    const Array before = p;
    adam_step(st, p, Array::vec({0.0, 0.0, 0.0}));
    CHECK(p.data == before.data);
    CHECK(st.step == 1);
}

TEST_CASE("adam: first step closed form") {
    AdamState st = AdamState::init(1, 0.1);
    Array p = Array::vec({0.0});
    adam_step(st, p, Array::vec({1.0}));
    // mhat = g, vhat = g^2, so delta = alpha * 1/(1 + eps)
    CHECK(p.data[0] == doctest::Approx(-0.1 / (1.0 + 1e-8)).epsilon(1e-12));
}

TEST_CASE("adam: 100 steps walk a convex scalar toward its minimum") {
    AdamState st = AdamState::init(1, 0.1);
    Array p = Array::vec({0.0});
    const double init_gap = std::fabs(p.data[0] - 5.0);
    for (int i = 0; i < 100; ++i) {
        Array g = Array::vec({2.0 * (p.data[0] - 5.0)});
        adam_step(st, p, g);
    }
    CHECK(std::fabs(p.data[0] - 5.0) < init_gap);
    CHECK(st.step == 100);
    for (double v : st.v.data) CHECK(v >= 0.0);
}

TEST_CASE("adam: shape mismatch throws") {
    AdamState st = AdamState::init(2, 0.1);
    Array p = Array::vec({1.0, 2.0});
    CHECK_THROWS_AS(adam_step(st, p, Array::vec({1.0})), ShapeError);
}
