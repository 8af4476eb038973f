#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hofnet/checkpoint.hpp"
#include "hofnet/encoder.hpp"
#include "hofnet/lvc.hpp"
#include "hofnet/rng.hpp"
#include "hofnet/serial_ref.hpp"
#include "support/fd_check.hpp"

using namespace hofnet;

namespace {

PointCloud random_cloud(Rng& rng, std::size_t n, std::size_t dim = 3) {
    std::vector<double> coords(n * dim);
    for (double& v : coords) v = rng.uniform(-1.0, 1.0);
    return PointCloud(dim, std::move(coords));
}

double max_abs_gap(const PointCloud& a, const PointCloud& b) {
    REQUIRE(a.coords().size() == b.coords().size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.coords().size(); ++i)
        m = std::max(m, std::fabs(a.coords()[i] - b.coords()[i]));
    return m;
}

} // namespace

TEST_CASE("count_params on the published 1-hidden-layer schedule") {
    CHECK(count_params({{3, 1024, 3}, Activation::Relu}) == 7171);
}

TEST_CASE("count_params trivia and the 3-hidden-layer schedule") {
    for (int c = 2; c <= 4; ++c)
        for (int o = 1; o <= 5; ++o)
            CHECK(count_params({{c, o}, Activation::Relu}) ==
                  static_cast<std::size_t>((c + 1) * o));
    CHECK(count_params({{3, 128, 128, 128, 3}, Activation::Relu}) == 33923);
}

TEST_CASE("pack/unpack round-trip is bit-exact") {
    Rng rng(7);
    MlpSpec spec{{3, 5, 4, 3}, Activation::Relu};
    FlatParams p = random_params(spec, 123);
    const auto views = unpack(p);
    std::vector<Array> ws, bs;
    for (const auto& v : views) {
        Array w = Array::zeros({static_cast<std::size_t>(v.out), static_cast<std::size_t>(v.in)});
        std::copy(v.w, v.w + w.size(), w.data.begin());
        Array b = Array::zeros({static_cast<std::size_t>(v.out)});
        std::copy(v.b, v.b + b.size(), b.data.begin());
        ws.push_back(std::move(w));
        bs.push_back(std::move(b));
    }
    FlatParams packed = pack(spec, ws, bs);
    CHECK(packed.theta == p.theta);
}

TEST_CASE("mapping_forward trivia") {
    MlpSpec spec{{3, 8, 3}, Activation::Relu};
    Rng rng(8);
    PointCloud x = random_cloud(rng, 10);

    PointCloud zero_out = mapping_forward(zero_params(spec), x);
    for (double v : zero_out.coords()) CHECK(v == 0.0);

    // single affine layer with W = I, b = 0 is the identity
    MlpSpec id_spec{{3, 3}, Activation::Relu};
    FlatParams id = zero_params(id_spec);
    id.theta[0] = id.theta[4] = id.theta[8] = 1.0;
    CHECK(max_abs_gap(mapping_forward(id, x), x) == 0.0);
}

TEST_CASE("mapping_forward matches the straight-arithmetic oracle") {
    Rng rng(9);
    for (int trial = 0; trial < 8; ++trial) {
        MlpSpec spec{{3, 1 + static_cast<int>(rng.index(16)), 1 + static_cast<int>(rng.index(16)), 3},
                     trial % 2 ? Activation::Tanh : Activation::Relu};
        FlatParams p = random_params(spec, 1000 + static_cast<std::uint64_t>(trial));
        PointCloud x = random_cloud(rng, 33);
        CHECK(max_abs_gap(mapping_forward(p, x), serial::mapping_forward(p, x)) < 1e-12);
    }
}

TEST_CASE("mapping_forward dim mismatch throws") {
    MlpSpec spec{{3, 4, 3}, Activation::Relu};
    PointCloud x2(2, {0.1, 0.2});
    CHECK_THROWS_AS(mapping_forward(zero_params(spec), x2), ShapeError);
}

TEST_CASE("a 2-layer evaluation equals manual chaining of the layers") {
    Rng rng(10);
    MlpSpec spec{{3, 4, 3}, Activation::Relu};
    FlatParams p = random_params(spec, 42);
    PointCloud x = random_cloud(rng, 12);

    // layer 1 alone, with relu applied by hand, then layer 2 alone
    const auto views = unpack(p);
    MlpSpec first{{3, 4}, Activation::Relu};
    FlatParams p1 = zero_params(first);
    std::copy(views[0].w, views[0].w + 12, p1.theta.begin());
    std::copy(views[0].b, views[0].b + 4, p1.theta.begin() + 12);
    MlpSpec second{{4, 3}, Activation::Relu};
    FlatParams p2 = zero_params(second);
    std::copy(views[1].w, views[1].w + 12, p2.theta.begin());
    std::copy(views[1].b, views[1].b + 3, p2.theta.begin() + 12);

    PointCloud mid = mapping_forward(p1, PointCloud(3, x.coords()));
    std::vector<double> mid_act = mid.coords();
    for (double& v : mid_act) v = v > 0.0 ? v : 0.0;
    PointCloud manual = mapping_forward(p2, PointCloud(4, mid_act));
    CHECK(max_abs_gap(mapping_forward(p, x), manual) < 1e-14);
}

TEST_CASE("batch permutation permutes outputs identically") {
    Rng rng(11);
    MlpSpec spec{{3, 6, 3}, Activation::Relu};
    FlatParams p = random_params(spec, 5);
    PointCloud x = random_cloud(rng, 20);
    PointCloud rev(3, {});
    for (std::size_t i = x.count(); i-- > 0;) rev.push(x.point(i));
    PointCloud fx = mapping_forward(p, x);
    PointCloud frev = mapping_forward(p, rev);
    for (std::size_t i = 0; i < x.count(); ++i)
        for (std::size_t a = 0; a < 3; ++a)
            CHECK(frev.coord(x.count() - 1 - i, a) == fx.coord(i, a));
}

TEST_CASE("tape forward agrees with the plain forward for batches and vectors") {
    Rng rng(12);
    MlpSpec spec{{3, 7, 5, 3}, Activation::Relu};
    FlatParams p = random_params(spec, 77);
    PointCloud x = random_cloud(rng, 9);

    Tape tape;
    int theta = tape.leaf(Array::vec(p.theta));
    int xs = tape.constant(Array::matrix(x.count(), 3, x.coords()));
    int out = tape_mlp_forward(tape, spec, theta, xs);
    PointCloud plain = mapping_forward(p, x);
    for (std::size_t i = 0; i < plain.coords().size(); ++i)
        CHECK(tape.value(out).data[i] == doctest::Approx(plain.coords()[i]).epsilon(1e-14));

    Tape t2;
    int theta2 = t2.leaf(Array::vec(p.theta));
    std::vector<double> v0(x.point(0).begin(), x.point(0).end());
    int x0 = t2.constant(Array::vec(v0));
    int out2 = tape_mlp_forward(t2, spec, theta2, x0);
    for (std::size_t a = 0; a < 3; ++a)
        CHECK(t2.value(out2).data[a] == doctest::Approx(plain.coord(0, a)).epsilon(1e-14));
}

TEST_CASE("complexity_lvc on the worked example") {
    // x-path [3, 8, 3], codeword length 4, injection at the first layer:
    // (3+4+1)*8 + (8+1)*3 + 4 = 95
    LvcSpec spec = random_lvc({3, 8, 3}, 4, {0}, Activation::Relu, 21);
    CHECK(complexity_lvc(spec) == 95);

    // converted decoder drops the Wz block and the codeword
    FlatParams conv = lvc_to_hof(spec, {0.1, -0.2, 0.3, 0.4});
    CHECK(count_params(conv.spec) == 59);
    CHECK(count_params(conv.spec) <= complexity_lvc(spec) - 4);
}

TEST_CASE("complexity_lvc with m=0 equals the plain decoder count") {
    LvcSpec spec = random_lvc({3, 8, 3}, 0, {}, Activation::Relu, 22);
    CHECK(complexity_lvc(spec) == count_params({{3, 8, 3}, Activation::Relu}));
}

TEST_CASE("adding an injection layer strictly increases complexity") {
    LvcSpec one = random_lvc({3, 8, 8, 3}, 4, {0}, Activation::Relu, 23);
    LvcSpec two = random_lvc({3, 8, 8, 3}, 4, {0, 1}, Activation::Relu, 23);
    CHECK(complexity_lvc(two) > complexity_lvc(one));
}

TEST_CASE("lvc_forward with m=0 matches mapping_forward on the same weights") {
    LvcSpec spec = random_lvc({3, 6, 3}, 0, {}, Activation::Relu, 24);
    FlatParams conv = lvc_to_hof(spec, {});
    Rng rng(24);
    PointCloud x = random_cloud(rng, 16);
    CHECK(max_abs_gap(lvc_forward(spec, {}, x), mapping_forward(conv, x)) == 0.0);
}

TEST_CASE("lvc_forward matches an independent oracle") {
    Rng rng(25);
    LvcSpec spec = random_lvc({3, 5, 4, 3}, 3, {0, 2}, Activation::Relu, 25);
    const std::vector<double> z = {0.3, -0.6, 0.9};
    PointCloud x = random_cloud(rng, 8);
    PointCloud got = lvc_forward(spec, z, x);

    // oracle: naive per-layer arithmetic straight off the stored blocks
    for (std::size_t pi = 0; pi < x.count(); ++pi) {
        std::vector<double> cur(x.point(pi).begin(), x.point(pi).end());
        for (std::size_t l = 0; l < spec.depth(); ++l) {
            const LvcLayer& ly = spec.layers[l];
            std::vector<double> nxt(ly.bias.size());
            for (std::size_t o = 0; o < nxt.size(); ++o) {
                double s = ly.bias(o);
                for (std::size_t i = 0; i < cur.size(); ++i) s += ly.wx(o, i) * cur[i];
                if (!ly.wz.data.empty())
                    for (std::size_t i = 0; i < z.size(); ++i) s += ly.wz(o, i) * z[i];
                nxt[o] = s;
            }
            if (l + 1 < spec.depth())
                for (double& v : nxt) v = v > 0.0 ? v : 0.0;
            cur = nxt;
        }
        for (std::size_t a = 0; a < 3; ++a)
            CHECK(got.coord(pi, a) == doctest::Approx(cur[a]).epsilon(1e-12));
    }
}

TEST_CASE("lvc z=0 reduces the effective bias to b") {
    LvcSpec spec = random_lvc({3, 5, 3}, 2, {0}, Activation::Relu, 26);
    FlatParams conv = lvc_to_hof(spec, {0.0, 0.0});
    const auto views = unpack(conv);
    for (std::size_t o = 0; o < spec.layers[0].bias.size(); ++o)
        CHECK(views[0].b[o] == spec.layers[0].bias(o));
}

TEST_CASE("conversion reproduces the lvc map on random instances") {
    Rng rng(27);
    for (int trial = 0; trial < 100; ++trial) {
        Rng trng = rng.split(static_cast<std::uint64_t>(trial));
        const int depth = 1 + static_cast<int>(trng.index(4));
        std::vector<int> sizes;
        sizes.push_back(2 + static_cast<int>(trng.index(3)));
        for (int l = 0; l < depth - 1; ++l) sizes.push_back(1 + static_cast<int>(trng.index(32)));
        sizes.push_back(2 + static_cast<int>(trng.index(3)));
        const int m = static_cast<int>(trng.index(9));
        std::vector<int> inj;
        for (int l = 0; l < depth; ++l)
            if (trng.uniform() < 0.5) inj.push_back(l);
        if (inj.empty()) inj.push_back(0);
        LvcSpec spec = random_lvc(sizes, m, inj, trial % 2 ? Activation::Tanh : Activation::Relu,
                                  9000 + static_cast<std::uint64_t>(trial));
        std::vector<double> z(static_cast<std::size_t>(m));
        for (double& v : z) v = trng.uniform(-1.0, 1.0);

        std::vector<double> coords(64 * static_cast<std::size_t>(sizes.front()));
        for (double& v : coords) v = trng.uniform(-1.0, 1.0);
        PointCloud probes(static_cast<std::size_t>(sizes.front()), std::move(coords));

        FlatParams conv = lvc_to_hof(spec, z);
        CHECK(max_abs_gap(lvc_forward(spec, z, probes), mapping_forward(conv, probes)) < 1e-10);
        CHECK(count_params(conv.spec) <= complexity_lvc(spec) - static_cast<std::size_t>(m));
    }
}

TEST_CASE("collision demo separates hof pairs where lvc must collide") {
    LvcSpec spec = random_lvc({3, 8, 3}, 1, {0}, Activation::Relu, 28);
    Rng rng(28);
    PointCloud probes = random_cloud(rng, 32);

    // encoder mapping both observations to z = 0.5
    CodewordFn collide = [](std::span<const double>) { return std::vector<double>{0.5}; };
    const std::vector<double> obs_a = {1.0, 2.0};
    const std::vector<double> obs_b = {-3.0, 4.0};

    CollisionReport rep = lvc_collision_demo(spec, collide, obs_a, obs_b, probes);
    CHECK(rep.lvc_collides);
    CHECK(rep.lvc_max_dev <= 1e-12);
    CHECK(rep.hof_separates);

    // negative control: identical weight vectors report no separation
    FlatParams same = lvc_to_hof(spec, {0.5});
    CollisionReport neg = lvc_collision_demo(spec, collide, obs_a, obs_b, same, same, probes);
    CHECK(!neg.hof_separates);

    // m=0 forces every observation to collide; a perturbed pair still separates
    LvcSpec m0 = random_lvc({3, 8, 3}, 0, {}, Activation::Relu, 29);
    CodewordFn empty_code = [](std::span<const double>) { return std::vector<double>{}; };
    CollisionReport rep0 = lvc_collision_demo(m0, empty_code, obs_a, obs_b, probes);
    CHECK(rep0.lvc_collides);
    CHECK(rep0.hof_separates);
}

TEST_CASE("collision demo rejects unequal codewords") {
    LvcSpec spec = random_lvc({3, 4, 3}, 1, {0}, Activation::Relu, 30);
    Rng rng(30);
    PointCloud probes = random_cloud(rng, 4);
    CodewordFn first_coord = [](std::span<const double> o) {
        return std::vector<double>{o[0]};
    };
    const std::vector<double> a = {1.0}, b = {2.0};
    CHECK_THROWS_AS(lvc_collision_demo(spec, first_coord, a, b, probes), PreconditionError);
}

TEST_CASE("encoder output length always matches the decoder parameter count") {
    MlpSpec decoder{{3, 4, 3}, Activation::Relu};
    EncoderNet enc = make_encoder(16, {8}, decoder, 31);
    std::vector<double> obs(16, 0.25);
    FlatParams out = encoder_forward(enc, obs);
    CHECK(out.theta.size() == count_params(decoder));
    CHECK(out.spec == decoder);
}

TEST_CASE("zero final weights emit the bias for every observation") {
    MlpSpec decoder{{3, 4, 3}, Activation::Relu};
    EncoderNet enc = make_encoder(6, {5}, decoder, 32);
    // zero the last layer's weights, set its bias to a ramp
    const std::size_t d = count_params(decoder);
    const std::size_t last_w = 5 * d;
    const std::size_t off = enc.phi.size() - last_w - d;
    for (std::size_t i = 0; i < last_w; ++i) enc.phi.data[off + i] = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        enc.phi.data[off + last_w + i] = 0.01 * static_cast<double>(i);

    Rng rng(33);
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<double> obs(6);
        for (double& v : obs) v = rng.uniform(-1.0, 1.0);
        FlatParams out = encoder_forward(enc, obs);
        for (std::size_t i = 0; i < d; ++i)
            CHECK(out.theta[i] == doctest::Approx(0.01 * static_cast<double>(i)).epsilon(1e-15));
    }
}

TEST_CASE("untrained encoder emits near-zero maps") {
    MlpSpec decoder{{3, 16, 3}, Activation::Relu};
    EncoderNet enc = make_encoder(16, {32}, decoder, 34);
    std::vector<double> obs(16, 1.0);
    FlatParams theta = encoder_forward(enc, obs);
    Rng rng(34);
    PointCloud x = random_cloud(rng, 32);
    PointCloud y = mapping_forward(theta, x);
    for (std::size_t i = 0; i < y.count(); ++i) {
        double n = 0.0;
        for (double v : y.point(i)) n += v * v;
        CHECK(std::sqrt(n) < 0.5);
    }
}

TEST_CASE("encoder-to-decoder gradient matches finite differences") {
    // toy stack: 8-long observation -> [8, 6, 31] encoder -> [3, 4, 3] decoder
    MlpSpec decoder{{3, 4, 3}, Activation::Relu};
    EncoderNet enc = make_encoder(8, {6}, decoder, 35);
    Rng rng(35);
    std::vector<double> obs(8);
    for (double& v : obs) v = rng.uniform(0.0, 1.0);
    PointCloud x = random_cloud(rng, 5);
    Array target = Array::zeros({5, 3});
    for (double& v : target.data) v = rng.uniform(-1.0, 1.0);

    auto loss_of = [&](const Array& phi) {
        Tape t;
        int phi_id = t.leaf(phi);
        int obs_id = t.constant(Array::vec(obs));
        int theta = tape_mlp_forward(t, enc.spec, phi_id, obs_id);
        int xs = t.constant(Array::matrix(5, 3, x.coords()));
        int y = tape_mlp_forward(t, decoder, theta, xs);
        int loss = t.scale(t.sq_norm(t.sub(y, t.constant(target))), 0.2);
        return std::make_pair(t.value(loss).data[0], std::move(t));
    };

    auto [base_loss, base_tape] = loss_of(enc.phi);
    // the loss is the last node recorded
    auto grads = base_tape.backward(static_cast<int>(base_tape.size()) - 1);
    const Array& g = grads.at(0);

    std::size_t checked = 0;
    for (std::size_t i = 0; i < enc.phi.size(); i += 7) { // stride keeps it quick
        const double h = 1e-5 * std::max(1.0, std::fabs(enc.phi.data[i]));
        Array up = enc.phi;
        up.data[i] += h;
        Array dn = enc.phi;
        dn.data[i] -= h;
        const double fd = (loss_of(up).first - loss_of(dn).first) / (2.0 * h);
        const double err = std::fabs(g.data[i] - fd) / std::max(1.0, std::fabs(fd));
        CHECK(err < 1e-4);
        ++checked;
    }
    CHECK(checked > 30);
}

TEST_CASE("params block round-trips bit-exactly") {
    FlatParams p = random_params({{3, 9, 3}, Activation::Tanh}, 404);
    std::ostringstream os(std::ios::binary);
    write_params_block(os, p);
    std::istringstream is(os.str(), std::ios::binary);
    FlatParams back = read_params_block(is);
    CHECK(back.spec == p.spec);
    CHECK(back.theta == p.theta);
}

TEST_CASE("params block rejects bad magic and truncation") {
    FlatParams p = random_params({{3, 4, 3}, Activation::Relu}, 405);
    std::ostringstream os(std::ios::binary);
    write_params_block(os, p);
    const std::string bytes = os.str();

    std::istringstream bad("XOF1" + bytes.substr(4), std::ios::binary);
    CHECK_THROWS_AS(read_params_block(bad), FormatError);

    std::istringstream trunc(bytes.substr(0, bytes.size() - 5), std::ios::binary);
    CHECK_THROWS_AS(read_params_block(trunc), FormatError);
}
