#include "hofnet/shapes.hpp"

#include <algorithm>
#include <cmath>

#include "hofnet/rng.hpp"

namespace hofnet {

namespace {

using Vec3 = std::array<double, 3>;

Vec3 rotate(const std::array<double, 9>& r, const Vec3& p) {
    return {r[0] * p[0] + r[1] * p[1] + r[2] * p[2],
            r[3] * p[0] + r[4] * p[1] + r[5] * p[2],
            r[6] * p[0] + r[7] * p[1] + r[8] * p[2]};
}

Vec3 rotate_t(const std::array<double, 9>& r, const Vec3& p) {
    return {r[0] * p[0] + r[3] * p[1] + r[6] * p[2],
            r[1] * p[0] + r[4] * p[1] + r[7] * p[2],
            r[2] * p[0] + r[5] * p[1] + r[8] * p[2]};
}

std::array<double, 9> random_rotation(Rng& rng) {
    // quaternion from normalized gaussians
    double q[4], n2 = 0.0;
    for (double& v : q) {
        v = rng.gaussian();
        n2 += v * v;
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (double& v : q) v *= inv;
    const double w = q[0], x = q[1], y = q[2], z = q[3];
    return {1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
            2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
            2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)};
}

double bounding_radius(const Primitive& p) {
    double r = 0.0;
    switch (p.kind) {
        case Primitive::Kind::Ellipsoid:
            r = std::max({p.size[0], p.size[1], p.size[2]});
            break;
        case Primitive::Kind::Box:
            r = std::sqrt(p.size[0] * p.size[0] + p.size[1] * p.size[1] +
                          p.size[2] * p.size[2]);
            break;
        case Primitive::Kind::Cylinder:
            r = std::sqrt(p.size[0] * p.size[0] + p.size[2] * p.size[2]);
            break;
    }
    const double off = std::sqrt(p.offset[0] * p.offset[0] + p.offset[1] * p.offset[1] +
                                 p.offset[2] * p.offset[2]);
    return r + off;
}

double surface_area(const Primitive& p) {
    switch (p.kind) {
        case Primitive::Kind::Ellipsoid: {
            // Thomsen's approximation, ample for area-proportional sampling
            const double q = 1.6075;
            const double a = p.size[0], b = p.size[1], c = p.size[2];
            const double s = (std::pow(a * b, q) + std::pow(a * c, q) + std::pow(b * c, q)) / 3.0;
            return 4.0 * M_PI * std::pow(s, 1.0 / q);
        }
        case Primitive::Kind::Box:
            return 8.0 * (p.size[0] * p.size[1] + p.size[0] * p.size[2] +
                          p.size[1] * p.size[2]);
        case Primitive::Kind::Cylinder:
            return 4.0 * M_PI * p.size[0] * p.size[2] + 2.0 * M_PI * p.size[0] * p.size[0];
    }
    return 0.0;
}

Vec3 sample_primitive_surface(const Primitive& p, Rng& rng) {
    switch (p.kind) {
        case Primitive::Kind::Ellipsoid: {
            const double a = p.size[0], b = p.size[1], c = p.size[2];
            const double wmax = std::max({b * c, a * c, a * b});
            while (true) {
                double u[3], n2 = 0.0;
                for (double& v : u) {
                    v = rng.gaussian();
                    n2 += v * v;
                }
                if (n2 < 1e-24) continue;
                const double inv = 1.0 / std::sqrt(n2);
                for (double& v : u) v *= inv;
                // area density of the axis-scaling map, up to a constant
                const double w = std::sqrt(u[0] * u[0] * b * b * c * c +
                                           u[1] * u[1] * a * a * c * c +
                                           u[2] * u[2] * a * a * b * b);
                if (rng.uniform() * wmax <= w)
                    return {a * u[0], b * u[1], c * u[2]};
            }
        }
        case Primitive::Kind::Box: {
            const double hx = p.size[0], hy = p.size[1], hz = p.size[2];
            const double ax = hy * hz, ay = hx * hz, az = hx * hy;
            const double pick = rng.uniform() * (ax + ay + az);
            const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
            if (pick < ax)
                return {sign * hx, rng.uniform(-hy, hy), rng.uniform(-hz, hz)};
            if (pick < ax + ay)
                return {rng.uniform(-hx, hx), sign * hy, rng.uniform(-hz, hz)};
            return {rng.uniform(-hx, hx), rng.uniform(-hy, hy), sign * hz};
        }
        case Primitive::Kind::Cylinder: {
            const double r = p.size[0], h = p.size[2];
            const double lateral = 4.0 * M_PI * r * h;
            const double caps = 2.0 * M_PI * r * r;
            if (rng.uniform() * (lateral + caps) < lateral) {
                const double phi = rng.uniform(0.0, 2.0 * M_PI);
                return {r * std::cos(phi), r * std::sin(phi), rng.uniform(-h, h)};
            }
            const double phi = rng.uniform(0.0, 2.0 * M_PI);
            const double rr = r * std::sqrt(rng.uniform());
            const double z = rng.uniform() < 0.5 ? -h : h;
            return {rr * std::cos(phi), rr * std::sin(phi), z};
        }
    }
    return {0, 0, 0};
}

// Ray-solid hit tests in the primitive's canonical frame. Rays are
// parameterized o + s*d; only s > 0 counts.
bool hit_ellipsoid(const Primitive& p, const Vec3& o, const Vec3& d) {
    double ox = o[0] / p.size[0], oy = o[1] / p.size[1], oz = o[2] / p.size[2];
    double dx = d[0] / p.size[0], dy = d[1] / p.size[1], dz = d[2] / p.size[2];
    const double a = dx * dx + dy * dy + dz * dz;
    const double b = 2.0 * (ox * dx + oy * dy + oz * dz);
    const double c = ox * ox + oy * oy + oz * oz - 1.0;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return false;
    const double sq = std::sqrt(disc);
    const double s1 = (-b - sq) / (2.0 * a);
    const double s2 = (-b + sq) / (2.0 * a);
    return s2 > 0.0 && (s1 > 0.0 || c <= 0.0);
}

bool hit_box(const Primitive& p, const Vec3& o, const Vec3& d) {
    double tmin = -1e300, tmax = 1e300;
    for (int a = 0; a < 3; ++a) {
        if (std::fabs(d[a]) < 1e-300) {
            if (std::fabs(o[a]) > p.size[a]) return false;
            continue;
        }
        double t1 = (-p.size[a] - o[a]) / d[a];
        double t2 = (p.size[a] - o[a]) / d[a];
        if (t1 > t2) std::swap(t1, t2);
        tmin = std::max(tmin, t1);
        tmax = std::min(tmax, t2);
    }
    return tmax >= std::max(tmin, 0.0);
}

bool hit_cylinder(const Primitive& p, const Vec3& o, const Vec3& d) {
    const double r = p.size[0], h = p.size[2];
    // caps
    if (std::fabs(d[2]) > 1e-300) {
        for (double zc : {-h, h}) {
            const double s = (zc - o[2]) / d[2];
            if (s <= 0.0) continue;
            const double x = o[0] + s * d[0];
            const double y = o[1] + s * d[1];
            if (x * x + y * y <= r * r) return true;
        }
    }
    // side
    const double a = d[0] * d[0] + d[1] * d[1];
    if (a < 1e-300) {
        // ray parallel to the axis, inside the circle: caps above caught it
        return false;
    }
    const double b = 2.0 * (o[0] * d[0] + o[1] * d[1]);
    const double c = o[0] * o[0] + o[1] * o[1] - r * r;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return false;
    const double sq = std::sqrt(disc);
    for (double s : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
        if (s <= 0.0) continue;
        const double z = o[2] + s * d[2];
        if (std::fabs(z) <= h) return true;
    }
    return false;
}

bool hit_shape(const SynthShape& shape, const Vec3& origin, const Vec3& dir) {
    const Vec3 to = {origin[0] - shape.trans[0], origin[1] - shape.trans[1],
                     origin[2] - shape.trans[2]};
    const Vec3 o_local = rotate_t(shape.rot, to);
    const Vec3 d_local = rotate_t(shape.rot, dir);
    for (const Primitive& p : shape.prims) {
        const Vec3 o = {o_local[0] - p.offset[0], o_local[1] - p.offset[1],
                        o_local[2] - p.offset[2]};
        bool hit = false;
        switch (p.kind) {
            case Primitive::Kind::Ellipsoid: hit = hit_ellipsoid(p, o, d_local); break;
            case Primitive::Kind::Box:       hit = hit_box(p, o, d_local); break;
            case Primitive::Kind::Cylinder:  hit = hit_cylinder(p, o, d_local); break;
        }
        if (hit) return true;
    }
    return false;
}

Primitive random_primitive(Primitive::Kind kind, Rng& rng, double scale) {
    Primitive p;
    p.kind = kind;
    switch (kind) {
        case Primitive::Kind::Ellipsoid:
            for (double& v : p.size) v = scale * rng.uniform(0.25, 0.6);
            break;
        case Primitive::Kind::Box:
            for (double& v : p.size) v = scale * rng.uniform(0.2, 0.55);
            break;
        case Primitive::Kind::Cylinder:
            p.size[0] = scale * rng.uniform(0.2, 0.45);  // radius
            p.size[1] = p.size[0];
            p.size[2] = scale * rng.uniform(0.25, 0.6);  // half-height
            break;
    }
    return p;
}

} // namespace

std::string to_string(ShapeKind k) {
    switch (k) {
        case ShapeKind::Ellipsoid: return "ellipsoid";
        case ShapeKind::Box: return "box";
        case ShapeKind::Cylinder: return "cylinder";
        case ShapeKind::TwoPrimitiveUnion: return "two_primitive_union";
    }
    return "?";
}

SynthShape random_shape(ShapeKind kind, std::uint64_t seed) {
    Rng rng(seed);
    SynthShape shape;
    shape.kind = kind;
    shape.label = to_string(kind);

    switch (kind) {
        case ShapeKind::Ellipsoid:
            shape.prims.push_back(random_primitive(Primitive::Kind::Ellipsoid, rng, 1.0));
            break;
        case ShapeKind::Box:
            shape.prims.push_back(random_primitive(Primitive::Kind::Box, rng, 1.0));
            break;
        case ShapeKind::Cylinder:
            shape.prims.push_back(random_primitive(Primitive::Kind::Cylinder, rng, 1.0));
            break;
        case ShapeKind::TwoPrimitiveUnion: {
            const Primitive::Kind kinds[3] = {Primitive::Kind::Ellipsoid,
                                              Primitive::Kind::Box,
                                              Primitive::Kind::Cylinder};
            Primitive a = random_primitive(kinds[rng.index(3)], rng, 0.55);
            Primitive b = random_primitive(kinds[rng.index(3)], rng, 0.55);
            // keep the two solids disjoint along x so the union surface is
            // just both surfaces
            const double gap = 0.5 * (bounding_radius(a) + bounding_radius(b)) + 0.02;
            a.offset = {-gap, 0.0, 0.0};
            b.offset = {gap, 0.0, 0.0};
            shape.prims.push_back(a);
            shape.prims.push_back(b);
            break;
        }
    }

    shape.rot = random_rotation(rng);
    double r_total = 0.0;
    for (const Primitive& p : shape.prims) r_total = std::max(r_total, bounding_radius(p));
    const double room = std::max(0.0, std::min(0.95 - r_total, 0.3));
    for (double& t : shape.trans) t = rng.uniform(-room, room);
    return shape;
}

PointCloud sample_surface(const SynthShape& shape, std::size_t count, std::uint64_t seed) {
    if (shape.prims.empty()) throw PreconditionError("sample_surface: shape has no solids");
    Rng rng(seed);
    std::vector<double> areas;
    double total = 0.0;
    for (const Primitive& p : shape.prims) {
        areas.push_back(surface_area(p));
        total += areas.back();
    }

    std::vector<double> coords;
    coords.reserve(count * 3);
    for (std::size_t i = 0; i < count; ++i) {
        double pick = rng.uniform() * total;
        std::size_t pi = 0;
        while (pi + 1 < areas.size() && pick >= areas[pi]) {
            pick -= areas[pi];
            ++pi;
        }
        const Primitive& prim = shape.prims[pi];
        Vec3 local = sample_primitive_surface(prim, rng);
        for (int a = 0; a < 3; ++a) local[a] += prim.offset[a];
        const Vec3 world = rotate(shape.rot, local);
        coords.push_back(world[0] + shape.trans[0]);
        coords.push_back(world[1] + shape.trans[1]);
        coords.push_back(world[2] + shape.trans[2]);
    }
    return PointCloud(3, std::move(coords), shape.label);
}

Array render_silhouette(const SynthShape& shape, int side) {
    if (side < 1) throw PreconditionError("render_silhouette: side must be positive");
    Array img = Array::zeros({static_cast<std::size_t>(side), static_cast<std::size_t>(side)});
    const double step = 2.0 / static_cast<double>(side);
    const Vec3 dir = {0.0, 0.0, -1.0};
    for (int r = 0; r < side; ++r) {
        const double y = -1.0 + (static_cast<double>(r) + 0.5) * step;
        for (int c = 0; c < side; ++c) {
            const double x = -1.0 + (static_cast<double>(c) + 0.5) * step;
            const Vec3 origin = {x, y, 2.0};
            if (hit_shape(shape, origin, dir))
                img(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = 1.0;
        }
    }
    return img;
}

std::vector<Sample> gen_dataset(std::size_t count, std::uint64_t seed,
                                std::size_t gt_points, int raster_side) {
    if (count < 1) throw PreconditionError("gen_dataset: count must be >= 1");
    const ShapeKind kinds[4] = {ShapeKind::Ellipsoid, ShapeKind::Box, ShapeKind::Cylinder,
                                ShapeKind::TwoPrimitiveUnion};
    std::vector<Sample> out;
    out.reserve(count);
    Rng root(seed);
    for (std::size_t i = 0; i < count; ++i) {
        Rng sub = root.split(i);
        SynthShape shape = random_shape(kinds[i % 4], sub.next_u64());
        Sample s;
        s.raster = render_silhouette(shape, raster_side);
        s.gt = sample_surface(shape, gt_points, sub.next_u64());
        s.label = shape.label + "_" + std::to_string(i);
        s.gt.set_label(s.label);
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace hofnet
