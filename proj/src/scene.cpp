// SPDX-License-Identifier: Apache-2.0
//
// uavrt - deterministic ray-tracing simulator for UAV air-to-ground mmWave channels
// Copyright 2026 the uavrt contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "uavrt/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace uavrt
{
    namespace
    {
        constexpr double pi = std::numbers::pi;

        [[noreturn]] void parse_fail(const std::string &name, int line, const std::string &message)
        {
            throw std::runtime_error(name + ":" + std::to_string(line) + ": " + message);
        }

        // Reads the next non-empty, non-comment line; returns false on EOF.
        bool next_line(std::istream &in, std::string &line, int &line_no)
        {
            while (std::getline(in, line))
            {
                line_no++;
                std::size_t start = line.find_first_not_of(" \t\r");
                if (start == std::string::npos || line[start] == '#')
                    continue;
                return true;
            }
            return false;
        }

        double parse_double(const std::string &token, const std::string &name, int line)
        {
            std::size_t used = 0;
            double value = 0.0;
            try
            {
                value = std::stod(token, &used);
            }
            catch (const std::exception &)
            {
                parse_fail(name, line, "expected a number, got '" + token + "'");
            }
            if (used != token.size() || !std::isfinite(value))
                parse_fail(name, line, "expected a number, got '" + token + "'");
            return value;
        }

        std::vector<std::string> split_tokens(const std::string &line)
        {
            std::vector<std::string> tokens;
            std::istringstream stream(line);
            std::string t;
            while (stream >> t)
                tokens.push_back(t);
            return tokens;
        }

        void format_double(std::string &out, double v)
        {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out += buf;
        }

        std::ifstream open_or_throw(const std::string &path)
        {
            std::ifstream in(path);
            if (!in)
                throw std::runtime_error("cannot open '" + path + "'");
            return in;
        }

        // Signed double area of a 2D polygon (positive = counter-clockwise).
        double polygon_area2(const std::vector<std::array<double, 2>> &poly)
        {
            double acc = 0.0;
            for (std::size_t i = 0; i < poly.size(); i++)
            {
                const auto &a = poly[i];
                const auto &b = poly[(i + 1) % poly.size()];
                acc += a[0] * b[1] - b[0] * a[1];
            }
            return acc;
        }

        double cross2(const std::array<double, 2> &o, const std::array<double, 2> &a,
                      const std::array<double, 2> &b)
        {
            return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
        }

        bool point_in_triangle2(const std::array<double, 2> &p, const std::array<double, 2> &a,
                                const std::array<double, 2> &b, const std::array<double, 2> &c)
        {
            double d1 = cross2(a, b, p);
            double d2 = cross2(b, c, p);
            double d3 = cross2(c, a, p);
            bool has_neg = (d1 < 0) || (d2 < 0) || (d3 < 0);
            bool has_pos = (d1 > 0) || (d2 > 0) || (d3 > 0);
            return !(has_neg && has_pos);
        }

        // Ear clipping of a counter-clockwise simple polygon; returns index
        // triples into the input ring.
        std::vector<std::array<std::size_t, 3>> ear_clip(const std::vector<std::array<double, 2>> &poly)
        {
            std::vector<std::size_t> ring(poly.size());
            for (std::size_t i = 0; i < ring.size(); i++)
                ring[i] = i;

            std::vector<std::array<std::size_t, 3>> out;
            int stall = 0;
            while (ring.size() > 3)
            {
                bool clipped = false;
                for (std::size_t i = 0; i < ring.size(); i++)
                {
                    std::size_t ia = ring[(i + ring.size() - 1) % ring.size()];
                    std::size_t ib = ring[i];
                    std::size_t ic = ring[(i + 1) % ring.size()];
                    if (cross2(poly[ia], poly[ib], poly[ic]) <= 0.0)
                        continue; // reflex corner
                    bool blocked = false;
                    for (std::size_t j : ring)
                    {
                        if (j == ia || j == ib || j == ic)
                            continue;
                        if (point_in_triangle2(poly[j], poly[ia], poly[ib], poly[ic]))
                        {
                            blocked = true;
                            break;
                        }
                    }
                    if (blocked)
                        continue;
                    out.push_back({ia, ib, ic});
                    ring.erase(ring.begin() + i);
                    clipped = true;
                    break;
                }
                if (!clipped && ++stall > 1)
                    throw std::invalid_argument("Footprint polygon is degenerate or self-intersecting.");
            }
            out.push_back({ring[0], ring[1], ring[2]});
            return out;
        }
    } // namespace

    double DemGrid::elevation_at(double x, double y) const
    {
        double fx = std::clamp((x - origin_x) / cell_size, 0.0, double(cols - 1));
        double fy = std::clamp((y - origin_y) / cell_size, 0.0, double(rows - 1));
        int c0 = std::min(int(fx), cols - 2);
        int r0 = std::min(int(fy), rows - 2);
        double tx = fx - c0;
        double ty = fy - r0;
        double z00 = at(r0, c0), z01 = at(r0, c0 + 1);
        double z10 = at(r0 + 1, c0), z11 = at(r0 + 1, c0 + 1);
        return (1 - ty) * ((1 - tx) * z00 + tx * z01) + ty * ((1 - tx) * z10 + tx * z11);
    }

    DemGrid load_dem(std::istream &in, const std::string &stream_name)
    {
        std::string line;
        int line_no = 0;
        if (!next_line(in, line, line_no))
            parse_fail(stream_name, 1, "missing header line");

        auto header = split_tokens(line);
        if (header.size() != 5)
            parse_fail(stream_name, line_no, "header must be 'rows cols cell_size origin_x origin_y'");

        DemGrid dem;
        dem.rows = int(parse_double(header[0], stream_name, line_no));
        dem.cols = int(parse_double(header[1], stream_name, line_no));
        dem.cell_size = parse_double(header[2], stream_name, line_no);
        dem.origin_x = parse_double(header[3], stream_name, line_no);
        dem.origin_y = parse_double(header[4], stream_name, line_no);
        if (dem.rows < 2 || dem.cols < 2)
            parse_fail(stream_name, line_no, "grid needs at least 2 rows and 2 columns");
        if (!(dem.cell_size > 0.0))
            parse_fail(stream_name, line_no, "cell size must be positive");

        dem.samples.reserve(std::size_t(dem.rows) * dem.cols);
        for (int r = 0; r < dem.rows; r++)
        {
            if (!next_line(in, line, line_no))
                parse_fail(stream_name, line_no + 1, "unexpected end of file: expected " +
                                                         std::to_string(dem.rows) + " rows, got " + std::to_string(r));
            auto cells = split_tokens(line);
            if (int(cells.size()) != dem.cols)
                parse_fail(stream_name, line_no, "row " + std::to_string(r) + " has " +
                                                     std::to_string(cells.size()) + " cells, expected " +
                                                     std::to_string(dem.cols));
            for (const auto &cell : cells)
                dem.samples.push_back(parse_double(cell, stream_name, line_no));
        }
        return dem;
    }

    DemGrid load_dem_file(const std::string &path)
    {
        auto in = open_or_throw(path);
        return load_dem(in, path);
    }

    std::vector<Material> load_materials(std::istream &in, const std::string &stream_name)
    {
        std::vector<Material> out;
        std::string line;
        int line_no = 0;
        while (next_line(in, line, line_no))
        {
            auto tokens = split_tokens(line);
            if (tokens.size() < 2)
                parse_fail(stream_name, line_no, "material line needs 'name epsilon_r [flags]'");
            Material m;
            m.name = tokens[0];
            m.epsilon_r = parse_double(tokens[1], stream_name, line_no);
            if (!(m.epsilon_r > 1.0))
                parse_fail(stream_name, line_no, "relative permittivity must exceed 1");
            for (std::size_t i = 2; i < tokens.size(); i++)
            {
                if (tokens[i] == "reflective")
                    m.reflective = true;
                else if (tokens[i] == "foliage")
                    m.foliage = true;
                else
                    parse_fail(stream_name, line_no, "unknown material flag '" + tokens[i] + "'");
            }
            for (const auto &existing : out)
                if (existing.name == m.name)
                    parse_fail(stream_name, line_no, "duplicate material '" + m.name + "'");
            out.push_back(std::move(m));
        }
        return out;
    }

    std::vector<Material> load_materials_file(const std::string &path)
    {
        auto in = open_or_throw(path);
        return load_materials(in, path);
    }

    void load_footprints(std::istream &in, RawScene &scene, const std::string &stream_name)
    {
        std::string line;
        int line_no = 0;
        while (next_line(in, line, line_no))
        {
            auto tokens = split_tokens(line);
            if (tokens[0] == "terrain")
            {
                if (tokens.size() != 2)
                    parse_fail(stream_name, line_no, "terrain line needs exactly one material name");
                scene.terrain_material = tokens[1];
                continue;
            }

            BuildingFootprint fp;
            if (tokens[0] == "building")
                fp.category = FootprintCategory::building;
            else if (tokens[0] == "vegetation")
                fp.category = FootprintCategory::vegetation;
            else if (tokens[0] == "water")
                fp.category = FootprintCategory::water;
            else
                parse_fail(stream_name, line_no, "unknown record type '" + tokens[0] + "'");

            if (tokens.size() < 4)
                parse_fail(stream_name, line_no, "record needs 'category material height n x1 y1 ...'");
            fp.material_name = tokens[1];
            fp.height = parse_double(tokens[2], stream_name, line_no);
            int n = int(parse_double(tokens[3], stream_name, line_no));
            if (n < 3)
                parse_fail(stream_name, line_no, "polygon needs at least 3 vertices");
            if (int(tokens.size()) != 4 + 2 * n)
                parse_fail(stream_name, line_no, "expected " + std::to_string(2 * n) + " coordinates, got " +
                                                     std::to_string(tokens.size() - 4));
            if (fp.category != FootprintCategory::water && !(fp.height > 0.0))
                parse_fail(stream_name, line_no, "height must be positive for buildings and vegetation");

            for (int i = 0; i < n; i++)
                fp.polygon.push_back({parse_double(tokens[4 + 2 * i], stream_name, line_no),
                                      parse_double(tokens[5 + 2 * i], stream_name, line_no)});
            scene.footprints.push_back(std::move(fp));
        }
    }

    void load_footprints_file(const std::string &path, RawScene &scene)
    {
        auto in = open_or_throw(path);
        load_footprints(in, scene, path);
    }

    void triangulate_terrain(const DemGrid &dem, std::uint32_t material_id, std::uint32_t object_id,
                             std::vector<Vec3> &vertices, std::vector<Triangle> &triangles,
                             std::uint32_t &face_counter)
    {
        const std::uint32_t base = std::uint32_t(vertices.size());
        for (int r = 0; r < dem.rows; r++)
            for (int c = 0; c < dem.cols; c++)
                vertices.push_back({dem.origin_x + c * dem.cell_size,
                                    dem.origin_y + r * dem.cell_size, dem.at(r, c)});

        auto idx = [&](int r, int c) { return base + std::uint32_t(r) * dem.cols + c; };
        for (int r = 0; r + 1 < dem.rows; r++)
            for (int c = 0; c + 1 < dem.cols; c++)
            {
                // Fixed split along the lower-left to upper-right diagonal;
                // counter-clockwise seen from above keeps normals up.
                triangles.push_back({idx(r, c), idx(r, c + 1), idx(r + 1, c + 1),
                                     material_id, face_counter++, object_id});
                triangles.push_back({idx(r, c), idx(r + 1, c + 1), idx(r + 1, c),
                                     material_id, face_counter++, object_id});
            }
    }

    void extrude_footprint(const BuildingFootprint &fp, const DemGrid &dem, std::uint32_t material_id,
                           std::uint32_t object_id, std::vector<Vec3> &vertices,
                           std::vector<Triangle> &triangles, std::uint32_t &face_counter)
    {
        if (fp.polygon.size() < 3)
            throw std::invalid_argument("Footprint polygon needs at least 3 vertices.");

        std::vector<std::array<double, 2>> poly = fp.polygon;
        if (polygon_area2(poly) < 0.0)
            std::reverse(poly.begin(), poly.end());

        double base_z = std::numeric_limits<double>::infinity();
        for (const auto &v : poly)
        {
            if (v[0] < dem.min_x() || v[0] > dem.max_x() || v[1] < dem.min_y() || v[1] > dem.max_y())
                throw std::invalid_argument("Footprint vertex lies outside the terrain extent.");
            base_z = std::min(base_z, dem.elevation_at(v[0], v[1]));
        }

        const std::size_t n = poly.size();
        const std::uint32_t base = std::uint32_t(vertices.size());

        if (fp.category == FootprintCategory::water)
        {
            // Flat sheet a centimetre above ground so it is not coplanar with
            // the terrain mesh.
            const double z = base_z + 0.01;
            for (const auto &v : poly)
                vertices.push_back({v[0], v[1], z});
            const std::uint32_t face = face_counter++;
            for (const auto &tri : ear_clip(poly))
                triangles.push_back({base + std::uint32_t(tri[0]), base + std::uint32_t(tri[1]),
                                     base + std::uint32_t(tri[2]), material_id, face, object_id});
            return;
        }

        const double top_z = base_z + fp.height;
        for (const auto &v : poly)
            vertices.push_back({v[0], v[1], base_z});
        for (const auto &v : poly)
            vertices.push_back({v[0], v[1], top_z});

        auto bottom = [&](std::size_t i) { return base + std::uint32_t(i % n); };
        auto top = [&](std::size_t i) { return base + std::uint32_t(n + i % n); };

        for (std::size_t i = 0; i < n; i++)
        {
            // Counter-clockwise footprint makes these wind outward.
            const std::uint32_t face = face_counter++;
            triangles.push_back({bottom(i), bottom(i + 1), top(i + 1), material_id, face, object_id});
            triangles.push_back({bottom(i), top(i + 1), top(i), material_id, face, object_id});
        }

        const std::uint32_t roof_face = face_counter++;
        for (const auto &tri : ear_clip(poly))
            triangles.push_back({top(tri[0]), top(tri[1]), top(tri[2]), material_id, roof_face, object_id});
    }

    std::vector<Wedge> find_wedges(const std::vector<Vec3> &vertices, const std::vector<Triangle> &triangles,
                                   const std::vector<Material> &materials)
    {
        // key: object id + sorted vertex pair -> incident triangles
        std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, std::vector<std::uint32_t>> edges;
        for (std::uint32_t t = 0; t < triangles.size(); t++)
        {
            const Triangle &tri = triangles[t];
            if (materials[tri.material_id].foliage)
                continue;
            const std::uint32_t v[3] = {tri.a, tri.b, tri.c};
            for (int e = 0; e < 3; e++)
            {
                std::uint32_t a = v[e], b = v[(e + 1) % 3];
                if (a > b)
                    std::swap(a, b);
                edges[{tri.object_id, a, b}].push_back(t);
            }
        }

        auto normal_of = [&](const Triangle &tri) {
            return cross(vertices[tri.b] - vertices[tri.a], vertices[tri.c] - vertices[tri.a]).normalized();
        };
        auto opposite_vertex = [&](const Triangle &tri, std::uint32_t a, std::uint32_t b) {
            for (std::uint32_t v : {tri.a, tri.b, tri.c})
                if (v != a && v != b)
                    return v;
            throw std::logic_error("Degenerate triangle in wedge scan.");
        };

        const double min_dihedral = 1.0 * pi / 180.0;
        std::vector<Wedge> wedges;
        for (const auto &[key, tris] : edges)
        {
            if (tris.size() != 2)
                continue;
            const auto &[obj, va, vb] = key;
            const Triangle &t0 = triangles[tris[0]];
            const Triangle &t1 = triangles[tris[1]];
            const Vec3 n0 = normal_of(t0);
            const Vec3 n1 = normal_of(t1);
            const double cos_n = std::clamp(dot(n0, n1), -1.0, 1.0);
            if (std::acos(cos_n) <= min_dihedral)
                continue;

            Wedge w;
            w.p0 = vertices[va];
            w.p1 = vertices[vb];
            w.edge_dir = (w.p1 - w.p0).normalized();
            w.face0_normal = n0;

            // Tangent: in-plane direction from the edge into face 0.
            const Vec3 away = vertices[opposite_vertex(t0, va, vb)] - w.p0;
            const Vec3 tangent = away - w.edge_dir * dot(away, w.edge_dir);
            w.face0_tangent = tangent.normalized();

            // Exterior angle measured to the matching tangent of face 1.
            const Vec3 away1 = vertices[opposite_vertex(t1, va, vb)] - w.p0;
            const Vec3 tangent1 = (away1 - w.edge_dir * dot(away1, w.edge_dir)).normalized();
            const double exterior = wedge_exterior_angle(w, tangent1);
            if (exterior <= pi || exterior > 2.0 * pi + 1e-9)
                continue; // concave edge: no exterior diffraction cone

            w.n_factor = std::min(exterior / pi, 2.0);
            w.face0_id = t0.face_id;
            w.facen_id = t1.face_id;
            w.tri0_index = tris[0];
            w.tri1_index = tris[1];
            w.material_id = t0.material_id;
            w.object_id = obj;
            wedges.push_back(w);
        }
        return wedges;
    }

    SceneDatabase reconstruct(const RawScene &raw, const LodCriteria &criteria)
    {
        if (criteria.min_building_height < 0.0)
            throw std::invalid_argument("Minimum building height cannot be negative.");

        SceneDatabase db;
        db.criteria = criteria;
        db.materials = raw.materials;

        auto material_index = [&](const std::string &name) -> std::uint32_t {
            for (std::uint32_t i = 0; i < db.materials.size(); i++)
                if (db.materials[i].name == name)
                    return i;
            throw std::invalid_argument("No material named '" + name + "' in the material table.");
        };

        std::uint32_t face_counter = 0;
        triangulate_terrain(raw.dem, material_index(raw.terrain_material), 0,
                            db.vertices, db.triangles, face_counter);

        std::uint32_t object_id = 1;
        for (const auto &fp : raw.footprints)
        {
            bool keep = false;
            switch (fp.category)
            {
            case FootprintCategory::building:
                keep = fp.height >= criteria.min_building_height;
                break;
            case FootprintCategory::vegetation:
                keep = criteria.include_vegetation;
                break;
            case FootprintCategory::water:
                keep = criteria.include_water;
                break;
            }
            if (!keep)
                continue;
            extrude_footprint(fp, raw.dem, material_index(fp.material_name), object_id++,
                              db.vertices, db.triangles, face_counter);
        }

        db.wedges = find_wedges(db.vertices, db.triangles, db.materials);
        db.bvh = Bvh::build(db.vertices, db.triangles);
        return db;
    }

    // ---- Serialization ----------------------------------------------------

    void SceneDatabase::save(std::ostream &out) const
    {
        std::string buf;
        buf.reserve(vertices.size() * 60 + triangles.size() * 40);
        buf += "uavrt-scene-db 1\n";
        buf += "criteria ";
        format_double(buf, criteria.min_building_height);
        buf += criteria.include_vegetation ? " 1" : " 0";
        buf += criteria.include_water ? " 1\n" : " 0\n";

        buf += "materials " + std::to_string(materials.size()) + "\n";
        for (const auto &m : materials)
        {
            buf += m.name + " ";
            format_double(buf, m.epsilon_r);
            buf += m.reflective ? " 1" : " 0";
            buf += m.foliage ? " 1\n" : " 0\n";
        }

        buf += "vertices " + std::to_string(vertices.size()) + "\n";
        for (const auto &v : vertices)
        {
            format_double(buf, v.x);
            buf += ' ';
            format_double(buf, v.y);
            buf += ' ';
            format_double(buf, v.z);
            buf += '\n';
        }

        buf += "triangles " + std::to_string(triangles.size()) + "\n";
        for (const auto &t : triangles)
            buf += std::to_string(t.a) + " " + std::to_string(t.b) + " " + std::to_string(t.c) + " " +
                   std::to_string(t.material_id) + " " + std::to_string(t.face_id) + " " +
                   std::to_string(t.object_id) + "\n";

        buf += "wedges " + std::to_string(wedges.size()) + "\n";
        for (const auto &w : wedges)
        {
            for (double v : {w.p0.x, w.p0.y, w.p0.z, w.p1.x, w.p1.y, w.p1.z,
                             w.edge_dir.x, w.edge_dir.y, w.edge_dir.z,
                             w.face0_tangent.x, w.face0_tangent.y, w.face0_tangent.z,
                             w.face0_normal.x, w.face0_normal.y, w.face0_normal.z, w.n_factor})
            {
                format_double(buf, v);
                buf += ' ';
            }
            buf += std::to_string(w.face0_id) + " " + std::to_string(w.facen_id) + " " +
                   std::to_string(w.tri0_index) + " " + std::to_string(w.tri1_index) + " " +
                   std::to_string(w.material_id) + " " + std::to_string(w.object_id) + "\n";
        }
        buf += "end\n";
        out << buf;
    }

    SceneDatabase SceneDatabase::load(std::istream &in, const std::string &stream_name)
    {
        std::string line;
        int line_no = 0;

        auto expect_line = [&](const char *what) {
            if (!next_line(in, line, line_no))
                parse_fail(stream_name, line_no + 1, std::string("unexpected end of file: expected ") + what);
            return split_tokens(line);
        };
        auto expect_section = [&](const char *keyword) {
            auto tokens = expect_line(keyword);
            if (tokens.size() != 2 || tokens[0] != keyword)
                parse_fail(stream_name, line_no, std::string("expected '") + keyword + " <count>'");
            return std::size_t(parse_double(tokens[1], stream_name, line_no));
        };

        auto header = expect_line("header");
        if (header.size() != 2 || header[0] != "uavrt-scene-db" || header[1] != "1")
            parse_fail(stream_name, line_no, "not a uavrt scene database (version 1)");

        SceneDatabase db;
        auto crit = expect_line("criteria");
        if (crit.size() != 4 || crit[0] != "criteria")
            parse_fail(stream_name, line_no, "expected 'criteria <min_height> <veg> <water>'");
        db.criteria.min_building_height = parse_double(crit[1], stream_name, line_no);
        db.criteria.include_vegetation = crit[2] == "1";
        db.criteria.include_water = crit[3] == "1";

        std::size_t n_materials = expect_section("materials");
        for (std::size_t i = 0; i < n_materials; i++)
        {
            auto t = expect_line("material");
            if (t.size() != 4)
                parse_fail(stream_name, line_no, "material line must be 'name epsilon_r reflective foliage'");
            db.materials.push_back({t[0], parse_double(t[1], stream_name, line_no), t[2] == "1", t[3] == "1"});
        }

        std::size_t n_vertices = expect_section("vertices");
        db.vertices.reserve(n_vertices);
        for (std::size_t i = 0; i < n_vertices; i++)
        {
            auto t = expect_line("vertex");
            if (t.size() != 3)
                parse_fail(stream_name, line_no, "vertex line must be 'x y z'");
            db.vertices.push_back({parse_double(t[0], stream_name, line_no),
                                   parse_double(t[1], stream_name, line_no),
                                   parse_double(t[2], stream_name, line_no)});
        }

        std::size_t n_triangles = expect_section("triangles");
        db.triangles.reserve(n_triangles);
        for (std::size_t i = 0; i < n_triangles; i++)
        {
            auto t = expect_line("triangle");
            if (t.size() != 6)
                parse_fail(stream_name, line_no, "triangle line must be 'a b c material face object'");
            Triangle tri;
            tri.a = std::uint32_t(parse_double(t[0], stream_name, line_no));
            tri.b = std::uint32_t(parse_double(t[1], stream_name, line_no));
            tri.c = std::uint32_t(parse_double(t[2], stream_name, line_no));
            tri.material_id = std::uint32_t(parse_double(t[3], stream_name, line_no));
            tri.face_id = std::uint32_t(parse_double(t[4], stream_name, line_no));
            tri.object_id = std::uint32_t(parse_double(t[5], stream_name, line_no));
            if (tri.a >= n_vertices || tri.b >= n_vertices || tri.c >= n_vertices)
                parse_fail(stream_name, line_no, "triangle vertex index out of range");
            if (tri.material_id >= db.materials.size())
                parse_fail(stream_name, line_no, "triangle material index out of range");
            db.triangles.push_back(tri);
        }

        std::size_t n_wedges = expect_section("wedges");
        db.wedges.reserve(n_wedges);
        for (std::size_t i = 0; i < n_wedges; i++)
        {
            auto t = expect_line("wedge");
            if (t.size() != 22)
                parse_fail(stream_name, line_no, "wedge line must have 22 fields");
            double f[16];
            for (int k = 0; k < 16; k++)
                f[k] = parse_double(t[k], stream_name, line_no);
            Wedge w;
            w.p0 = {f[0], f[1], f[2]};
            w.p1 = {f[3], f[4], f[5]};
            w.edge_dir = {f[6], f[7], f[8]};
            w.face0_tangent = {f[9], f[10], f[11]};
            w.face0_normal = {f[12], f[13], f[14]};
            w.n_factor = f[15];
            w.face0_id = std::uint32_t(parse_double(t[16], stream_name, line_no));
            w.facen_id = std::uint32_t(parse_double(t[17], stream_name, line_no));
            w.tri0_index = std::uint32_t(parse_double(t[18], stream_name, line_no));
            w.tri1_index = std::uint32_t(parse_double(t[19], stream_name, line_no));
            w.material_id = std::uint32_t(parse_double(t[20], stream_name, line_no));
            w.object_id = std::uint32_t(parse_double(t[21], stream_name, line_no));
            if (w.tri0_index >= n_triangles || w.tri1_index >= n_triangles)
                parse_fail(stream_name, line_no, "wedge triangle index out of range");
            db.wedges.push_back(w);
        }

        auto tail = expect_line("end");
        if (tail.size() != 1 || tail[0] != "end")
            parse_fail(stream_name, line_no, "expected trailing 'end'");

        db.bvh = Bvh::build(db.vertices, db.triangles);
        return db;
    }

    void SceneDatabase::save_file(const std::string &path) const
    {
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("cannot open '" + path + "' for writing");
        save(out);
        if (!out.good())
            throw std::runtime_error("failed writing '" + path + "'");
    }

    SceneDatabase SceneDatabase::load_file(const std::string &path)
    {
        auto in = open_or_throw(path);
        return SceneDatabase::load(in, path);
    }

} // namespace uavrt
