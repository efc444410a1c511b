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

#pragma once

#include "uavrt/geometry.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace uavrt
{

    // Regular elevation grid in local meters. Row r, column c sits at
    // (origin_x + c*cell_size, origin_y + r*cell_size); samples are stored
    // row-major.
    struct DemGrid
    {
        int rows = 0;
        int cols = 0;
        double cell_size = 0.0;
        double origin_x = 0.0;
        double origin_y = 0.0;
        std::vector<double> samples;

        double at(int r, int c) const { return samples[std::size_t(r) * cols + c]; }

        double min_x() const { return origin_x; }
        double min_y() const { return origin_y; }
        double max_x() const { return origin_x + (cols - 1) * cell_size; }
        double max_y() const { return origin_y + (rows - 1) * cell_size; }

        // Bilinear elevation; coordinates are clamped to the grid extent.
        double elevation_at(double x, double y) const;
    };

    enum class FootprintCategory
    {
        building,
        vegetation,
        water,
    };

    // One ground-plan record: a simple polygon plus extrusion height.
    struct BuildingFootprint
    {
        std::vector<std::array<double, 2>> polygon;
        double height = 0.0;
        FootprintCategory category = FootprintCategory::building;
        std::string material_name;
    };

    struct Material
    {
        std::string name;
        double epsilon_r = 1.0;
        bool reflective = false;
        bool foliage = false;
    };

    // Reconstruction filter: which scene elements make it into a database.
    struct LodCriteria
    {
        double min_building_height = 0.0;
        bool include_vegetation = false;
        bool include_water = false;
    };

    // Everything the loaders produce before reconstruction.
    struct RawScene
    {
        DemGrid dem;
        std::vector<BuildingFootprint> footprints;
        std::vector<Material> materials;
        std::string terrain_material = "wet_soil";
    };

    // Immutable triangle soup plus diffraction edges, ready for tracing.
    struct SceneDatabase
    {
        std::vector<Vec3> vertices;
        std::vector<Triangle> triangles;
        std::vector<Wedge> wedges;
        std::vector<Material> materials;
        Bvh bvh;
        LodCriteria criteria;

        std::size_t facet_count() const { return triangles.size(); }
        const Material &material_of(const Triangle &tri) const { return materials[tri.material_id]; }

        // Structured-text dump; load() reproduces the database bit for bit
        // (the BVH is rebuilt deterministically).
        void save(std::ostream &out) const;
        static SceneDatabase load(std::istream &in, const std::string &stream_name = "<scene-db>");

        void save_file(const std::string &path) const;
        static SceneDatabase load_file(const std::string &path);
    };

    // ---- Loaders --------------------------------------------------------
    //
    // All parsers throw std::runtime_error with "<name>:<line>: message" on
    // malformed input.

    // Header line "rows cols cell_size origin_x origin_y", then `rows` lines
    // of `cols` elevations each.
    DemGrid load_dem(std::istream &in, const std::string &stream_name = "<dem>");
    DemGrid load_dem_file(const std::string &path);

    // One material per line: "name epsilon_r [reflective] [foliage]".
    std::vector<Material> load_materials(std::istream &in, const std::string &stream_name = "<materials>");
    std::vector<Material> load_materials_file(const std::string &path);

    // One record per line:
    //   building|vegetation|water <material> <height> <n> <x1> <y1> ... <xn> <yn>
    //   terrain <material>              (optional terrain material override)
    // Populates footprints and terrain_material of an existing RawScene.
    void load_footprints(std::istream &in, RawScene &scene, const std::string &stream_name = "<footprints>");
    void load_footprints_file(const std::string &path, RawScene &scene);

    // ---- Mesh construction ----------------------------------------------

    // Two triangles per grid cell split along the fixed lower-left to
    // upper-right diagonal; normals face up. Appends to vertices/triangles,
    // one face id per triangle.
    void triangulate_terrain(const DemGrid &dem, std::uint32_t material_id, std::uint32_t object_id,
                             std::vector<Vec3> &vertices, std::vector<Triangle> &triangles,
                             std::uint32_t &face_counter);

    // Prism extrusion: walls (two triangles per polygon edge, one face id per
    // wall) from the lowest footprint-vertex ground elevation up to
    // base + height, plus an ear-clipped flat roof (single face id). The
    // polygon is normalised to counter-clockwise order first. Water polygons
    // are laid flat a centimetre above ground instead of extruded.
    void extrude_footprint(const BuildingFootprint &fp, const DemGrid &dem, std::uint32_t material_id,
                           std::uint32_t object_id, std::vector<Vec3> &vertices,
                           std::vector<Triangle> &triangles, std::uint32_t &face_counter);

    // Scan shared triangle edges within each object and register every convex
    // edge whose face normals differ by more than 1 degree. Foliage-material
    // objects produce no wedges.
    std::vector<Wedge> find_wedges(const std::vector<Vec3> &vertices, const std::vector<Triangle> &triangles,
                                   const std::vector<Material> &materials);

    // Full pipeline: terrain always, buildings meeting the height criterion,
    // vegetation/water only when enabled; materials resolved by name; wedges
    // scanned; BVH built. Deterministic for identical inputs.
    SceneDatabase reconstruct(const RawScene &raw, const LodCriteria &criteria);

} // namespace uavrt
