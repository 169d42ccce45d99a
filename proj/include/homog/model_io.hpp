// Model/grid JSON loading, field CSV import/export, the named analytic
// field constructors exposed through the CLI, and the seeded random corpora
// used by the property checks.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "homog/field.hpp"
#include "homog/rng.hpp"

namespace homog {

// C-infinity step (0 for x <= 0, 1 for x >= 1) and the plateau window built
// from it; infinitely smooth cutoffs keep the spectral derivative accurate.
double smooth_step(double x);
double smooth_window(double s, double lo, double hi, double taper);

struct ModelConfig {
    std::shared_ptr<const GroupModel> model;
    RadialGridSpec grid;
};

// Schema: {"ambient_dim":3, "Q":3.0, "norm":{"kind":"euclidean","p":2.0},
//          "sphere_resolution":64, "grid":{"s_min":-12.0,"s_max":8.0,"N":4096}}
// kinds: "euclidean" (p numeric or "inf"), "anisotropic" (weights, power,
// sphere_measure), "abstract" (Q, sphere_measure); "sphere_csv" loads an
// explicit node table (rows: coords..., weight).
ModelConfig load_model(const nlohmann::json& j);
ModelConfig load_model_file(const std::string& path);

std::vector<SphereNode> load_sphere_csv(std::istream& in, int ambient_dim);

// Named constructors (CLI surface): gaussian{b}, exp-decay{b},
// bump{center,width,amp}, power-window{a,center,width,taper},
// bliss-extremizer{c1,c2,p,q}, rational{a,c}, stubbe-extremal{delta,c2},
// witness{R}.
Field construct_field(std::shared_ptr<const GroupModel> model, const RadialGridSpec& grid,
                      const std::string& name, const std::map<std::string, double>& params);
const std::vector<std::string>& field_constructor_names();

// Random smooth compactly supported field: a few plateau-free bumps with
// per-node modulation when the model carries sphere nodes.
Field random_smooth_field(std::shared_ptr<const GroupModel> model, const RadialGridSpec& grid,
                          Rng& rng, bool radial = false, bool complex_valued = false);

// Deterministic corpora used by the property checks and the CLI.
std::vector<Field> builtin_smooth_corpus(std::shared_ptr<const GroupModel> model,
                                         const RadialGridSpec& grid, int count,
                                         std::uint64_t seed);
std::vector<Field> positive_corpus(std::shared_ptr<const GroupModel> model,
                                   const RadialGridSpec& grid, int count, std::uint64_t seed);

// CSV with header s,node_index,re,im.
void export_field_csv(const Field& f, std::ostream& out);
Field import_field_csv(std::shared_ptr<const GroupModel> model, const RadialGridSpec& grid,
                       std::istream& in);

} // namespace homog
