#pragma once

// Test-side oracles and generators. Everything here is written
// independently of the library algorithms it is used to check.

#include <array>
#include <functional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "mdtopo/assignment.hpp"
#include "mdtopo/mdpd.hpp"
#include "mdtopo/mdrg.hpp"
#include "mdtopo/mesh_field.hpp"
#include "mdtopo/persistence.hpp"
#include "mdtopo/retrieval.hpp"

namespace oracle {

using mdtopo::Mdpd;
using mdtopo::MdpdPoint;
using mdtopo::PersistenceDiagram;
using mdtopo::ReebGraph;

// Reeb graph from node values and arcs; levels are left at 0.
ReebGraph make_graph(const std::vector<double>& values, const std::vector<std::pair<std::size_t, std::size_t>>& arcs);

// Random graph with integer values (ties allowed), resolved with
// epsilon = 0.01, at most `max_nodes` nodes after resolution.
ReebGraph random_resolved_graph(std::mt19937_64& rng, std::size_t max_nodes);

// Extended persistence by dense Z2 reduction of the whole coned
// filtration (one apex per component), no shortcuts.
PersistenceDiagram dense_extended_persistence(const ReebGraph& rg);

using PointKey = std::tuple<int, double, double>;  // kind, birth, death
std::vector<PointKey> sorted_points(const PersistenceDiagram& pd);

// Minimum over all k! permutations, cost summed in row order.
double brute_force_assignment(const mdtopo::CostMatrix& c);

// Minimum over every partial injection of f's points into g's points that
// pairs only points with equal level paths and dims, and whose induced
// node relation is one-to-one at every path depth. Unmatched points pay
// their diagonal cost. Returns the q-th root.
double brute_force_distance(const Mdpd& f, const Mdpd& g, double q);

struct Scores {
  double nn, ft, st, e, dcg;
};
// Direct per-query enumeration of the ranking measures.
Scores ranking_oracle(const mdtopo::DistanceMatrix& m, const std::vector<std::string>& labels, std::size_t e_k);

// Random values in [0, 1] on an nx x ny grid.
mdtopo::MultiField random_grid(std::mt19937_64& rng, std::size_t nx, std::size_t ny, std::size_t nfields);

// Smoothed random field: a few random Gaussian bumps, values in [0, 1].
mdtopo::MultiField smooth_random_grid(std::mt19937_64& rng, std::size_t nx, std::size_t ny, std::size_t nfields);

// Boundary of {f < 0} by marching tetrahedra on a lattice with spacing h
// covering the box [-half[i], half[i]] on each axis.
mdtopo::SimplicialMesh implicit_surface(const std::function<double(double, double, double)>& f,
                                        std::array<double, 3> half, double h);

enum class Shape { Sphere, Torus, DoubleTorus };
const char* shape_name(Shape s);
// Lattice spacing chosen so the face count is as close as possible to
// `target_faces`.
mdtopo::SimplicialMesh shape_mesh(Shape s, std::size_t target_faces);

// Uniform displacement of every coordinate by at most `fraction` times the
// bounding box diagonal divided by sqrt(3), so the displacement length
// stays within `fraction` of the diagonal.
void jitter(mdtopo::SimplicialMesh& mesh, std::mt19937_64& rng, double fraction);

}  // namespace oracle
