#pragma once

#include "pslab/core.hpp"

namespace pslab {

int binomial(int n, int k);
// j-element subsets of {0,...,d-1}, lexicographic.
const std::vector<std::vector<int>>& subsets(int d, int j);

// Matrix of j x j minors; exterior_power(AB) = exterior_power(A) exterior_power(B).
Mat exterior_power(const Mat& m, int j);
// Coordinates of f_0 ^ ... ^ f_{j-1} for the first j columns of f.
Vec wedge_of_columns(const Mat& f, int j);
// Same into out (binomial(d, j) entries) from a column-major d x d frame; j <= 8.
void wedge_of_columns(const double* f, int d, int j, double* out);
// Orthonormal basis (d x j) of the subspace of a decomposable unit j-vector.
Mat subspace_of_wedge(const Vec& omega, int d, int j);
// Nested frame from subspaces V_{c_1} < V_{c_2} < ..., completed to an orthogonal matrix.
Mat frame_from_subspaces(const std::vector<Mat>& nested, int d);

// Largest singular value of an n x n row-major or column-major array (column-major here).
double top_singular_value(const double* m, int n);

}  // namespace pslab
