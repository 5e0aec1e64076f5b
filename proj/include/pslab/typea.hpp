#pragma once

#include "pslab/core.hpp"

namespace pslab {

CartanVector w_vector(int d, int i);
CartanVector p_alpha_closed_form(int d, int i, const CartanVector& t);
double quint_upper_bound(const CartanVector& t);

struct QuintBound {
  double value = 0;       // vertex enumeration, exact rational arithmetic
  double grid_value = 0;  // best point of a barycentric grid on the constraint simplex
  CartanVector argmax;
};
QuintBound quint_alpha_bound_detail(int d, int i);
double quint_alpha_bound(int d, int i);

struct HitchinBound {
  double value = 0;  // max(i, d-i)/(d-1)
  double brute = 0;  // reduced two-variable grid
  double line = 0;   // line search along y = x
  double gap = 0;
};
HitchinBound hitchin_bound_detail(int d, int i);
double hitchin_bound(int d, int i);

// 2 rho o p_theta.
LinearForm rho_form(int d, const ThetaSet& theta);

// Symmetric power image of an SL_2 element in an orthonormal monomial basis.
GroupElement irreducible_rep(const Mat& g, int d);
GroupElement irreducible_rep(const GroupElement& g, int d);

struct TypeAConstants {
  int d = 0;
  int i = 0;
  CartanVector w;
  double quint = 0;
  double hitchin = 0;
};
TypeAConstants type_a_constants(int d, int i);

}  // namespace pslab
